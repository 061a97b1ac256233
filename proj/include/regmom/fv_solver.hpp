#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "regmom/moment_state.hpp"
#include "regmom/multi_index.hpp"
#include "regmom/scenarios.hpp"

namespace regmom {

enum class ClosureVariant { Linear, Nonlinear };
enum class Boundary { FarField, Periodic };

/// Treatment of the top-order diffusion -d/dx((alpha_1+1) tau theta df/dx).
/// Explicit adds the parabolic time-step bound; implicit solves one
/// tridiagonal system per top-order coefficient.
enum class DiffusionScheme { Implicit, Explicit };

struct SolverConfig
{
  int order = 3;  // M, >= 3
  int dim = 3;    // velocity-space dimension
  int cells = 200;
  double x_lo = -1.0;
  double x_hi = 1.5;
  double cfl = 0.95;
  double kn = 0.02;
  TauModel tau_model;
  ClosureVariant closure = ClosureVariant::Linear;
  Boundary boundary = Boundary::FarField;
  DiffusionScheme diffusion = DiffusionScheme::Implicit;
  double t_stop = 0.3;
  bool steady = false;
  double steady_tol = 1e-8;      // L1 density change per unit time
  double check_interval = 1.0;   // time between steady-state residual checks
  long max_steps = 50'000'000;

  double dx() const { return (x_hi - x_lo) / cells; }
  void validate() const;
};

SolverConfig config_for(const Scenario& s, int order, int cells);

struct StepDiagnostics
{
  double dt = 0.0;
  double max_wavespeed = 0.0;
  double residual = 0.0;
  long steps = 0;
  /// Conserved fluxes (mass, momentum_1, energy) through the left and right
  /// domain boundaries during the last step, per unit time.
  std::array<double, 3> flux_left{};
  std::array<double, 3> flux_right{};
};

/// Per-cell moment state over a uniform 1D mesh.
struct SimState
{
  std::shared_ptr<const MomentLayout> layout;
  std::vector<double> x;  // cell centers
  double dx = 0.0;
  std::vector<MacroState> macro;
  std::vector<double> coeffs;  // cells * layout->size()
  MacroState ghost_left;
  MacroState ghost_right;
  double t = 0.0;
  StepDiagnostics diag;

  std::size_t cells() const { return macro.size(); }
  std::span<double> cell(std::size_t i)
  {
    return {coeffs.data() + i * layout->size(), layout->size()};
  }
  std::span<const double> cell(std::size_t i) const
  {
    return {coeffs.data() + i * layout->size(), layout->size()};
  }
};

/// Solver breakdown: unphysical state (non-positive density or temperature).
class BreakdownError : public std::runtime_error
{
 public:
  BreakdownError(std::size_t cell, double time, const std::string& what);
  std::size_t cell() const { return cell_; }
  double time() const { return time_; }

 private:
  std::size_t cell_;
  double time_;
};

/// Maxwellian initial data sampled at cell centers.
SimState initial_state(const SolverConfig& cfg, const std::function<MacroState(double)>& init,
                       MacroState ghost_left, MacroState ghost_right);

SimState initial_state(const SolverConfig& cfg, const Scenario& s);

/// x-flux of the expansion in its own (fixed) frame:
/// F_alpha = theta f_{alpha-e_1} + u_1 f_alpha + (alpha_1+1) f_{alpha+e_1}.
/// `top` holds f_{alpha+e_1} for the grade-M indices in layout order (empty
/// means the Grad closure, all zero).
void flux_coefficients(std::span<const double> coeffs, const MacroState& frame,
                       const MomentLayout& layout, std::span<const double> top,
                       std::span<double> out);

/// Totals of mass, momentum_1 and energy over the domain.
std::array<double, 3> conserved_totals(const SimState& s);

struct Profile
{
  std::vector<double> x, rho, u1, theta, sigma11, q1;
};

Profile profile_of(const SimState& s);

class FvSolver
{
 public:
  explicit FvSolver(SolverConfig cfg);

  const SolverConfig& config() const { return cfg_; }
  const MomentLayout& layout() const { return *layout_; }
  std::shared_ptr<const MomentLayout> layout_ptr() const { return layout_; }

  /// Characteristic-speed factor: largest root of He_{M+1}.
  double speed_factor() const { return speed_factor_; }

  double stable_dt(const SimState& s) const;

  /// One step: local Lax-Friedrichs transport in interface frames, top-order
  /// regularization, then BGK relaxation. Throws BreakdownError.
  void step(SimState& s, double dt);
  void step(SimState& s) { step(s, stable_dt(s)); }

  using Observer = std::function<void(const SimState&)>;

  /// Integrates to t_stop, or to steady state when configured. `on_check`
  /// sees the state after each steady-state residual check, `on_step` after
  /// every step.
  void run(SimState& s, const Observer& on_check = {}, const Observer& on_step = {});

 private:
  double tau_at(double rho, double theta) const;
  void transport(SimState& s, double dt);
  void regularize(SimState& s, double dt);
  void relax(SimState& s, double dt);

  SolverConfig cfg_;
  std::shared_ptr<const MomentLayout> layout_;
  double speed_factor_;
  std::vector<double> old_coeffs_;
  std::vector<MacroState> old_macro_;
};

}  // namespace regmom
