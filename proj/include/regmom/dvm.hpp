#pragma once

#include <functional>
#include <span>
#include <vector>

#include "regmom/fv_solver.hpp"
#include "regmom/moment_state.hpp"
#include "regmom/scenarios.hpp"

namespace regmom {

/// Uniform symmetric grid of discrete velocities on [-v_max, v_max].
struct VelocityGrid
{
  int points = 200;
  double v_max = 12.0;

  VelocityGrid() = default;
  VelocityGrid(int n, double vmax);

  double spacing() const { return 2.0 * v_max / (points - 1); }
  double at(int k) const { return -v_max + k * spacing(); }

  /// Smallest v_max (rounded up to an integer) with at least
  /// `sigmas` thermal widths beyond every given state.
  static double required_vmax(std::span<const MacroState> states, double sigmas = 5.0);
};

inline constexpr int kReferenceVelocities = 200;
inline constexpr double kReferenceVmax = 12.0;
inline constexpr int kReferenceCells = 2000;

/// Reduced distributions over the velocity grid, one pair per cell:
/// g = integral of f over transverse velocities, h = transverse kinetic
/// energy density (zero for D = 1).
struct ReducedState
{
  VelocityGrid grid;
  int dim = 3;
  std::vector<double> x;
  double dx = 0.0;
  std::vector<double> g;  // cells * points
  std::vector<double> h;
  MacroState ghost_left;
  MacroState ghost_right;
  double t = 0.0;

  std::size_t cells() const { return x.size(); }
  std::span<double> g_cell(std::size_t i) { return {g.data() + i * grid.points, static_cast<std::size_t>(grid.points)}; }
  std::span<double> h_cell(std::size_t i) { return {h.data() + i * grid.points, static_cast<std::size_t>(grid.points)}; }
  std::span<const double> g_cell(std::size_t i) const
  {
    return {g.data() + i * grid.points, static_cast<std::size_t>(grid.points)};
  }
  std::span<const double> h_cell(std::size_t i) const
  {
    return {h.data() + i * grid.points, static_cast<std::size_t>(grid.points)};
  }
};

struct DvmMoments
{
  double rho = 0.0;
  double u = 0.0;
  double theta = 0.0;
  double sigma11 = 0.0;
  double q1 = 0.0;
  double momentum = 0.0;
  double energy = 0.0;
};

/// Quadrature moments of one cell's reduced pair.
DvmMoments dvm_cell_moments(std::span<const double> g, std::span<const double> h, const VelocityGrid& grid,
                            int dim);

/// Per-cell (rho, u, theta, sigma11, q1).
std::vector<DvmMoments> dvm_moments(const ReducedState& s);

/// Discrete Maxwellian whose grid sums reproduce rho, rho u_1 and E exactly:
/// Newton iteration on the sampled Gaussian's (u, theta) followed by a
/// multiplicative density scaling. Throws std::domain_error when the state
/// cannot be represented on the grid.
void discrete_maxwellian(double rho, double momentum, double energy, const VelocityGrid& grid, int dim,
                         std::span<double> g, std::span<double> h);

struct DvmConfig
{
  int cells = kReferenceCells;
  double x_lo = -1.0;
  double x_hi = 1.5;
  int dim = 3;
  VelocityGrid grid{kReferenceVelocities, kReferenceVmax};
  double cfl = 0.95;
  double kn = 0.02;
  TauModel tau_model;
  Boundary boundary = Boundary::FarField;
  double t_stop = 0.3;
  bool steady = false;
  double steady_tol = 1e-8;
  double check_interval = 1.0;

  double dx() const { return (x_hi - x_lo) / cells; }
};

DvmConfig dvm_config_for(const Scenario& s, int cells, VelocityGrid grid);

ReducedState dvm_initial_state(const DvmConfig& cfg, const std::function<MacroState(double)>& init,
                               MacroState ghost_left, MacroState ghost_right);

ReducedState dvm_initial_state(const DvmConfig& cfg, const Scenario& s);

class DvmSolver
{
 public:
  explicit DvmSolver(DvmConfig cfg);

  const DvmConfig& config() const { return cfg_; }
  double stable_dt() const;

  /// First-order upwind transport, then exact relaxation toward the
  /// moment-matched discrete Maxwellian. `tau_override` > 0 replaces the
  /// configured model; infinity gives free transport.
  void step(ReducedState& s, double dt, double tau_override = 0.0);

  void run(ReducedState& s);

 private:
  DvmConfig cfg_;
  std::vector<double> fg_, fh_;
};

Profile profile_of(const ReducedState& s);

}  // namespace regmom
