#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "regmom/closure.hpp"
#include "regmom/moment_state.hpp"
#include "regmom/multi_index.hpp"

namespace regmom {

/// base + slope . x + sum_k amp_k sin(wave_k . x + phase_k), with exact
/// first derivatives.
struct FieldComponent
{
  struct Mode
  {
    double amp = 0.0;
    Vec3 wave{0.0, 0.0, 0.0};
    double phase = 0.0;
  };
  double base = 0.0;
  Vec3 slope{0.0, 0.0, 0.0};
  std::vector<Mode> modes;

  double value(const Vec3& x) const;
  double derivative(const Vec3& x, int axis) const;
};

/// Steady analytic rho, u, theta over a tensor grid of `points` nodes per
/// spatial axis. The velocity space has `dim` components; the fields depend
/// on the first `spatial_dims` <= dim coordinates. Periodic grids span
/// [0, length) per axis; otherwise [0, length] with one-sided stencils at the
/// ends.
struct ManufacturedField
{
  int dim = 3;
  int spatial_dims = 1;
  FieldComponent rho;
  std::array<FieldComponent, 3> u;
  FieldComponent theta;
  double length = 1.0;
  int points = 64;
  bool periodic = true;

  std::size_t grid_size() const;
  double spacing() const { return periodic ? length / points : length / (points - 1); }
  Vec3 x(std::size_t i) const;
  MacroState macro(const Vec3& x) const;
  /// Analytic gradients of rho, u, theta (coefficient gradients left empty).
  GradientData gradients(const Vec3& x) const;
  /// Throws std::invalid_argument for inconsistent sizes or a non-positive
  /// rho or theta on the grid.
  void validate() const;
};

/// "generic": every field varies along every spatial axis (spatial_dims =
/// dim), periodic. "generic-1d": same velocity fields but x-dependence
/// only. "linear-theta": uniform u, theta linear in x. "linear-u": u linear
/// in x, uniform rho and theta. "equilibrium": constants.
ManufacturedField field_preset(const std::string& name, int dim = 3);
std::vector<std::string> field_preset_names();

/// f_alpha of the n-th Maxwellian iterate at every grid node, alpha-major.
struct IterationState
{
  std::shared_ptr<const MomentLayout> layout;
  std::size_t nodes = 0;
  int n = 0;
  std::vector<double> coeffs;

  std::span<const double> field(std::size_t k) const { return {coeffs.data() + k * nodes, nodes}; }
  std::span<double> field(std::size_t k) { return {coeffs.data() + k * nodes, nodes}; }
  std::vector<double> at_node(std::size_t i) const;
};

inline constexpr int kDefaultWorkingOrder = 10;

/// F^(0): f_0 = rho, everything else zero.
IterationState maxwellian_iterate(const ManufacturedField& field, int working_order = kDefaultWorkingOrder);

/// f^(n+1)_alpha = -tau G_alpha(F^(n)) for |alpha| >= 2; f_0 and f_{e_i} are
/// kept. d f_alpha / dt is zero for steady fields; du/dt and dtheta/dt come
/// from the conservation laws with the iterate's stress and heat flux.
/// Coefficients above the working order are treated as zero.
IterationState iterate_once(const IterationState& state, const ManufacturedField& field, double tau);

IterationState iterate(const ManufacturedField& field, double tau, int iterations,
                       int working_order = kDefaultWorkingOrder);

/// d/dx_axis on the field's grid with 4th-order central differences
/// (4th-order one-sided near the ends of a non-periodic grid).
std::vector<double> differentiate(std::span<const double> values, const ManufacturedField& field, int axis);

/// Leading tau power expected for f_alpha: 1 for |alpha| = 2, 3 except
/// e_i+e_j+e_k with distinct i, j, k (2); ceil(|alpha|/3) for |alpha| >= 4;
/// 0 for |alpha| < 2.
int predicted_exponent(const MultiIndex& alpha);

/// tau0, tau0 * ratio, tau0 * ratio^2, ...
std::vector<double> tau_sweep(double tau0, double ratio, int count);

/// Norms below this fraction of the largest |alpha| >= 2 norm count as zero.
inline constexpr double kRoundoffFloor = 1e-12;

struct MagnitudeEstimate
{
  MultiIndex alpha;
  int predicted = 0;
  double measured = 0.0;  // least-squares slope of log ||f_alpha||_2 against log tau
  bool degenerate = false;  // f_alpha vanished (to roundoff) for some tau; no fit
};

/// Runs `iterations` steps for each tau and fits exponents for every
/// |alpha| >= 2 up to the working order. `jobs` > 1 runs sweep members on
/// that many threads; results do not depend on it.
std::vector<MagnitudeEstimate> magnitude_table(const ManufacturedField& field, const std::vector<double>& taus,
                                               int iterations, int working_order = kDefaultWorkingOrder,
                                               int jobs = 1);

MagnitudeEstimate magnitude_exponent(const MultiIndex& alpha, const ManufacturedField& field,
                                     const std::vector<double>& taus, int iterations,
                                     int working_order = kDefaultWorkingOrder);

struct NsfReport
{
  double max_sigma_deviation = 0.0;
  double max_q_deviation = 0.0;
  double max_sigma = 0.0;  // largest |sigma_ij| of the limits, for scale
  double max_q = 0.0;
};

/// sigma and q of the n-th iterate against the Navier-Stokes and Fourier
/// laws at every node.
NsfReport nsf_check(const ManufacturedField& field, double tau, int iterations = 1,
                    int working_order = kDefaultWorkingOrder);

/// Closed forms of the first iterate at x: f_{2e_j}, f_{e_i+e_j},
/// f_{2e_i+e_j}, zero for e_i+e_j+e_k and |alpha| >= 4; f_0 = rho and
/// f_{e_i} = 0.
double first_iteration_closed_form(const MultiIndex& alpha, const ManufacturedField& field, const Vec3& x,
                                   double tau);

}  // namespace regmom
