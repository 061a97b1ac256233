#pragma once

#include <array>
#include <span>
#include <vector>

#include "regmom/multi_index.hpp"

namespace regmom {

using Vec3 = std::array<double, 3>;

/// Local frame of a Hermite expansion: density, velocity, temperature
/// (theta = RT). Only the first D velocity components are meaningful.
struct MacroState
{
  double rho = 1.0;
  Vec3 u{0.0, 0.0, 0.0};
  double theta = 1.0;

  bool is_physical() const { return rho > 0.0 && theta > 0.0; }
};

/// Expansion coefficients f_alpha, |alpha| <= M, in MomentLayout order.
struct MomentCoeffs
{
  std::vector<double> values;

  MomentCoeffs() = default;
  explicit MomentCoeffs(std::size_t n) : values(n, 0.0) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }
  std::span<double> span() { return values; }
  std::span<const double> span() const { return values; }
};

/// Conserved densities: rho, momentum rho*u, total energy.
struct Conserved
{
  double rho = 0.0;
  Vec3 momentum{0.0, 0.0, 0.0};
  double energy = 0.0;
};

/// Pressure tensor, stress tensor and heat flux, p_ij = p delta_ij + sigma_ij.
struct StressHeat
{
  double p = 0.0;
  std::array<Vec3, 3> pressure{};
  std::array<Vec3, 3> sigma{};
  Vec3 q{0.0, 0.0, 0.0};
};

MomentCoeffs maxwellian_coeffs(const MacroState& macro, const MomentLayout& layout);

/// sigma_ij = f_{e_i+e_j} (i != j), sigma_jj = 2 f_{2e_j},
/// q_k = 2 f_{3e_k} + sum_d f_{2e_d+e_k}.
StressHeat stress_heat(std::span<const double> coeffs, const MacroState& macro,
                       const MomentLayout& layout);

/// sum_alpha f_alpha H_{theta,alpha}((xi-u)/sqrt(theta)).
double reconstruct(std::span<const double> coeffs, const MacroState& macro,
                   const MomentLayout& layout, std::span<const double> xi);

/// Conserved densities of the expansion; exact for any coefficient vector,
/// including ones that violate the low-order compatibility constraints.
Conserved conserved_of(std::span<const double> coeffs, const MacroState& frame,
                       const MomentLayout& layout);

/// Throws std::domain_error when rho <= 0 or the internal energy is not
/// positive.
MacroState macro_from_conserved(const Conserved& c, int dim);

Conserved conserved_from_macro(const MacroState& m, int dim);

enum class ProjectionWarning { None, IllConditioned };

/// Target temperature below this fraction of the source temperature flags
/// the projection as ill-conditioned (truncation error grows).
inline constexpr double kProjectionThetaRatio = 0.2;

struct Projection
{
  MomentCoeffs coeffs;
  ProjectionWarning warning = ProjectionWarning::None;
};

/// Re-expand coefficients given in frame `from` in the basis of frame `to`,
/// keeping every velocity moment of order <= M. The coefficient flow
/// d f_alpha/ds = -sum_d u_d' f_{alpha-e_d} - theta'/2 sum_d f_{alpha-2e_d}
/// is nilpotent, so its exponential is a terminating series.
Projection project_frame(std::span<const double> coeffs, const MacroState& from,
                         const MacroState& to, const MomentLayout& layout);

/// In-place variant without warning classification. `scratch` must hold
/// 2 * layout.size() values.
void project_in_place(std::span<double> coeffs, const Vec3& du, double dtheta,
                      const MomentLayout& layout, std::span<double> scratch);

/// Moves coefficients to the frame defined by their own conserved moments,
/// restoring f_{e_i} = 0 and sum_d f_{2e_d} = 0. Returns the new frame.
MacroState relocate(std::span<double> coeffs, const MacroState& frame, const MomentLayout& layout,
                    std::span<double> scratch);

/// Largest violation of f_0 = rho, f_{e_i} = 0, sum_d f_{2e_d} = 0, each
/// scaled by rho theta^{|alpha|/2}.
double constraint_violation(std::span<const double> coeffs, const MacroState& macro,
                            const MomentLayout& layout);

}  // namespace regmom
