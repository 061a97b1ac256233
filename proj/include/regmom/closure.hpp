#pragma once

#include <array>
#include <span>
#include <vector>

#include "regmom/moment_state.hpp"
#include "regmom/multi_index.hpp"

namespace regmom {

/// Spatial derivatives along each spatial axis j < spatial_dims. Coefficient
/// gradients follow MomentLayout order.
struct GradientData
{
  int spatial_dims = 1;
  std::array<double, 3> rho{};
  std::array<Vec3, 3> u{};  // u[j][d] = d u_d / d x_j
  std::array<double, 3> theta{};
  std::array<std::vector<double>, 3> coeffs;

  GradientData() = default;
  GradientData(int spatial, std::size_t n_coeffs);

  double pressure(int j, const MacroState& m) const { return rho[j] * m.theta + m.rho * theta[j]; }
};

/// Regularized value of f_alpha, |alpha| = M+1:
///
///   tau [ (1/rho) sum_j dp/dx_j f_{alpha-e_j} - sum_j theta d f_{alpha-e_j}/dx_j ]
///   + (1/rho) sum_{j,d} [ sigma_dj f_{alpha-e_d-e_j} / 2
///       + q_j (theta f_{alpha-2e_d-e_j} + (alpha_j+1) f_{alpha-2e_d+e_j}) / ((D+2) theta) ]
///
/// Indices with a negative component contribute zero. The stress inside the
/// double sum carries the index pair (d, j).
double closure_nonlinear(const MultiIndex& alpha, const MacroState& macro,
                         std::span<const double> coeffs, const GradientData& grads, double tau,
                         const MomentLayout& layout);

/// Same, with sigma and q supplied by the caller.
double closure_nonlinear(const MultiIndex& alpha, const MacroState& macro,
                         std::span<const double> coeffs, const GradientData& grads, double tau,
                         const MomentLayout& layout, const StressHeat& sh);

/// Linearized regularization -tau theta sum_j d f_{alpha-e_j} / dx_j.
double closure_linear(const MultiIndex& alpha, double theta, double tau, const GradientData& grads,
                      const MomentLayout& layout);

struct NsfLimits
{
  std::array<Vec3, 3> sigma{};
  Vec3 q{0.0, 0.0, 0.0};
};

/// Navier-Stokes and Fourier laws of the BGK model (Prandtl number 1):
/// q_k = -(D+2)/2 tau rho theta dtheta/dx_k,
/// sigma_ij = -2 tau rho theta (trace-free symmetric part of grad u)_ij.
NsfLimits nsf_limits(const MacroState& macro, const GradientData& grads, double tau, int dim);

/// Prandtl number implied by the two laws: Pr = c_p mu / kappa with
/// c_p = (D+2)/2.
double nsf_prandtl(int dim);

}  // namespace regmom
