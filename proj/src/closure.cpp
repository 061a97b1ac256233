#include "regmom/closure.hpp"

#include <stdexcept>

namespace regmom {

GradientData::GradientData(int spatial, std::size_t n_coeffs) : spatial_dims(spatial)
{
  if (spatial < 1 || spatial > 3) throw std::invalid_argument("spatial dimension out of range");
  for (int j = 0; j < spatial; ++j) coeffs[j].assign(n_coeffs, 0.0);
}

namespace {

double value_at(std::span<const double> v, const MomentLayout& layout, const MultiIndex& a)
{
  int k = layout.find(a);
  return k == kAbsent ? 0.0 : v[static_cast<std::size_t>(k)];
}

void check_top_order(const MultiIndex& alpha, const MomentLayout& layout)
{
  if (alpha.dim() != layout.dim()) throw std::invalid_argument("closure: dimension mismatch");
  if (alpha.order() != layout.max_order() + 1) {
    throw std::invalid_argument("closure: |alpha| must equal M+1");
  }
}

}  // namespace

double closure_nonlinear(const MultiIndex& alpha, const MacroState& macro,
                         std::span<const double> coeffs, const GradientData& grads, double tau,
                         const MomentLayout& layout)
{
  return closure_nonlinear(alpha, macro, coeffs, grads, tau, layout,
                           stress_heat(coeffs, macro, layout));
}

double closure_nonlinear(const MultiIndex& alpha, const MacroState& macro,
                         std::span<const double> coeffs, const GradientData& grads, double tau,
                         const MomentLayout& layout, const StressHeat& sh)
{
  check_top_order(alpha, layout);
  const int D = layout.dim();
  const double rho = macro.rho;
  const double theta = macro.theta;

  double gradient_part = 0.0;
  double stress_part = 0.0;
  for (int j = 0; j < grads.spatial_dims; ++j) {
    MultiIndex a_j = alpha.raw_shift(j, -1);
    gradient_part += grads.pressure(j, macro) / rho * value_at(coeffs, layout, a_j) -
                     theta * value_at(grads.coeffs[j], layout, a_j);
    for (int d = 0; d < D; ++d) {
      MultiIndex a_dj = a_j.raw_shift(d, -1);
      MultiIndex a_2d = alpha.raw_shift(d, -2);
      MultiIndex a_2dj = a_2d.raw_shift(j, -1);
      MultiIndex a_2dpj = a_2d.raw_shift(j, +1);
      stress_part += 0.5 * sh.sigma[d][j] * value_at(coeffs, layout, a_dj) +
                     sh.q[j] *
                         (theta * value_at(coeffs, layout, a_2dj) +
                          (alpha[j] + 1) * value_at(coeffs, layout, a_2dpj)) /
                         ((D + 2) * theta);
    }
  }
  return tau * gradient_part + stress_part / rho;
}

double closure_linear(const MultiIndex& alpha, double theta, double tau, const GradientData& grads,
                      const MomentLayout& layout)
{
  check_top_order(alpha, layout);
  double s = 0.0;
  for (int j = 0; j < grads.spatial_dims; ++j) {
    s += value_at(grads.coeffs[j], layout, alpha.raw_shift(j, -1));
  }
  return -tau * theta * s;
}

NsfLimits nsf_limits(const MacroState& macro, const GradientData& grads, double tau, int dim)
{
  NsfLimits out;
  const double mu = tau * macro.rho * macro.theta;
  // grad[i][j] = d u_i / d x_j; axes beyond the spatial dimension carry no gradient.
  std::array<Vec3, 3> grad{};
  for (int j = 0; j < grads.spatial_dims; ++j) {
    for (int i = 0; i < dim; ++i) grad[i][j] = grads.u[j][i];
  }
  double div = 0.0;
  for (int i = 0; i < dim; ++i) div += grad[i][i];
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double sym = 0.5 * (grad[i][j] + grad[j][i]) - (i == j ? div / dim : 0.0);
      out.sigma[i][j] = -2.0 * mu * sym;
    }
  }
  for (int k = 0; k < dim; ++k) {
    double dtheta = k < grads.spatial_dims ? grads.theta[k] : 0.0;
    out.q[k] = -0.5 * (dim + 2) * mu * dtheta;
  }
  return out;
}

double nsf_prandtl(int dim)
{
  // mu = tau p, kappa = (D+2)/2 tau p (heat flux per unit theta gradient),
  // c_p = (D+2)/2 in units where R = 1.
  const double mu = 1.0;
  const double kappa = 0.5 * (dim + 2);
  const double cp = 0.5 * (dim + 2);
  return cp * mu / kappa;
}

}  // namespace regmom
