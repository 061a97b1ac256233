#include "regmom/moment_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "regmom/hermite.hpp"

namespace regmom {

MomentCoeffs maxwellian_coeffs(const MacroState& macro, const MomentLayout& layout)
{
  MomentCoeffs c(layout.size());
  c[0] = macro.rho;
  return c;
}

namespace {

double at(std::span<const double> coeffs, int k) { return k == kAbsent ? 0.0 : coeffs[static_cast<std::size_t>(k)]; }

int pair_index(const MomentLayout& layout, int i, int j)
{
  MultiIndex a(layout.dim());
  a[i] += 1;
  a[j] += 1;
  return layout.find(a);
}

}  // namespace

StressHeat stress_heat(std::span<const double> coeffs, const MacroState& macro,
                       const MomentLayout& layout)
{
  const int D = layout.dim();
  StressHeat sh;
  sh.p = macro.rho * macro.theta;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      double s = at(coeffs, pair_index(layout, i, j));
      sh.sigma[i][j] = i == j ? 2.0 * s : s;
      sh.pressure[i][j] = sh.sigma[i][j] + (i == j ? sh.p : 0.0);
    }
  }
  for (int k = 0; k < D; ++k) {
    double q = 2.0 * at(coeffs, layout.axis_power(k, 3));
    for (int d = 0; d < D; ++d) {
      MultiIndex a(D);
      a[d] += 2;
      a[k] += 1;
      q += at(coeffs, layout.find(a));
    }
    sh.q[k] = q;
  }
  return sh;
}

double reconstruct(std::span<const double> coeffs, const MacroState& macro,
                   const MomentLayout& layout, std::span<const double> xi)
{
  const int D = layout.dim();
  if (static_cast<int>(xi.size()) != D) throw std::invalid_argument("reconstruct: velocity dimension mismatch");
  if (!(macro.theta > 0.0)) throw std::invalid_argument("reconstruct: theta must be positive");
  const double sqrt_theta = std::sqrt(macro.theta);
  const int M = layout.max_order();

  // Per-axis factors theta^{-(a+1)/2} He_a(v) exp(-v^2/2) / sqrt(2 pi).
  std::array<std::vector<double>, kMaxDim> axis;
  for (int d = 0; d < D; ++d) {
    double v = (xi[d] - macro.u[d]) / sqrt_theta;
    HermiteTable he(M, v);
    double g = std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
    axis[d].resize(static_cast<std::size_t>(M) + 1);
    double scale = 1.0 / sqrt_theta;
    for (int a = 0; a <= M; ++a) {
      axis[d][a] = scale * he(a) * g;
      scale /= sqrt_theta;
    }
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < layout.size(); ++k) {
    const MultiIndex& a = layout.unrank(k);
    double w = coeffs[k];
    for (int d = 0; d < D; ++d) w *= axis[d][a[d]];
    sum += w;
  }
  return sum;
}

Conserved conserved_of(std::span<const double> coeffs, const MacroState& frame,
                       const MomentLayout& layout)
{
  const int D = layout.dim();
  Conserved c;
  c.rho = coeffs[0];
  double u2 = 0.0;
  double u_dot_fe = 0.0;
  double trace2 = 0.0;
  for (int d = 0; d < D; ++d) {
    double fe = at(coeffs, layout.axis_power(d, 1));
    c.momentum[d] = frame.u[d] * coeffs[0] + fe;
    u2 += frame.u[d] * frame.u[d];
    u_dot_fe += frame.u[d] * fe;
    trace2 += at(coeffs, layout.axis_power(d, 2));
  }
  c.energy = 0.5 * u2 * coeffs[0] + u_dot_fe + 0.5 * (D * frame.theta * coeffs[0] + 2.0 * trace2);
  return c;
}

MacroState macro_from_conserved(const Conserved& c, int dim)
{
  if (!(c.rho > 0.0)) throw std::domain_error("non-positive density");
  MacroState m;
  m.rho = c.rho;
  double m2 = 0.0;
  for (int d = 0; d < dim; ++d) {
    m.u[d] = c.momentum[d] / c.rho;
    m2 += c.momentum[d] * c.momentum[d];
  }
  double internal = 2.0 * c.energy - m2 / c.rho;
  m.theta = internal / (dim * c.rho);
  if (!(m.theta > 0.0)) throw std::domain_error("non-positive internal energy");
  return m;
}

Conserved conserved_from_macro(const MacroState& m, int dim)
{
  Conserved c;
  c.rho = m.rho;
  double u2 = 0.0;
  for (int d = 0; d < dim; ++d) {
    c.momentum[d] = m.rho * m.u[d];
    u2 += m.u[d] * m.u[d];
  }
  c.energy = 0.5 * m.rho * u2 + 0.5 * dim * m.rho * m.theta;
  return c;
}

void project_in_place(std::span<double> coeffs, const Vec3& du, double dtheta,
                      const MomentLayout& layout, std::span<double> scratch)
{
  const std::size_t n = layout.size();
  const int D = layout.dim();
  const int M = layout.max_order();
  std::span<double> term = scratch.subspan(0, n);
  std::span<double> next = scratch.subspan(n, n);

  std::array<int, kMaxDim> active{};
  int n_active = 0;
  for (int d = 0; d < D; ++d) {
    if (du[d] != 0.0 || dtheta != 0.0) active[n_active++] = d;
  }
  if (n_active == 0) return;
  const double half_dt = 0.5 * dtheta;

  std::copy(coeffs.begin(), coeffs.end(), term.begin());
  // term_k = (-A)^k f / k!; term_k vanishes below grade k.
  for (int k = 1; k <= M; ++k) {
    const double inv_k = -1.0 / k;
    std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(layout.grade_begin(k)), 0.0);
    for (std::size_t a = layout.grade_begin(k); a < n; ++a) {
      double s = 0.0;
      for (int i = 0; i < n_active; ++i) {
        const int d = active[i];
        int m1 = layout.neighbor(a, d, -1);
        if (m1 != kAbsent && du[d] != 0.0) s += du[d] * term[m1];
        int m2 = layout.neighbor(a, d, -2);
        if (m2 != kAbsent) s += half_dt * term[m2];
      }
      next[a] = s * inv_k;
    }
    for (std::size_t a = layout.grade_begin(k); a < n; ++a) coeffs[a] += next[a];
    std::swap(term, next);
  }
}

Projection project_frame(std::span<const double> coeffs, const MacroState& from,
                         const MacroState& to, const MomentLayout& layout)
{
  if (!(to.theta > 0.0) || !(from.theta > 0.0)) {
    throw std::invalid_argument("project_frame: temperatures must be positive");
  }
  if (coeffs.size() != layout.size()) throw std::invalid_argument("project_frame: size mismatch");
  Projection out;
  out.coeffs.values.assign(coeffs.begin(), coeffs.end());
  Vec3 du{};
  for (int d = 0; d < layout.dim(); ++d) du[d] = to.u[d] - from.u[d];
  std::vector<double> scratch(2 * layout.size());
  project_in_place(out.coeffs.span(), du, to.theta - from.theta, layout, scratch);
  if (to.theta < kProjectionThetaRatio * from.theta) out.warning = ProjectionWarning::IllConditioned;
  return out;
}

MacroState relocate(std::span<double> coeffs, const MacroState& frame, const MomentLayout& layout,
                    std::span<double> scratch)
{
  const int D = layout.dim();
  MacroState target = macro_from_conserved(conserved_of(coeffs, frame, layout), D);
  Vec3 du{};
  for (int d = 0; d < D; ++d) du[d] = target.u[d] - frame.u[d];
  project_in_place(coeffs, du, target.theta - frame.theta, layout, scratch);
  // The projection makes these vanish up to rounding; pin them exactly.
  coeffs[0] = target.rho;
  double trace = 0.0;
  for (int d = 0; d < D; ++d) {
    coeffs[static_cast<std::size_t>(layout.axis_power(d, 1))] = 0.0;
    if (layout.max_order() >= 2) trace += coeffs[static_cast<std::size_t>(layout.axis_power(d, 2))];
  }
  if (layout.max_order() >= 2) {
    for (int d = 0; d < D; ++d) coeffs[static_cast<std::size_t>(layout.axis_power(d, 2))] -= trace / D;
  }
  return target;
}

double constraint_violation(std::span<const double> coeffs, const MacroState& macro,
                            const MomentLayout& layout)
{
  const int D = layout.dim();
  double worst = std::abs(coeffs[0] - macro.rho) / macro.rho;
  double trace = 0.0;
  for (int d = 0; d < D; ++d) {
    int e1 = layout.axis_power(d, 1);
    if (e1 != kAbsent) {
      worst = std::max(worst, std::abs(coeffs[e1]) / (macro.rho * std::sqrt(macro.theta)));
    }
    int e2 = layout.axis_power(d, 2);
    if (e2 != kAbsent) trace += coeffs[e2];
  }
  return std::max(worst, std::abs(trace) / (macro.rho * macro.theta));
}

}  // namespace regmom
