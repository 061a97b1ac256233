#include "regmom/maxwell_iter.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>

namespace regmom {

double FieldComponent::value(const Vec3& x) const
{
  double v = base + slope[0] * x[0] + slope[1] * x[1] + slope[2] * x[2];
  for (const auto& m : modes) {
    v += m.amp * std::sin(m.wave[0] * x[0] + m.wave[1] * x[1] + m.wave[2] * x[2] + m.phase);
  }
  return v;
}

double FieldComponent::derivative(const Vec3& x, int axis) const
{
  double v = slope[axis];
  for (const auto& m : modes) {
    v += m.amp * m.wave[axis] * std::cos(m.wave[0] * x[0] + m.wave[1] * x[1] + m.wave[2] * x[2] + m.phase);
  }
  return v;
}

std::size_t ManufacturedField::grid_size() const
{
  std::size_t n = 1;
  for (int j = 0; j < spatial_dims; ++j) n *= static_cast<std::size_t>(points);
  return n;
}

Vec3 ManufacturedField::x(std::size_t i) const
{
  Vec3 out{0.0, 0.0, 0.0};
  const double h = spacing();
  for (int j = 0; j < spatial_dims; ++j) {
    out[j] = static_cast<double>(i % points) * h;
    i /= points;
  }
  return out;
}

MacroState ManufacturedField::macro(const Vec3& x) const
{
  MacroState m;
  m.rho = rho.value(x);
  for (int d = 0; d < dim; ++d) m.u[d] = u[d].value(x);
  m.theta = theta.value(x);
  return m;
}

GradientData ManufacturedField::gradients(const Vec3& x) const
{
  GradientData g(spatial_dims, 0);
  for (int j = 0; j < spatial_dims; ++j) {
    g.rho[j] = rho.derivative(x, j);
    g.theta[j] = theta.derivative(x, j);
    for (int d = 0; d < dim; ++d) g.u[j][d] = u[d].derivative(x, j);
  }
  return g;
}

void ManufacturedField::validate() const
{
  if (dim < 1 || dim > 3) throw std::invalid_argument("manufactured field: dim must be 1, 2 or 3");
  if (spatial_dims < 1 || spatial_dims > dim) {
    throw std::invalid_argument("manufactured field: spatial_dims must lie in [1, dim]");
  }
  if (points < 5) throw std::invalid_argument("manufactured field: need at least 5 points per axis");
  if (!(length > 0.0)) throw std::invalid_argument("manufactured field: length must be positive");
  for (std::size_t i = 0; i < grid_size(); ++i) {
    if (!macro(x(i)).is_physical()) {
      throw std::invalid_argument("manufactured field: rho or theta not positive on the grid");
    }
  }
}

namespace {

FieldComponent::Mode mode(double amp, Vec3 k, double phase, int spatial)
{
  const double two_pi = 2.0 * std::numbers::pi;
  Vec3 w{0.0, 0.0, 0.0};
  for (int j = 0; j < spatial; ++j) w[j] = two_pi * k[j];
  return {amp, w, phase};
}

FieldComponent constant(double v)
{
  FieldComponent c;
  c.base = v;
  return c;
}

FieldComponent linear(double v0, double slope)
{
  FieldComponent c;
  c.base = v0;
  c.slope = {slope, 0.0, 0.0};
  return c;
}

ManufacturedField generic(int dim, int spatial)
{
  ManufacturedField f;
  f.dim = dim;
  f.spatial_dims = spatial;
  f.periodic = true;
  f.points = spatial == 1 ? 128 : (spatial == 2 ? 32 : 16);
  const int s = spatial;
  f.rho.base = 1.0;
  f.rho.modes = {mode(0.2, {1, 1, 0}, 0.3, s), mode(0.1, {-1, 0, 1}, 1.2, s)};
  f.u[0].base = 0.1;
  f.u[0].modes = {mode(0.3, {1, 0, 0}, 1.1, s), mode(0.15, {0, 1, 1}, 0.4, s)};
  f.u[1].base = -0.05;
  f.u[1].modes = {mode(0.25, {1, -1, 0}, 2.3, s), mode(0.1, {0, 0, 1}, 0.9, s)};
  f.u[2].base = 0.0;
  f.u[2].modes = {mode(0.15, {1, 0, 1}, 0.7, s), mode(0.1, {0, 1, 0}, 2.9, s)};
  f.theta.base = 1.0;
  f.theta.modes = {mode(0.25, {1, 1, 1}, 2.0, s), mode(0.1, {0, 1, 0}, 0.5, s)};
  for (int d = dim; d < 3; ++d) f.u[d] = FieldComponent{};
  return f;
}

}  // namespace

std::vector<std::string> field_preset_names()
{
  return {"generic", "generic-1d", "linear-theta", "linear-u", "equilibrium"};
}

ManufacturedField field_preset(const std::string& name, int dim)
{
  if (dim < 1 || dim > 3) throw std::invalid_argument("field preset: dim must be 1, 2 or 3");
  ManufacturedField f;
  if (name == "generic") {
    f = generic(dim, dim);
  } else if (name == "generic-1d") {
    f = generic(dim, 1);
  } else if (name == "linear-theta") {
    f.dim = dim;
    f.periodic = false;
    f.points = 33;
    f.rho = linear(1.0, 0.5);
    f.u = {constant(0.4), constant(0.2), constant(-0.1)};
    f.theta = linear(1.0, 0.5);
  } else if (name == "linear-u") {
    f.dim = dim;
    f.periodic = false;
    f.points = 33;
    f.rho = constant(1.0);
    f.u = {linear(0.2, 0.3), linear(-0.1, 0.5), linear(0.0, 0.4)};
    f.theta = constant(1.5);
  } else if (name == "equilibrium") {
    f.dim = dim;
    f.points = 32;
    f.rho = constant(1.3);
    f.u = {constant(0.2), constant(-0.1), constant(0.05)};
    f.theta = constant(0.9);
  } else {
    throw std::invalid_argument("unknown field preset: " + name);
  }
  for (int d = dim; d < 3; ++d) f.u[d] = FieldComponent{};
  f.validate();
  return f;
}

std::vector<double> IterationState::at_node(std::size_t i) const
{
  std::vector<double> out(layout->size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = coeffs[k * nodes + i];
  return out;
}

IterationState maxwellian_iterate(const ManufacturedField& field, int working_order)
{
  field.validate();
  if (working_order < 3) throw std::invalid_argument("maxwellian iteration: working order must be >= 3");
  IterationState s;
  s.layout = std::make_shared<const MomentLayout>(working_order, field.dim);
  s.nodes = field.grid_size();
  s.coeffs.assign(s.layout->size() * s.nodes, 0.0);
  auto f0 = s.field(0);
  for (std::size_t i = 0; i < s.nodes; ++i) f0[i] = field.rho.value(field.x(i));
  return s;
}

std::vector<double> differentiate(std::span<const double> values, const ManufacturedField& field, int axis)
{
  const std::size_t n = static_cast<std::size_t>(field.points);
  const std::size_t total = field.grid_size();
  if (values.size() != total) throw std::invalid_argument("differentiate: size mismatch");
  if (axis < 0 || axis >= field.spatial_dims) throw std::invalid_argument("differentiate: bad axis");
  std::size_t stride = 1;
  for (int j = 0; j < axis; ++j) stride *= n;
  const double inv = 1.0 / (12.0 * field.spacing());
  std::vector<double> out(total);
  std::vector<double> line(n);
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / stride) % n != 0) continue;
    for (std::size_t k = 0; k < n; ++k) line[k] = values[base + k * stride];
    for (std::size_t k = 0; k < n; ++k) {
      double d;
      if (field.periodic) {
        auto at = [&](long off) { return line[static_cast<std::size_t>(static_cast<long>(k + n) + off) % n]; };
        d = -at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2);
      } else if (k >= 2 && k + 2 < n) {
        d = -line[k + 2] + 8.0 * line[k + 1] - 8.0 * line[k - 1] + line[k - 2];
      } else if (k == 0) {
        d = -25.0 * line[0] + 48.0 * line[1] - 36.0 * line[2] + 16.0 * line[3] - 3.0 * line[4];
      } else if (k == 1) {
        d = -3.0 * line[0] - 10.0 * line[1] + 18.0 * line[2] - 6.0 * line[3] + line[4];
      } else if (k == n - 1) {
        d = 25.0 * line[n - 1] - 48.0 * line[n - 2] + 36.0 * line[n - 3] - 16.0 * line[n - 4] + 3.0 * line[n - 5];
      } else {
        d = 3.0 * line[n - 1] + 10.0 * line[n - 2] - 18.0 * line[n - 3] + 6.0 * line[n - 4] - line[n - 5];
      }
      out[base + k * stride] = d * inv;
    }
  }
  return out;
}

namespace {

// One term of G_alpha: mult * factor[i] * (f_src or d f_src / dx_axis)[i].
struct Term
{
  int factor;
  int src;
  int axis;  // -1: coefficient value
  double mult;
};

// Per-node factor arrays, indexed by the ids below.
struct Factors
{
  int dim;
  int spatial;
  std::vector<std::vector<double>> data;

  Factors(int D, int S, std::size_t nodes) : dim(D), spatial(S), data(count(), std::vector<double>(nodes, 0.0)) {}

  std::size_t count() const { return 3 + 2 + 3 + 3 * 9 + 3 * 3; }
  int ut(int d) const { return d; }
  int half_theta_t() const { return 3; }
  int theta() const { return 4; }
  int u(int j) const { return 5 + j; }
  // d u_d / dx_j times theta, u_j, 1
  int du(int kind, int d, int j) const { return 8 + kind * 9 + d * 3 + j; }
  // dtheta/dx_j / 2 times theta, u_j, 1
  int dth(int kind, int j) const { return 35 + kind * 3 + j; }
};

std::vector<Term> terms_for(const MultiIndex& a, const MomentLayout& layout, const Factors& fx)
{
  std::vector<Term> out;
  auto add = [&](int factor, const MultiIndex& src, int axis, double mult) {
    int k = layout.find(src);
    if (k != kAbsent) out.push_back({factor, k, axis, mult});
  };
  const int D = fx.dim;
  for (int d = 0; d < D; ++d) {
    add(fx.ut(d), a.raw_shift(d, -1), -1, 1.0);
    add(fx.half_theta_t(), a.raw_shift(d, -2), -1, 1.0);
  }
  for (int j = 0; j < fx.spatial; ++j) {
    const double aj = a[j] + 1.0;
    add(fx.theta(), a.raw_shift(j, -1), j, 1.0);
    add(fx.u(j), a, j, 1.0);
    add(-1, a.raw_shift(j, +1), j, aj);
    for (int d = 0; d < D; ++d) {
      MultiIndex ad = a.raw_shift(d, -1);
      add(fx.du(0, d, j), ad.raw_shift(j, -1), -1, 1.0);
      add(fx.du(1, d, j), ad, -1, 1.0);
      add(fx.du(2, d, j), ad.raw_shift(j, +1), -1, aj);
      MultiIndex a2d = a.raw_shift(d, -2);
      add(fx.dth(0, j), a2d.raw_shift(j, -1), -1, 1.0);
      add(fx.dth(1, j), a2d, -1, 1.0);
      add(fx.dth(2, j), a2d.raw_shift(j, +1), -1, aj);
    }
  }
  return out;
}

}  // namespace

IterationState iterate_once(const IterationState& state, const ManufacturedField& field, double tau)
{
  const MomentLayout& L = *state.layout;
  if (L.dim() != field.dim || state.nodes != field.grid_size()) {
    throw std::invalid_argument("iterate_once: state does not match field");
  }
  const int D = field.dim;
  const int S = field.spatial_dims;
  const std::size_t N = state.nodes;

  // Stress and heat flux of the current iterate.
  std::array<std::array<std::vector<double>, 3>, 3> sigma;
  std::array<std::vector<double>, 3> q;
  for (int i = 0; i < D; ++i) {
    q[i].assign(N, 0.0);
    for (int j = 0; j < D; ++j) sigma[i][j].assign(N, 0.0);
  }
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) {
      MultiIndex a(D);
      a[i] += 1;
      a[j] += 1;
      auto src = state.field(L.ordinal(a));
      const double scale = i == j ? 2.0 : 1.0;
      for (std::size_t n = 0; n < N; ++n) sigma[i][j][n] = scale * src[n];
    }
    auto f3 = state.field(static_cast<std::size_t>(L.axis_power(i, 3)));
    for (std::size_t n = 0; n < N; ++n) q[i][n] += 2.0 * f3[n];
    for (int d = 0; d < D; ++d) {
      MultiIndex a(D);
      a[d] += 2;
      a[i] += 1;
      auto src = state.field(L.ordinal(a));
      for (std::size_t n = 0; n < N; ++n) q[i][n] += src[n];
    }
  }
  // Divergences along the spatial axes.
  std::array<std::vector<double>, 3> div_sigma;
  std::vector<double> div_q(N, 0.0);
  for (int d = 0; d < D; ++d) div_sigma[d].assign(N, 0.0);
  for (int j = 0; j < S; ++j) {
    for (int d = 0; d < D; ++d) {
      auto g = differentiate(sigma[d][j], field, j);
      for (std::size_t n = 0; n < N; ++n) div_sigma[d][n] += g[n];
    }
    auto g = differentiate(q[j], field, j);
    for (std::size_t n = 0; n < N; ++n) div_q[n] += g[n];
  }

  Factors fx(D, S, N);
  for (std::size_t n = 0; n < N; ++n) {
    const Vec3 x = field.x(n);
    const MacroState m = field.macro(x);
    const GradientData g = field.gradients(x);
    const double p = m.rho * m.theta;
    for (int d = 0; d < D; ++d) {
      double adv = 0.0;
      for (int j = 0; j < S; ++j) adv += m.u[j] * g.u[j][d];
      double dp = d < S ? g.pressure(d, m) : 0.0;
      fx.data[fx.ut(d)][n] = -adv - (dp + div_sigma[d][n]) / m.rho;
    }
    double adv = 0.0;
    double work = 0.0;
    for (int j = 0; j < S; ++j) {
      adv += m.u[j] * g.theta[j];
      for (int d = 0; d < D; ++d) {
        const double pdj = (d == j ? p : 0.0) + sigma[d][j][n];
        work += pdj * g.u[j][d];
      }
    }
    fx.data[fx.half_theta_t()][n] = 0.5 * (-adv - 2.0 / (D * m.rho) * (div_q[n] + work));
    fx.data[fx.theta()][n] = m.theta;
    for (int j = 0; j < S; ++j) {
      fx.data[fx.u(j)][n] = m.u[j];
      for (int d = 0; d < D; ++d) {
        fx.data[fx.du(0, d, j)][n] = g.u[j][d] * m.theta;
        fx.data[fx.du(1, d, j)][n] = g.u[j][d] * m.u[j];
        fx.data[fx.du(2, d, j)][n] = g.u[j][d];
      }
      fx.data[fx.dth(0, j)][n] = 0.5 * g.theta[j] * m.theta;
      fx.data[fx.dth(1, j)][n] = 0.5 * g.theta[j] * m.u[j];
      fx.data[fx.dth(2, j)][n] = 0.5 * g.theta[j];
    }
  }

  // Spatial derivatives of every coefficient field.
  std::array<std::vector<double>, 3> grads;
  for (int j = 0; j < S; ++j) {
    grads[j].assign(L.size() * N, 0.0);
    for (std::size_t k = 0; k < L.size(); ++k) {
      auto g = differentiate(state.field(k), field, j);
      std::copy(g.begin(), g.end(), grads[j].begin() + static_cast<std::ptrdiff_t>(k * N));
    }
  }

  IterationState next;
  next.layout = state.layout;
  next.nodes = N;
  next.n = state.n + 1;
  next.coeffs.assign(L.size() * N, 0.0);
  for (std::size_t k = 0; k < L.grade_begin(2); ++k) {
    std::copy_n(state.coeffs.begin() + static_cast<std::ptrdiff_t>(k * N), N,
                next.coeffs.begin() + static_cast<std::ptrdiff_t>(k * N));
  }
  for (std::size_t k = L.grade_begin(2); k < L.size(); ++k) {
    auto out = next.field(k);
    for (const Term& t : terms_for(L.unrank(k), L, fx)) {
      const double* src = t.axis < 0 ? state.coeffs.data() + static_cast<std::size_t>(t.src) * N
                                     : grads[t.axis].data() + static_cast<std::size_t>(t.src) * N;
      if (t.factor < 0) {
        for (std::size_t n = 0; n < N; ++n) out[n] += t.mult * src[n];
      } else {
        const double* fac = fx.data[t.factor].data();
        for (std::size_t n = 0; n < N; ++n) out[n] += t.mult * fac[n] * src[n];
      }
    }
    for (std::size_t n = 0; n < N; ++n) out[n] *= -tau;
  }
  return next;
}

IterationState iterate(const ManufacturedField& field, double tau, int iterations, int working_order)
{
  if (iterations < 0) throw std::invalid_argument("iterate: negative iteration count");
  IterationState s = maxwellian_iterate(field, working_order);
  for (int k = 0; k < iterations; ++k) s = iterate_once(s, field, tau);
  return s;
}

int predicted_exponent(const MultiIndex& alpha)
{
  const int n = alpha.order();
  if (n < 2) return 0;
  if (n == 3) {
    int ones = 0;
    for (int d = 0; d < alpha.dim(); ++d) ones += alpha[d] == 1 ? 1 : 0;
    return ones == 3 ? 2 : 1;
  }
  if (n == 2) return 1;
  return (n + 2) / 3;
}

std::vector<double> tau_sweep(double tau0, double ratio, int count)
{
  if (!(tau0 > 0.0) || !(ratio > 0.0) || ratio == 1.0 || count < 2) {
    throw std::invalid_argument("tau sweep needs tau0 > 0, ratio > 0, ratio != 1, count >= 2");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  double t = tau0;
  for (auto& v : out) {
    v = t;
    t *= ratio;
  }
  return out;
}

std::vector<MagnitudeEstimate> magnitude_table(const ManufacturedField& field, const std::vector<double>& taus,
                                               int iterations, int working_order, int jobs)
{
  if (taus.size() < 2) throw std::invalid_argument("magnitude: need at least two tau values");
  MomentLayout L(working_order, field.dim);
  const std::size_t first = L.grade_begin(2);
  // rms[t][k - first]
  auto rms_of = [&](double t) {
    IterationState s = iterate(field, t, iterations, working_order);
    std::vector<double> r;
    for (std::size_t k = first; k < L.size(); ++k) {
      double ss = 0.0;
      for (double v : s.field(k)) ss += v * v;
      r.push_back(std::sqrt(ss / static_cast<double>(s.nodes)));
    }
    return r;
  };
  std::vector<std::vector<double>> rms(taus.size());
  const std::size_t width = static_cast<std::size_t>(std::max(jobs, 1));
  for (std::size_t start = 0; start < taus.size(); start += width) {
    std::vector<std::future<std::vector<double>>> pending;
    for (std::size_t t = start; t < std::min(taus.size(), start + width); ++t) {
      pending.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, rms_of, taus[t]));
    }
    for (std::size_t t = start; t < start + pending.size(); ++t) rms[t] = pending[t - start].get();
  }
  std::vector<std::vector<double>> norms(L.size() - first);
  std::vector<bool> zero(L.size() - first, false);
  for (const auto& r : rms) {
    const double largest = *std::max_element(r.begin(), r.end());
    for (std::size_t k = 0; k < r.size(); ++k) {
      norms[k].push_back(r[k]);
      if (r[k] <= kRoundoffFloor * largest) zero[k] = true;
    }
  }
  std::vector<MagnitudeEstimate> out;
  for (std::size_t k = first; k < L.size(); ++k) {
    MagnitudeEstimate e;
    e.alpha = L.unrank(k);
    e.predicted = predicted_exponent(e.alpha);
    const auto& nv = norms[k - first];
    e.degenerate = zero[k - first];
    if (!e.degenerate) {
      double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
      const double m = static_cast<double>(taus.size());
      for (std::size_t i = 0; i < taus.size(); ++i) {
        const double lx = std::log(taus[i]);
        const double ly = std::log(nv[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
      }
      e.measured = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    out.push_back(e);
  }
  return out;
}

MagnitudeEstimate magnitude_exponent(const MultiIndex& alpha, const ManufacturedField& field,
                                     const std::vector<double>& taus, int iterations, int working_order)
{
  if (alpha.dim() != field.dim) throw std::invalid_argument("magnitude: dimension mismatch");
  if (alpha.order() < 2 || alpha.order() > working_order) {
    throw std::invalid_argument("magnitude: need 2 <= |alpha| <= working order");
  }
  for (const auto& e : magnitude_table(field, taus, iterations, working_order)) {
    if (e.alpha == alpha) return e;
  }
  throw std::logic_error("magnitude: alpha missing from table");
}

NsfReport nsf_check(const ManufacturedField& field, double tau, int iterations, int working_order)
{
  IterationState s = iterate(field, tau, iterations, working_order);
  const MomentLayout& L = *s.layout;
  NsfReport r;
  for (std::size_t n = 0; n < s.nodes; ++n) {
    const Vec3 x = field.x(n);
    const MacroState m = field.macro(x);
    const auto coeffs = s.at_node(n);
    const StressHeat sh = stress_heat(coeffs, m, L);
    const NsfLimits lim = nsf_limits(m, field.gradients(x), tau, field.dim);
    for (int i = 0; i < field.dim; ++i) {
      for (int j = 0; j < field.dim; ++j) {
        r.max_sigma_deviation = std::max(r.max_sigma_deviation, std::abs(sh.sigma[i][j] - lim.sigma[i][j]));
        r.max_sigma = std::max(r.max_sigma, std::abs(lim.sigma[i][j]));
      }
      r.max_q_deviation = std::max(r.max_q_deviation, std::abs(sh.q[i] - lim.q[i]));
      r.max_q = std::max(r.max_q, std::abs(lim.q[i]));
    }
  }
  return r;
}

double first_iteration_closed_form(const MultiIndex& alpha, const ManufacturedField& field, const Vec3& x,
                                   double tau)
{
  const int D = field.dim;
  if (alpha.dim() != D || !alpha.is_valid()) throw std::invalid_argument("closed form: bad alpha");
  const MacroState m = field.macro(x);
  const GradientData g = field.gradients(x);
  // du[i][j] = d u_i / d x_j, zero along axes the field does not depend on.
  auto du = [&](int i, int j) { return j < field.spatial_dims ? g.u[j][i] : 0.0; };
  auto dtheta = [&](int j) { return j < field.spatial_dims ? g.theta[j] : 0.0; };
  const double rt = m.rho * m.theta;
  const int n = alpha.order();
  if (n == 0) return m.rho;
  if (n == 1 || n >= 4) return 0.0;
  std::vector<int> axes;
  for (int d = 0; d < D; ++d) {
    for (int c = 0; c < alpha[d]; ++c) axes.push_back(d);
  }
  if (n == 2) {
    const int i = axes[0];
    const int j = axes[1];
    if (i != j) return -tau * rt * (du(i, j) + du(j, i));
    double div = 0.0;
    for (int d = 0; d < D; ++d) div += du(d, d);
    // dtheta/dt from the Euler equations cancels the advection of theta.
    return -tau * rt * (du(j, j) - div / D);
  }
  // |alpha| = 3: 2e_i + e_j (possibly i = j), or e_i + e_j + e_k.
  for (int d = 0; d < D; ++d) {
    if (alpha[d] == 3) return -0.5 * tau * rt * dtheta(d);
    if (alpha[d] == 2) {
      for (int j = 0; j < D; ++j) {
        if (alpha[j] == 1) return -0.5 * tau * rt * dtheta(j);
      }
    }
  }
  return 0.0;
}

}  // namespace regmom
