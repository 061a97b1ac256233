#include "regmom/dvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace regmom {

VelocityGrid::VelocityGrid(int n, double vmax) : points(n), v_max(vmax)
{
  if (n < 3) throw std::invalid_argument("velocity grid needs at least 3 points");
  if (!(vmax > 0.0)) throw std::invalid_argument("velocity bound must be positive");
}

double VelocityGrid::required_vmax(std::span<const MacroState> states, double sigmas)
{
  double v = 0.0;
  for (const auto& m : states) v = std::max(v, std::abs(m.u[0]) + sigmas * std::sqrt(m.theta));
  return std::ceil(v);
}

DvmMoments dvm_cell_moments(std::span<const double> g, std::span<const double> h, const VelocityGrid& grid,
                            int dim)
{
  const double dv = grid.spacing();
  double m0 = 0.0, m1 = 0.0, m2 = 0.0, he = 0.0;
  for (int k = 0; k < grid.points; ++k) {
    const double v = grid.at(k);
    m0 += g[k];
    m1 += v * g[k];
    m2 += v * v * g[k];
    he += h[k];
  }
  DvmMoments r;
  r.rho = m0 * dv;
  r.momentum = m1 * dv;
  r.energy = 0.5 * m2 * dv + he * dv;
  if (!(r.rho > 0.0)) return r;
  r.u = r.momentum / r.rho;
  r.theta = (2.0 * r.energy - r.momentum * r.momentum / r.rho) / (dim * r.rho);
  double c2 = 0.0, c3 = 0.0, ch = 0.0;
  for (int k = 0; k < grid.points; ++k) {
    const double c = grid.at(k) - r.u;
    c2 += c * c * g[k];
    c3 += c * c * c * g[k];
    ch += c * h[k];
  }
  r.sigma11 = c2 * dv - r.rho * r.theta;
  r.q1 = 0.5 * c3 * dv + ch * dv;
  return r;
}

std::vector<DvmMoments> dvm_moments(const ReducedState& s)
{
  std::vector<DvmMoments> out;
  out.reserve(s.cells());
  for (std::size_t i = 0; i < s.cells(); ++i) out.push_back(dvm_cell_moments(s.g_cell(i), s.h_cell(i), s.grid, s.dim));
  return out;
}

namespace {

// exp(-(v_k-u)^2/(2 theta)) on a uniform grid: consecutive ratios form a
// geometric sequence, so walk outward from the peak by multiplication.
void sample_maxwellian(double amp, double u, double theta, const VelocityGrid& grid, int dim,
                       std::span<double> g, std::span<double> h)
{
  const double norm = amp / std::sqrt(2.0 * std::numbers::pi * theta);
  const double transverse = 0.5 * (dim - 1) * theta;
  const double dv = grid.spacing();
  const int n = grid.points;
  const int peak = std::clamp(static_cast<int>(std::lround((u + grid.v_max) / dv)), 0, n - 1);
  const double c0 = grid.at(peak) - u;
  const double b = std::exp(-dv * dv / theta);
  g[peak] = norm * std::exp(-0.5 * c0 * c0 / theta);
  double r = std::exp(-(2.0 * c0 * dv + dv * dv) / (2.0 * theta));
  for (int k = peak + 1; k < n; ++k) {
    g[k] = g[k - 1] * r;
    r *= b;
  }
  r = std::exp((2.0 * c0 * dv - dv * dv) / (2.0 * theta));
  for (int k = peak - 1; k >= 0; --k) {
    g[k] = g[k + 1] * r;
    r *= b;
  }
  for (int k = 0; k < n; ++k) {
    if (g[k] < 1e-300) g[k] = 0.0;
    h[k] = transverse * g[k];
  }
}

}  // namespace

void discrete_maxwellian(double rho, double momentum, double energy, const VelocityGrid& grid, int dim,
                         std::span<double> g, std::span<double> h)
{
  if (!(rho > 0.0)) throw std::domain_error("discrete Maxwellian: non-positive density");
  const double u_target = momentum / rho;
  const double theta_target = (2.0 * energy - momentum * momentum / rho) / (dim * rho);
  if (!(theta_target > 0.0)) throw std::domain_error("discrete Maxwellian: non-positive temperature");

  // Newton on the Gaussian parameters (u, theta) so that the grid sums of
  // momentum and energy per unit mass match; the amplitude is fixed last.
  const double dv = grid.spacing();
  const double e_target = energy / rho;
  double u = u_target;
  double theta = theta_target;
  const double hfac = 0.5 * (dim - 1);
  double s0 = 0.0;
  bool converged = false;
  for (int it = 0; it < 30; ++it) {
    sample_maxwellian(1.0, u, theta, grid, dim, g, h);
    double s1 = 0.0, s2 = 0.0;
    s0 = 0.0;
    for (int k = 0; k < grid.points; ++k) {
      const double v = grid.at(k);
      s0 += g[k];
      s1 += v * g[k];
      s2 += v * v * g[k];
    }
    if (!(s0 > 0.0)) throw std::domain_error("discrete Maxwellian: state not resolved by velocity grid");
    // Residuals of mean velocity and specific energy; h = hfac theta g.
    const double mean = s1 / s0;
    const double e_mean = 0.5 * s2 / s0 + hfac * theta;
    const double r1 = mean - u_target;
    const double r2 = e_mean - e_target;
    if (std::abs(r1) <= 2e-15 * (1.0 + std::abs(u_target)) && std::abs(r2) <= 2e-15 * e_target) {
      converged = true;
      break;
    }
    double d0u = 0.0, d1u = 0.0, d2u = 0.0;
    double d0t = 0.0, d1t = 0.0, d2t = 0.0;
    for (int k = 0; k < grid.points; ++k) {
      const double v = grid.at(k);
      const double c = v - u;
      const double gu = g[k] * c / theta;
      const double gt = g[k] * (0.5 * c * c / (theta * theta) - 0.5 / theta);
      d0u += gu;
      d1u += v * gu;
      d2u += v * v * gu;
      d0t += gt;
      d1t += v * gt;
      d2t += v * v * gt;
    }
    const double dht = hfac * (s0 + theta * d0t);
    const double dhu = hfac * theta * d0u;
    const double j11 = (d1u - mean * d0u) / s0;
    const double j12 = (d1t - mean * d0t) / s0;
    const double j21 = (0.5 * d2u + dhu - e_mean * d0u) / s0;
    const double j22 = (0.5 * d2t + dht - e_mean * d0t) / s0;
    const double det = j11 * j22 - j12 * j21;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
      throw std::domain_error("discrete Maxwellian: singular moment correction");
    }
    u -= (j22 * r1 - j12 * r2) / det;
    theta -= (j11 * r2 - j21 * r1) / det;
    if (!(theta > 0.0)) throw std::domain_error("discrete Maxwellian: correction lost positivity");
  }
  if (!converged) {
    sample_maxwellian(1.0, u, theta, grid, dim, g, h);
    s0 = 0.0;
    for (int k = 0; k < grid.points; ++k) s0 += g[k];
  }
  const double scale = rho / (s0 * dv);
  for (int k = 0; k < grid.points; ++k) {
    g[k] *= scale;
    h[k] *= scale;
  }
}

DvmConfig dvm_config_for(const Scenario& s, int cells, VelocityGrid grid)
{
  DvmConfig c;
  c.cells = cells;
  c.x_lo = s.x_lo;
  c.x_hi = s.x_hi;
  c.dim = s.dim;
  c.grid = grid;
  c.kn = s.kn;
  c.tau_model = s.tau_model;
  c.t_stop = s.t_stop;
  c.steady = s.steady;
  return c;
}

ReducedState dvm_initial_state(const DvmConfig& cfg, const std::function<MacroState(double)>& init,
                               MacroState ghost_left, MacroState ghost_right)
{
  ReducedState s;
  s.grid = cfg.grid;
  s.dim = cfg.dim;
  s.dx = cfg.dx();
  const auto n = static_cast<std::size_t>(cfg.cells);
  const auto nv = static_cast<std::size_t>(cfg.grid.points);
  s.x.resize(n);
  s.g.assign(n * nv, 0.0);
  s.h.assign(n * nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = cfg.x_lo + (static_cast<double>(i) + 0.5) * s.dx;
    MacroState m = init(s.x[i]);
    Conserved c = conserved_from_macro(m, cfg.dim);
    discrete_maxwellian(c.rho, c.momentum[0], c.energy, s.grid, s.dim, s.g_cell(i), s.h_cell(i));
  }
  s.ghost_left = ghost_left;
  s.ghost_right = ghost_right;
  return s;
}

ReducedState dvm_initial_state(const DvmConfig& cfg, const Scenario& sc)
{
  return dvm_initial_state(cfg, [&](double x) { return sc.initial(x); }, sc.left, sc.right);
}

DvmSolver::DvmSolver(DvmConfig cfg) : cfg_(std::move(cfg))
{
  if (cfg_.cells < 2) throw std::invalid_argument("DVM needs at least two cells");
  if (!(cfg_.cfl > 0.0 && cfg_.cfl <= 1.0)) throw std::invalid_argument("CFL number must lie in (0, 1]");
}

double DvmSolver::stable_dt() const { return cfg_.cfl * cfg_.dx() / cfg_.grid.v_max; }

void DvmSolver::step(ReducedState& s, double dt, double tau_override)
{
  const std::size_t n = s.cells();
  const auto nv = static_cast<std::size_t>(s.grid.points);
  const bool periodic = cfg_.boundary == Boundary::Periodic;
  std::vector<double> gl(nv), hl(nv), gr(nv), hr(nv);
  if (!periodic) {
    Conserved cl = conserved_from_macro(s.ghost_left, s.dim);
    Conserved cr = conserved_from_macro(s.ghost_right, s.dim);
    discrete_maxwellian(cl.rho, cl.momentum[0], cl.energy, s.grid, s.dim, gl, hl);
    discrete_maxwellian(cr.rho, cr.momentum[0], cr.energy, s.grid, s.dim, gr, hr);
  }

  auto g_of = [&](std::size_t e) -> std::span<const double> {
    if (e == 0) return periodic ? s.g_cell(n - 1) : std::span<const double>(gl);
    if (e == n + 1) return periodic ? s.g_cell(0) : std::span<const double>(gr);
    return std::as_const(s).g_cell(e - 1);
  };
  auto h_of = [&](std::size_t e) -> std::span<const double> {
    if (e == 0) return periodic ? s.h_cell(n - 1) : std::span<const double>(hl);
    if (e == n + 1) return periodic ? s.h_cell(0) : std::span<const double>(hr);
    return std::as_const(s).h_cell(e - 1);
  };

  // Upwind interface fluxes.
  fg_.resize((n + 1) * nv);
  fh_.resize((n + 1) * nv);
  auto& fg = fg_;
  auto& fh = fh_;
  for (std::size_t i = 0; i <= n; ++i) {
    auto gL = g_of(i), gR = g_of(i + 1), hL = h_of(i), hR = h_of(i + 1);
    for (std::size_t k = 0; k < nv; ++k) {
      const double v = s.grid.at(static_cast<int>(k));
      fg[i * nv + k] = v > 0.0 ? v * gL[k] : v * gR[k];
      fh[i * nv + k] = v > 0.0 ? v * hL[k] : v * hR[k];
    }
  }
  const double ratio = dt / s.dx;
  for (std::size_t c = 0; c < n; ++c) {
    auto g = s.g_cell(c);
    auto h = s.h_cell(c);
    for (std::size_t k = 0; k < nv; ++k) {
      g[k] -= ratio * (fg[(c + 1) * nv + k] - fg[c * nv + k]);
      h[k] -= ratio * (fh[(c + 1) * nv + k] - fh[c * nv + k]);
    }
  }

  if (std::isinf(tau_override)) {
    s.t += dt;
    return;
  }
  std::vector<double> mg(nv), mh(nv);
  for (std::size_t c = 0; c < n; ++c) {
    auto g = s.g_cell(c);
    auto h = s.h_cell(c);
    DvmMoments mom = dvm_cell_moments(g, h, s.grid, s.dim);
    if (!(mom.rho > 0.0) || !(mom.theta > 0.0)) {
      throw BreakdownError(c, s.t + dt, "DVM moments not realizable");
    }
    try {
      discrete_maxwellian(mom.rho, mom.momentum, mom.energy, s.grid, s.dim, mg, mh);
    } catch (const std::domain_error& e) {
      throw BreakdownError(c, s.t + dt, e.what());
    }
    const double t = tau_override > 0.0 ? tau_override : tau(cfg_.tau_model, cfg_.kn, mom.rho, mom.theta);
    const double decay = std::exp(-dt / t);
    for (std::size_t k = 0; k < nv; ++k) {
      g[k] = mg[k] + (g[k] - mg[k]) * decay;
      h[k] = mh[k] + (h[k] - mh[k]) * decay;
    }
  }
  s.t += dt;
}

void DvmSolver::run(ReducedState& s)
{
  const double t_end = s.t + cfg_.t_stop;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  double next_check = s.t + cfg_.check_interval;
  std::vector<double> last;
  for (const auto& m : dvm_moments(s)) last.push_back(m.rho);
  while (s.t < t_end - eps) {
    double dt = std::min(stable_dt(), t_end - s.t);
    if (cfg_.steady) dt = std::min(dt, std::max(next_check - s.t, 1e-300));
    step(s, dt);
    if (cfg_.steady && s.t >= next_check - eps) {
      double res = 0.0;
      auto mom = dvm_moments(s);
      for (std::size_t i = 0; i < s.cells(); ++i) {
        res += std::abs(mom[i].rho - last[i]) * s.dx;
        last[i] = mom[i].rho;
      }
      next_check += cfg_.check_interval;
      if (res / cfg_.check_interval < cfg_.steady_tol) break;
    }
  }
}

Profile profile_of(const ReducedState& s)
{
  Profile p;
  auto mom = dvm_moments(s);
  for (std::size_t i = 0; i < s.cells(); ++i) {
    p.x.push_back(s.x[i]);
    p.rho.push_back(mom[i].rho);
    p.u1.push_back(mom[i].u);
    p.theta.push_back(mom[i].theta);
    p.sigma11.push_back(mom[i].sigma11);
    p.q1.push_back(mom[i].q1);
  }
  return p;
}

}  // namespace regmom
