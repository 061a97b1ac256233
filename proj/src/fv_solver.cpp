#include "regmom/fv_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regmom/closure.hpp"
#include "regmom/hermite.hpp"

namespace regmom {

void SolverConfig::validate() const
{
  if (order < 3) throw std::invalid_argument("moment order M must be >= 3");
  if (dim < 1 || dim > 3) throw std::invalid_argument("velocity dimension must be 1, 2 or 3");
  if (cells < 2) throw std::invalid_argument("need at least two cells");
  if (!(x_hi > x_lo)) throw std::invalid_argument("empty domain");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("CFL number must lie in (0, 1]");
  if (!(kn > 0.0)) throw std::invalid_argument("Knudsen number must be positive");
  if (!steady && !(t_stop >= 0.0)) throw std::invalid_argument("negative stop time");
}

SolverConfig config_for(const Scenario& s, int order, int cells)
{
  SolverConfig c;
  c.order = order;
  c.dim = s.dim;
  c.cells = cells;
  c.x_lo = s.x_lo;
  c.x_hi = s.x_hi;
  c.kn = s.kn;
  c.tau_model = s.tau_model;
  c.t_stop = s.t_stop;
  c.steady = s.steady;
  return c;
}

BreakdownError::BreakdownError(std::size_t cell, double time, const std::string& what)
    : std::runtime_error("breakdown in cell " + std::to_string(cell) + " at t=" + std::to_string(time) +
                         ": " + what),
      cell_(cell),
      time_(time)
{
}

SimState initial_state(const SolverConfig& cfg, const std::function<MacroState(double)>& init,
                       MacroState ghost_left, MacroState ghost_right)
{
  cfg.validate();
  SimState s;
  s.layout = std::make_shared<const MomentLayout>(cfg.order, cfg.dim);
  s.dx = cfg.dx();
  const auto n = static_cast<std::size_t>(cfg.cells);
  s.x.resize(n);
  s.macro.resize(n);
  s.coeffs.assign(n * s.layout->size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = cfg.x_lo + (static_cast<double>(i) + 0.5) * s.dx;
    s.macro[i] = init(s.x[i]);
    if (!s.macro[i].is_physical()) throw std::invalid_argument("initial state not physical");
    s.cell(i)[0] = s.macro[i].rho;
  }
  s.ghost_left = ghost_left;
  s.ghost_right = ghost_right;
  return s;
}

SimState initial_state(const SolverConfig& cfg, const Scenario& sc)
{
  return initial_state(cfg, [&](double x) { return sc.initial(x); }, sc.left, sc.right);
}

void flux_coefficients(std::span<const double> coeffs, const MacroState& frame,
                       const MomentLayout& layout, std::span<const double> top,
                       std::span<double> out)
{
  const int M = layout.max_order();
  const std::size_t top_begin = layout.grade_begin(M);
  for (std::size_t a = 0; a < layout.size(); ++a) {
    const MultiIndex& alpha = layout.unrank(a);
    int lo = layout.neighbor(a, 0, -1);
    int hi = layout.neighbor(a, 0, +1);
    double f = frame.u[0] * coeffs[a];
    if (lo != kAbsent) f += frame.theta * coeffs[lo];
    if (hi != kAbsent) {
      f += (alpha[0] + 1) * coeffs[hi];
    } else if (!top.empty() && a >= top_begin) {
      f += (alpha[0] + 1) * top[a - top_begin];
    }
    out[a] = f;
  }
}

std::array<double, 3> conserved_totals(const SimState& s)
{
  std::array<double, 3> tot{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < s.cells(); ++i) {
    Conserved c = conserved_of(s.cell(i), s.macro[i], *s.layout);
    tot[0] += c.rho * s.dx;
    tot[1] += c.momentum[0] * s.dx;
    tot[2] += c.energy * s.dx;
  }
  return tot;
}

Profile profile_of(const SimState& s)
{
  Profile p;
  for (std::size_t i = 0; i < s.cells(); ++i) {
    StressHeat sh = stress_heat(s.cell(i), s.macro[i], *s.layout);
    p.x.push_back(s.x[i]);
    p.rho.push_back(s.macro[i].rho);
    p.u1.push_back(s.macro[i].u[0]);
    p.theta.push_back(s.macro[i].theta);
    p.sigma11.push_back(sh.sigma[0][0]);
    p.q1.push_back(sh.q[0]);
  }
  return p;
}

FvSolver::FvSolver(SolverConfig cfg)
    : cfg_(cfg),
      layout_(std::make_shared<const MomentLayout>(cfg.order, cfg.dim)),
      speed_factor_(0.0)
{
  cfg_.validate();
  speed_factor_ = he_max_root(cfg_.order + 1);
}

double FvSolver::tau_at(double rho, double theta) const
{
  return tau(cfg_.tau_model, cfg_.kn, rho, theta);
}

double FvSolver::stable_dt(const SimState& s) const
{
  double lambda = 0.0;
  double kappa = 0.0;
  auto visit = [&](const MacroState& m) {
    lambda = std::max(lambda, std::abs(m.u[0]) + speed_factor_ * std::sqrt(m.theta));
    kappa = std::max(kappa, (cfg_.order + 1) * tau_at(m.rho, m.theta) * m.theta);
  };
  for (const auto& m : s.macro) visit(m);
  if (cfg_.boundary == Boundary::FarField) {
    visit(s.ghost_left);
    visit(s.ghost_right);
  }
  double dt = cfg_.cfl * s.dx / lambda;
  if (cfg_.diffusion == DiffusionScheme::Explicit && kappa > 0.0) {
    dt = std::min(dt, cfg_.cfl * 0.5 * s.dx * s.dx / kappa);
  }
  return dt;
}

namespace {

// Extended-grid accessor: index 0 and n+1 are ghost cells.
struct Extended
{
  const SimState& s;
  Boundary boundary;
  std::span<const double> ghost_left;
  std::span<const double> ghost_right;

  std::size_t n() const { return s.cells(); }

  const MacroState& macro(std::size_t e) const
  {
    if (e == 0) return boundary == Boundary::Periodic ? s.macro[n() - 1] : s.ghost_left;
    if (e == n() + 1) return boundary == Boundary::Periodic ? s.macro[0] : s.ghost_right;
    return s.macro[e - 1];
  }
  std::span<const double> coeffs(std::size_t e) const
  {
    if (e == 0) return boundary == Boundary::Periodic ? s.cell(n() - 1) : ghost_left;
    if (e == n() + 1) return boundary == Boundary::Periodic ? s.cell(0) : ghost_right;
    return s.cell(e - 1);
  }
};

MacroState mean_frame(const MacroState& a, const MacroState& b)
{
  MacroState m;
  m.rho = 0.5 * (a.rho + b.rho);
  for (int d = 0; d < 3; ++d) m.u[d] = 0.5 * (a.u[d] + b.u[d]);
  m.theta = 0.5 * (a.theta + b.theta);
  return m;
}

Vec3 velocity_shift(const MacroState& from, const MacroState& to)
{
  return {to.u[0] - from.u[0], to.u[1] - from.u[1], to.u[2] - from.u[2]};
}

// Solves a (possibly cyclic) tridiagonal system with sub/diag/super bands in
// place. `corner_lo` couples row 0 to the last unknown and `corner_hi` the
// last row to unknown 0.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
                       std::vector<double>& rhs, double corner_lo, double corner_hi)
{
  const std::size_t n = diag.size();
  auto thomas = [n](std::vector<double> a, std::vector<double> b, std::vector<double> c,
                    std::vector<double>& d) {
    for (std::size_t i = 1; i < n; ++i) {
      double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
  };
  if (corner_lo == 0.0 && corner_hi == 0.0) {
    thomas(sub, diag, sup, rhs);
    return;
  }
  // Sherman-Morrison for the cyclic corners.
  const double gamma = -diag[0];
  std::vector<double> b = diag;
  b[0] -= gamma;
  b[n - 1] -= corner_hi * corner_lo / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_hi;
  thomas(sub, b, sup, rhs);
  thomas(sub, b, sup, u);
  const double vy = rhs[0] + corner_lo / gamma * rhs[n - 1];
  const double vz = u[0] + corner_lo / gamma * u[n - 1];
  const double factor = vy / (1.0 + vz);
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= factor * u[i];
}

}  // namespace

void FvSolver::step(SimState& s, double dt)
{
  if (s.layout->max_order() != cfg_.order || s.layout->dim() != cfg_.dim) {
    throw std::invalid_argument("state layout does not match solver configuration");
  }
  if (s.cells() != static_cast<std::size_t>(cfg_.cells)) {
    throw std::invalid_argument("state cell count does not match solver configuration");
  }
  old_coeffs_ = s.coeffs;
  old_macro_ = s.macro;
  transport(s, dt);
  regularize(s, dt);
  relax(s, dt);
  s.t += dt;
  s.diag.dt = dt;
  s.diag.steps += 1;
}

void FvSolver::transport(SimState& s, double dt)
{
  const MomentLayout& L = *layout_;
  const std::size_t n = s.cells();
  const std::size_t nc = L.size();
  const std::vector<double> ghost_l = maxwellian_coeffs(s.ghost_left, L).values;
  const std::vector<double> ghost_r = maxwellian_coeffs(s.ghost_right, L).values;
  Extended ext{s, cfg_.boundary, ghost_l, ghost_r};

  std::vector<double> fluxes((n + 1) * nc);
  std::vector<MacroState> frames(n + 1);
  std::vector<double> fl(nc), fr(nc), Fl(nc), Fr(nc), scratch(2 * nc);
  double lambda_max = 0.0;

  auto speed = [&](const MacroState& m) { return std::abs(m.u[0]) + speed_factor_ * std::sqrt(m.theta); };

  for (std::size_t i = 0; i <= n; ++i) {
    const MacroState& ml = ext.macro(i);
    const MacroState& mr = ext.macro(i + 1);
    MacroState frame = mean_frame(ml, mr);
    auto cl = ext.coeffs(i);
    auto cr = ext.coeffs(i + 1);
    std::copy(cl.begin(), cl.end(), fl.begin());
    std::copy(cr.begin(), cr.end(), fr.begin());
    project_in_place(fl, velocity_shift(ml, frame), frame.theta - ml.theta, L, scratch);
    project_in_place(fr, velocity_shift(mr, frame), frame.theta - mr.theta, L, scratch);
    flux_coefficients(fl, frame, L, {}, Fl);
    flux_coefficients(fr, frame, L, {}, Fr);
    const double lambda = std::max(speed(ml), speed(mr));
    lambda_max = std::max(lambda_max, lambda);
    double* out = fluxes.data() + i * nc;
    for (std::size_t a = 0; a < nc; ++a) out[a] = 0.5 * (Fl[a] + Fr[a]) - 0.5 * lambda * (fr[a] - fl[a]);
    frames[i] = frame;
  }

  auto boundary_flux = [&](std::size_t i) {
    Conserved c = conserved_of({fluxes.data() + i * nc, nc}, frames[i], L);
    return std::array<double, 3>{c.rho, c.momentum[0], c.energy};
  };
  s.diag.flux_left = boundary_flux(0);
  s.diag.flux_right = boundary_flux(n);
  s.diag.max_wavespeed = lambda_max;

  const double ratio = dt / s.dx;
  for (std::size_t c = 0; c < n; ++c) {
    const MacroState& m = s.macro[c];
    std::copy(fluxes.begin() + static_cast<std::ptrdiff_t>(c * nc),
              fluxes.begin() + static_cast<std::ptrdiff_t>((c + 1) * nc), fl.begin());
    std::copy(fluxes.begin() + static_cast<std::ptrdiff_t>((c + 1) * nc),
              fluxes.begin() + static_cast<std::ptrdiff_t>((c + 2) * nc), fr.begin());
    project_in_place(fl, velocity_shift(frames[c], m), m.theta - frames[c].theta, L, scratch);
    project_in_place(fr, velocity_shift(frames[c + 1], m), m.theta - frames[c + 1].theta, L, scratch);
    auto f = s.cell(c);
    for (std::size_t a = 0; a < nc; ++a) f[a] -= ratio * (fr[a] - fl[a]);
    try {
      s.macro[c] = relocate(f, m, L, scratch);
    } catch (const std::domain_error& e) {
      throw BreakdownError(c, s.t + dt, e.what());
    }
  }
}

void FvSolver::regularize(SimState& s, double dt)
{
  const MomentLayout& L = *layout_;
  const int M = L.max_order();
  const std::size_t n = s.cells();
  const std::size_t nc = L.size();
  const std::size_t top_begin = L.grade_begin(M);
  const std::size_t top_count = L.grade_end(M) - top_begin;
  const std::vector<double> ghost_l = maxwellian_coeffs(s.ghost_left, L).values;
  const std::vector<double> ghost_r = maxwellian_coeffs(s.ghost_right, L).values;
  Extended ext{s, cfg_.boundary, ghost_l, ghost_r};
  const double dx = s.dx;

  // Interface diffusivity tau*theta (times alpha_1+1 per coefficient).
  std::vector<double> tau_theta(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    MacroState m = mean_frame(ext.macro(i), ext.macro(i + 1));
    tau_theta[i] = tau_at(m.rho, m.theta) * m.theta;
  }

  if (cfg_.closure == ClosureVariant::Nonlinear) {
    // Terms of the full closure beyond -tau theta df/dx, as explicit fluxes.
    std::vector<double> extra((n + 1) * top_count, 0.0);
    std::vector<double> avg(nc);
    GradientData g(1, nc);
    for (std::size_t i = 0; i <= n; ++i) {
      const MacroState& ml = ext.macro(i);
      const MacroState& mr = ext.macro(i + 1);
      MacroState m = mean_frame(ml, mr);
      auto cl = ext.coeffs(i);
      auto cr = ext.coeffs(i + 1);
      for (std::size_t a = 0; a < nc; ++a) {
        avg[a] = 0.5 * (cl[a] + cr[a]);
        g.coeffs[0][a] = (cr[a] - cl[a]) / dx;
      }
      g.rho[0] = (mr.rho - ml.rho) / dx;
      g.theta[0] = (mr.theta - ml.theta) / dx;
      for (int d = 0; d < 3; ++d) g.u[0][d] = (mr.u[d] - ml.u[d]) / dx;
      StressHeat sl = stress_heat(cl, ml, L);
      StressHeat sr = stress_heat(cr, mr, L);
      StressHeat sh;
      sh.p = m.rho * m.theta;
      for (int a = 0; a < 3; ++a) {
        sh.q[a] = 0.5 * (sl.q[a] + sr.q[a]);
        for (int b = 0; b < 3; ++b) sh.sigma[a][b] = 0.5 * (sl.sigma[a][b] + sr.sigma[a][b]);
      }
      const double t = tau_at(m.rho, m.theta);
      for (std::size_t k = 0; k < top_count; ++k) {
        MultiIndex beta = L.unrank(top_begin + k).raw_shift(0, +1);
        double full = closure_nonlinear(beta, m, avg, g, t, L, sh);
        double lin = closure_linear(beta, m.theta, t, g, L);
        extra[i * top_count + k] = (beta[0]) * (full - lin);
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      auto f = s.cell(c);
      for (std::size_t k = 0; k < top_count; ++k) {
        f[top_begin + k] -= dt / dx * (extra[(c + 1) * top_count + k] - extra[c * top_count + k]);
      }
    }
  }

  const bool periodic = cfg_.boundary == Boundary::Periodic;
  std::vector<double> sub(n), diag(n), sup(n), rhs(n), cur(n);
  for (std::size_t k = 0; k < top_count; ++k) {
    const std::size_t a = top_begin + k;
    const double weight = L.unrank(a)[0] + 1;
    const double ghost_lo = periodic ? 0.0 : ghost_l[a];
    const double ghost_hi = periodic ? 0.0 : ghost_r[a];
    for (std::size_t c = 0; c < n; ++c) cur[c] = s.cell(c)[a];
    const double r = dt / (dx * dx);
    if (cfg_.diffusion == DiffusionScheme::Explicit) {
      for (std::size_t c = 0; c < n; ++c) {
        double left = c > 0 ? cur[c - 1] : (periodic ? cur[n - 1] : ghost_lo);
        double right = c + 1 < n ? cur[c + 1] : (periodic ? cur[0] : ghost_hi);
        s.cell(c)[a] = cur[c] + r * weight *
                                    (tau_theta[c + 1] * (right - cur[c]) - tau_theta[c] * (cur[c] - left));
      }
      continue;
    }
    for (std::size_t c = 0; c < n; ++c) {
      const double kl = r * weight * tau_theta[c];
      const double kr = r * weight * tau_theta[c + 1];
      sub[c] = -kl;
      sup[c] = -kr;
      diag[c] = 1.0 + kl + kr;
      rhs[c] = cur[c];
    }
    double corner_lo = 0.0;
    double corner_hi = 0.0;
    if (periodic) {
      corner_lo = sub[0];
      corner_hi = sup[n - 1];
    } else {
      rhs[0] -= sub[0] * ghost_lo;
      rhs[n - 1] -= sup[n - 1] * ghost_hi;
    }
    sub[0] = 0.0;
    sup[n - 1] = 0.0;
    solve_tridiagonal(sub, diag, sup, rhs, corner_lo, corner_hi);
    for (std::size_t c = 0; c < n; ++c) s.cell(c)[a] = rhs[c];
  }
}

void FvSolver::relax(SimState& s, double dt)
{
  // Exponential integrator for df/dt = S - f_neq/tau with the transport
  // increment S frozen over the step: the non-equilibrium part becomes
  // e^{-h} f_old + phi(h) (f_transported - f_old), phi(h) = (1-e^{-h})/h.
  const MomentLayout& L = *layout_;
  const std::size_t nc = L.size();
  const std::size_t first = L.grade_begin(2);
  const int D = L.dim();
  std::vector<double> old(nc), scratch(2 * nc);
  for (std::size_t c = 0; c < s.cells(); ++c) {
    const MacroState& m = s.macro[c];
    const MacroState& mo = old_macro_[c];
    std::copy(old_coeffs_.begin() + static_cast<std::ptrdiff_t>(c * nc),
              old_coeffs_.begin() + static_cast<std::ptrdiff_t>((c + 1) * nc), old.begin());
    project_in_place(old, velocity_shift(mo, m), m.theta - mo.theta, L, scratch);
    const double h = dt / tau_at(m.rho, m.theta);
    const double decay = std::exp(-h);
    const double phi = h > 1e-8 ? -std::expm1(-h) / h : 1.0 - 0.5 * h;
    auto f = s.cell(c);
    for (std::size_t a = first; a < nc; ++a) f[a] = decay * old[a] + phi * (f[a] - old[a]);
    double trace = 0.0;
    for (int d = 0; d < D; ++d) trace += f[static_cast<std::size_t>(L.axis_power(d, 2))];
    for (int d = 0; d < D; ++d) f[static_cast<std::size_t>(L.axis_power(d, 2))] -= trace / D;
  }
}

void FvSolver::run(SimState& s, const Observer& on_check, const Observer& on_step)
{
  const double t_end = s.t + cfg_.t_stop;
  double next_check = s.t + cfg_.check_interval;
  std::vector<double> last_rho;
  for (const auto& m : s.macro) last_rho.push_back(m.rho);
  long steps = 0;
  const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
  while (steps < cfg_.max_steps) {
    if (!cfg_.steady && s.t >= t_end - eps) break;
    if (cfg_.steady && s.t >= t_end - eps) break;
    double dt = stable_dt(s);
    if (s.t + dt > t_end) dt = t_end - s.t;
    if (cfg_.steady && s.t + dt > next_check) dt = std::max(next_check - s.t, 0.0);
    if (dt <= 0.0) dt = stable_dt(s);
    step(s, dt);
    ++steps;
    if (on_step) on_step(s);
    if (cfg_.steady && s.t >= next_check - eps) {
      double res = 0.0;
      for (std::size_t i = 0; i < s.cells(); ++i) {
        res += std::abs(s.macro[i].rho - last_rho[i]) * s.dx;
        last_rho[i] = s.macro[i].rho;
      }
      s.diag.residual = res / cfg_.check_interval;
      next_check += cfg_.check_interval;
      if (on_check) on_check(s);
      if (s.diag.residual < cfg_.steady_tol) break;
    }
  }
}

}  // namespace regmom
