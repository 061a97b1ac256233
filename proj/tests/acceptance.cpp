// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
//   acceptance [--refs DIR] [--only 1,4,...]

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "regmom/csv_io.hpp"
#include "regmom/dvm.hpp"
#include "regmom/fv_solver.hpp"
#include "regmom/hermite.hpp"
#include "regmom/maxwell_iter.hpp"
#include "regmom/reference.hpp"
#include "regmom/scenarios.hpp"

using namespace regmom;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

std::string refs_dir = "refs";

std::string fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimState run_fv(const Scenario& sc, int order, int cells, ClosureVariant closure = ClosureVariant::Linear)
{
  auto cfg = config_for(sc, order, cells);
  cfg.closure = closure;
  FvSolver solver(cfg);
  auto s = initial_state(cfg, sc);
  solver.run(s);
  return s;
}

Table reference(const Scenario& sc, int cells, VelocityGrid grid = VelocityGrid(kReferenceVelocities, kReferenceVmax))
{
  return reference_profile(sc, cells, grid, refs_dir).profile;
}

// ---------------------------------------------------------------------------

Outcome hermite_identities()
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto q = gauss_hermite();
  double ortho = 0.0;
  double fact_m = 1.0;
  for (int m = 0; m <= 12; ++m) {
    if (m > 0) fact_m *= m;
    for (int n = 0; n <= 12; ++n) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * he_eval(m, q.nodes[i]) * he_eval(n, q.nodes[i]);
      // relative to the norm sqrt(m! n!)
      double fact_n = 1.0;
      for (int k = 2; k <= n; ++k) fact_n *= k;
      ortho = std::max(ortho, std::abs(s - (m == n ? fact_m : 0.0)) / std::sqrt(fact_m * fact_n));
    }
  }
  // He_{n+1} = x He_n - n He_{n-1};  He_n' = n He_{n-1}, checked against the
  // explicit sum He_n = n! sum_k (-1)^k x^{n-2k} / (k! (n-2k)! 2^k)
  double recursion = 0.0, differential = 0.0;
  auto explicit_he = [](int n, double x) {
    double s = 0.0;
    for (int k = 0; 2 * k <= n; ++k) {
      double c = std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - 2.0 * k + 1.0) * std::pow(2.0, k));
      s += (k % 2 ? -c : c) * std::pow(x, n - 2 * k);
    }
    return s;
  };
  for (double x = -3.0; x <= 3.0; x += 0.25) {
    for (int n = 1; n <= 12; ++n) {
      const double scale = std::max(1.0, std::abs(he_eval(n + 1, x)));
      recursion = std::max(recursion, std::abs(he_eval(n + 1, x) - (x * he_eval(n, x) - n * he_eval(n - 1, x))) / scale);
      recursion = std::max(recursion, std::abs(he_eval(n, x) - explicit_he(n, x)) / std::max(1.0, std::abs(explicit_he(n, x))));
      differential = std::max(differential, std::abs(he_derivative(n, x) - n * he_eval(n - 1, x)) /
                                                std::max(1.0, std::abs(n * he_eval(n - 1, x))));
    }
  }
  const double wall = seconds_since(t0);
  return {ortho <= 1e-10 && recursion <= 1e-12 && differential <= 1e-12 && wall < 1.0,
          fmt("orthogonality rel %.2e (<= 1e-10), recursion %.2e, derivative %.2e (<= 1e-12), %.2f s (< 1 s)", ortho,
              recursion, differential, wall)};
}

Outcome first_iteration()
{
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const char* preset : {"generic", "generic-1d", "linear-theta", "linear-u"}) {
    for (int dim = 1; dim <= 3; ++dim) {
      const auto field = field_preset(preset, dim);
      const double tau = 1e-3;
      const auto s = iterate(field, tau, 1, 5);
      double err = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < s.layout->size(); ++k) {
        const auto& a = s.layout->unrank(k);
        for (std::size_t i = 0; i < s.nodes; ++i) {
          const double want = first_iteration_closed_form(a, field, field.x(i), tau);
          err = std::max(err, std::abs(s.field(k)[i] - want));
          if (a.order() >= 2) scale = std::max(scale, std::abs(want));
        }
      }
      if (scale > 0.0) worst = std::max(worst, err / scale);
    }
  }
  const double wall = seconds_since(t0);
  return {worst <= 1e-8 && wall < 5.0, fmt("max rel error %.2e (<= 1e-8), %.2f s (< 5 s)", worst, wall)};
}

Outcome magnitude_law()
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto field = field_preset("generic", 3);
  const auto taus = tau_sweep(1e-3, 0.5, 4);
  const int iterations = 3;
  const auto table = magnitude_table(field, taus, iterations, 10, 4);
  double worst = 0.0;
  int checked = 0, misses = 0, bad_zero = 0;
  for (const auto& e : table) {
    const int order = e.alpha.order();
    if (order >= 1 + 3 * iterations) {
      if (!e.degenerate) ++bad_zero;
      continue;
    }
    if (order > 8) continue;
    ++checked;
    if (e.degenerate) {
      ++misses;
      continue;
    }
    const double dev = std::abs(e.measured - e.predicted);
    worst = std::max(worst, dev);
    if (dev > 0.15) ++misses;
  }
  // exact zeros above 3n, one iterate count at a time
  for (int n = 1; n <= 2; ++n) {
    const auto s = iterate(field, 1e-3, n, 3 * n + 2);
    for (std::size_t k = 0; k < s.layout->size(); ++k) {
      if (s.layout->order_of(k) < 1 + 3 * n) continue;
      for (double v : s.field(k)) bad_zero += v != 0.0;
    }
  }
  const double wall = seconds_since(t0);
  return {misses == 0 && bad_zero == 0 && wall < 30.0,
          fmt("%d indices 2 <= |a| <= 8, worst |measured - predicted| %.3f (<= 0.15), %d misses, %d nonzero above 3n, "
              "%.1f s (< 30 s)",
              checked, worst, misses, bad_zero, wall)};
}

// Pointwise sigma_11 - sigma_NS and q_1 - q_NS of a periodic run with unit
// wavenumber, the NSF values evaluated from the computed macroscopic fields.
std::pair<std::vector<double>, std::vector<double>> nsf_deviation(double kn, int cells)
{
  SolverConfig cfg;
  cfg.order = 3;
  cfg.dim = 3;
  cfg.cells = cells;
  cfg.x_lo = 0.0;
  cfg.x_hi = 2 * std::numbers::pi;
  cfg.kn = kn;
  cfg.boundary = Boundary::Periodic;
  cfg.t_stop = 0.2;  // many relaxation times, so the initial layer is gone
  FvSolver solver(cfg);
  auto s = initial_state(
      cfg, [](double x) { return MacroState{1.0 + 0.2 * std::sin(x), {0.1 * std::cos(x), 0.0, 0.0}, 1.0 + 0.2 * std::cos(x + 0.5)}; },
      {}, {});
  solver.run(s);
  const auto p = profile_of(s);
  const std::size_t n = p.x.size();
  auto ddx = [&](const std::vector<double>& v, std::size_t i) {
    auto at = [&](long off) { return v[(i + n + static_cast<std::size_t>(off + static_cast<long>(n))) % n]; };
    return (-at(2) + 8 * at(1) - 8 * at(-1) + at(-2)) / (12 * s.dx);
  };
  std::vector<double> ds(n), dq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = kn / p.rho[i];
    ds[i] = p.sigma11[i] + 4.0 / 3.0 * t * p.rho[i] * p.theta[i] * ddx(p.u1, i);
    dq[i] = p.q1[i] + 2.5 * t * p.rho[i] * p.theta[i] * ddx(p.theta, i);
  }
  return {ds, dq};
}

// The scheme's first-order error in sigma and q is O(tau dx), so at the
// smallest Kn it hides the O(tau^2) model deviation unless dx << tau. The
// deviation is extrapolated pointwise from N and 2N cells (first order).
Outcome nsf_limit()
{
  const auto t0 = std::chrono::steady_clock::now();
  const int cells = 2000;
  std::vector<std::array<double, 4>> devs;  // extrapolated sigma, q; raw sigma, q at 2N
  for (double kn = 1e-2; kn >= 1.25e-3 * 0.999; kn *= 0.5) {
    const auto coarse = nsf_deviation(kn, cells), fine = nsf_deviation(kn, 2 * cells);
    std::array<double, 4> d{};
    for (int i = 0; i < cells; ++i) {
      const double fs = 0.5 * (fine.first[2 * i] + fine.first[2 * i + 1]);
      const double fq = 0.5 * (fine.second[2 * i] + fine.second[2 * i + 1]);
      d[0] = std::max(d[0], std::abs(2 * fs - coarse.first[i]));
      d[1] = std::max(d[1], std::abs(2 * fq - coarse.second[i]));
      d[2] = std::max(d[2], std::abs(fs));
      d[3] = std::max(d[3], std::abs(fq));
    }
    devs.push_back(d);
  }
  double worst = 1e300;
  std::string ratios, raw;
  for (std::size_t i = 1; i < devs.size(); ++i) {
    const double rs = devs[i - 1][0] / devs[i][0], rq = devs[i - 1][1] / devs[i][1];
    worst = std::min({worst, rs, rq});
    ratios += fmt(" %.2f/%.2f", rs, rq);
    raw += fmt(" %.2f/%.2f", devs[i - 1][2] / devs[i][2], devs[i - 1][3] / devs[i][3]);
  }
  const double wall = seconds_since(t0);
  return {worst >= 3.5 && wall < 120.0,
          fmt("sigma/q deviation ratios per Kn halving (dx-extrapolated):%s, min %.2f (>= 3.5); raw at %d cells:%s; "
              "%.1f s (< 120 s)",
              ratios.c_str(), worst, 2 * cells, raw.c_str(), wall)};
}

Outcome shock_tube_kn002()
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto sc = shock_tube(0.02);
  const Table ref = reference(sc, kReferenceCells);
  const auto s = run_fv(sc, 3, 200);
  const auto r = compare(profile_table(profile_of(s)), ref, "rho");
  const double wall = seconds_since(t0);
  return {r.rel_l1 <= 0.02 && wall < 120.0,
          fmt("relative L1 density error %.5f (<= 0.02), Linf %.3f, %.1f s incl. reference (< 120 s)", r.rel_l1, r.linf,
              wall)};
}

// At 400 cells the LLF diffusion, which grows with the He_{M+1} wavespeed,
// outweighs the gain from M >= 9, so the sweep runs at 800 cells; the
// 400-cell errors are reported alongside.
Outcome shock_tube_kn05()
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto sc = shock_tube(0.5);
  const Table ref = reference(sc, kReferenceCells);
  const int cells = 800;
  const std::vector<int> orders{4, 6, 9, 12};
  std::vector<double> err;
  std::string errs, coarse;
  std::map<int, Table> linear;
  for (int m : orders) {
    linear[m] = profile_table(profile_of(run_fv(sc, m, cells)));
    err.push_back(compare(linear[m], ref, "rho").l1);
    errs += fmt(" M%d=%.4f", m, err.back());
    coarse += fmt(" M%d=%.4f", m, compare(profile_table(profile_of(run_fv(sc, m, 400))), ref, "rho").l1);
  }
  int violations = 0;
  bool within = true;
  for (std::size_t i = 1; i < err.size(); ++i) {
    if (err[i] >= err[i - 1]) {
      ++violations;
      within = within && err[i] < 1.1 * err[i - 1];
    }
  }
  auto gap = [&](int m) {
    return compare(linear[m], profile_table(profile_of(run_fv(sc, m, cells, ClosureVariant::Nonlinear))), "rho").l1;
  };
  const double g4 = gap(4), g9 = gap(9);
  const double wall = seconds_since(t0);
  return {violations <= 1 && within && g9 < g4 && wall < 1200.0,
          fmt("L1 vs DVM at %d cells:%s (%d non-monotone); at 400 cells:%s; linear/nonlinear gap M4=%.2e M9=%.2e "
              "(M9 < M4), %.1f s (< 1200 s)",
              cells, errs.c_str(), violations, coarse.c_str(), g4, g9, wall)};
}

// Normalized density shifted so that it crosses 0.5 at x = 0.
std::pair<std::vector<double>, std::vector<double>> aligned(const std::vector<double>& x, const std::vector<double>& rho)
{
  const auto n = normalize_density(rho);
  double x0 = x.front();
  for (std::size_t i = 1; i < n.size(); ++i) {
    if ((n[i - 1] - 0.5) * (n[i] - 0.5) <= 0.0 && n[i] != n[i - 1]) {
      x0 = x[i - 1] + (0.5 - n[i - 1]) * (x[i] - x[i - 1]) / (n[i] - n[i - 1]);
      break;
    }
  }
  std::vector<double> xs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xs[i] = x[i] - x0;
  return {xs, n};
}

Outcome shock_structure_robustness()
{
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string parts;
  Profile at205;
  for (double mach : {2.05, 3.8, 6.5, 9.0}) {
    const auto sc = shock_structure(mach);
    SimState s;
    try {
      s = run_fv(sc, 3, static_cast<int>(std::lround((sc.x_hi - sc.x_lo) / kShockStructureDx)));
    } catch (const BreakdownError& e) {
      ok = false;
      parts += fmt(" M0=%.2f breakdown;", mach);
      continue;
    }
    const auto p = profile_of(s);
    bool finite = true;
    for (double v : p.rho) finite = finite && std::isfinite(v);
    const auto n = normalize_density(p.rho);
    const double over = std::max(*std::max_element(n.begin(), n.end()) - 1.0, -*std::min_element(n.begin(), n.end()));
    ok = ok && finite && over <= 0.02;
    parts += fmt(" M0=%.2f overshoot %.4f residual %.1e;", mach, over, s.diag.residual);
    if (mach == 2.05) at205 = p;
  }
  double linf = INFINITY, raw = INFINITY;
  if (!at205.x.empty()) {
    // the first-order scheme smears the profile by O(dx); compare the
    // pointwise extrapolation 2 n(dx/2) - n(dx) with the converged DVM profile
    const auto sc = shock_structure(2.05);
    const int cells = static_cast<int>(std::lround((sc.x_hi - sc.x_lo) / kShockStructureDx));
    const auto fine = profile_of(run_fv(sc, 3, 2 * cells));
    // steady DVM runs are long; 120 velocities up to 10 cover |u| + 6 sqrt(theta) at this Mach number
    const Table ref = reference(sc, 2 * cells, VelocityGrid(120, 10.0));
    const auto [xa, na] = aligned(at205.x, at205.rho);
    const auto [xf, nf] = aligned(fine.x, fine.rho);
    const auto [xb, nb] = aligned(ref.data[ref.column("x")], ref.data[ref.column("rho")]);
    linf = raw = 0.0;
    for (std::size_t i = 0; i < xa.size(); ++i) {
      if (xa[i] < std::max(xb.front(), xf.front()) || xa[i] > std::min(xb.back(), xf.back())) continue;
      const double r = interpolate(xb, nb, xa[i]);
      raw = std::max(raw, std::abs(na[i] - r));
      linf = std::max(linf, std::abs(2 * interpolate(xf, nf, xa[i]) - na[i] - r));
    }
  }
  const double wall = seconds_since(t0);
  ok = ok && linf <= 0.05 && wall < 1800.0;
  return {ok, fmt("%s M0=2.05 aligned normalized Linf vs DVM: extrapolated %.4f (<= 0.05), raw dx=%.2f %.4f; %.1f s "
                  "(< 1800 s)",
                  parts.c_str(), linf, kShockStructureDx, raw, wall)};
}

Outcome conservation()
{
  double periodic = 0.0, bounded = 0.0;
  for (auto closure : {ClosureVariant::Linear, ClosureVariant::Nonlinear}) {
    SolverConfig cfg;
    cfg.order = 5;
    cfg.cells = 128;
    cfg.x_lo = 0.0;
    cfg.x_hi = 1.0;
    cfg.kn = 0.05;
    cfg.closure = closure;
    cfg.boundary = Boundary::Periodic;
    FvSolver solver(cfg);
    auto s = initial_state(
        cfg,
        [](double x) {
          const double a = 2 * std::numbers::pi * x;
          return MacroState{1.0 + 0.5 * std::sin(a), {0.3 * std::cos(a), 0.1, 0.0}, 1.0 + 0.4 * std::cos(2 * a)};
        },
        {}, {});
    for (int i = 0; i < 200; ++i) {
      const auto before = conserved_totals(s);
      solver.step(s);
      const auto after = conserved_totals(s);
      for (int k = 0; k < 3; ++k) {
        periodic = std::max(periodic, std::abs(after[k] - before[k]) / std::max(std::abs(before[k]), before[0]));
      }
    }
  }
  for (const Scenario& base : {shock_tube(0.02), shock_structure(3.8)}) {
    Scenario sc = base;
    auto cfg = config_for(sc, 4, 200);
    if (sc.name == "shock-tube") {
      cfg.x_lo = -0.3;
      cfg.x_hi = 0.3;
    } else {
      cfg.x_lo = -3.0;
      cfg.x_hi = 3.0;
    }
    FvSolver solver(cfg);
    auto s = initial_state(cfg, sc);
    for (int i = 0; i < 300; ++i) {
      const auto before = conserved_totals(s);
      const double dt = solver.stable_dt(s);
      solver.step(s, dt);
      const auto after = conserved_totals(s);
      for (int k = 0; k < 3; ++k) {
        const double expected = before[k] + dt * (s.diag.flux_left[k] - s.diag.flux_right[k]);
        bounded = std::max(bounded, std::abs(after[k] - expected) / std::max(std::abs(before[k]), before[0]));
      }
    }
  }
  return {periodic <= 1e-12 && bounded <= 1e-10,
          fmt("periodic drift per step %.2e (<= 1e-12), boundary-flux balance %.2e (<= 1e-10)", periodic, bounded)};
}

Outcome determinism()
{
  auto fv_csv = [] {
    const auto s = run_fv(shock_tube(0.1), 5, 150, ClosureVariant::Nonlinear);
    std::ostringstream os;
    write_csv(os, state_table(s, true));
    return os.str();
  };
  auto dvm_csv = [] {
    Scenario sc = shock_tube(0.1);
    sc.t_stop = 0.05;
    auto cfg = dvm_config_for(sc, 200, VelocityGrid(60, 10.0));
    DvmSolver solver(cfg);
    auto s = dvm_initial_state(cfg, sc);
    solver.run(s);
    std::ostringstream os;
    write_csv(os, profile_table(profile_of(s)));
    return os.str();
  };
  auto mag_csv = [](int jobs) {
    const auto t = magnitude_table(field_preset("generic", 2), tau_sweep(1e-3, 0.5, 3), 2, 6, jobs);
    std::ostringstream os;
    for (const auto& e : t) os << e.alpha.str() << ',' << fmt("%.17g", e.measured) << ',' << e.degenerate << '\n';
    return os.str();
  };
  const bool fv = fv_csv() == fv_csv();
  const bool dvm = dvm_csv() == dvm_csv();
  const bool mag = mag_csv(1) == mag_csv(1) && mag_csv(1) == mag_csv(3);
  return {fv && dvm && mag, fmt("moment CSV identical: %s, DVM CSV identical: %s, magnitude CSV identical: %s",
                                fv ? "yes" : "no", dvm ? "yes" : "no", mag ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv)
{
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--refs") && i + 1 < argc) {
      refs_dir = argv[++i];
    } else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: acceptance [--refs DIR] [--only N,N,...]\n");
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Hermite identities", hermite_identities},
      {"first-iteration closed forms", first_iteration},
      {"magnitude law", magnitude_law},
      {"NSF limit", nsf_limit},
      {"shock tube Kn=0.02", shock_tube_kn002},
      {"shock tube Kn=0.5", shock_tube_kn05},
      {"shock structure robustness", shock_structure_robustness},
      {"conservation", conservation},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %d (%s): %s  %s\n", id, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
