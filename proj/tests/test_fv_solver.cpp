#include <stdexcept>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "regmom/fv_solver.hpp"
#include "velocity_quadrature.hpp"

using namespace regmom;
using regmom::testing::velocity_integral;

namespace {

SolverConfig periodic_config(int order, int dim, int cells, double kn)
{
  SolverConfig c;
  c.order = order;
  c.dim = dim;
  c.cells = cells;
  c.x_lo = 0.0;
  c.x_hi = 1.0;
  c.kn = kn;
  c.boundary = Boundary::Periodic;
  c.t_stop = 0.05;
  return c;
}

MacroState wave(double x)
{
  const double s = std::sin(2 * std::numbers::pi * x), c = std::cos(2 * std::numbers::pi * x);
  return {1.0 + 0.3 * s, {0.2 * c, 0.1 * s, 0.0}, 1.0 + 0.2 * c};
}

double max_rel_change(const std::array<double, 3>& a, const std::array<double, 3>& b)
{
  double r = 0.0;
  for (int k = 0; k < 3; ++k) r = std::max(r, std::abs(a[k] - b[k]) / std::max(1.0, std::abs(b[k])));
  return r;
}

}  // namespace

TEST_CASE("flux of a resting Maxwellian")
{
  const MomentLayout L(3, 3);
  const MacroState m{2.0, {0, 0, 0}, 1.5};
  const auto c = maxwellian_coeffs(m, L);
  std::vector<double> out(L.size());
  flux_coefficients(c.span(), m, L, {}, out);
  CHECK(out[0] == 0.0);
  CHECK(out[static_cast<std::size_t>(L.axis_power(0, 1))] == doctest::Approx(m.rho * m.theta));
}

TEST_CASE("conserved fluxes agree with velocity quadrature")
{
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> dist(-0.05, 0.05);
  for (int D = 1; D <= 3; ++D) {
    const MomentLayout L(4, D);
    const MacroState m{1.3, {0.4, -0.2, 0.1}, 0.9};
    std::vector<double> c(L.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = dist(rng);
    c[0] = m.rho;
    std::vector<double> top(L.grade_end(4) - L.grade_begin(4));
    for (auto& t : top) t = dist(rng);
    std::vector<double> F(L.size());
    flux_coefficients(c, m, L, top, F);
    const auto fc = conserved_of(F, m, L);
    CHECK(fc.rho == doctest::Approx(velocity_integral(c, m, L, [](const auto& xi) { return xi[0]; })));
    CHECK(fc.momentum[0] ==
          doctest::Approx(velocity_integral(c, m, L, [](const auto& xi) { return xi[0] * xi[0]; })));
    CHECK(fc.energy == doctest::Approx(velocity_integral(c, m, L, [&](const auto& xi) {
            double e = 0.0;
            for (int d = 0; d < D; ++d) e += xi[d] * xi[d];
            return 0.5 * xi[0] * e;
          })));
  }
}

TEST_CASE("uniform states are stationary")
{
  for (auto closure : {ClosureVariant::Linear, ClosureVariant::Nonlinear}) {
    SolverConfig cfg;
    cfg.order = 5;
    cfg.cells = 40;
    cfg.closure = closure;
    const MacroState m{1.7, {0.3, 0, 0}, 1.2};
    FvSolver solver(cfg);
    auto s = initial_state(cfg, [&](double) { return m; }, m, m);
    const auto before = s.coeffs;
    for (int i = 0; i < 50; ++i) solver.step(s);
    for (std::size_t i = 0; i < s.cells(); ++i) {
      CHECK(s.macro[i].rho == doctest::Approx(m.rho).epsilon(1e-14));
      CHECK(s.macro[i].u[0] == doctest::Approx(m.u[0]).epsilon(1e-14));
      CHECK(s.macro[i].theta == doctest::Approx(m.theta).epsilon(1e-14));
    }
    for (std::size_t k = 0; k < s.coeffs.size(); ++k) CHECK(std::abs(s.coeffs[k] - before[k]) < 1e-13);
  }
}

TEST_CASE("periodic runs conserve mass, momentum and energy")
{
  for (auto closure : {ClosureVariant::Linear, ClosureVariant::Nonlinear}) {
    for (auto diffusion : {DiffusionScheme::Implicit, DiffusionScheme::Explicit}) {
      auto cfg = periodic_config(6, 3, 64, 0.05);
      cfg.closure = closure;
      cfg.diffusion = diffusion;
      FvSolver solver(cfg);
      auto s = initial_state(cfg, wave, {}, {});
      for (int i = 0; i < 40; ++i) {
        const auto before = conserved_totals(s);
        solver.step(s);
        CHECK(max_rel_change(conserved_totals(s), before) <= 1e-12);
      }
    }
  }
}

TEST_CASE("shock tube conserves up to boundary fluxes")
{
  SolverConfig cfg = config_for(shock_tube(0.02), 4, 100);
  cfg.x_lo = -0.2;  // bring the boundaries into the waves
  cfg.x_hi = 0.2;
  FvSolver solver(cfg);
  auto s = initial_state(cfg, shock_tube(0.02));
  for (int i = 0; i < 200; ++i) {
    const auto before = conserved_totals(s);
    const double dt = solver.stable_dt(s);
    solver.step(s, dt);
    const auto after = conserved_totals(s);
    for (int k = 0; k < 3; ++k) {
      const double expected = before[k] + dt * (s.diag.flux_left[k] - s.diag.flux_right[k]);
      CHECK(std::abs(after[k] - expected) <= 1e-10 * std::abs(before[k]));
    }
  }
}

TEST_CASE("stable dt honours the wavespeed and diffusion bounds")
{
  auto cfg = config_for(shock_tube(0.02), 3, 200);
  FvSolver solver(cfg);
  auto s = initial_state(cfg, shock_tube(0.02));
  CHECK(solver.speed_factor() == doctest::Approx(std::sqrt(3.0 + std::sqrt(6.0))));
  CHECK(solver.stable_dt(s) == doctest::Approx(cfg.cfl * s.dx / solver.speed_factor()));
  cfg.diffusion = DiffusionScheme::Explicit;
  FvSolver explicit_solver(cfg);
  const double tau_max = 0.02;  // rho = 1 side
  const double parabolic = 0.5 * s.dx * s.dx / (4 * tau_max * 1.0);
  CHECK(explicit_solver.stable_dt(s) <= cfg.cfl * parabolic * (1 + 1e-12));
}

TEST_CASE("first-order grid convergence on a smooth periodic problem")
{
  auto run = [](int cells) {
    auto cfg = periodic_config(4, 3, cells, 0.05);
    cfg.t_stop = 0.1;
    FvSolver solver(cfg);
    auto s = initial_state(cfg, wave, {}, {});
    solver.run(s);
    return profile_of(s).rho;
  };
  // L1 distance between successive refinements, fine cells averaged in pairs
  std::vector<double> diffs;
  auto coarse = run(50);
  for (int cells = 100; cells <= 400; cells *= 2) {
    const auto fine = run(cells);
    double e = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) e += std::abs(coarse[i] - 0.5 * (fine[2 * i] + fine[2 * i + 1]));
    diffs.push_back(e / static_cast<double>(coarse.size()));
    coarse = fine;
  }
  for (std::size_t i = 1; i < diffs.size(); ++i) CHECK(std::log2(diffs[i - 1] / diffs[i]) >= 0.8);
}

TEST_CASE("invalid configurations")
{
  SolverConfig cfg;
  cfg.order = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.order = 3;
  cfg.cfl = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.cfl = 0.5;
  cfg.cells = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("breakdown is reported with its location")
{
  // a violent expansion with almost no collisions leaves the Grad-type
  // hyperbolicity region
  Scenario sc = shock_tube(1e3);
  sc.left = {1.0, {-6.0, 0, 0}, 1.0};
  sc.right = {1.0, {6.0, 0, 0}, 1.0};
  auto cfg = config_for(sc, 3, 100);
  FvSolver solver(cfg);
  auto s = initial_state(cfg, sc);
  bool broke = false;
  try {
    solver.run(s);
  } catch (const BreakdownError& e) {
    broke = true;
    CHECK(e.cell() < 100);
    CHECK(e.time() >= 0.0);
  }
  if (!broke) {
    for (const auto& m : s.macro) CHECK(m.is_physical());
  }
}
