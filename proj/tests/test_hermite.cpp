#include <stdexcept>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "regmom/hermite.hpp"

using namespace regmom;

TEST_CASE("he_eval values")
{
  CHECK(he_eval(0, 0.7) == 1.0);
  CHECK(he_eval(1, 0.7) == 0.7);
  CHECK(he_eval(3, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(he_eval(-1, 3.0) == 0.0);
  for (int n = 1; n <= 15; n += 2) CHECK(he_eval(n, 0.0) == 0.0);
  // He_4 = x^4 - 6x^2 + 3
  CHECK(he_eval(4, 1.3) == doctest::Approx(std::pow(1.3, 4) - 6 * 1.69 + 3).epsilon(1e-14));
}

TEST_CASE("he_derivative")
{
  CHECK(he_derivative(1, 5.0) == 1.0);
  CHECK(he_derivative(4, 1.5) == doctest::Approx(-4.5).epsilon(1e-14));
  const double h = 1e-4;
  for (int n = 0; n <= 10; ++n) {
    const double fd = (he_eval(n, 0.8 + h) - he_eval(n, 0.8 - h)) / (2 * h);
    CHECK(he_derivative(n, 0.8) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("HermiteTable matches he_eval")
{
  const HermiteTable t(12, -1.7);
  CHECK(t(-1) == 0.0);
  for (int n = 0; n <= 12; ++n) CHECK(t(n) == doctest::Approx(he_eval(n, -1.7)).epsilon(1e-14));
}

TEST_CASE("basis_weight")
{
  const std::vector<double> zero{0.0};
  CHECK(basis_weight(1.0, MultiIndex{0}, zero) == doctest::Approx(0.398942280401).epsilon(1e-11));
  CHECK(basis_weight(1.0, MultiIndex{0}.raw_shift(0, -1), zero) == 0.0);
  const std::vector<double> v{0.3, -1.1, 0.9};
  const MultiIndex a{2, 1, 3};
  // H_{theta,alpha}(v) scales like theta^{-(|alpha|+D)/2} at fixed v
  CHECK(basis_weight(4.0, a, v) == doctest::Approx(basis_weight(1.0, a, v) * std::pow(4.0, -(6 + 3) / 2.0)));
}

TEST_CASE("Gauss-Hermite rule is exact up to degree 2n-1")
{
  const auto q = gauss_hermite(10);
  auto moment = [&](int k) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
    return s;
  };
  double dfact = 1.0;  // (k-1)!!
  for (int k = 0; k <= 19; ++k) {
    if (k % 2 == 1) {
      CHECK(std::abs(moment(k)) < 1e-14 * dfact * k);
    } else {
      CHECK(moment(k) == doctest::Approx(dfact).epsilon(1e-12));
      dfact *= k + 1;
    }
  }
}

TEST_CASE("orthogonality and roots")
{
  const auto q = gauss_hermite();
  double fact = 1.0;
  for (int m = 0; m <= 12; ++m) {
    if (m > 0) fact *= m;
    for (int n = 0; n <= 12; ++n) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * he_eval(m, q.nodes[i]) * he_eval(n, q.nodes[i]);
      CHECK(s == doctest::Approx(m == n ? fact : 0.0).epsilon(1e-10).scale(fact));
    }
  }
  CHECK(he_max_root(4) == doctest::Approx(std::sqrt(3.0 + std::sqrt(6.0))).epsilon(1e-13));
  for (double r : he_roots(9)) CHECK(std::abs(he_eval(9, r)) < 1e-9);
}
