#include "regmom/hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace regmom {

double he_eval(int n, double x)
{
  if (n < 0) return 0.0;
  double prev = 1.0;  // He_0
  if (n == 0) return prev;
  double cur = x;  // He_1
  for (int k = 1; k < n; ++k) {
    double next = x * cur - k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double he_derivative(int n, double x)
{
  if (n <= 0) return 0.0;
  return n * he_eval(n - 1, x);
}

HermiteTable::HermiteTable(int max_degree, double x) : x_(x)
{
  if (max_degree < 0) throw std::invalid_argument("negative max degree");
  values_.resize(static_cast<std::size_t>(max_degree) + 1);
  values_[0] = 1.0;
  if (max_degree >= 1) values_[1] = x;
  for (int k = 1; k < max_degree; ++k) {
    values_[k + 1] = x * values_[k] - k * values_[k - 1];
  }
}

double basis_weight(double theta, const MultiIndex& alpha, std::span<const double> v)
{
  if (!(theta > 0.0)) throw std::invalid_argument("basis_weight: theta must be positive");
  if (static_cast<int>(v.size()) != alpha.dim()) {
    throw std::invalid_argument("basis_weight: velocity dimension mismatch");
  }
  double r = 1.0;
  for (int d = 0; d < alpha.dim(); ++d) {
    if (alpha[d] < 0) return 0.0;
    r *= std::pow(theta, -0.5 * (alpha[d] + 1)) * he_eval(alpha[d], v[d]) *
         std::exp(-0.5 * v[d] * v[d]) / std::sqrt(2.0 * std::numbers::pi);
  }
  return r;
}

namespace {

// Orthonormal Hermite functions psi_n = He_n / sqrt(n!) and psi_{n-1}; the
// scaling keeps values bounded for the degrees used by the quadrature.
struct NormalizedPair
{
  double psi_n;
  double psi_nm1;
};

NormalizedPair normalized(int n, double x)
{
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

// Root of psi_n inside (lo, hi), where psi_n changes sign exactly once.
double bracketed_root(int n, double lo, double hi)
{
  double flo = normalized(n, lo).psi_n;
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    auto [p, pm1] = normalized(n, x);
    if (p == 0.0) return x;
    if ((p < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = p;
    } else {
      hi = x;
    }
    double dp = std::sqrt(static_cast<double>(n)) * pm1;
    double step = dp != 0.0 ? p / dp : 0.0;
    double cand = x - step;
    if (dp == 0.0 || !(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
    if (std::abs(cand - x) <= 1e-15 * std::max(1.0, std::abs(x))) return cand;
    x = cand;
  }
  return x;
}

}  // namespace

std::vector<double> he_roots(int n)
{
  if (n < 1) return {};
  std::vector<double> roots{0.0};
  for (int k = 2; k <= n; ++k) {
    // Roots of He_k interlace those of He_{k-1}; all lie in |x| < sqrt(4k+2).
    double bound = std::sqrt(4.0 * k + 2.0) + 1.0;
    std::vector<double> next;
    next.reserve(static_cast<std::size_t>(k));
    double lo = -bound;
    for (std::size_t i = 0; i <= roots.size(); ++i) {
      double hi = i < roots.size() ? roots[i] : bound;
      next.push_back(bracketed_root(k, lo, hi));
      lo = hi;
    }
    roots = std::move(next);
  }
  return roots;
}

double he_max_root(int n)
{
  if (n < 1) throw std::invalid_argument("he_max_root: degree must be >= 1");
  return he_roots(n).back();
}

QuadratureRule gauss_hermite(int n)
{
  if (n < 1 || n > 150) throw std::invalid_argument("gauss_hermite: node count out of range");
  QuadratureRule rule;
  rule.nodes = he_roots(n);
  rule.weights.reserve(rule.nodes.size());
  for (double x : rule.nodes) {
    double psi = normalized(n - 1, x).psi_n;
    rule.weights.push_back(1.0 / (n * psi * psi));
  }
  return rule;
}

}  // namespace regmom
