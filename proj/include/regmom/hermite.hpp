#pragma once

#include <span>
#include <vector>

#include "regmom/multi_index.hpp"

namespace regmom {

/// Probabilists' Hermite polynomial He_n(x) by three-term recursion.
/// Returns 0 for n < 0.
double he_eval(int n, double x);

/// d/dx He_n(x) = n He_{n-1}(x).
double he_derivative(int n, double x);

/// He_0(x) .. He_N(x) at a fixed point.
class HermiteTable
{
 public:
  HermiteTable(int max_degree, double x);

  int max_degree() const { return static_cast<int>(values_.size()) - 1; }
  double x() const { return x_; }
  double operator()(int n) const { return n < 0 ? 0.0 : values_[static_cast<std::size_t>(n)]; }

 private:
  double x_;
  std::vector<double> values_;
};

/// Basis function H_{theta,alpha}(v) for scaled velocity v = (xi-u)/sqrt(theta).
double basis_weight(double theta, const MultiIndex& alpha, std::span<const double> v);

/// Gauss rule for integrals of g(x) exp(-x^2/2)/sqrt(2 pi) over the real line.
/// Exact for polynomials of degree <= 2n-1.
struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

inline constexpr int kDefaultQuadratureNodes = 40;

QuadratureRule gauss_hermite(int n = kDefaultQuadratureNodes);

/// Roots of He_n in ascending order.
std::vector<double> he_roots(int n);

/// Largest root of He_n; the characteristic speed of a Grad system of
/// order n-1 in units of sqrt(theta).
double he_max_root(int n);

}  // namespace regmom
