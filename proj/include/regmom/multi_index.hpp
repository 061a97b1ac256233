#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace regmom {

inline constexpr int kMaxDim = 3;

/// Multi-index alpha in N^D, D <= 3. Unused trailing components are zero.
class MultiIndex
{
 public:
  MultiIndex() = default;
  explicit MultiIndex(int dim);
  MultiIndex(std::initializer_list<int> components);

  int dim() const { return dim_; }
  int order() const;
  int operator[](int d) const { return c_[d]; }
  int& operator[](int d) { return c_[d]; }

  /// Componentwise shift along `axis` by `delta`. Empty when a component
  /// would become negative (the corresponding Hermite factor is zero).
  std::optional<MultiIndex> shift(int axis, int delta) const;

  /// Unchecked shift; may produce negative components.
  MultiIndex raw_shift(int axis, int delta) const;

  bool is_valid() const;

  std::string str() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::array<int, kMaxDim> c_{0, 0, 0};
  int dim_ = 1;
};

std::size_t binomial(int n, int k);

/// All alpha with |alpha| <= order, graded; inside a grade the order is
/// lexicographic descending in (alpha_1, ..., alpha_D), so e.g. for D=2,
/// grade 2 is (2,0), (1,1), (0,2).
std::vector<MultiIndex> enumerate(int order, int dim);

inline constexpr int kAbsent = -1;

/// Bijective ordinal numbering of {alpha : |alpha| <= M} in D dimensions,
/// with precomputed neighbor tables for the shifts used by the moment
/// equations.
class MomentLayout
{
 public:
  MomentLayout(int max_order, int dim);

  int max_order() const { return max_order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return indices_.size(); }

  const MultiIndex& unrank(std::size_t k) const;

  /// Throws std::out_of_range when |alpha| > M or alpha is invalid.
  std::size_t ordinal(const MultiIndex& alpha) const;

  /// kAbsent when alpha has a negative component or |alpha| > M.
  int find(const MultiIndex& alpha) const;

  /// Ordinal of alpha + delta * e_axis, or kAbsent.
  int neighbor(std::size_t k, int axis, int delta) const
  {
    return shift_table_[(k * dim_ + axis) * 4 + slot(delta)];
  }

  /// First ordinal of grade n; grade n occupies [grade_begin(n), grade_begin(n+1)).
  std::size_t grade_begin(int n) const { return grade_offsets_[n]; }
  std::size_t grade_end(int n) const { return grade_offsets_[n + 1]; }

  int order_of(std::size_t k) const { return orders_[k]; }

  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// Ordinal of the unit vector e_axis and of 2 e_axis, 3 e_axis...
  int axis_power(int axis, int power) const;

 private:
  static int slot(int delta)
  {
    // delta in {-2,-1,+1,+2}
    return delta < 0 ? delta + 2 : delta + 1;
  }
  std::size_t dense_key(const MultiIndex& alpha) const;

  int max_order_;
  int dim_;
  std::vector<MultiIndex> indices_;
  std::vector<int> orders_;
  std::vector<std::size_t> grade_offsets_;
  std::vector<int> dense_;  // (M+1)^D lookup -> ordinal or kAbsent
  std::vector<int> shift_table_;
};

}  // namespace regmom
