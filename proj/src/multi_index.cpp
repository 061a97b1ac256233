#include "regmom/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace regmom {

namespace {

void check_dim(int dim)
{
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
}

void check_axis(int axis, int dim)
{
  if (axis < 0 || axis >= dim) {
    throw std::invalid_argument("axis " + std::to_string(axis) + " out of range");
  }
}

// Appends every index of exactly `order` whose components from `pos` on are
// still free; components are filled from the first axis with the largest
// value first.
void fill_grade(MultiIndex& cur, int pos, int remaining, std::vector<MultiIndex>& out)
{
  if (pos == cur.dim() - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    fill_grade(cur, pos + 1, remaining - v, out);
  }
  cur[pos] = 0;
}

}  // namespace

MultiIndex::MultiIndex(int dim) : dim_(dim) { check_dim(dim); }

MultiIndex::MultiIndex(std::initializer_list<int> components)
    : dim_(static_cast<int>(components.size()))
{
  check_dim(dim_);
  std::copy(components.begin(), components.end(), c_.begin());
}

int MultiIndex::order() const
{
  return std::accumulate(c_.begin(), c_.begin() + dim_, 0);
}

bool MultiIndex::is_valid() const
{
  return std::all_of(c_.begin(), c_.begin() + dim_, [](int v) { return v >= 0; });
}

MultiIndex MultiIndex::raw_shift(int axis, int delta) const
{
  check_axis(axis, dim_);
  MultiIndex r = *this;
  r.c_[axis] += delta;
  return r;
}

std::optional<MultiIndex> MultiIndex::shift(int axis, int delta) const
{
  MultiIndex r = raw_shift(axis, delta);
  if (r.c_[axis] < 0) return std::nullopt;
  return r;
}

std::string MultiIndex::str() const
{
  std::ostringstream os;
  os << '(';
  for (int d = 0; d < dim_; ++d) {
    if (d) os << ',';
    os << c_[d];
  }
  os << ')';
  return os.str();
}

std::size_t binomial(int n, int k)
{
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::vector<MultiIndex> enumerate(int order, int dim)
{
  check_dim(dim);
  if (order < 0) throw std::invalid_argument("order must be non-negative");
  std::vector<MultiIndex> out;
  out.reserve(binomial(order + dim, dim));
  MultiIndex cur(dim);
  for (int n = 0; n <= order; ++n) fill_grade(cur, 0, n, out);
  return out;
}

MomentLayout::MomentLayout(int max_order, int dim)
    : max_order_(max_order), dim_(dim), indices_(enumerate(max_order, dim))
{
  std::size_t dense_size = 1;
  for (int d = 0; d < dim_; ++d) dense_size *= static_cast<std::size_t>(max_order_ + 1);
  dense_.assign(dense_size, kAbsent);

  orders_.reserve(indices_.size());
  grade_offsets_.assign(static_cast<std::size_t>(max_order_) + 2, 0);
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    dense_[dense_key(indices_[k])] = static_cast<int>(k);
    int n = indices_[k].order();
    orders_.push_back(n);
    grade_offsets_[static_cast<std::size_t>(n) + 1] = k + 1;
  }

  shift_table_.assign(indices_.size() * static_cast<std::size_t>(dim_) * 4, kAbsent);
  constexpr std::array<int, 4> deltas{-2, -1, 1, 2};
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    for (int d = 0; d < dim_; ++d) {
      for (int delta : deltas) {
        shift_table_[(k * dim_ + d) * 4 + slot(delta)] = find(indices_[k].raw_shift(d, delta));
      }
    }
  }
}

std::size_t MomentLayout::dense_key(const MultiIndex& alpha) const
{
  std::size_t key = 0;
  for (int d = 0; d < dim_; ++d) key = key * static_cast<std::size_t>(max_order_ + 1) + alpha[d];
  return key;
}

const MultiIndex& MomentLayout::unrank(std::size_t k) const
{
  if (k >= indices_.size()) throw std::out_of_range("ordinal out of range");
  return indices_[k];
}

int MomentLayout::find(const MultiIndex& alpha) const
{
  if (alpha.dim() != dim_ || !alpha.is_valid() || alpha.order() > max_order_) return kAbsent;
  return dense_[dense_key(alpha)];
}

std::size_t MomentLayout::ordinal(const MultiIndex& alpha) const
{
  int k = find(alpha);
  if (k == kAbsent) {
    throw std::out_of_range("multi-index " + alpha.str() + " not in layout of order " +
                            std::to_string(max_order_));
  }
  return static_cast<std::size_t>(k);
}

int MomentLayout::axis_power(int axis, int power) const
{
  MultiIndex a(dim_);
  a[axis] = power;
  return find(a);
}

}  // namespace regmom
