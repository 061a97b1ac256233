#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "regmom/fv_solver.hpp"

namespace regmom {

/// Column-oriented numeric table with a header row.
struct Table
{
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[column][row]

  std::size_t rows() const { return data.empty() ? 0 : data.front().size(); }
  /// Index of a column; throws std::invalid_argument when missing.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  void add_column(std::string name, std::vector<double> values);
};

/// x, rho, u1, theta, sigma11, q1.
Table profile_table(const Profile& p);

/// profile_table plus one column f<k> per coefficient ordinal.
Table state_table(const SimState& s, bool with_coeffs);

/// Comma separated, header row, 17 significant digits.
void write_csv(std::ostream& os, const Table& t);
void write_csv(const std::string& path, const Table& t);

/// Throws std::runtime_error on malformed input.
Table read_csv(std::istream& is);
Table read_csv(const std::string& path);

struct CompareResult
{
  double l1 = 0.0;      // sum |a - b| dx
  double linf = 0.0;
  double rel_l1 = 0.0;  // sum |a - b| / sum |b|
  std::size_t points = 0;
};

/// Compares `column` of a against b (the reference). When the x columns
/// differ, b is interpolated linearly onto a's nodes inside b's range.
CompareResult compare(const Table& a, const Table& b, const std::string& column);

/// Linear interpolation of (xs, ys) at x; clamps outside the range.
double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x);

}  // namespace regmom
