#include "regmom/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace regmom {

std::size_t Table::column(const std::string& name) const
{
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

bool Table::has_column(const std::string& name) const
{
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

void Table::add_column(std::string name, std::vector<double> values)
{
  if (!data.empty() && values.size() != rows()) throw std::invalid_argument("column length mismatch");
  columns.push_back(std::move(name));
  data.push_back(std::move(values));
}

Table profile_table(const Profile& p)
{
  Table t;
  t.add_column("x", p.x);
  t.add_column("rho", p.rho);
  t.add_column("u1", p.u1);
  t.add_column("theta", p.theta);
  t.add_column("sigma11", p.sigma11);
  t.add_column("q1", p.q1);
  return t;
}

Table state_table(const SimState& s, bool with_coeffs)
{
  Table t = profile_table(profile_of(s));
  if (with_coeffs) {
    const std::size_t n = s.layout->size();
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<double> col(s.cells());
      for (std::size_t i = 0; i < s.cells(); ++i) col[i] = s.cell(i)[k];
      t.add_column("f" + std::to_string(k), std::move(col));
    }
  }
  return t;
}

void write_csv(std::ostream& os, const Table& t)
{
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  char buf[32];
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", t.data[c][r]);
      if (c) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

void write_csv(const std::string& path, const Table& t)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_csv(os, t);
  if (!os) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t\r");
    auto e = item.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Table read_csv(std::istream& is)
{
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
  t.columns = split(line);
  if (t.columns.empty()) throw std::runtime_error("csv: empty header");
  t.data.assign(t.columns.size(), {});
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    if (cells.size() != t.columns.size()) {
      throw std::runtime_error("csv: line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                               " fields, expected " + std::to_string(t.columns.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(cells[c], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cells[c].size()) {
        throw std::runtime_error("csv: bad number '" + cells[c] + "' on line " + std::to_string(lineno));
      }
      t.data[c].push_back(v);
    }
  }
  return t;
}

Table read_csv(const std::string& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_csv(is);
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x)
{
  if (xs.empty() || xs.size() != ys.size()) throw std::invalid_argument("interpolate: bad table");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return (1.0 - w) * ys[i - 1] + w * ys[i];
}

CompareResult compare(const Table& a, const Table& b, const std::string& column)
{
  if (!a.has_column(column) || !b.has_column(column)) {
    throw std::invalid_argument("column '" + column + "' missing from one of the inputs");
  }
  const auto& ax = a.data[a.column("x")];
  const auto& bx = b.data[b.column("x")];
  const auto& ay = a.data[a.column(column)];
  const auto& by = b.data[b.column(column)];
  if (ax.empty() || bx.empty()) throw std::invalid_argument("compare: empty table");
  const bool same_grid = ax == bx;
  CompareResult r;
  double ref = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    double bv;
    if (same_grid) {
      bv = by[i];
    } else {
      if (ax[i] < bx.front() || ax[i] > bx.back()) continue;
      bv = interpolate(bx, by, ax[i]);
    }
    double w;
    if (ax.size() == 1) {
      w = 1.0;
    } else if (i == 0) {
      w = ax[1] - ax[0];
    } else if (i + 1 == ax.size()) {
      w = ax[i] - ax[i - 1];
    } else {
      w = 0.5 * (ax[i + 1] - ax[i - 1]);
    }
    const double e = std::abs(ay[i] - bv);
    r.l1 += e * w;
    r.linf = std::max(r.linf, e);
    ref += std::abs(bv) * w;
    ++r.points;
  }
  if (r.points == 0) throw std::invalid_argument("compare: grids do not overlap");
  r.rel_l1 = ref > 0.0 ? r.l1 / ref : r.l1;
  return r;
}

}  // namespace regmom
