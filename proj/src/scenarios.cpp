#include "regmom/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace regmom {

double tau(const TauModel& model, double kn, double rho, double theta)
{
  if (!(rho > 0.0) || !(theta > 0.0)) throw std::domain_error("tau: rho and theta must be positive");
  switch (model.kind) {
    case TauModel::Kind::KnOverRho:
      return kn / rho;
    case TauModel::Kind::Vhs: {
      const double w = model.omega;
      return std::sqrt(std::numbers::pi / 2.0) * 15.0 * kn / ((5.0 - 2.0 * w) * (7.0 - 2.0 * w)) *
             std::pow(theta, w - 1.0) / rho;
    }
  }
  return kn / rho;
}

Scenario shock_tube(double kn)
{
  Scenario s;
  s.name = "shock-tube";
  s.left = {7.0, {0.0, 0.0, 0.0}, 7.0 / 7.0};
  s.right = {1.0, {0.0, 0.0, 0.0}, 1.0 / 1.0};
  s.interface_x = 0.0;
  s.x_lo = -1.0;
  s.x_hi = 1.5;
  s.t_stop = 0.3;
  s.kn = kn;
  s.tau_model = TauModel::kn_over_rho();
  s.dim = 3;
  return s;
}

Scenario shock_structure(double mach, double kn)
{
  if (!(mach > 1.0)) throw std::invalid_argument("shock_structure: Mach number must exceed 1");
  const double m2 = mach * mach;
  const double c = std::sqrt(5.0 / 3.0);
  Scenario s;
  s.name = "shock-structure";
  s.mach = mach;
  const double rho_r = 4.0 * m2 / (m2 + 3.0);
  const double p_r = (5.0 * m2 - 1.0) / 4.0;
  s.left = {1.0, {c * mach, 0.0, 0.0}, 1.0};
  s.right = {rho_r, {c * (m2 + 3.0) / (4.0 * mach), 0.0, 0.0}, p_r / rho_r};
  s.interface_x = 0.0;
  s.x_lo = -kShockStructureHalfWidth;
  s.x_hi = kShockStructureHalfWidth;
  s.t_stop = 400.0;
  s.steady = true;
  s.kn = kn;
  s.tau_model = TauModel::vhs(0.72);
  s.dim = 3;
  return s;
}

Scenario builtin_scenario(const std::string& name, double mach)
{
  if (name == "shock-tube") return shock_tube();
  if (name == "shock-structure") return shock_structure(mach);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::vector<double> normalize_density(const std::vector<double>& rho)
{
  if (rho.size() < 2) throw std::invalid_argument("normalize_density: profile too short");
  const double lo = rho.front();
  const double hi = rho.back();
  if (lo == hi) throw std::invalid_argument("normalize_density: far-field densities coincide");
  std::vector<double> out;
  out.reserve(rho.size());
  for (double r : rho) out.push_back((r - lo) / (hi - lo));
  return out;
}

std::array<double, 3> euler_flux(const MacroState& m, int dim)
{
  const double u = m.u[0];
  const double p = m.rho * m.theta;
  const double e = 0.5 * m.rho * u * u + 0.5 * dim * p;
  return {m.rho * u, m.rho * u * u + p, u * (e + p)};
}

namespace {

std::string trim(const std::string& s)
{
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double number(const KeyValues& kv, const std::string& key, double fallback)
{
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + it->second + "'");
  }
}

void override_state(const KeyValues& kv, const std::string& side, MacroState& m)
{
  m.rho = number(kv, "rho_" + side, m.rho);
  m.u[0] = number(kv, "u_" + side, m.u[0]);
  if (kv.count("theta_" + side)) m.theta = number(kv, "theta_" + side, m.theta);
  if (kv.count("p_" + side)) m.theta = number(kv, "p_" + side, 0.0) / m.rho;
}

}  // namespace

KeyValues parse_key_values(const std::string& text)
{
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_values(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

Scenario scenario_from_config(const KeyValues& kv)
{
  auto it = kv.find("scenario");
  const std::string name = it == kv.end() ? "shock-tube" : it->second;
  const double mach = number(kv, "mach", 2.05);
  Scenario s;
  if (name == "custom") {
    s = shock_tube();
    s.name = "custom";
  } else {
    s = builtin_scenario(name, mach);
  }
  s.kn = number(kv, "kn", s.kn);
  s.dim = static_cast<int>(number(kv, "dim", s.dim));
  s.x_lo = number(kv, "x_lo", s.x_lo);
  s.x_hi = number(kv, "x_hi", s.x_hi);
  s.t_stop = number(kv, "t_stop", s.t_stop);
  s.interface_x = number(kv, "interface_x", s.interface_x);
  if (auto t = kv.find("tau"); t != kv.end()) {
    if (t->second == "vhs") {
      s.tau_model = TauModel::vhs(s.tau_model.omega);
    } else if (t->second == "kn-over-rho") {
      s.tau_model = TauModel::kn_over_rho();
    } else {
      throw std::invalid_argument("config: unknown tau model '" + t->second + "'");
    }
  }
  s.tau_model.omega = number(kv, "omega", s.tau_model.omega);
  override_state(kv, "left", s.left);
  override_state(kv, "right", s.right);
  if (s.dim < 1 || s.dim > 3) throw std::invalid_argument("config: dim must be 1, 2 or 3");
  if (!s.left.is_physical() || !s.right.is_physical()) {
    throw std::invalid_argument("config: initial states must have positive density and temperature");
  }
  if (!(s.x_hi > s.x_lo)) throw std::invalid_argument("config: empty domain");
  return s;
}

}  // namespace regmom
