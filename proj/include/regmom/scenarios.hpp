#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "regmom/moment_state.hpp"

namespace regmom {

struct TauModel
{
  enum class Kind { KnOverRho, Vhs };
  Kind kind = Kind::KnOverRho;
  double omega = 0.72;

  static TauModel kn_over_rho() { return {Kind::KnOverRho, 0.72}; }
  static TauModel vhs(double omega = 0.72) { return {Kind::Vhs, omega}; }
};

/// Relaxation time. KnOverRho: Kn/rho.
/// Vhs: sqrt(pi/2) 15 Kn / ((5-2w)(7-2w)) theta^{w-1} / rho.
double tau(const TauModel& model, double kn, double rho, double theta);

/// Piecewise-constant Riemann data: `left` for x < interface, `right` after.
struct Scenario
{
  std::string name;
  MacroState left;
  MacroState right;
  double interface_x = 0.0;
  double x_lo = 0.0;
  double x_hi = 1.0;
  double t_stop = 0.0;
  bool steady = false;  // run to steady state instead of a fixed stop time
  double kn = 1.0;
  TauModel tau_model;
  int dim = 3;
  double mach = 0.0;  // shock Mach number, 0 when not applicable

  MacroState initial(double x) const { return x < interface_x ? left : right; }
};

Scenario shock_tube(double kn = 0.02);

/// Stationary shock from the Rankine-Hugoniot states of a monatomic gas,
/// upstream on the left.
Scenario shock_structure(double mach, double kn = 1.0);

inline constexpr double kShockStructureDx = 0.1;
inline constexpr double kShockStructureHalfWidth = 30.0;

/// Built-in scenario by name: "shock-tube" or "shock-structure".
Scenario builtin_scenario(const std::string& name, double mach = 2.05);

/// (rho - rho_up) / (rho_down - rho_up) using the far-field (end) values.
std::vector<double> normalize_density(const std::vector<double>& rho);

/// Euler fluxes (mass, momentum, energy) of an equilibrium state in 1D flow
/// with a D-dimensional velocity space.
std::array<double, 3> euler_flux(const MacroState& m, int dim);

/// Key-value text: one `key = value` per line, `#` comments.
using KeyValues = std::map<std::string, std::string>;
KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::string& path);

/// Builds a scenario from key-values. Recognized keys: scenario, mach, kn,
/// tau, omega, dim, x_lo, x_hi, t_stop, interface_x, and rho/u/theta/p with
/// _left/_right suffixes for custom Riemann data.
Scenario scenario_from_config(const KeyValues& kv);

}  // namespace regmom
