// regmom: run moment-method scenarios, build DVM references, compare
// profiles and tabulate Maxwellian-iteration magnitudes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "regmom/csv_io.hpp"
#include "regmom/fv_solver.hpp"
#include "regmom/maxwell_iter.hpp"
#include "regmom/reference.hpp"
#include "regmom/scenarios.hpp"

namespace fs = std::filesystem;
using namespace regmom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBreakdown = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// Setup shared by run and make-ref. Flags given on the command line are
// written over the config file's entries.
struct SetupFlags
{
  std::string config;
  std::string scenario;
  int order = 3;
  int dim = 3;
  double kn = 0.0;
  double mach = 2.05;
  int cells = 0;
  double cfl = 0.95;
  std::string closure = "linear";
  std::string diffusion = "implicit";
  std::string tau = "kn-over-rho";
  double omega = 0.72;
  double t_stop = 0.0;
};

const std::set<std::string> kSolverKeys = {"M", "cells", "cfl", "closure", "diffusion"};
const std::set<std::string> kScenarioKeys = {"scenario", "mach", "kn", "dim", "x_lo", "x_hi", "t_stop",
                                             "interface_x", "tau", "omega", "rho_left", "rho_right",
                                             "u_left", "u_right", "theta_left", "theta_right", "p_left",
                                             "p_right"};

void add_setup_options(CLI::App* app, SetupFlags& f, bool solver_options)
{
  app->add_option("scenario_name", f.scenario, "shock-tube, shock-structure or custom (same as --scenario)");
  app->add_option("--scenario", f.scenario, "Scenario name");
  app->add_option("--config", f.config, "Key-value scenario/solver file")->check(CLI::ExistingFile);
  app->add_option("--D", f.dim, "Velocity-space dimension")->check(CLI::Range(1, 3));
  app->add_option("--Kn", f.kn, "Knudsen number")->check(CLI::PositiveNumber);
  app->add_option("--mach", f.mach, "Shock Mach number")->check(CLI::Range(1.0 + 1e-12, 1e6));
  app->add_option("--cells", f.cells, "Number of cells")->check(CLI::Range(2, 100000000));
  app->add_option("--tau", f.tau, "Relaxation-time model")->check(CLI::IsMember({"kn-over-rho", "vhs"}));
  app->add_option("--omega", f.omega, "VHS viscosity exponent");
  app->add_option("--t-stop", f.t_stop, "Stop time (or time limit for steady runs)")->check(CLI::NonNegativeNumber);
  if (solver_options) {
    app->add_option("--M", f.order, "Moment order (>= 3)")->check(CLI::Range(3, 40));
    app->add_option("--cfl", f.cfl, "CFL number in (0, 1]")->check(CLI::Range(1e-6, 1.0));
    app->add_option("--closure", f.closure, "Regularization closure")->check(CLI::IsMember({"linear", "nonlinear"}));
    app->add_option("--diffusion", f.diffusion, "Top-order diffusion treatment")
        ->check(CLI::IsMember({"implicit", "explicit"}));
  }
}

std::string number_text(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

KeyValues merged_setup(const CLI::App* app, const SetupFlags& f)
{
  KeyValues kv = f.config.empty() ? KeyValues{} : read_key_values(f.config);
  for (const auto& [key, value] : kv) {
    if (!kScenarioKeys.count(key) && !kSolverKeys.count(key)) throw UsageError("unknown config key '" + key + "'");
  }
  auto given = [&](const std::string& opt) { return app->count(opt) > 0; };
  if (given("scenario_name") || given("--scenario")) kv["scenario"] = f.scenario;
  if (given("--D")) kv["dim"] = std::to_string(f.dim);
  if (given("--Kn")) kv["kn"] = number_text(f.kn);
  if (given("--mach")) kv["mach"] = number_text(f.mach);
  if (given("--cells")) kv["cells"] = std::to_string(f.cells);
  if (given("--tau")) kv["tau"] = f.tau;
  if (given("--omega")) kv["omega"] = number_text(f.omega);
  if (given("--t-stop")) kv["t_stop"] = number_text(f.t_stop);
  if (app->get_option_no_throw("--M") && given("--M")) kv["M"] = std::to_string(f.order);
  if (app->get_option_no_throw("--cfl") && given("--cfl")) kv["cfl"] = number_text(f.cfl);
  if (app->get_option_no_throw("--closure") && given("--closure")) kv["closure"] = f.closure;
  if (app->get_option_no_throw("--diffusion") && given("--diffusion")) kv["diffusion"] = f.diffusion;
  if (!kv.count("scenario")) throw UsageError("no scenario given");
  return kv;
}

double kv_number(const KeyValues& kv, const std::string& key, double fallback)
{
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) throw UsageError("key '" + key + "' expects a number");
  return v;
}

int default_cells(const Scenario& s)
{
  if (s.name == "shock-structure") return static_cast<int>(std::lround((s.x_hi - s.x_lo) / kShockStructureDx));
  return 200;
}

SolverConfig solver_config(const KeyValues& kv, const Scenario& s)
{
  SolverConfig c = config_for(s, static_cast<int>(kv_number(kv, "M", 3)),
                              static_cast<int>(kv_number(kv, "cells", default_cells(s))));
  c.cfl = kv_number(kv, "cfl", c.cfl);
  if (auto it = kv.find("closure"); it != kv.end()) {
    if (it->second == "linear") {
      c.closure = ClosureVariant::Linear;
    } else if (it->second == "nonlinear") {
      c.closure = ClosureVariant::Nonlinear;
    } else {
      throw UsageError("unknown closure '" + it->second + "'");
    }
  }
  if (auto it = kv.find("diffusion"); it != kv.end()) {
    if (it->second == "implicit") {
      c.diffusion = DiffusionScheme::Implicit;
    } else if (it->second == "explicit") {
      c.diffusion = DiffusionScheme::Explicit;
    } else {
      throw UsageError("unknown diffusion scheme '" + it->second + "'");
    }
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

Scenario scenario_of(const KeyValues& kv)
{
  try {
    return scenario_from_config(kv);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

const char* closure_name(ClosureVariant c) { return c == ClosureVariant::Linear ? "linear" : "nonlinear"; }

int cmd_run(const CLI::App* app, const SetupFlags& flags, const std::string& out_dir, double snapshot_every,
            bool with_coeffs)
{
  const KeyValues kv = merged_setup(app, flags);
  const Scenario sc = scenario_of(kv);
  const SolverConfig cfg = solver_config(kv, sc);
  fs::create_directories(out_dir);

  FvSolver solver(cfg);
  SimState s = initial_state(cfg, sc);
  std::ofstream dt_log(fs::path(out_dir) / "dt_history.csv", std::ios::binary);
  dt_log << "step,t,dt,max_wavespeed\n";
  int snapshot = 0;
  double next_snapshot = snapshot_every > 0.0 ? snapshot_every : INFINITY;
  auto on_step = [&](const SimState& st) {
    dt_log << st.diag.steps << ',' << number_text(st.t) << ',' << number_text(st.diag.dt) << ','
           << number_text(st.diag.max_wavespeed) << '\n';
    if (st.t >= next_snapshot) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%04d.csv", ++snapshot);
      write_csv((fs::path(out_dir) / name).string(), state_table(st, with_coeffs));
      next_snapshot += snapshot_every;
    }
  };
  auto on_check = [&](const SimState& st) {
    std::cerr << "t=" << st.t << " residual=" << st.diag.residual << '\n';
  };

  nlohmann::ordered_json summary;
  summary["scenario"] = sc.name;
  summary["M"] = cfg.order;
  summary["D"] = cfg.dim;
  summary["Kn"] = cfg.kn;
  if (sc.mach > 0.0) summary["mach"] = sc.mach;
  summary["cells"] = cfg.cells;
  summary["cfl"] = cfg.cfl;
  summary["closure"] = closure_name(cfg.closure);
  summary["diffusion"] = cfg.diffusion == DiffusionScheme::Implicit ? "implicit" : "explicit";
  summary["tau_model"] = sc.tau_model.kind == TauModel::Kind::Vhs ? "vhs" : "kn-over-rho";
  summary["omega"] = sc.tau_model.omega;

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    solver.run(s, cfg.steady ? FvSolver::Observer(on_check) : FvSolver::Observer{}, on_step);
    summary["breakdown"] = false;
  } catch (const BreakdownError& e) {
    summary["breakdown"] = true;
    summary["breakdown_cell"] = e.cell();
    summary["breakdown_time"] = e.time();
    std::cerr << "solver breakdown: " << e.what() << '\n';
    code = kExitBreakdown;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  summary["steps"] = s.diag.steps;
  summary["t"] = s.t;
  if (cfg.steady) summary["residual"] = s.diag.residual;
  summary["wall_seconds"] = wall;
  summary["dt_history"] = "dt_history.csv";
  summary["snapshots"] = snapshot;

  if (code == kExitOk) write_csv((fs::path(out_dir) / "profile.csv").string(), state_table(s, with_coeffs));
  std::ofstream(fs::path(out_dir) / "summary.json") << summary.dump(2) << '\n';
  std::cout << summary.dump(2) << '\n';
  return code;
}

int cmd_make_ref(const CLI::App* app, const SetupFlags& flags, int velocities, double vmax, const std::string& dir,
                 bool force)
{
  const KeyValues kv = merged_setup(app, flags);
  const Scenario sc = scenario_of(kv);
  int cells = static_cast<int>(kv_number(kv, "cells", 0));
  if (cells == 0) cells = sc.name == "shock-structure" ? 2 * default_cells(sc) : kReferenceCells;
  const auto start = std::chrono::steady_clock::now();
  ReferenceResult r;
  try {
    r = reference_profile(sc, cells, VelocityGrid(velocities, vmax), dir, force);
  } catch (const BreakdownError& e) {
    std::cerr << "DVM breakdown: " << e.what() << '\n';
    return kExitBreakdown;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << r.path << (r.cached ? " (cached)" : "") << " wall_seconds=" << wall << '\n';
  return kExitOk;
}

int cmd_compare(const std::string& a, const std::string& b, const std::string& column, bool normalize)
{
  Table ta, tb;
  try {
    ta = read_csv(a);
    tb = read_csv(b);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  if (!ta.has_column(column) || !tb.has_column(column)) {
    throw UsageError("column '" + column + "' missing from " + (ta.has_column(column) ? b : a));
  }
  if (!ta.has_column("x") || !tb.has_column("x")) throw UsageError("both files need an x column");
  if (normalize) {
    ta.data[ta.column(column)] = normalize_density(ta.data[ta.column(column)]);
    tb.data[tb.column(column)] = normalize_density(tb.data[tb.column(column)]);
  }
  CompareResult r = compare(ta, tb, column);
  std::printf("column=%s points=%zu l1=%.10g linf=%.10g rel_l1=%.10g\n", column.c_str(), r.points, r.l1, r.linf,
              r.rel_l1);
  return kExitOk;
}

int cmd_magnitude(const std::string& preset, int dim, int mmax, int iterations, double tau0, double ratio, int count,
                  int jobs, const std::string& out)
{
  ManufacturedField field;
  try {
    field = field_preset(preset, dim);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto taus = tau_sweep(tau0, ratio, count);
  const auto table = magnitude_table(field, taus, iterations, mmax, jobs);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out, std::ios::binary);
    if (!file) throw UsageError("cannot write " + out);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << "a1,a2,a3,order,predicted,measured,degenerate\n";
  for (const auto& e : table) {
    for (int d = 0; d < 3; ++d) os << (d < dim ? e.alpha[d] : 0) << ',';
    os << e.alpha.order() << ',' << e.predicted << ',' << (e.degenerate ? std::string("nan") : number_text(e.measured))
       << ',' << (e.degenerate ? 1 : 0) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Regularized moment method for the 1D Boltzmann-BGK equation"};
  app.require_subcommand(1);

  SetupFlags run_flags;
  std::string out_dir = "out";
  double snapshot_every = 0.0;
  bool with_coeffs = false;
  auto* run = app.add_subcommand("run", "Run a scenario with the moment solver");
  add_setup_options(run, run_flags, true);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--snapshot-every", snapshot_every, "Write a snapshot every T time units")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--coeffs", with_coeffs, "Add one column per expansion coefficient");

  SetupFlags ref_flags;
  int velocities = kReferenceVelocities;
  double vmax = kReferenceVmax;
  std::string refs = "refs";
  bool force = false;
  auto* make_ref = app.add_subcommand("make-ref", "Generate a cached DVM reference profile");
  add_setup_options(make_ref, ref_flags, false);
  make_ref->add_option("--nv", velocities, "Discrete velocities")->check(CLI::Range(3, 100000));
  make_ref->add_option("--vmax", vmax, "Velocity bound")->check(CLI::PositiveNumber);
  make_ref->add_option("--out,--refs", refs, "Reference directory");
  make_ref->add_flag("--force", force, "Recompute even when cached");

  std::string file_a, file_b, column = "rho";
  bool normalize = false;
  auto* cmp = app.add_subcommand("compare", "L1 / Linf difference of one column (second file is the reference)");
  cmp->add_option("a", file_a, "Profile CSV")->required();
  cmp->add_option("b", file_b, "Reference CSV")->required();
  cmp->add_option("--column", column, "Column to compare");
  cmp->add_flag("--normalize", normalize, "Map both columns to [0,1] by their end values first");

  std::string preset = "generic";
  int mag_dim = 3, mmax = kDefaultWorkingOrder, iterations = 3, count = 4, jobs = 1;
  double tau0 = 1e-3, ratio = 0.5;
  std::string mag_out;
  auto* mag = app.add_subcommand("magnitude", "Tau exponents of the Maxwellian iterates (CSV)");
  mag->add_option("--preset", preset, "Manufactured field preset");
  mag->add_option("--D", mag_dim, "Velocity-space dimension")->check(CLI::Range(1, 3));
  mag->add_option("--Mmax", mmax, "Working order")->check(CLI::Range(3, 30));
  mag->add_option("--iterations", iterations, "Maxwellian iterations")->check(CLI::Range(1, 20));
  mag->add_option("--tau0", tau0, "Largest tau")->check(CLI::PositiveNumber);
  mag->add_option("--ratio", ratio, "Geometric ratio of the sweep")->check(CLI::Range(1e-6, 0.999999));
  mag->add_option("--count", count, "Sweep length")->check(CLI::Range(2, 50));
  mag->add_option("--jobs", jobs, "Threads for the sweep")->check(CLI::Range(1, 256));
  mag->add_option("--out", mag_out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run, run_flags, out_dir, snapshot_every, with_coeffs);
    if (*make_ref) return cmd_make_ref(make_ref, ref_flags, velocities, vmax, refs, force);
    if (*cmp) return cmd_compare(file_a, file_b, column, normalize);
    if (*mag) return cmd_magnitude(preset, mag_dim, mmax, iterations, tau0, ratio, count, jobs, mag_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
