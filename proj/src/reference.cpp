#include "regmom/reference.hpp"

#include <cstdio>
#include <filesystem>

namespace regmom {

namespace {

std::string compact(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string reference_name(const Scenario& s, int cells, const VelocityGrid& grid)
{
  std::string name = s.name + "_kn" + compact(s.kn);
  if (s.mach > 0.0) name += "_mach" + compact(s.mach);
  if (s.dim != 3) name += "_d" + std::to_string(s.dim);
  if (s.tau_model.kind == TauModel::Kind::Vhs) name += "_vhs" + compact(s.tau_model.omega);
  name += "_x" + std::to_string(cells) + "_v" + std::to_string(grid.points);
  if (grid.v_max != kReferenceVmax) name += "_vmax" + compact(grid.v_max);
  return name + ".csv";
}

ReferenceResult reference_profile(const Scenario& s, int cells, const VelocityGrid& grid, const std::string& dir,
                                  bool force)
{
  ReferenceResult r;
  if (!dir.empty()) {
    r.path = (std::filesystem::path(dir) / reference_name(s, cells, grid)).string();
    if (!force && std::filesystem::exists(r.path)) {
      r.profile = read_csv(r.path);
      r.cached = true;
      return r;
    }
  }
  DvmConfig cfg = dvm_config_for(s, cells, grid);
  ReducedState st = dvm_initial_state(cfg, s);
  DvmSolver solver(cfg);
  solver.run(st);
  r.profile = profile_table(profile_of(st));
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    write_csv(r.path, r.profile);
  }
  return r;
}

}  // namespace regmom
