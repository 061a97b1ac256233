#pragma once

#include <string>

#include "regmom/csv_io.hpp"
#include "regmom/dvm.hpp"
#include "regmom/scenarios.hpp"

namespace regmom {

/// File name of a cached DVM profile, keyed by scenario, Kn (and Mach for
/// shock structures) and resolution, e.g.
/// "shock-tube_kn0.02_x2000_v200.csv".
std::string reference_name(const Scenario& s, int cells, const VelocityGrid& grid);

struct ReferenceResult
{
  Table profile;
  std::string path;
  bool cached = false;  // loaded from disk rather than computed
};

/// Loads `dir/reference_name(...)` when present, otherwise runs the DVM
/// solver and writes it. An empty `dir` disables the cache.
ReferenceResult reference_profile(const Scenario& s, int cells, const VelocityGrid& grid, const std::string& dir,
                                  bool force = false);

}  // namespace regmom
