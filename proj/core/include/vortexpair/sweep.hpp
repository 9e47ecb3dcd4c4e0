// This file is part of vortexpair.
// SPDX-License-Identifier: Apache-2.0

#ifndef VORTEXPAIR_SWEEP_HPP
#define VORTEXPAIR_SWEEP_HPP

#include <string>
#include <vector>

#include "vortexpair/config.hpp"

namespace vortexpair::harness {

inline constexpr const char* kArtifactVersion = "vortexpair 1.0.0";

struct SweepPoint {
  std::vector<double> inputs;
  std::vector<double> outputs;
  double quad_error = 0.0;
  double wall_ms = 0.0;
  std::vector<std::string> warnings;
};

/// Content-addressed sweep output; records are ordered by grid index
/// regardless of execution order.
struct SweepResult {
  std::string artifact_version;
  std::string preset;
  std::string config_hash;
  std::string mode;
  std::string config_text; // canonical
  std::vector<std::string> input_names;
  std::vector<std::string> output_names;
  std::vector<SweepPoint> points;
  bool served_from_cache = false; // not serialized
};

/// Evaluate all grid points of the config's sweep with a bounded worker
/// pool. Identical configs are served from the content-addressed cache
/// unless `bypass_cache`; a corrupted cache entry is invalidated and
/// recomputed.
SweepResult run_sweep(const RunConfig& cfg, bool bypass_cache = false);

/// Figure reproductions: fig2a | fig2b | fig2c | fig3 | pairprob.
/// Overrides are applied on top of the figure's canonical config.
SweepResult run_figure(const std::string& name, const RunConfig* overrides = nullptr,
                       bool bypass_cache = false);

/// Bare (uncached, unthreaded) evaluation of one grid point; exposed for
/// the determinism tests.
SweepPoint evaluate_point(const RunConfig& cfg, std::size_t index);

/// Total number of grid points of a config's sweep.
std::size_t sweep_size(const RunConfig& cfg);

/// Cache directory resolution (VORTEXPAIR_CACHE_DIR or ./.vortexpair_cache).
std::string cache_directory();

} // namespace vortexpair::harness

#endif
