#pragma once

// Sweep files are line oriented:
//
//   # comment
//   environment   = randomwalk          # or: trace
//   data          = runs/trace.csv      # trace only; relative to the config file
//   algorithms    = replan, true_online_td, dyna
//   alpha         = 0.01, 0.02, 0.05    # or: alpha_range = start, stop, step
//   lambda        = 0, 0.4, 0.8
//   lambda_replay = 1
//   gamma         = 1
//   episodes      = 10
//   trials        = 20
//   seed          = 42
//   planning_steps = 10
//   out           = results.csv
//   svg           = results.svg
//
// Lists are comma separated. Unknown or repeated keys are errors.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "replan/harness.hpp"

namespace replan {

struct SweepPlan {
  std::string environment = "randomwalk";
  std::optional<std::filesystem::path> data;
  std::vector<Algorithm> algorithms{Algorithm::Replan};
  std::vector<double> alphas{0.1};
  std::vector<double> lambdas{0.9};
  std::vector<double> lambda_replays{1.0};
  std::optional<double> gamma;  // 1 for randomwalk, 0.95 for trace when unset
  int episodes = 10;
  std::optional<int> trials;  // 20 for randomwalk, 66 for trace when unset
  std::uint64_t seed = 0;
  int planning_steps = 10;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> svg;
};

/// `base_dir` resolves relative data/out/svg paths.
SweepPlan parse_sweep_config(std::istream& in, const std::filesystem::path& base_dir = {});
SweepPlan load_sweep_config(const std::filesystem::path& path);

/// Cartesian product over the lists, canonicalised and de-duplicated, in a
/// stable order. Loads the trace dataset when the environment is `trace`.
std::vector<RunConfig> build_grid(const SweepPlan& plan);

}  // namespace replan
