#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "replan/envs.hpp"
#include "replan/learners.hpp"
#include "replan/numerics.hpp"

namespace replan {

struct RandomWalkEnv {};

struct TraceEnv {
  std::shared_ptr<const TraceDataset> data;
};

using Environment = std::variant<RandomWalkEnv, TraceEnv>;

struct RunConfig {
  Algorithm algorithm = Algorithm::Replan;
  Hyperparams hyperparams;
  int episodes = 10;
  int trials = 20;
  std::uint64_t seed = 0;
  Environment environment = RandomWalkEnv{};

  /// Throws UsageError on out-of-range values or a missing trace dataset.
  void validate() const;
};

/// Pins the hyperparameters an algorithm ignores so that equivalent
/// configurations share a key: td0/dyna use lambda = lambda_replay = 0,
/// true_online_td uses lambda_replay = 0, replan uses lambda_replay = 1.
RunConfig canonical(RunConfig config);

struct LearningCurve {
  std::vector<std::vector<double>> per_trial;  // [trial][episode] RMSE
  std::vector<double> mean;                    // per episode, across trials
  std::vector<double> std_error;               // per episode, across trials

  /// Mean over all trials and episodes.
  double overall_mean() const;
  /// Standard error across trials of each trial's mean RMSE (0 for one trial).
  double overall_std_error() const;

  static LearningCurve from_trials(std::vector<std::vector<double>> per_trial);
};

struct CellKey {
  Algorithm algorithm;
  double alpha;
  double lambda;
  double lambda_replay;

  static CellKey of(const RunConfig& config);
  auto operator<=>(const CellKey&) const = default;
};

struct CellResult {
  RunConfig config;
  LearningCurve curve;
  double mean_rmse = 0.0;
  double stderr_rmse = 0.0;
  std::optional<std::string> error;
};

struct ResultGrid {
  std::map<CellKey, CellResult> cells;

  /// Smallest finite mean RMSE among cells matching `filter`.
  template <typename Pred>
  const CellResult* best(Pred filter) const {
    const CellResult* out = nullptr;
    for (const auto& [key, cell] : cells) {
      if (!filter(key) || cell.error || !std::isfinite(cell.mean_rmse)) continue;
      if (out == nullptr || cell.mean_rmse < out->mean_rmse) out = &cell;
    }
    return out;
  }
};

/// Seed of trial `trial` under base seed `base`.
std::uint64_t trial_seed(std::uint64_t base, std::size_t trial);

/// sqrt(mean_p (theta^T phi(p) - value(p))^2) over the 16 non-terminal positions.
double rmse_random_walk(std::span<const double> theta);

/// RMSE of theta^T phi_k against `truth[k]` over every step of the episode.
double rmse_trace(std::span<const double> theta, const TraceBuffer& trace,
                  std::span<const double> truth);

/// Runs one trial: `episodes` episodes from fresh zero weights, returning the
/// RMSE measured after each episode. Deterministic in (config, trial).
std::vector<double> run_trial(const RunConfig& config, std::size_t trial);

LearningCurve run_curve(const RunConfig& config, Exec exec = Exec::Auto);

/// Evaluates every configuration; cells are keyed by (algorithm, alpha,
/// lambda, lambda_replay) after canonicalisation. Failures are recorded per
/// cell. Serial and parallel execution give identical grids.
ResultGrid sweep(std::span<const RunConfig> grid, Exec exec = Exec::Auto);

/// Inclusive arithmetic progression; count is rounded so float drift does not
/// drop the endpoint.
std::vector<double> value_range(double start, double stop, double step);

// --- Output -------------------------------------------------------------------

struct ResultRow {
  std::string algorithm;
  double alpha = 0;
  double lambda = 0;
  double lambda_replay = 0;
  int episodes = 0;
  int trials = 0;
  double mean_rmse = 0;
  double stderr_rmse = 0;
};

void write_results_csv(const ResultGrid& grid, std::ostream& out);
void write_results_csv(const ResultGrid& grid, const std::filesystem::path& path);
std::vector<ResultRow> read_results_csv(std::istream& in);

void write_curve_csv(const RunConfig& config, const LearningCurve& curve, std::ostream& out);
void write_curve_csv(const RunConfig& config, const LearningCurve& curve,
                     const std::filesystem::path& path);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgFigure {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  std::optional<double> y_max;  // points above are clipped to this value
};

std::string render_svg(const SvgFigure& figure);
void emit_svg(const SvgFigure& figure, const std::filesystem::path& path);

/// Mean RMSE against alpha, one series per (algorithm, lambda, lambda_replay).
SvgFigure sweep_figure(const ResultGrid& grid, std::string title);
/// Per-episode mean RMSE, one series per configuration.
SvgFigure curve_figure(std::span<const RunConfig> configs, std::span<const LearningCurve> curves,
                       std::string title);

std::string series_label(const RunConfig& config);

// --- Cost probe ---------------------------------------------------------------

enum class ProbeTarget { Replan, TrueOnlineTD, TD0, ForwardOracle };

struct CostReport {
  double early_ns = 0;  // mean per-step time over steps [0, window)
  double late_ns = 0;   // mean per-step time over steps [T - window, T)
  double ratio = 0;     // late / early
};

/// Times each step of a synthetic T-step episode with n dense random features.
/// Per-step times are the minimum over `repeats` runs.
CostReport step_cost_probe(ProbeTarget target, std::size_t n, std::size_t steps,
                           std::uint64_t seed = 1, int repeats = 5, std::size_t window = 100);

}  // namespace replan
