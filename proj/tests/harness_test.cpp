#include <gtest/gtest.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "replan/errors.hpp"
#include "replan/harness.hpp"

namespace replan {
namespace {

RunConfig rw_config(Algorithm algo, double alpha, double lambda, double replay = 1.0) {
  RunConfig c;
  c.algorithm = algo;
  c.hyperparams.alpha = alpha;
  c.hyperparams.lambda = lambda;
  c.hyperparams.lambda_replay = replay;
  c.hyperparams.gamma = 1.0;
  c.seed = 42;
  return c;
}

std::shared_ptr<const TraceDataset> small_trace() {
  SyntheticTraceOptions opts;
  opts.episodes = 4;
  opts.min_steps = 10;
  opts.max_steps = 20;
  return std::make_shared<TraceDataset>(make_synthetic_trace(opts, 3));
}

std::string results_text(const ResultGrid& grid) {
  std::ostringstream out;
  write_results_csv(grid, out);
  return out.str();
}

TEST(RmseRandomWalk, ZeroWeightsClosedForm) {
  // sqrt(mean_{i=1..16} ((i-1)/16)^2) = sqrt(1240 / 4096)
  const double closed_form = std::sqrt(1240.0) / 64.0;
  const double got = rmse_random_walk(RealVec(16));
  EXPECT_NEAR(got, closed_form, 1e-12);
  EXPECT_LE(got, 1.0);
}

TEST(RmseRandomWalk, TrueValuesGiveZero) {
  RealVec theta(16);
  for (int p = 1; p <= 16; ++p) theta[static_cast<std::size_t>(p - 1)] = rw_value_at(p);
  EXPECT_EQ(rmse_random_walk(theta), 0.0);
}

TEST(RmseRandomWalk, BoundedForUnitEstimates) {
  Rng rng(1);
  for (int rep = 0; rep < 100; ++rep) {
    RealVec theta(16);
    for (auto& x : theta) x = uniform01(rng);
    const double r = rmse_random_walk(theta);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
  EXPECT_THROW(rmse_random_walk(RealVec(15)), DimensionError);
}

TEST(RmseTrace, Definitions) {
  TraceBuffer trace;
  trace.features = {RealVec{1, 0}, RealVec{0, 1}, RealVec{1, 1}};
  trace.rewards = {0, 0, 0};
  EXPECT_EQ(rmse_trace(RealVec(2), trace, std::vector<double>(3, 0.0)), 0.0);

  const RealVec theta{0.25, 0.5};
  std::vector<double> perfect;
  for (const auto& phi : trace.features) perfect.push_back(dot(theta, phi));
  EXPECT_EQ(rmse_trace(theta, trace, perfect), 0.0);

  // Constant prediction c = 0.4 against constant truth g = 1.5.
  TraceBuffer flat;
  flat.features.assign(5, RealVec{1});
  flat.rewards.assign(5, 0.0);
  EXPECT_NEAR(rmse_trace(RealVec{0.4}, flat, std::vector<double>(5, 1.5)), 1.1, 1e-15);

  EXPECT_THROW(rmse_trace(theta, trace, std::vector<double>(2)), DimensionError);
}

TEST(RunConfig, ValidateRejectsBadValues) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.episodes = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c = RunConfig{};
  c.trials = 0;
  EXPECT_THROW(c.validate(), UsageError);
  c = RunConfig{};
  c.hyperparams.alpha = 0.0;
  EXPECT_THROW(c.validate(), UsageError);
  c = RunConfig{};
  c.environment = TraceEnv{};
  EXPECT_THROW(c.validate(), UsageError);
}

TEST(Canonical, PinsIgnoredParameters) {
  EXPECT_EQ(canonical(rw_config(Algorithm::Replan, 0.1, 0.5, 0.3)).hyperparams.lambda_replay, 1.0);
  EXPECT_EQ(canonical(rw_config(Algorithm::TrueOnlineTD, 0.1, 0.5, 0.3)).hyperparams.lambda_replay,
            0.0);
  const auto td = canonical(rw_config(Algorithm::TD0, 0.1, 0.5, 0.3));
  EXPECT_EQ(td.hyperparams.lambda, 0.0);
  EXPECT_EQ(td.hyperparams.lambda_replay, 0.0);
  EXPECT_EQ(canonical(rw_config(Algorithm::ReplanInterp, 0.1, 0.5, 0.3)).hyperparams.lambda_replay,
            0.3);
}

TEST(RunTrial, SingleEpisodeCurve) {
  RunConfig c = rw_config(Algorithm::Replan, 0.1, 0.9);
  c.episodes = 1;
  EXPECT_EQ(run_trial(c, 0).size(), 1u);
}

TEST(RunTrial, DeterministicInSeedAndTrial) {
  for (Algorithm algo : {Algorithm::Replan, Algorithm::ReplanInterp, Algorithm::TrueOnlineTD,
                         Algorithm::TD0, Algorithm::Dyna}) {
    const RunConfig c = rw_config(algo, 0.1, 0.8, 0.5);
    EXPECT_EQ(run_trial(c, 3), run_trial(c, 3));
    EXPECT_NE(run_trial(c, 3), run_trial(c, 4));
  }
}

TEST(RunTrial, TraceEnvironment) {
  RunConfig c = rw_config(Algorithm::ReplanInterp, 0.005, 0.9, 0.5);
  c.hyperparams.gamma = 0.95;
  c.environment = TraceEnv{small_trace()};
  c.episodes = 6;
  const auto curve = run_trial(c, 1);
  ASSERT_EQ(curve.size(), 6u);
  for (double x : curve) EXPECT_TRUE(std::isfinite(x));
  EXPECT_EQ(curve, run_trial(c, 1));
}

TEST(RunTrial, DivergenceIsReportedAsInfinity) {
  RunConfig c = rw_config(Algorithm::TD0, 50.0, 0.0);
  c.episodes = 5;
  const auto curve = run_trial(c, 0);
  ASSERT_EQ(curve.size(), 5u);
  EXPECT_TRUE(std::isinf(curve.back()));
}

TEST(RunCurve, ReplanLearnsOnRandomWalk) {
  RunConfig c = rw_config(Algorithm::Replan, 0.1, 0.9);
  c.trials = 20;
  const LearningCurve curve = run_curve(c);
  ASSERT_EQ(curve.mean.size(), 10u);
  EXPECT_LT(curve.mean.back(), curve.mean.front());
  EXPECT_EQ(curve.per_trial.size(), 20u);
}

TEST(LearningCurve, Statistics) {
  const LearningCurve c = LearningCurve::from_trials({{1, 2}, {3, 4}});
  EXPECT_EQ(c.mean, (std::vector<double>{2, 3}));
  EXPECT_DOUBLE_EQ(c.std_error[0], 1.0);
  EXPECT_DOUBLE_EQ(c.overall_mean(), 2.5);
  EXPECT_DOUBLE_EQ(c.overall_std_error(), 1.0);
  EXPECT_EQ(LearningCurve::from_trials({{5, 6}}).overall_std_error(), 0.0);
}

TEST(Sweep, SingleCellEqualsTrials) {
  RunConfig c = rw_config(Algorithm::TrueOnlineTD, 0.1, 0.8);
  c.trials = 4;
  const RunConfig one[] = {c};
  const ResultGrid grid = sweep(one);
  ASSERT_EQ(grid.cells.size(), 1u);
  const CellResult& cell = grid.cells.begin()->second;
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(cell.curve.per_trial[t], run_trial(c, t));
  EXPECT_EQ(cell.mean_rmse, cell.curve.overall_mean());
}

TEST(Sweep, PermutationInvariantAndSerialEqualsParallel) {
  std::vector<RunConfig> grid;
  for (Algorithm algo : {Algorithm::Replan, Algorithm::TrueOnlineTD, Algorithm::Dyna}) {
    for (double alpha : {0.05, 0.1, 0.2}) {
      RunConfig c = rw_config(algo, alpha, 0.8);
      c.trials = 3;
      grid.push_back(c);
    }
  }
  std::vector<RunConfig> reversed(grid.rbegin(), grid.rend());
  std::vector<RunConfig> rotated = grid;
  std::rotate(rotated.begin(), rotated.begin() + 4, rotated.end());

  const std::string base = results_text(sweep(grid, Exec::Serial));
  EXPECT_EQ(results_text(sweep(reversed, Exec::Serial)), base);
  EXPECT_EQ(results_text(sweep(rotated, Exec::Parallel)), base);
  EXPECT_EQ(results_text(sweep(grid, Exec::Parallel)), base);

  const ResultGrid a = sweep(grid, Exec::Serial);
  const ResultGrid b = sweep(reversed, Exec::Parallel);
  for (const auto& [key, cell] : a.cells) {
    EXPECT_EQ(cell.curve.per_trial, b.cells.at(key).curve.per_trial);
  }
}

TEST(Sweep, DuplicateCellsRejected) {
  const RunConfig c = rw_config(Algorithm::Replan, 0.1, 0.8, 0.2);
  const RunConfig d = rw_config(Algorithm::Replan, 0.1, 0.8, 0.7);  // same after canonicalising
  const RunConfig grid[] = {c, d};
  EXPECT_THROW(sweep(grid), UsageError);
}

TEST(Sweep, InvalidCellRecordedNotThrown) {
  RunConfig good = rw_config(Algorithm::Replan, 0.1, 0.8);
  good.trials = 2;
  RunConfig bad = rw_config(Algorithm::Replan, 0.2, 0.8);
  bad.episodes = 0;
  const RunConfig grid[] = {good, bad};
  const ResultGrid r = sweep(grid);
  EXPECT_FALSE(r.cells.at(CellKey::of(canonical(good))).error);
  EXPECT_TRUE(r.cells.at(CellKey::of(canonical(bad))).error);
  EXPECT_EQ(r.best([](const CellKey&) { return true; })->config.hyperparams.alpha, 0.1);
}

TEST(Sweep, FullReplayBeatsTrueOnlineTdPerLambda) {
  std::vector<RunConfig> grid;
  for (double lambda : {0.0, 0.4, 0.8, 0.9, 1.0}) {
    for (double alpha : value_range(0.05, 0.3, 0.05)) {
      grid.push_back(rw_config(Algorithm::Replan, alpha, lambda));
      grid.push_back(rw_config(Algorithm::TrueOnlineTD, alpha, lambda));
    }
  }
  const ResultGrid r = sweep(grid);
  for (double lambda : {0.0, 0.4, 0.8, 0.9, 1.0}) {
    const auto* replan = r.best([&](const CellKey& k) {
      return k.algorithm == Algorithm::Replan && k.lambda == lambda;
    });
    const auto* online = r.best([&](const CellKey& k) {
      return k.algorithm == Algorithm::TrueOnlineTD && k.lambda == lambda;
    });
    ASSERT_TRUE(replan && online);
    EXPECT_LT(replan->mean_rmse, online->mean_rmse) << "lambda=" << lambda;
  }
}

TEST(ValueRange, InclusiveAndRounded) {
  const auto r = value_range(0.01, 0.3, 0.01);
  ASSERT_EQ(r.size(), 30u);
  EXPECT_EQ(r[6], 0.07);
  EXPECT_EQ(r.back(), 0.3);
  EXPECT_EQ(value_range(0.0001, 0.001, 0.0003), (std::vector<double>{0.0001, 0.0004, 0.0007, 0.001}));
  EXPECT_EQ(value_range(0.5, 0.5, 0.1), (std::vector<double>{0.5}));
  EXPECT_THROW(value_range(0.3, 0.1, 0.1), UsageError);
  EXPECT_THROW(value_range(0.1, 0.3, 0.0), UsageError);
}

TEST(ResultsCsv, EmptyGridIsHeaderOnly) {
  EXPECT_EQ(results_text(ResultGrid{}),
            "algorithm,alpha,lambda,lambda_replay,episodes,trials,mean_rmse,stderr_rmse\n");
}

TEST(ResultsCsv, TwoCellsRoundTrip) {
  RunConfig a = rw_config(Algorithm::Replan, 0.1, 0.9);
  RunConfig b = rw_config(Algorithm::Dyna, 0.07, 0.0);
  a.trials = b.trials = 3;
  const RunConfig grid[] = {a, b};
  const ResultGrid r = sweep(grid);
  const std::string text = results_text(r);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);

  std::istringstream in(text);
  const auto rows = read_results_csv(in);
  ASSERT_EQ(rows.size(), 2u);
  auto it = r.cells.begin();
  for (const auto& row : rows) {
    const auto& [key, cell] = *it++;
    EXPECT_EQ(row.algorithm, to_string(key.algorithm));
    EXPECT_EQ(row.alpha, key.alpha);
    EXPECT_EQ(row.lambda, key.lambda);
    EXPECT_EQ(row.lambda_replay, key.lambda_replay);
    EXPECT_EQ(row.episodes, cell.config.episodes);
    EXPECT_EQ(row.trials, 3);
    EXPECT_EQ(row.mean_rmse, cell.mean_rmse);
    EXPECT_EQ(row.stderr_rmse, cell.stderr_rmse);
  }
}

TEST(ResultsCsv, RejectsBadInput) {
  std::istringstream wrong_header("alpha,lambda\n");
  EXPECT_THROW(read_results_csv(wrong_header), ParseError);
  std::istringstream short_row(
      "algorithm,alpha,lambda,lambda_replay,episodes,trials,mean_rmse,stderr_rmse\nreplan,0.1\n");
  EXPECT_THROW(read_results_csv(short_row), ParseError);
}

TEST(CurveCsv, RowsPerTrialAndEpisode) {
  RunConfig c = rw_config(Algorithm::Replan, 0.1, 0.9);
  c.trials = 2;
  c.episodes = 3;
  const LearningCurve curve = run_curve(c);
  std::ostringstream out;
  write_curve_csv(c, curve, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "algorithm,alpha,lambda,lambda_replay,trial,episode,rmse");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("replan,0.1,0.9,1,0,1,", 0), 0u);
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(CurveCsv, FileWriteIsAtomicAndRepeatable) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("replan_harness_" + std::to_string(::getpid())) / "nested";
  const auto path = dir / "curve.csv";
  const RunConfig c = rw_config(Algorithm::Dyna, 0.1, 0.0);
  write_curve_csv(c, run_curve(c), path);
  std::ifstream first(path);
  const std::string a((std::istreambuf_iterator<char>(first)), {});
  write_curve_csv(c, run_curve(c), path);
  std::ifstream second(path);
  const std::string b((std::istreambuf_iterator<char>(second)), {});
  EXPECT_EQ(a, b);
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove_all(dir.parent_path());
}

TEST(Svg, StandaloneDocumentWithOnePolylinePerSeries) {
  std::vector<RunConfig> grid;
  for (double alpha : {0.1, 0.2}) {
    for (Algorithm algo : {Algorithm::Replan, Algorithm::TD0}) {
      RunConfig c = rw_config(algo, alpha, 0.9);
      c.trials = 2;
      grid.push_back(c);
    }
  }
  const SvgFigure fig = sweep_figure(sweep(grid), "sweep <test>");
  ASSERT_EQ(fig.series.size(), 2u);
  const std::string doc = render_svg(fig);
  EXPECT_EQ(doc.rfind("<?xml", 0), 0u);
  EXPECT_NE(doc.find("version=\"1.1\""), std::string::npos);
  EXPECT_NE(doc.find("sweep &lt;test&gt;"), std::string::npos);
  std::size_t polylines = 0;
  for (auto pos = doc.find("<polyline"); pos != std::string::npos; pos = doc.find("<polyline", pos + 1))
    ++polylines;
  EXPECT_EQ(polylines, 2u);
  EXPECT_EQ(doc.find("nan"), std::string::npos);
  EXPECT_NE(doc.find("</svg>"), std::string::npos);
}

TEST(Svg, NonFiniteValuesSkipped) {
  SvgFigure fig{"t", "x", "y", {{"s", {1, 2, 3}, {0.5, std::nan(""), INFINITY}}}, 1.0};
  const std::string doc = render_svg(fig);
  EXPECT_EQ(doc.find("nan"), std::string::npos);
  EXPECT_EQ(doc.find("inf"), std::string::npos);
}

TEST(CostProbe, TdZeroFlat) {
  const CostReport r = step_cost_probe(ProbeTarget::TD0, 64, 1000, 1, 5, 100);
  EXPECT_GT(r.early_ns, 0.0);
  EXPECT_LE(r.ratio, 1.5);
}

TEST(CostProbe, RejectsBadWindow) {
  EXPECT_THROW(step_cost_probe(ProbeTarget::TD0, 4, 10, 1, 1, 20), UsageError);
}

}  // namespace
}  // namespace replan
