// replan: run learners on the random walk or a trace file, sweep grids,
// check the incremental learners against the forward view, time steps.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "replan/envs.hpp"
#include "replan/errors.hpp"
#include "replan/harness.hpp"
#include "replan/io.hpp"
#include "replan/sweep_config.hpp"
#include "replan/verify.hpp"

namespace {

using namespace replan;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

struct RunFlags {
  std::string algo = "replan";
  double alpha = 0.1;
  std::optional<double> gamma;
  double lambda = 0.9;
  double lambda_replay = 1.0;
  int episodes = 10;
  std::optional<int> trials;
  std::uint64_t seed = 0;
  int planning_steps = 10;
  std::string data;
  std::string out;
  std::string svg;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_data) {
  cmd->add_option("--algo", f.algo, "replan, replan_interp, true_online_td, td0 or dyna")
      ->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "step size")->capture_default_str();
  cmd->add_option("--gamma", f.gamma, "discount");
  cmd->add_option("--lambda", f.lambda, "target depth")->capture_default_str();
  cmd->add_option("--lambda-replay", f.lambda_replay, "replay depth (replan_interp)")
      ->capture_default_str();
  cmd->add_option("--episodes", f.episodes)->capture_default_str();
  cmd->add_option("--trials", f.trials);
  cmd->add_option("--seed", f.seed)->capture_default_str();
  cmd->add_option("--planning-steps", f.planning_steps, "dyna planning updates per step")
      ->capture_default_str();
  if (with_data) cmd->add_option("--data", f.data, "trace CSV")->required();
  cmd->add_option("--out", f.out, "curve CSV (stdout when omitted)");
  cmd->add_option("--svg", f.svg, "learning-curve figure");
}

RunConfig to_config(const RunFlags& f, bool trace) {
  RunConfig c;
  c.algorithm = parse_algorithm(f.algo);
  c.hyperparams.alpha = f.alpha;
  c.hyperparams.gamma = f.gamma.value_or(trace ? 0.95 : 1.0);
  c.hyperparams.lambda = f.lambda;
  c.hyperparams.lambda_replay = f.lambda_replay;
  c.hyperparams.dyna_planning_steps = f.planning_steps;
  c.episodes = f.episodes;
  c.trials = f.trials.value_or(trace ? 66 : 20);
  c.seed = f.seed;
  if (trace) {
    auto data = std::make_shared<TraceDataset>(load_trace(f.data));
    data->gamma_truth = c.hyperparams.gamma;
    c.environment = TraceEnv{std::move(data)};
  }
  // Validate the flags as given, before ignored values are pinned.
  c.validate();
  return canonical(std::move(c));
}

int run_single(const RunFlags& f, bool trace) {
  const RunConfig config = to_config(f, trace);
  const LearningCurve curve = run_curve(config);
  if (f.out.empty()) {
    write_curve_csv(config, curve, std::cout);
  } else {
    write_curve_csv(config, curve, std::filesystem::path(f.out));
    std::cerr << series_label(config) << ": mean RMSE " << format_real(curve.overall_mean())
              << " +- " << format_real(curve.overall_std_error()) << '\n';
  }
  if (!f.svg.empty()) {
    emit_svg(curve_figure({&config, 1}, {&curve, 1},
                          trace ? "Trace learning curve" : "Random walk learning curve"),
             f.svg);
  }
  return kExitOk;
}

int run_sweep(const std::string& config_path, const std::string& out, const std::string& svg) {
  SweepPlan plan = load_sweep_config(config_path);
  if (!out.empty()) plan.out = out;
  if (!svg.empty()) plan.svg = svg;
  const auto grid = build_grid(plan);
  const ResultGrid results = sweep(grid);

  if (plan.out) {
    write_results_csv(results, *plan.out);
  } else {
    write_results_csv(results, std::cout);
  }
  if (plan.svg) {
    emit_svg(sweep_figure(results, plan.environment == "trace" ? "Trace sweep" : "Random walk sweep"),
             *plan.svg);
  }
  int failed = 0;
  for (const auto& [key, cell] : results.cells) {
    if (cell.error) {
      ++failed;
      std::cerr << series_label(cell.config) << " alpha=" << format_real(key.alpha)
                << ": " << *cell.error << '\n';
    }
  }
  if (failed > 0) std::cerr << failed << " of " << results.cells.size() << " cells failed\n";
  return kExitOk;
}

int run_verify(std::uint64_t seed, std::size_t episodes, std::size_t cases) {
  const EquivalenceReport r = run_equivalence_suite(seed, episodes, cases);
  auto line = [](const char* name, double value, double tol) {
    std::printf("%-36s %.3e  (tolerance %.0e)\n", name, value, tol);
  };
  std::printf("episodes %zu, return cases %zu\n", r.episodes, r.return_cases);
  line("replan vs forward replay (rel)", r.replan_vs_forward, kForwardViewTolerance);
  line("fixed-theta replay vs true online", r.fixed_vs_true_online, kForwardViewTolerance);
  line("interpolated(0) vs true online", r.interp0_vs_true_online, kSpecialCaseTolerance);
  line("interpolated(1) vs replan", r.interp1_vs_replan, 0.0);
  line("direct vs recursive return", r.direct_vs_recursive_return, kReturnTolerance);
  line("return at k=t vs one-step target", r.one_step_target_gap, 0.0);
  const bool ok = r.passed();
  std::printf("%s\n", ok ? "ok" : "FAILED");
  return ok ? kExitOk : kExitVerifyFailed;
}

int run_bench(std::size_t n, std::size_t steps, std::uint64_t seed, int repeats,
              std::size_t window, bool with_oracle) {
  struct Entry {
    const char* name;
    ProbeTarget target;
  };
  const Entry entries[] = {{"replan", ProbeTarget::Replan},
                           {"true_online_td", ProbeTarget::TrueOnlineTD},
                           {"td0", ProbeTarget::TD0},
                           {"forward_oracle", ProbeTarget::ForwardOracle}};
  std::printf("n=%zu steps=%zu window=%zu\n", n, steps, window);
  std::printf("%-16s %12s %12s %8s\n", "learner", "early_ns", "late_ns", "ratio");
  for (const auto& e : entries) {
    if (e.target == ProbeTarget::ForwardOracle && !with_oracle) continue;
    const CostReport c = step_cost_probe(e.target, n, steps, seed, repeats, window);
    std::printf("%-16s %12.1f %12.1f %8.2f\n", e.name, c.early_ns, c.late_ns, c.ratio);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear TD prediction with incremental experience replay"};
  app.require_subcommand(0, 1);

  RunFlags rw_flags;
  auto* rw = app.add_subcommand("randomwalk", "one configuration on the 17-state random walk");
  add_run_flags(rw, rw_flags, false);

  RunFlags trace_flags;
  auto* trace = app.add_subcommand("trace", "one configuration on a trace CSV");
  add_run_flags(trace, trace_flags, true);

  std::string sweep_config, sweep_out, sweep_svg;
  auto* sw = app.add_subcommand("sweep", "grid from a key = value config file");
  sw->add_option("--config", sweep_config)->required()->check(CLI::ExistingFile);
  sw->add_option("--out", sweep_out, "results CSV, overrides the config");
  sw->add_option("--svg", sweep_svg, "figure, overrides the config");

  std::uint64_t verify_seed = 0;
  std::size_t verify_episodes = 200;
  std::size_t verify_cases = 1000;
  auto* verify = app.add_subcommand("verify", "incremental learners against the forward view");
  verify->add_option("--seed", verify_seed)->capture_default_str();
  verify->add_option("--episodes", verify_episodes)->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--cases", verify_cases, "interim-return cases")->capture_default_str();

  std::size_t bench_n = 64, bench_steps = 1000, bench_window = 100;
  std::uint64_t bench_seed = 1;
  int bench_repeats = 5;
  bool bench_oracle = false;
  auto* bench = app.add_subcommand("bench", "per-step cost early and late in a long episode");
  bench->add_option("--features", bench_n)->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--steps", bench_steps)->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--window", bench_window)->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--repeats", bench_repeats)->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_flag("--oracle", bench_oracle, "also time the forward-view replay");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*rw) return run_single(rw_flags, false);
    if (*trace) return run_single(trace_flags, true);
    if (*sw) return run_sweep(sweep_config, sweep_out, sweep_svg);
    if (*verify) return run_verify(verify_seed, verify_episodes, verify_cases);
    if (*bench) {
      return run_bench(bench_n, bench_steps, bench_seed, bench_repeats, bench_window, bench_oracle);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
