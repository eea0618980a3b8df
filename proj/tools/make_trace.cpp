// make_trace: writes a synthetic sensor-stream trace CSV for `replan trace`.

#include <CLI11.hpp>

#include <iostream>

#include "replan/envs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic trace generator"};
  replan::SyntheticTraceOptions opts;
  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--episodes", opts.episodes)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--features", opts.n_features)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--min-steps", opts.min_steps)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--max-steps", opts.max_steps)->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--sensor-noise", opts.sensor_noise)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_option("--out", out, "output CSV")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    replan::write_trace(replan::make_synthetic_trace(opts, seed), std::filesystem::path(out));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
