#include "replan/sweep_config.hpp"

#include <fstream>
#include <istream>
#include <set>

#include "replan/errors.hpp"
#include "replan/io.hpp"

namespace replan {

namespace {

std::vector<double> parse_list(std::string_view value, std::size_t line) {
  std::vector<double> out;
  for (auto field : split(value, ',')) out.push_back(parse_real(field, line));
  return out;
}

int parse_count(std::string_view value, std::size_t line) {
  const long long v = parse_integer(value, line);
  if (v < 0 || v > 1'000'000'000) throw ParseError("count out of range", line);
  return static_cast<int>(v);
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

SweepPlan parse_sweep_config(std::istream& in, const std::filesystem::path& base_dir) {
  SweepPlan plan;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError("empty value for '" + key + "'", line_no);
    if (!seen.insert(key == "alpha_range" ? "alpha" : key).second) {
      throw ParseError("repeated key '" + key + "'", line_no);
    }

    if (key == "environment") {
      if (value != "randomwalk" && value != "trace") {
        throw ParseError("environment must be randomwalk or trace", line_no);
      }
      plan.environment = std::string(value);
    } else if (key == "data") {
      plan.data = resolve(base_dir, value);
    } else if (key == "algorithms") {
      plan.algorithms.clear();
      for (auto name : split(value, ',')) {
        try {
          plan.algorithms.push_back(parse_algorithm(trim(name)));
        } catch (const UsageError& e) {
          throw ParseError(e.what(), line_no);
        }
      }
    } else if (key == "alpha") {
      plan.alphas = parse_list(value, line_no);
    } else if (key == "alpha_range") {
      const auto r = parse_list(value, line_no);
      if (r.size() != 3) throw ParseError("alpha_range needs start, stop, step", line_no);
      try {
        plan.alphas = value_range(r[0], r[1], r[2]);
      } catch (const UsageError& e) {
        throw ParseError(e.what(), line_no);
      }
    } else if (key == "lambda") {
      plan.lambdas = parse_list(value, line_no);
    } else if (key == "lambda_replay") {
      plan.lambda_replays = parse_list(value, line_no);
    } else if (key == "gamma") {
      plan.gamma = parse_real(value, line_no);
    } else if (key == "episodes") {
      plan.episodes = parse_count(value, line_no);
    } else if (key == "trials") {
      plan.trials = parse_count(value, line_no);
    } else if (key == "seed") {
      plan.seed = static_cast<std::uint64_t>(parse_integer(value, line_no));
    } else if (key == "planning_steps") {
      plan.planning_steps = parse_count(value, line_no);
    } else if (key == "out") {
      plan.out = resolve(base_dir, value);
    } else if (key == "svg") {
      plan.svg = resolve(base_dir, value);
    } else {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
  }
  if (plan.environment == "trace" && !plan.data) {
    throw ParseError("trace environment needs a 'data' path", 0);
  }
  return plan;
}

SweepPlan load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep config " + path.string());
  try {
    return parse_sweep_config(in, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  }
}

std::vector<RunConfig> build_grid(const SweepPlan& plan) {
  const bool trace = plan.environment == "trace";
  Environment env = RandomWalkEnv{};
  if (trace) {
    auto data = std::make_shared<TraceDataset>(load_trace(*plan.data));
    if (plan.gamma) data->gamma_truth = *plan.gamma;
    env = TraceEnv{std::move(data)};
  }

  std::vector<RunConfig> grid;
  std::set<CellKey> keys;
  for (Algorithm algo : plan.algorithms) {
    for (double lambda : plan.lambdas) {
      for (double replay : plan.lambda_replays) {
        for (double alpha : plan.alphas) {
          RunConfig c;
          c.algorithm = algo;
          c.hyperparams.alpha = alpha;
          c.hyperparams.gamma = plan.gamma.value_or(trace ? 0.95 : 1.0);
          c.hyperparams.lambda = lambda;
          c.hyperparams.lambda_replay = replay;
          c.hyperparams.dyna_planning_steps = plan.planning_steps;
          c.episodes = plan.episodes;
          c.trials = plan.trials.value_or(trace ? 66 : 20);
          c.seed = plan.seed;
          c.environment = env;
          c.validate();
          c = canonical(std::move(c));
          if (keys.insert(CellKey::of(c)).second) grid.push_back(std::move(c));
        }
      }
    }
  }
  return grid;
}

}  // namespace replan
