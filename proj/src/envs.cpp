#include "replan/envs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "replan/errors.hpp"
#include "replan/io.hpp"

namespace replan {

// --- Random walk -------------------------------------------------------------

RealVec RandomWalk::reset() {
  position_ = 1;
  return features(position_);
}

Transition RandomWalk::step(Rng& rng) { return step(coin_flip(rng)); }

Transition RandomWalk::step(bool move_right) {
  if (terminal()) throw UsageError("RandomWalk::step called on a terminal state");
  constexpr double kUnit = 1.0 / kNonTerminal;
  Transition tr;
  if (move_right) {
    ++position_;
    tr.reward = position_ == kTerminal ? 0.0 : kUnit;
  } else if (position_ == 1) {
    tr.reward = 0.0;
  } else {
    --position_;
    tr.reward = -kUnit;
  }
  tr.terminal = terminal();
  tr.phi_next = tr.terminal ? RealVec(kNonTerminal) : features(position_);
  return tr;
}

RealVec RandomWalk::features(int position) {
  if (position < 1 || position > kNonTerminal) {
    throw IndexError("RandomWalk::features: position " + std::to_string(position) +
                     " is not a non-terminal state");
  }
  RealVec phi(kNonTerminal);
  phi[static_cast<std::size_t>(position - 1)] = 1.0;
  return phi;
}

double rw_true_value(int label) {
  if (label < 1 || label > RandomWalk::kNonTerminal) {
    throw IndexError("rw_true_value: label " + std::to_string(label) + " outside 1..16");
  }
  return static_cast<double>(label - 1) / RandomWalk::kNonTerminal;
}

int rw_label(int position) { return RandomWalk::kStates - position; }

double rw_value_at(int position) {
  if (position < 1 || position > RandomWalk::kNonTerminal) {
    throw IndexError("rw_value_at: position " + std::to_string(position) + " outside 1..16");
  }
  return rw_true_value(rw_label(position));
}

// --- Trace files ---------------------------------------------------------------

TraceDataset load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file " + path.string());
  try {
    return parse_trace(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path.string());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

TraceDataset parse_trace(std::istream& in) {
  TraceDataset data;
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  long long current_episode = -1;
  long long expected_step = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split(line, ',');

    if (!have_header) {
      if (fields.size() < 3 || trim(fields[0]) != "episode" || trim(fields[1]) != "step" ||
          trim(fields[2]) != "reward") {
        throw ParseError("header must start with episode,step,reward", line_no);
      }
      for (std::size_t i = 3; i < fields.size(); ++i) {
        if (trim(fields[i]) != "f" + std::to_string(i - 3)) {
          throw ParseError("expected feature column f" + std::to_string(i - 3), line_no);
        }
      }
      data.n_features = fields.size() - 3;
      have_header = true;
      continue;
    }

    if (fields.size() != data.n_features + 3) {
      throw SchemaError("line " + std::to_string(line_no) + ": " +
                        std::to_string(fields.size() - std::min<std::size_t>(fields.size(), 3)) +
                        " feature values, header declares " + std::to_string(data.n_features));
    }
    const long long episode = parse_integer(fields[0], line_no);
    const long long step = parse_integer(fields[1], line_no);
    if (episode != current_episode) {
      if (episode < current_episode) throw ParseError("episodes out of order", line_no);
      current_episode = episode;
      expected_step = 0;
      data.episodes.emplace_back();
    }
    if (step != expected_step) {
      throw ParseError("expected step " + std::to_string(expected_step) + ", got " +
                       std::to_string(step),
                       line_no);
    }
    ++expected_step;

    auto& ep = data.episodes.back();
    ep.rewards.push_back(parse_real(fields[2], line_no));
    RealVec phi(data.n_features);
    for (std::size_t i = 0; i < data.n_features; ++i) phi[i] = parse_real(fields[i + 3], line_no);
    ep.features.push_back(std::move(phi));
  }
  return data;
}

void write_trace(const TraceDataset& data, std::ostream& out) {
  out << "episode,step,reward";
  for (std::size_t i = 0; i < data.n_features; ++i) out << ",f" << i;
  out << '\n';
  for (std::size_t e = 0; e < data.episodes.size(); ++e) {
    const auto& ep = data.episodes[e];
    ep.validate();
    if (!ep.features.empty() && ep.n_features() != data.n_features) {
      throw SchemaError("write_trace: episode " + std::to_string(e) + " has " +
                        std::to_string(ep.n_features()) + " features, dataset declares " +
                        std::to_string(data.n_features));
    }
    for (std::size_t k = 0; k < ep.steps(); ++k) {
      out << e << ',' << k << ',' << format_real(ep.rewards[k]);
      for (double f : ep.features[k]) out << ',' << format_real(f);
      out << '\n';
    }
  }
}

void write_trace(const TraceDataset& data, const std::filesystem::path& path) {
  write_file_atomically(path, [&](std::ostream& out) { write_trace(data, out); });
}

std::vector<double> mc_ground_truth(const TraceBuffer& trace, double gamma) {
  std::vector<double> g(trace.steps());
  double acc = 0.0;
  for (std::size_t t = trace.steps(); t-- > 0;) {
    acc = trace.rewards[t] + gamma * acc;
    g[t] = acc;
  }
  return g;
}

TraceDataset make_synthetic_trace(const SyntheticTraceOptions& o, std::uint64_t seed) {
  if (o.n_features == 0 || o.min_steps == 0 || o.max_steps < o.min_steps) {
    throw UsageError("make_synthetic_trace: invalid options");
  }
  Rng rng(mix_seed(seed));
  TraceDataset data;
  data.n_features = o.n_features;
  data.gamma_truth = o.gamma_truth;

  std::vector<double> centers(o.n_features);
  for (std::size_t i = 0; i < o.n_features; ++i) {
    centers[i] = o.n_features == 1
                     ? 0.0
                     : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(o.n_features - 1);
  }
  constexpr std::array<double, 4> kStarts{-1.0, -0.6, 0.6, 1.0};

  for (std::size_t e = 0; e < o.episodes; ++e) {
    double x = kStarts[uniform_index(rng, kStarts.size())] * (0.8 + 0.2 * uniform01(rng));
    const std::size_t steps = o.min_steps + uniform_index(rng, o.max_steps - o.min_steps + 1);
    TraceBuffer ep;
    for (std::size_t t = 0; t < steps; ++t) {
      RealVec phi(o.n_features);
      for (std::size_t i = 0; i < o.n_features; ++i) {
        const double z = (x - centers[i]) / o.tuning_width;
        phi[i] = std::max(0.0, std::exp(-z * z) + o.sensor_noise * standard_normal(rng));
      }
      x = o.decay * x + o.drift_noise * standard_normal(rng);
      ep.features.push_back(std::move(phi));
      ep.rewards.push_back(x);
    }
    data.episodes.push_back(std::move(ep));
  }
  return data;
}

}  // namespace replan
