#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "replan/numerics.hpp"
#include "replan/oracle.hpp"
#include "replan/random.hpp"

namespace replan {

struct Transition {
  RealVec phi_next;  // zero vector when terminal
  double reward = 0.0;
  bool terminal = false;
};

/// 17-state random walk. Positions 1..17 from the left; episodes start at 1,
/// end on entering 17. Features are one-hot over the 16 non-terminal positions.
///
/// Rewards: +1/16 for a right move, -1/16 for a left move, 0 for the move into
/// the terminal and 0 for bumping the left wall at position 1.
class RandomWalk {
 public:
  static constexpr int kStates = 17;
  static constexpr int kNonTerminal = 16;
  static constexpr int kTerminal = 17;

  RandomWalk() = default;

  /// Position 1; returns phi(1).
  RealVec reset();

  /// Fair coin between right and left. Throws UsageError once terminal.
  Transition step(Rng& rng);
  Transition step(bool move_right);

  int position() const noexcept { return position_; }
  bool terminal() const noexcept { return position_ == kTerminal; }

  /// One-hot feature of a non-terminal position (index position-1 set).
  static RealVec features(int position);

 private:
  int position_ = 1;
};

/// Analytic value (i-1)/16 of the state labelled i, where labels count from
/// the terminal end: label 1 is the state next to the terminal.
double rw_true_value(int label);

/// Label of a left-based position: 17 - position.
int rw_label(int position);

/// Analytic value at a left-based position, (16 - position)/16.
double rw_value_at(int position);

/// Episodes of precomputed feature vectors with rewards, e.g. sensor streams.
struct TraceDataset {
  std::vector<TraceBuffer> episodes;
  std::size_t n_features = 0;
  double gamma_truth = 0.95;

  friend bool operator==(const TraceDataset&, const TraceDataset&) = default;
};

/// CSV with header `episode,step,reward,f0,...,f{n-1}`, rows sorted by
/// (episode, step). The reward on row (e, k) follows features phi_k.
TraceDataset load_trace(const std::filesystem::path& path);
TraceDataset parse_trace(std::istream& in);

/// Writes through a temporary file and renames it into place.
void write_trace(const TraceDataset& data, const std::filesystem::path& path);
void write_trace(const TraceDataset& data, std::ostream& out);

/// Per-step discounted Monte Carlo return, G_t = R_{t+1} + gamma G_{t+1}.
std::vector<double> mc_ground_truth(const TraceBuffer& trace, double gamma);

/// Synthetic sensor-stream task: a latent cursor position drifts noisily from a
/// start offset back towards 0; 16 Gaussian tuning curves over the position,
/// plus sensor noise, form the features; the reward is the next position.
struct SyntheticTraceOptions {
  std::size_t episodes = 10;
  std::size_t n_features = 16;
  std::size_t min_steps = 30;
  std::size_t max_steps = 80;
  double decay = 0.93;
  double drift_noise = 0.03;
  double sensor_noise = 0.05;
  double tuning_width = 0.25;
  double gamma_truth = 0.95;
};

TraceDataset make_synthetic_trace(const SyntheticTraceOptions& options, std::uint64_t seed);

}  // namespace replan
