#pragma once

// Non-incremental forward view of TD(lambda)-Replan. Every step t replays the
// whole episode prefix k = 0..t, each update targeting the interim
// lambda-return G_k^{lambda|t+1}. Quadratic-to-cubic in episode length; used as
// ground truth for the incremental learners, not as a production path.

#include <cstddef>
#include <optional>
#include <vector>

#include "replan/learners.hpp"
#include "replan/numerics.hpp"

namespace replan {

/// One recorded episode. features[k] = phi_k, rewards[k] = R_{k+1}.
struct TraceBuffer {
  std::vector<RealVec> features;
  std::vector<double> rewards;
  bool terminal = true;
  // phi_{T+1} for a truncated (non-terminal) episode.
  std::optional<RealVec> bootstrap;

  std::size_t steps() const noexcept { return rewards.size(); }
  std::size_t n_features() const noexcept { return features.empty() ? 0 : features.front().size(); }

  /// phi_{k+1}; the zero vector past the end of a terminal episode.
  RealVec next_feature(std::size_t k) const;

  /// Throws SchemaError on inconsistent lengths or feature counts.
  void validate() const;

  friend bool operator==(const TraceBuffer&, const TraceBuffer&) = default;
};

/// thetas[i] is the weight vector held after finishing step i (thetas[0] is
/// the episode-start weights).
struct WeightHistory {
  std::vector<RealVec> thetas;

  const RealVec& final() const { return thetas.back(); }
  std::size_t size() const noexcept { return thetas.size(); }
};

enum class ReturnMethod { Recursive, Direct };

/// G_k^{lambda|t+1} via G_k^{lambda|j+1} = G_k^{lambda|j} + (lambda gamma)^{j-k} delta'_j.
double interim_return_recursive(const TraceBuffer& trace, const WeightHistory& hist,
                                std::size_t k, std::size_t t, double lambda, double gamma);

/// G_k^{lambda|t+1} as the lambda-weighted mixture of i-step returns
/// (1-lambda) sum_{i=1}^{t-k} lambda^{i-1} G^{(i)} + lambda^{t-k} G^{(t-k+1)}.
double interim_return_direct(const TraceBuffer& trace, const WeightHistory& hist, std::size_t k,
                             std::size_t t, double lambda, double gamma);

/// Replays steps 0..t starting from theta_start; returns theta_{t+1}^{t+1}.
RealVec forward_replay_bundle(const TraceBuffer& trace, const WeightHistory& hist,
                              const RealVec& theta_start, std::size_t t, const Hyperparams& h,
                              ReturnMethod method = ReturnMethod::Recursive);

/// Each bundle starts from the previous bundle's result.
WeightHistory forward_replay_episode(const TraceBuffer& trace, const Hyperparams& h,
                                     std::optional<RealVec> theta_init = std::nullopt,
                                     ReturnMethod method = ReturnMethod::Recursive);

/// Each bundle restarts from the episode-initial weights (true online TD(lambda)
/// forward view).
WeightHistory forward_fixed_theta_episode(const TraceBuffer& trace, const Hyperparams& h,
                                          std::optional<RealVec> theta_init = std::nullopt,
                                          ReturnMethod method = ReturnMethod::Recursive);

}  // namespace replan
