#include "replan/oracle.hpp"

#include <cmath>
#include <string>

#include "replan/errors.hpp"

namespace replan {

namespace {

void check_indices(const TraceBuffer& trace, const WeightHistory& hist, std::size_t k,
                   std::size_t t) {
  if (k > t) {
    throw IndexError("interim return: k=" + std::to_string(k) + " exceeds t=" + std::to_string(t));
  }
  if (t >= trace.steps()) {
    throw IndexError("interim return: t=" + std::to_string(t) + " but trace has " +
                     std::to_string(trace.steps()) + " steps");
  }
  if (hist.size() < t + 1) {
    throw IndexError("interim return: weight history covers " + std::to_string(hist.size()) +
                     " steps, need " + std::to_string(t + 1));
  }
}

// R_{j+1} + gamma theta_j^T phi_{j+1}
double one_step_target(const TraceBuffer& trace, const WeightHistory& hist, std::size_t j,
                       double gamma) {
  return trace.rewards[j] + gamma * dot(hist.thetas[j], trace.next_feature(j));
}

// delta'_j = R_{j+1} + gamma theta_j^T phi_{j+1} - theta_{j-1}^T phi_j, j >= 1
double corrected_td_error(const TraceBuffer& trace, const WeightHistory& hist, std::size_t j,
                          double gamma) {
  return one_step_target(trace, hist, j, gamma) - dot(hist.thetas[j - 1], trace.features[j]);
}

// Applies the k = 0..t replay sweep given per-k targets.
RealVec replay_sweep(const TraceBuffer& trace, const RealVec& theta_start,
                     const std::vector<double>& targets, double alpha) {
  RealVec theta = theta_start;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const auto& phi = trace.features[k];
    axpy_inplace(theta, alpha * (targets[k] - dot(theta, phi)), phi);
  }
  return theta;
}

WeightHistory run_bundles(const TraceBuffer& trace, const Hyperparams& h,
                          std::optional<RealVec> theta_init, ReturnMethod method,
                          bool restart_from_initial) {
  trace.validate();
  const std::size_t n = trace.n_features();
  WeightHistory hist;
  if (theta_init) {
    if (n != 0 && theta_init->size() != n) {
      throw DimensionError("forward view: theta_init has " + std::to_string(theta_init->size()) +
                           " entries, trace has " + std::to_string(n) + " features");
    }
    hist.thetas.push_back(std::move(*theta_init));
  } else {
    hist.thetas.emplace_back(n);
  }
  hist.thetas.reserve(trace.steps() + 1);
  for (std::size_t t = 0; t < trace.steps(); ++t) {
    const RealVec& start = restart_from_initial ? hist.thetas.front() : hist.thetas[t];
    RealVec next = forward_replay_bundle(trace, hist, start, t, h, method);
    hist.thetas.push_back(std::move(next));
  }
  return hist;
}

}  // namespace

RealVec TraceBuffer::next_feature(std::size_t k) const {
  if (k + 1 < features.size()) return features[k + 1];
  if (!terminal && bootstrap) return *bootstrap;
  return RealVec(n_features());
}

void TraceBuffer::validate() const {
  if (features.size() != rewards.size()) {
    throw SchemaError("trace: " + std::to_string(features.size()) + " feature rows but " +
                      std::to_string(rewards.size()) + " rewards");
  }
  const std::size_t n = n_features();
  for (std::size_t k = 0; k < features.size(); ++k) {
    if (features[k].size() != n) {
      throw SchemaError("trace: step " + std::to_string(k) + " has " +
                        std::to_string(features[k].size()) + " features, expected " +
                        std::to_string(n));
    }
  }
  if (bootstrap && bootstrap->size() != n) throw SchemaError("trace: bootstrap feature size");
}

double interim_return_recursive(const TraceBuffer& trace, const WeightHistory& hist,
                                std::size_t k, std::size_t t, double lambda, double gamma) {
  check_indices(trace, hist, k, t);
  double g = one_step_target(trace, hist, k, gamma);
  double weight = 1.0;
  for (std::size_t j = k + 1; j <= t; ++j) {
    weight *= lambda * gamma;
    g += weight * corrected_td_error(trace, hist, j, gamma);
  }
  return g;
}

double interim_return_direct(const TraceBuffer& trace, const WeightHistory& hist, std::size_t k,
                             std::size_t t, double lambda, double gamma) {
  check_indices(trace, hist, k, t);
  // i-step return bootstrapped with the weights held at step k+i-1.
  auto n_step = [&](std::size_t i) {
    double g = 0.0;
    double discount = 1.0;
    for (std::size_t j = 1; j <= i; ++j) {
      g += discount * trace.rewards[k + j - 1];
      discount *= gamma;
    }
    return g + discount * dot(hist.thetas[k + i - 1], trace.next_feature(k + i - 1));
  };

  const std::size_t horizon = t - k;
  double g = 0.0;
  for (std::size_t i = 1; i <= horizon; ++i) {
    g += (1.0 - lambda) * std::pow(lambda, static_cast<double>(i - 1)) * n_step(i);
  }
  g += std::pow(lambda, static_cast<double>(horizon)) * n_step(horizon + 1);
  return g;
}

RealVec forward_replay_bundle(const TraceBuffer& trace, const WeightHistory& hist,
                              const RealVec& theta_start, std::size_t t, const Hyperparams& h,
                              ReturnMethod method) {
  check_indices(trace, hist, 0, t);
  if (theta_start.size() != trace.n_features()) {
    throw DimensionError("forward_replay_bundle: theta_start has wrong length");
  }

  std::vector<double> targets(t + 1);
  if (method == ReturnMethod::Direct) {
    for (std::size_t k = 0; k <= t; ++k) {
      targets[k] = interim_return_direct(trace, hist, k, t, h.lambda, h.gamma);
    }
  } else {
    // Same arithmetic as interim_return_recursive, with the per-step terms
    // hoisted out of the k loop.
    std::vector<double> base(t + 1);
    std::vector<double> correction(t + 1, 0.0);
    for (std::size_t j = 0; j <= t; ++j) {
      base[j] = one_step_target(trace, hist, j, h.gamma);
      if (j > 0) correction[j] = base[j] - dot(hist.thetas[j - 1], trace.features[j]);
    }
    for (std::size_t k = 0; k <= t; ++k) {
      double g = base[k];
      double weight = 1.0;
      for (std::size_t j = k + 1; j <= t; ++j) {
        weight *= h.lambda * h.gamma;
        g += weight * correction[j];
      }
      targets[k] = g;
    }
  }
  return replay_sweep(trace, theta_start, targets, h.alpha);
}

WeightHistory forward_replay_episode(const TraceBuffer& trace, const Hyperparams& h,
                                     std::optional<RealVec> theta_init, ReturnMethod method) {
  return run_bundles(trace, h, std::move(theta_init), method, false);
}

WeightHistory forward_fixed_theta_episode(const TraceBuffer& trace, const Hyperparams& h,
                                          std::optional<RealVec> theta_init,
                                          ReturnMethod method) {
  return run_bundles(trace, h, std::move(theta_init), method, true);
}

}  // namespace replan
