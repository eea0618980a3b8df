#include "replan/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace replan {

TraceBuffer random_episode(Rng& rng, std::size_t n, std::size_t steps) {
  TraceBuffer trace;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t t = 0; t < steps; ++t) {
    RealVec phi(n);
    for (auto& x : phi) x = scale * standard_normal(rng);
    trace.features.push_back(std::move(phi));
    trace.rewards.push_back(standard_normal(rng));
  }
  return trace;
}

Hyperparams random_hyperparams(Rng& rng) {
  constexpr std::array<double, 5> kLambdas{0.0, 0.3, 0.5, 0.9, 1.0};
  constexpr std::array<double, 2> kGammas{0.9, 1.0};
  Hyperparams h;
  h.alpha = 0.5 * (1.0 - uniform01(rng));  // (0, 0.5]
  h.lambda = kLambdas[uniform_index(rng, kLambdas.size())];
  h.gamma = kGammas[uniform_index(rng, kGammas.size())];
  return h;
}

double relative_error(const RealVec& a, const RealVec& b) {
  const double diff = max_abs_diff(a, b);
  const double scale = max_abs(b);
  return scale == 0.0 ? diff : diff / scale;
}

bool EquivalenceReport::passed() const {
  return replan_vs_forward <= kForwardViewTolerance &&
         fixed_vs_true_online <= kForwardViewTolerance &&
         interp0_vs_true_online <= kSpecialCaseTolerance && interp1_vs_replan == 0.0 &&
         direct_vs_recursive_return <= kReturnTolerance && one_step_target_gap == 0.0;
}

EquivalenceReport run_equivalence_suite(std::uint64_t seed, std::size_t episodes,
                                        std::size_t return_cases) {
  Rng rng(mix_seed(seed));
  EquivalenceReport report;
  report.episodes = episodes;
  report.return_cases = return_cases;

  for (std::size_t i = 0; i < episodes; ++i) {
    const std::size_t n = 2 + uniform_index(rng, 9);
    const std::size_t steps = 1 + uniform_index(rng, 50);
    const TraceBuffer trace = random_episode(rng, n, steps);
    Hyperparams h = random_hyperparams(rng);

    ReplanState replan(n);
    ReplanState interp1(n);
    ReplanState interp0(n);
    TrueOnlineTDState online(n);
    for (std::size_t t = 0; t < steps; ++t) {
      const RealVec next = trace.next_feature(t);
      replan_step(replan, trace.features[t], next, trace.rewards[t], h);
      h.lambda_replay = 1.0;
      replan_interpolated_step(interp1, trace.features[t], next, trace.rewards[t], h);
      h.lambda_replay = 0.0;
      replan_interpolated_step(interp0, trace.features[t], next, trace.rewards[t], h);
      true_online_td_step(online, trace.features[t], next, trace.rewards[t], h);

      report.interp1_vs_replan =
          std::max(report.interp1_vs_replan, max_abs_diff(interp1.theta, replan.theta));
      report.interp0_vs_true_online =
          std::max(report.interp0_vs_true_online, max_abs_diff(interp0.theta, online.theta));
    }

    const WeightHistory forward = forward_replay_episode(trace, h);
    const WeightHistory fixed = forward_fixed_theta_episode(trace, h);
    report.replan_vs_forward =
        std::max(report.replan_vs_forward, relative_error(replan.theta, forward.final()));
    report.fixed_vs_true_online =
        std::max(report.fixed_vs_true_online, relative_error(online.theta, fixed.final()));
  }

  for (std::size_t i = 0; i < return_cases; ++i) {
    const std::size_t n = 2 + uniform_index(rng, 9);
    const std::size_t steps = 1 + uniform_index(rng, 30);
    const TraceBuffer trace = random_episode(rng, n, steps);
    WeightHistory hist;
    for (std::size_t j = 0; j <= steps; ++j) {
      RealVec theta(n);
      for (auto& x : theta) x = standard_normal(rng);
      hist.thetas.push_back(std::move(theta));
    }
    const std::size_t t = uniform_index(rng, steps);
    const std::size_t k = uniform_index(rng, t + 1);
    const double lambda = uniform01(rng);
    const double gamma = uniform01(rng);

    const double rec = interim_return_recursive(trace, hist, k, t, lambda, gamma);
    const double dir = interim_return_direct(trace, hist, k, t, lambda, gamma);
    report.direct_vs_recursive_return =
        std::max(report.direct_vs_recursive_return, std::abs(rec - dir));

    const double target = trace.rewards[t] + gamma * dot(hist.thetas[t], trace.next_feature(t));
    const double at_rec = interim_return_recursive(trace, hist, t, t, lambda, gamma);
    const double at_dir = interim_return_direct(trace, hist, t, t, lambda, gamma);
    report.one_step_target_gap = std::max(
        {report.one_step_target_gap, std::abs(at_rec - target), std::abs(at_dir - target)});
  }
  return report;
}

}  // namespace replan
