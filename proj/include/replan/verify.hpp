#pragma once

#include <cstddef>
#include <cstdint>

#include "replan/learners.hpp"
#include "replan/oracle.hpp"
#include "replan/random.hpp"

namespace replan {

inline constexpr double kForwardViewTolerance = 1e-8;  // relative, incremental vs forward view
inline constexpr double kSpecialCaseTolerance = 1e-12;  // absolute, per-step weight trajectories
inline constexpr double kReturnTolerance = 1e-12;       // absolute, direct vs recursive returns

/// Random episode with n features drawn N(0, 1/n) and N(0, 1) rewards.
/// Terminal, so the transition after the last step bootstraps from zero.
TraceBuffer random_episode(Rng& rng, std::size_t n, std::size_t steps);

/// alpha ~ U(0, 0.5], lambda from {0, 0.3, 0.5, 0.9, 1}, gamma from {0.9, 1}.
Hyperparams random_hyperparams(Rng& rng);

/// ||a - b||_inf / ||b||_inf, or the absolute difference when b is zero.
double relative_error(const RealVec& a, const RealVec& b);

struct EquivalenceReport {
  std::size_t episodes = 0;
  std::size_t return_cases = 0;
  double replan_vs_forward = 0;          // max relative error, final weights
  double fixed_vs_true_online = 0;       // max relative error, final weights
  double interp0_vs_true_online = 0;     // max absolute error, every step
  double interp1_vs_replan = 0;          // max absolute error, every step (expected 0)
  double direct_vs_recursive_return = 0; // max absolute error
  double one_step_target_gap = 0;        // max |G_t^{lambda|t+1} - (R + gamma theta_t^T phi_{t+1})|

  bool passed() const;
};

/// Randomised equivalence checks between the incremental learners and the
/// forward view: n in [2, 10], T in [1, 50].
EquivalenceReport run_equivalence_suite(std::uint64_t seed, std::size_t episodes = 200,
                                        std::size_t return_cases = 1000);

}  // namespace replan
