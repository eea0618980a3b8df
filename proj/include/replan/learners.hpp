#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "replan/numerics.hpp"
#include "replan/random.hpp"

namespace replan {

struct Hyperparams {
  double alpha = 0.1;          // step size
  double gamma = 1.0;          // discount
  double lambda = 0.9;         // target depth
  double lambda_replay = 1.0;  // replay depth; 0 = no replay, 1 = replay everything
  int dyna_planning_steps = 10;

  /// Throws UsageError unless alpha > 0 and the remaining ranges hold.
  void validate() const;
};

enum class Algorithm { Replan, ReplanInterp, TrueOnlineTD, TD0, Dyna };

std::string_view to_string(Algorithm a);
/// Accepts the names printed by to_string. Throws UsageError otherwise.
Algorithm parse_algorithm(std::string_view name);

// ---------------------------------------------------------------------------
// True online TD(lambda)-Replan(lambda_replay).
//
// Incremental form of replaying every past step of the episode, each update
// targeting the interim lambda-return. theta_{t+1} = A_bar_t theta_t + e_bar_t,
// with A_bar the running product of (I - alpha phi phi^T) since episode start.
// ---------------------------------------------------------------------------
struct ReplanState {
  explicit ReplanState(std::size_t n);
  explicit ReplanState(RealVec theta_init);

  /// e = e_bar = 0, A_bar = I, v_old = 0, theta_ep0 = theta. Theta is kept.
  void begin_episode();

  std::size_t size() const noexcept { return theta.size(); }

  RealVec theta;
  RealVec theta_ep0;
  RealVec e;
  RealVec e_bar;
  RealMat A_bar;
  double v_old = 0.0;

 private:
  friend void replan_step_impl(ReplanState&, std::span<const double>, std::span<const double>,
                               double, const Hyperparams&, double);
  std::vector<double> scratch_;
  std::vector<double> blend_;
};

/// Full replay (lambda_replay = 1). `phi_next` is all zeros on a terminal transition.
void replan_step(ReplanState& s, std::span<const double> phi, std::span<const double> phi_next,
                 double reward, const Hyperparams& h);

/// theta <- A_bar (l' theta + (1 - l') theta_ep0) + e_bar, with l' = h.lambda_replay.
void replan_interpolated_step(ReplanState& s, std::span<const double> phi,
                              std::span<const double> phi_next, double reward,
                              const Hyperparams& h);

struct TrueOnlineTDState {
  explicit TrueOnlineTDState(std::size_t n);
  explicit TrueOnlineTDState(RealVec theta_init);
  void begin_episode();

  RealVec theta;
  RealVec e;
  double v_old = 0.0;
};

void true_online_td_step(TrueOnlineTDState& s, std::span<const double> phi,
                         std::span<const double> phi_next, double reward, const Hyperparams& h);

struct TD0State {
  explicit TD0State(std::size_t n) : theta(n) {}
  explicit TD0State(RealVec theta_init) : theta(std::move(theta_init)) {}
  void begin_episode() {}

  RealVec theta;
};

void td0_step(TD0State& s, std::span<const double> phi, std::span<const double> phi_next,
              double reward, const Hyperparams& h);

/// Linear Dyna: LMS expectation model (F, b) of next features and reward,
/// plus uniform replay of remembered features through the model.
struct DynaState {
  DynaState(std::size_t n, std::uint64_t seed);
  DynaState(RealVec theta_init, std::uint64_t seed);
  // The model and memory span episodes.
  void begin_episode() {}

  RealVec theta;
  RealMat F;
  RealVec b;
  std::vector<RealVec> memory;
  Rng rng;
};

void dyna_step(DynaState& s, std::span<const double> phi, std::span<const double> phi_next,
               double reward, const Hyperparams& h);

inline double predict(std::span<const double> theta, std::span<const double> phi) {
  return dot(theta, phi);
}

template <typename State>
  requires requires(const State& s) { s.theta; }
double predict(const State& s, std::span<const double> phi) {
  return dot(s.theta, phi);
}

/// Any of the learners above behind one interface, as driven by the harness.
class Learner {
 public:
  Learner(Algorithm algorithm, const Hyperparams& h, std::size_t n, std::uint64_t seed = 0);

  void begin_episode();
  void step(std::span<const double> phi, std::span<const double> phi_next, double reward);
  double predict(std::span<const double> phi) const;
  const RealVec& weights() const;

  Algorithm algorithm() const noexcept { return algorithm_; }
  const Hyperparams& hyperparams() const noexcept { return h_; }

 private:
  Algorithm algorithm_;
  Hyperparams h_;
  std::variant<ReplanState, TrueOnlineTDState, TD0State, DynaState> state_;
};

}  // namespace replan
