#include "replan/learners.hpp"

#include <cmath>
#include <string>

#include "replan/errors.hpp"

namespace replan {

namespace {

void check_transition(std::size_t n, std::span<const double> phi, std::span<const double> phi_next,
                      double reward) {
  if (phi.size() != n || phi_next.size() != n) {
    throw DimensionError("step: expected " + std::to_string(n) + " features, got " +
                         std::to_string(phi.size()) + " and " + std::to_string(phi_next.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(phi[i]) || !std::isfinite(phi_next[i])) {
      throw NumericError("step: non-finite feature at index " + std::to_string(i));
    }
  }
  if (!std::isfinite(reward)) throw NumericError("step: non-finite reward");
  // Hyperparameters are checked by Hyperparams::validate; alpha = 0 is allowed here.
}

void check_hyperparams(const Hyperparams& h) {
  if (!std::isfinite(h.alpha) || !std::isfinite(h.gamma) || !std::isfinite(h.lambda) ||
      !std::isfinite(h.lambda_replay)) {
    throw NumericError("step: non-finite hyperparameter");
  }
}

// e <- gamma*lambda*e + alpha*phi*(1 - gamma*lambda*e^T phi)
void dutch_trace_update(RealVec& e, std::span<const double> phi, const Hyperparams& h) {
  const double gl = h.gamma * h.lambda;
  const double scale = h.alpha * (1.0 - gl * dot(e, phi));
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = gl * e[i] + scale * phi[i];
}

}  // namespace

void Hyperparams::validate() const {
  auto in_unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  if (!(std::isfinite(alpha) && alpha > 0.0)) throw UsageError("alpha must be finite and > 0");
  if (!in_unit(gamma)) throw UsageError("gamma must lie in [0, 1]");
  if (!in_unit(lambda)) throw UsageError("lambda must lie in [0, 1]");
  if (!in_unit(lambda_replay)) throw UsageError("lambda-replay must lie in [0, 1]");
  if (dyna_planning_steps < 0) throw UsageError("planning steps must be >= 0");
}

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Replan:
      return "replan";
    case Algorithm::ReplanInterp:
      return "replan_interp";
    case Algorithm::TrueOnlineTD:
      return "true_online_td";
    case Algorithm::TD0:
      return "td0";
    case Algorithm::Dyna:
      return "dyna";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::Replan, Algorithm::ReplanInterp, Algorithm::TrueOnlineTD,
                 Algorithm::TD0, Algorithm::Dyna}) {
    if (to_string(a) == name) return a;
  }
  throw UsageError("unknown algorithm '" + std::string(name) +
                   "' (expected replan, replan_interp, true_online_td, td0 or dyna)");
}

// --- Replan -----------------------------------------------------------------

ReplanState::ReplanState(std::size_t n) : ReplanState(RealVec(n)) {}

ReplanState::ReplanState(RealVec theta_init)
    : theta(std::move(theta_init)),
      theta_ep0(theta.size()),
      e(theta.size()),
      e_bar(theta.size()),
      A_bar(theta.size()),
      scratch_(theta.size()),
      blend_(theta.size()) {
  if (theta.empty()) throw DimensionError("ReplanState: need at least one feature");
  begin_episode();
}

void ReplanState::begin_episode() {
  theta_ep0 = theta;
  e.fill(0.0);
  e_bar.fill(0.0);
  A_bar.set_identity();
  v_old = 0.0;
}

void replan_step_impl(ReplanState& s, std::span<const double> phi,
                      std::span<const double> phi_next, double reward, const Hyperparams& h,
                      double lambda_replay) {
  check_transition(s.size(), phi, phi_next, reward);
  check_hyperparams(h);

  const double v = dot(s.theta, phi);
  const double v_next = dot(s.theta, phi_next);
  const double delta = reward + h.gamma * v_next - v;

  dutch_trace_update(s.e, phi, h);

  // e_bar <- e_bar - alpha*phi*(e_bar^T phi - v_old) + e*(delta + v - v_old)
  const double shrink = h.alpha * (dot(s.e_bar, phi) - s.v_old);
  const double corrected = delta + v - s.v_old;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s.e_bar[i] = s.e_bar[i] - shrink * phi[i] + corrected * s.e[i];
  }

  rank1_left_update_inplace(s.A_bar, phi, h.alpha, s.scratch_);

  for (std::size_t i = 0; i < s.size(); ++i) {
    s.blend_[i] = lambda_replay * s.theta[i] + (1.0 - lambda_replay) * s.theta_ep0[i];
  }
  mat_vec_into(s.A_bar, s.blend_, s.theta);
  for (std::size_t i = 0; i < s.size(); ++i) s.theta[i] += s.e_bar[i];

  s.v_old = v_next;
}

void replan_step(ReplanState& s, std::span<const double> phi, std::span<const double> phi_next,
                 double reward, const Hyperparams& h) {
  replan_step_impl(s, phi, phi_next, reward, h, 1.0);
}

void replan_interpolated_step(ReplanState& s, std::span<const double> phi,
                              std::span<const double> phi_next, double reward,
                              const Hyperparams& h) {
  replan_step_impl(s, phi, phi_next, reward, h, h.lambda_replay);
}

// --- True online TD(lambda) -------------------------------------------------

TrueOnlineTDState::TrueOnlineTDState(std::size_t n) : TrueOnlineTDState(RealVec(n)) {}

TrueOnlineTDState::TrueOnlineTDState(RealVec theta_init)
    : theta(std::move(theta_init)), e(theta.size()) {
  if (theta.empty()) throw DimensionError("TrueOnlineTDState: need at least one feature");
}

void TrueOnlineTDState::begin_episode() {
  e.fill(0.0);
  v_old = 0.0;
}

void true_online_td_step(TrueOnlineTDState& s, std::span<const double> phi,
                         std::span<const double> phi_next, double reward, const Hyperparams& h) {
  check_transition(s.theta.size(), phi, phi_next, reward);
  check_hyperparams(h);

  const double v = dot(s.theta, phi);
  const double v_next = dot(s.theta, phi_next);
  const double delta = reward + h.gamma * v_next - v;

  dutch_trace_update(s.e, phi, h);

  const double trace_coef = delta + v - s.v_old;
  const double phi_coef = h.alpha * (v - s.v_old);
  for (std::size_t i = 0; i < s.theta.size(); ++i) {
    s.theta[i] += trace_coef * s.e[i] - phi_coef * phi[i];
  }
  s.v_old = v_next;
}

// --- TD(0) ------------------------------------------------------------------

void td0_step(TD0State& s, std::span<const double> phi, std::span<const double> phi_next,
              double reward, const Hyperparams& h) {
  check_transition(s.theta.size(), phi, phi_next, reward);
  check_hyperparams(h);
  const double delta = reward + h.gamma * dot(s.theta, phi_next) - dot(s.theta, phi);
  axpy_inplace(s.theta, h.alpha * delta, phi);
}

// --- Dyna -------------------------------------------------------------------

DynaState::DynaState(std::size_t n, std::uint64_t seed) : DynaState(RealVec(n), seed) {}

DynaState::DynaState(RealVec theta_init, std::uint64_t seed)
    : theta(std::move(theta_init)), F(theta.size()), b(theta.size()), rng(seed) {
  if (theta.empty()) throw DimensionError("DynaState: need at least one feature");
}

void dyna_step(DynaState& s, std::span<const double> phi, std::span<const double> phi_next,
               double reward, const Hyperparams& h) {
  const std::size_t n = s.theta.size();
  check_transition(n, phi, phi_next, reward);
  check_hyperparams(h);

  // Direct experience.
  const double delta = reward + h.gamma * dot(s.theta, phi_next) - dot(s.theta, phi);
  axpy_inplace(s.theta, h.alpha * delta, phi);

  // Model: F <- F + alpha (phi' - F phi) phi^T,  b <- b + alpha (R - b^T phi) phi.
  RealVec err = mat_vec(s.F, phi);
  for (std::size_t i = 0; i < n; ++i) err[i] = h.alpha * (phi_next[i] - err[i]);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = s.F.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] += err[i] * phi[j];
  }
  axpy_inplace(s.b, h.alpha * (reward - dot(s.b, phi)), phi);

  s.memory.emplace_back(std::vector<double>(phi.begin(), phi.end()));

  if (s.memory.empty()) return;
  RealVec predicted_next(n);
  for (int k = 0; k < h.dyna_planning_steps; ++k) {
    const RealVec& sampled = s.memory[uniform_index(s.rng, s.memory.size())];
    mat_vec_into(s.F, sampled, predicted_next);
    const double r_hat = dot(s.b, sampled);
    const double d = r_hat + h.gamma * dot(s.theta, predicted_next) - dot(s.theta, sampled);
    axpy_inplace(s.theta, h.alpha * d, sampled);
  }
}

// --- Learner ----------------------------------------------------------------

Learner::Learner(Algorithm algorithm, const Hyperparams& h, std::size_t n, std::uint64_t seed)
    : algorithm_(algorithm), h_(h), state_(TD0State(n)) {
  switch (algorithm) {
    case Algorithm::Replan:
    case Algorithm::ReplanInterp:
      state_.emplace<ReplanState>(n);
      break;
    case Algorithm::TrueOnlineTD:
      state_.emplace<TrueOnlineTDState>(n);
      break;
    case Algorithm::TD0:
      break;
    case Algorithm::Dyna:
      state_.emplace<DynaState>(n, seed);
      break;
  }
}

void Learner::begin_episode() {
  std::visit([](auto& s) { s.begin_episode(); }, state_);
}

void Learner::step(std::span<const double> phi, std::span<const double> phi_next, double reward) {
  switch (algorithm_) {
    case Algorithm::Replan:
      replan_step(std::get<ReplanState>(state_), phi, phi_next, reward, h_);
      break;
    case Algorithm::ReplanInterp:
      replan_interpolated_step(std::get<ReplanState>(state_), phi, phi_next, reward, h_);
      break;
    case Algorithm::TrueOnlineTD:
      true_online_td_step(std::get<TrueOnlineTDState>(state_), phi, phi_next, reward, h_);
      break;
    case Algorithm::TD0:
      td0_step(std::get<TD0State>(state_), phi, phi_next, reward, h_);
      break;
    case Algorithm::Dyna:
      dyna_step(std::get<DynaState>(state_), phi, phi_next, reward, h_);
      break;
  }
}

double Learner::predict(std::span<const double> phi) const { return dot(weights(), phi); }

const RealVec& Learner::weights() const {
  return std::visit([](const auto& s) -> const RealVec& { return s.theta; }, state_);
}

}  // namespace replan
