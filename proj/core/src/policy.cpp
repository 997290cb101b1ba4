#include "relaysel/policy.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace relaysel {

CostModel::CostModel(double reject_cost, double accept_cost, double probe_cost)
    : d1_(reject_cost), d2_(accept_cost), c_eps_(probe_cost) {
  if (!(d1_ > 0.0) || !(d2_ > 0.0) || !(c_eps_ > 0.0) || !std::isfinite(d1_) ||
      !std::isfinite(d2_) || !std::isfinite(c_eps_)) {
    std::ostringstream msg;
    msg << "costs must be positive and finite, got D1=" << d1_ << " D2=" << d2_
        << " c_eps=" << c_eps_;
    throw std::invalid_argument(msg.str());
  }
}

const char* to_string(Action a) noexcept {
  switch (a) {
    case Action::Reject: return "reject";
    case Action::Accept: return "accept";
    case Action::Continue: return "continue";
  }
  return "?";
}

Envelope terminal_value(const CostModel& cost) {
  const std::array<Line, 2> stop{cost.reject_line(), cost.accept_line()};
  return Envelope::from_lines(stop);
}

Backup bellman_backup(const Envelope& next_value, const ChannelModel& model,
                      const CostModel& cost) {
  Envelope expected = sum(branch_transform(next_value, model, Ack::Success),
                          branch_transform(next_value, model, Ack::Failure));
  Envelope continuation = shift(expected, cost.probe_cost());
  Envelope value = min_of(terminal_value(cost), continuation);
  return {std::move(continuation), std::move(value)};
}

Thresholds extract_thresholds(const Envelope& continuation, const CostModel& cost) {
  const double rho = cost.rho();
  const auto alpha = crossing(continuation, cost.reject_line(), Side::Leftmost, 0.0, rho);
  const auto beta = crossing(continuation, cost.accept_line(), Side::Rightmost, rho, 1.0);
  if (!alpha || !beta) return {rho, rho};
  return {*alpha, *beta};
}

Action HorizonPolicy::action(std::size_t stage, double r) const {
  const Thresholds& t = thresholds.at(stage);
  // With a single threshold the terminal rule applies: reject below rho,
  // accept at or above it.
  if (r <= t.alpha && r < rho) return Action::Reject;
  if (r >= t.beta) return Action::Accept;
  return Action::Continue;
}

HorizonPolicy solve_horizon(const ChannelModel& model, const CostModel& cost,
                            std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be at least 1");

  HorizonPolicy policy;
  policy.horizon = horizon;
  policy.rho = cost.rho();
  policy.value.resize(horizon, terminal_value(cost));
  policy.continuation.resize(horizon - 1, terminal_value(cost));
  policy.thresholds.resize(horizon, Thresholds{policy.rho, policy.rho});

  for (std::size_t m = horizon - 1; m-- > 0;) {
    Backup step = bellman_backup(policy.value[m + 1], model, cost);
    policy.thresholds[m] = extract_thresholds(step.continuation, cost);
    policy.continuation[m] = std::move(step.continuation);
    policy.value[m] = std::move(step.value);
  }
  return policy;
}

Counts counts(const ChannelModel& model, double r0, double alpha_bar, double beta_bar,
              std::size_t limit) {
  const auto first_reaching = [&](Ack w, auto reached) -> std::optional<std::size_t> {
    double r = r0;
    for (std::size_t j = 0; j <= limit; ++j) {
      if (reached(r)) return j;
      if (j == limit) break;
      r = update(model, r, w);
    }
    return std::nullopt;
  };
  Counts out;
  out.reject_after = first_reaching(Ack::Failure, [&](double r) { return r <= alpha_bar; });
  out.accept_after = first_reaching(Ack::Success, [&](double r) { return r >= beta_bar; });
  return out;
}

StationaryPolicy stationary_policy(const ChannelModel& model, const CostModel& cost,
                                   const StationaryOptions& options) {
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (options.max_iterations == 0) throw std::invalid_argument("max_iterations must be >= 1");
  if (options.cap == 0) throw std::invalid_argument("cap must be >= 1");
  require_probability(options.prior, "prior");

  StationaryPolicy out;
  out.prior = options.prior;
  out.cap = options.cap;

  Envelope value = terminal_value(cost);
  Thresholds previous{cost.rho(), cost.rho()};
  for (std::size_t i = 0; i < options.max_iterations; ++i) {
    Backup step = bellman_backup(value, model, cost);
    const Thresholds current = extract_thresholds(step.continuation, cost);
    out.history.push_back(current);
    out.iterations = i + 1;
    value = std::move(step.value);
    const bool settled = std::abs(current.alpha - previous.alpha) < options.tolerance &&
                         std::abs(current.beta - previous.beta) < options.tolerance;
    previous = current;
    if (settled) {
      out.converged = true;
      break;
    }
  }
  out.alpha_bar = previous.alpha;
  out.beta_bar = previous.beta;

  const Counts c = counts(model, out.prior, out.alpha_bar, out.beta_bar, options.count_limit);
  out.reject_after = c.reject_after;
  out.accept_after = c.accept_after;
  return out;
}

Decision decide(const StationaryPolicy& policy, std::size_t success_run,
                std::size_t failure_run, std::size_t instants_used) {
  if (policy.reject_after && failure_run >= *policy.reject_after) {
    return {Action::Reject, false};
  }
  if (policy.accept_after && success_run >= *policy.accept_after) {
    return {Action::Accept, false};
  }
  if (instants_used >= policy.cap) return {Action::Reject, true};
  return {Action::Continue, false};
}

}  // namespace relaysel
