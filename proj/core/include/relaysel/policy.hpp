#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "relaysel/belief.hpp"
#include "relaysel/envelope.hpp"

namespace relaysel {

/// Stop and continuation costs of the exploration problem.
///
/// reject_cost (D1) is charged with weight r when a link is dropped although
/// it was good; accept_cost (D2) with weight 1-r when a link is selected
/// although it was bad; probe_cost (c_eps) per extra probe instant.
class CostModel {
 public:
  CostModel(double reject_cost, double accept_cost, double probe_cost);
  static CostModel defaults() { return {30.0, 10.0, 0.06}; }

  double reject_cost() const noexcept { return d1_; }
  double accept_cost() const noexcept { return d2_; }
  double probe_cost() const noexcept { return c_eps_; }

  /// Belief at which both stop costs coincide: D2 / (D1 + D2).
  double rho() const noexcept { return d2_ / (d1_ + d2_); }
  /// Largest terminal cost, attained at rho: D1 D2 / (D1 + D2).
  double peak() const noexcept { return d1_ * d2_ / (d1_ + d2_); }
  /// False when probing can never beat stopping (c_eps >= peak).
  bool continuation_useful() const noexcept { return c_eps_ < peak(); }

  Line reject_line() const noexcept { return {0.0, d1_}; }
  Line accept_line() const noexcept { return {d2_, -d2_}; }

 private:
  double d1_;
  double d2_;
  double c_eps_;
};

enum class Action { Reject, Accept, Continue };

const char* to_string(Action a) noexcept;

struct Thresholds {
  double alpha = 0.0;  ///< reject when r <= alpha
  double beta = 1.0;   ///< accept when r >= beta
};

/// min{r D1, (1-r) D2}.
Envelope terminal_value(const CostModel& cost);

struct Backup {
  Envelope continuation;  ///< E_m
  Envelope value;         ///< K_m
};

/// One step of the finite-horizon recursion from the next-stage value.
Backup bellman_backup(const Envelope& next_value, const ChannelModel& model,
                      const CostModel& cost);

/// Reject/accept thresholds of a stage from its continuation cost. Each stop
/// line is searched only on its own side of rho; no crossing collapses the
/// threshold onto rho.
Thresholds extract_thresholds(const Envelope& continuation, const CostModel& cost);

/// Optimal finite-horizon policy for horizon M.
struct HorizonPolicy {
  std::size_t horizon = 0;
  double rho = 0.0;
  std::vector<Envelope> value;         ///< K_0 .. K_{M-1}
  std::vector<Envelope> continuation;  ///< E_0 .. E_{M-2}; the last stage must stop
  std::vector<Thresholds> thresholds;  ///< per stage, last one is (rho, rho)

  Action action(std::size_t stage, double r) const;
};

/// Throws std::invalid_argument when horizon == 0.
HorizonPolicy solve_horizon(const ChannelModel& model, const CostModel& cost,
                            std::size_t horizon);

struct Counts {
  std::optional<std::size_t> reject_after;  ///< c, successive failures
  std::optional<std::size_t> accept_after;  ///< d, successive successes
};

/// Smallest run lengths whose pure-failure / pure-success beliefs from r0 reach
/// the stationary thresholds, searched up to `limit` observations. A count of
/// zero means the prior already sits past the threshold.
Counts counts(const ChannelModel& model, double r0, double alpha_bar, double beta_bar,
              std::size_t limit);

struct StationaryPolicy {
  double alpha_bar = 0.0;
  double beta_bar = 1.0;
  double prior = 0.5;
  std::optional<std::size_t> reject_after;  ///< c
  std::optional<std::size_t> accept_after;  ///< d
  std::size_t cap = 1;                      ///< M, probes per candidate
  std::size_t iterations = 0;
  bool converged = false;
  /// Threshold pairs after each backup; index i is the stage-0 pair of a
  /// horizon-(i+2) problem.
  std::vector<Thresholds> history;
};

struct StationaryOptions {
  double prior = 0.5;
  std::size_t cap = 4;
  double tolerance = 1e-9;
  std::size_t max_iterations = 10'000;
  std::size_t count_limit = 256;
};

/// Iterates backups from the terminal value until both thresholds move by less
/// than the tolerance, then derives the count policy.
StationaryPolicy stationary_policy(const ChannelModel& model, const CostModel& cost,
                                   const StationaryOptions& options = {});

struct Decision {
  Action action = Action::Continue;
  bool no_decision = false;  ///< cap reached without crossing a threshold
};

/// Count policy on the current trailing runs of identical ACKs.
Decision decide(const StationaryPolicy& policy, std::size_t success_run,
                std::size_t failure_run, std::size_t instants_used);

}  // namespace relaysel
