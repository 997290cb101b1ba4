#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "relaysel/config.hpp"
#include "relaysel/episode.hpp"
#include "relaysel/policy.hpp"

namespace relaysel {

struct MetricSummary {
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation
  double min = 0.0;
  double max = 0.0;
};

struct AggregateStats {
  std::size_t runs = 0;
  std::size_t completed_runs = 0;
  MetricSummary e2e_delay_s;
  MetricSummary exploration_time_s;
  MetricSummary exploration_episodes;
  MetricSummary candidates_explored;
  MetricSummary no_decision_episodes;
  MetricSummary relay_switches;
  MetricSummary packets_delivered;
  /// Undecided candidates over all candidates explored, pooled over runs.
  double no_decision_pct = 0.0;
  /// Runs with at least one relay switch.
  double switch_pct = 0.0;
  /// Share of total simulated time spent exploring, pooled over runs.
  double exploration_pct = 0.0;
  /// Exploration seconds per exploration phase, pooled over runs.
  double exploration_per_episode_s = 0.0;
};

/// Deterministic fold in run order. Throws std::invalid_argument when empty.
AggregateStats aggregate(std::span<const RunMetrics> runs);

/// Count policy for a scenario: stationary thresholds with the cap set to the
/// scenario's exploration cap.
StationaryPolicy scenario_policy(const ScenarioConfig& config);

struct MonteCarloResult {
  StationaryPolicy policy;  ///< meaningful for PolicyKind::Pomdp
  std::vector<RunMetrics> runs;
  AggregateStats stats;
};

/// Runs config.runs episodes with seeds episode_seed(config.seed, i) on
/// `threads` workers (0 picks the hardware concurrency). Results do not
/// depend on the worker count.
MonteCarloResult monte_carlo(const ScenarioConfig& config, std::size_t threads = 0);

enum class SweepAxis { M, D };

const char* to_string(SweepAxis axis);
/// Accepts "M" or "D"; throws std::invalid_argument otherwise.
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepPoint {
  std::size_t value = 0;
  PolicyKind policy = PolicyKind::Pomdp;
  MonteCarloResult result;
};

/// Scenario with one axis value applied: M sets the exploration cap, D the
/// dynamic obstacle count.
ScenarioConfig with_axis_value(const ScenarioConfig& config, SweepAxis axis, std::size_t value);

/// One Monte Carlo per (value, policy), value-major. Every point reuses the
/// base seed so policies and axis values see common random numbers. Throws
/// std::invalid_argument when `values` or `policies` is empty.
std::vector<SweepPoint> sweep(const ScenarioConfig& config, SweepAxis axis,
                              std::span<const std::size_t> values,
                              std::span<const PolicyKind> policies, std::size_t threads = 0);

}  // namespace relaysel
