#include "relaysel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "relaysel/stats.hpp"

namespace relaysel {
namespace {

template <typename Get>
MetricSummary summarize(std::span<const RunMetrics> runs, Get get) {
  std::vector<double> xs;
  xs.reserve(runs.size());
  for (const RunMetrics& r : runs) xs.push_back(static_cast<double>(get(r)));
  MetricSummary s;
  s.mean = mean(xs);
  s.sd = sample_sd(xs);
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  s.min = *lo;
  s.max = *hi;
  // Guard the summation error so the mean never leaves [min, max].
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

double percent(double part, double whole) { return whole > 0.0 ? 100.0 * part / whole : 0.0; }

}  // namespace

AggregateStats aggregate(std::span<const RunMetrics> runs) {
  if (runs.empty()) throw std::invalid_argument("cannot aggregate zero runs");
  AggregateStats a;
  a.runs = runs.size();
  a.e2e_delay_s = summarize(runs, [](const RunMetrics& r) { return r.e2e_delay_s; });
  a.exploration_time_s = summarize(runs, [](const RunMetrics& r) { return r.exploration_time_s; });
  a.exploration_episodes =
      summarize(runs, [](const RunMetrics& r) { return r.exploration_episodes; });
  a.candidates_explored = summarize(runs, [](const RunMetrics& r) { return r.candidates_explored; });
  a.no_decision_episodes =
      summarize(runs, [](const RunMetrics& r) { return r.no_decision_episodes; });
  a.relay_switches = summarize(runs, [](const RunMetrics& r) { return r.relay_switches; });
  a.packets_delivered = summarize(runs, [](const RunMetrics& r) { return r.packets_delivered; });

  double undecided = 0, explored = 0, switching = 0, explore_s = 0, total_s = 0, phases = 0;
  for (const RunMetrics& r : runs) {
    if (r.completed) ++a.completed_runs;
    undecided += static_cast<double>(r.no_decision_episodes);
    explored += static_cast<double>(r.candidates_explored);
    if (r.relay_switches > 0) ++switching;
    explore_s += r.exploration_time_s;
    total_s += r.e2e_delay_s;
    phases += static_cast<double>(r.exploration_episodes);
  }
  a.no_decision_pct = percent(undecided, explored);
  a.switch_pct = percent(switching, static_cast<double>(runs.size()));
  a.exploration_pct = percent(explore_s, total_s);
  a.exploration_per_episode_s = phases > 0 ? explore_s / phases : 0.0;
  return a;
}

StationaryPolicy scenario_policy(const ScenarioConfig& config) {
  StationaryOptions options;
  options.prior = config.solver.prior;
  options.cap = config.timing.exploration_cap;
  options.tolerance = config.solver.tolerance;
  options.max_iterations = config.solver.max_iterations;
  return stationary_policy(config.channel, config.cost, options);
}

MonteCarloResult monte_carlo(const ScenarioConfig& config, std::size_t threads) {
  config.validate();
  MonteCarloResult out;
  const bool pomdp = config.policy == PolicyKind::Pomdp;
  if (pomdp) out.policy = scenario_policy(config);
  const StationaryPolicy* policy = pomdp ? &out.policy : nullptr;

  out.runs.resize(config.runs);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, config.runs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.runs) return;
      try {
        out.runs[i] = run_episode(config, policy, episode_seed(config.seed, i));
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(config.runs);
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  out.stats = aggregate(out.runs);
  return out;
}

const char* to_string(SweepAxis axis) { return axis == SweepAxis::M ? "M" : "D"; }

SweepAxis parse_sweep_axis(const std::string& text) {
  if (text == "M") return SweepAxis::M;
  if (text == "D") return SweepAxis::D;
  throw std::invalid_argument("sweep axis must be M or D, got '" + text + "'");
}

ScenarioConfig with_axis_value(const ScenarioConfig& config, SweepAxis axis, std::size_t value) {
  ScenarioConfig c = config;
  if (axis == SweepAxis::M) {
    c.timing.exploration_cap = value;
  } else {
    if (value > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
      throw ConfigError("dynamic obstacle count out of range");
    }
    c.world.dynamic_obstacles = static_cast<int>(value);
  }
  c.validate();
  return c;
}

std::vector<SweepPoint> sweep(const ScenarioConfig& config, SweepAxis axis,
                              std::span<const std::size_t> values,
                              std::span<const PolicyKind> policies, std::size_t threads) {
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  if (policies.empty()) throw std::invalid_argument("sweep needs at least one policy");
  // Validate every point before running any.
  std::vector<ScenarioConfig> scenarios;
  for (std::size_t v : values) {
    for (PolicyKind p : policies) {
      scenarios.push_back(with_axis_value(config, axis, v));
      scenarios.back().policy = p;
    }
  }
  std::vector<SweepPoint> out;
  out.reserve(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    out.push_back({values[i / policies.size()], scenarios[i].policy,
                   monte_carlo(scenarios[i], threads)});
  }
  return out;
}

}  // namespace relaysel
