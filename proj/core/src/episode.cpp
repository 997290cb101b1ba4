#include "relaysel/episode.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace relaysel {
namespace {

// Probes the simulated world, advancing the shared clock one instant per
// probe and stepping obstacle motion on every delta boundary crossed.
class WorldProber final : public LinkProber {
 public:
  WorldProber(World& world, SlotClock& clock, const ScenarioConfig& config,
              std::uint64_t seed, std::size_t run, std::vector<TraceRecord>* trace)
      : world_(world),
        clock_(clock),
        config_(config),
        shadow_rng_(derive_seed(seed, 0x5ad0)),
        ack_rng_(derive_seed(seed, 0xac4)),
        run_(run),
        trace_(trace) {}

  ProbeResult probe(Zone relay) override {
    const auto instant = static_cast<std::uint64_t>(clock_.now_ns());
    ProbeResult out;
    out.sample = sample_link(world_, config_.radio, relay, instant, shadow_rng_);
    out.ack = ack_sample(out.sample.truth, config_.channel, ack_rng_);

    if (last_probe_ && *last_probe_ == relay && last_probe_time_ + clock_.epsilon_ns() ==
                                                     clock_.now_ns()) {
      ++sequence_;
    } else {
      sequence_ = 0;
    }
    last_probe_ = relay;
    last_probe_time_ = clock_.now_ns();
    if (trace_) {
      trace_->push_back({run_, clock_.now_s(), world_.index(relay), sequence_, out.sample.truth,
                         out.ack, out.sample.rss_dbm});
    }

    for (std::size_t steps = clock_.advance_probe(); steps > 0; --steps) step_dynamics(world_);
    return out;
  }

 private:
  World& world_;
  SlotClock& clock_;
  const ScenarioConfig& config_;
  Rng shadow_rng_;
  Rng ack_rng_;
  std::size_t run_;
  std::vector<TraceRecord>* trace_;
  std::optional<Zone> last_probe_;
  std::int64_t last_probe_time_ = 0;
  std::size_t sequence_ = 0;
};

}  // namespace

PomdpSelection pomdp_select(std::span<const Zone> candidates, const StationaryPolicy& policy,
                            LinkProber& prober) {
  PomdpSelection out;
  for (const Zone& candidate : candidates) {
    ++out.candidates_explored;
    std::size_t success_run = 0;
    std::size_t failure_run = 0;
    std::size_t used = 0;
    for (;;) {
      const Decision d = decide(policy, success_run, failure_run, used);
      if (d.action == Action::Accept) {
        out.chosen = candidate;
        return out;
      }
      if (d.action == Action::Reject) {
        if (d.no_decision) ++out.no_decisions;
        break;
      }
      const ProbeResult r = prober.probe(candidate);
      ++used;
      ++out.instants;
      if (r.ack == Ack::Success) {
        ++success_run;
        failure_run = 0;
      } else {
        ++failure_run;
        success_run = 0;
      }
    }
  }
  return out;
}

RssSelection rss_baseline_select(std::span<const Zone> candidates, LinkProber& prober) {
  if (candidates.empty()) throw std::invalid_argument("no candidates to select from");
  RssSelection out;
  out.rss_dbm.reserve(candidates.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out.rss_dbm.push_back(prober.probe(candidates[i]).sample.rss_dbm);
    ++out.instants;
    const double rss = out.rss_dbm[i];
    if (rss > out.rss_dbm[best] || (rss == out.rss_dbm[best] && candidates[i] < candidates[best])) {
      best = i;
    }
  }
  out.chosen = candidates[best];
  return out;
}

std::uint64_t episode_seed(std::uint64_t base_seed, std::size_t index) {
  return derive_seed(base_seed, 0xe915, static_cast<std::uint64_t>(index));
}

RunMetrics run_episode(const ScenarioConfig& config, const StationaryPolicy* policy,
                       std::uint64_t seed, std::vector<TraceRecord>* trace,
                       std::size_t run_id) {
  if (config.policy == PolicyKind::Pomdp && policy == nullptr) {
    throw std::invalid_argument("pomdp episodes need a stationary policy");
  }
  World world = build_world(config.world, seed);
  const std::vector<Zone> viable = viable_set(world, config.world.source);
  if (viable.empty()) {
    throw ConfigError("the source zone has no viable relay zones toward the destination");
  }

  // The BS ranks relays by their large-scale link budget; it has no view of
  // the obstacles.
  Zone bs_choice = viable.front();
  for (const Zone& z : viable) {
    const double d = world.distance(config.world.source, z);
    const double best = world.distance(config.world.source, bs_choice);
    if (d < best || (d == best && z < bs_choice)) bs_choice = z;
  }

  SlotClock clock(config.timing.delta_s, config.timing.epsilon_s,
                  config.timing.slots_per_period);
  WorldProber prober(world, clock, config, seed, run_id, trace);

  RunMetrics m;
  std::optional<Zone> relay;
  std::size_t consecutive_failures = 0;

  const auto switch_to = [&](Zone next) {
    if (relay && *relay != next) ++m.relay_switches;
    relay = next;
  };

  while (m.packets_delivered < config.traffic.packets &&
         clock.packet_slots() < config.traffic.max_slots) {
    if (clock.at_global_boundary()) switch_to(bs_choice);

    const auto instant = static_cast<std::uint64_t>(clock.now_ns());
    if (link_truth(world, *relay, instant) == LinkState::Good) {
      ++m.packets_delivered;
      consecutive_failures = 0;
    } else {
      ++consecutive_failures;
    }
    for (std::size_t steps = clock.advance_slot(); steps > 0; --steps) step_dynamics(world);

    if (consecutive_failures < config.traffic.failure_trigger ||
        m.packets_delivered >= config.traffic.packets) {
      continue;
    }

    ++m.exploration_episodes;
    consecutive_failures = 0;
    // The bootstrap scan doubles as the RSS baseline's decision and as the
    // candidate ordering for the count policy.
    const RssSelection scan = rss_baseline_select(viable, prober);
    if (config.policy == PolicyKind::Rss) {
      switch_to(scan.chosen);
      continue;
    }
    std::vector<std::size_t> order(viable.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scan.rss_dbm[a] != scan.rss_dbm[b]) return scan.rss_dbm[a] > scan.rss_dbm[b];
      return viable[a] < viable[b];
    });
    std::vector<Zone> ranked;
    ranked.reserve(order.size());
    for (std::size_t i : order) ranked.push_back(viable[i]);

    const PomdpSelection pick = pomdp_select(ranked, *policy, prober);
    m.candidates_explored += pick.candidates_explored;
    m.no_decision_episodes += pick.no_decisions;
    // Nothing accepted in a full pass: fall back to the strongest candidate.
    switch_to(pick.chosen.value_or(ranked.front()));
  }

  m.packet_slots = clock.packet_slots();
  m.probes = clock.probes();
  m.completed = m.packets_delivered >= config.traffic.packets;
  m.e2e_delay_s = clock.now_s();
  m.exploration_time_s = static_cast<double>(static_cast<std::int64_t>(m.probes) *
                                             clock.epsilon_ns()) * 1e-9;
  return m;
}

}  // namespace relaysel
