#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relaysel/calibrate.hpp"
#include "relaysel/config.hpp"
#include "relaysel/policy.hpp"
#include "relaysel/world.hpp"

namespace relaysel {

/// Per-run measurements.
struct RunMetrics {
  double e2e_delay_s = 0.0;         ///< time to deliver the packet target
  double exploration_time_s = 0.0;  ///< probe instants times epsilon
  std::size_t exploration_episodes = 0;  ///< exploration phases started
  std::size_t candidates_explored = 0;   ///< candidates probed under the count policy
  std::size_t no_decision_episodes = 0;  ///< candidates that hit the cap undecided
  std::size_t relay_switches = 0;
  std::size_t packets_delivered = 0;
  std::size_t packet_slots = 0;  ///< delivered plus failed slots
  std::size_t probes = 0;
  bool completed = false;  ///< packet target reached within traffic.max_slots
};

struct ProbeResult {
  LinkSample sample;
  Ack ack = Ack::Failure;
};

/// Source of probe outcomes during exploration. Each call costs one
/// exploration instant.
class LinkProber {
 public:
  virtual ~LinkProber() = default;
  virtual ProbeResult probe(Zone relay) = 0;
};

struct PomdpSelection {
  std::optional<Zone> chosen;
  std::size_t instants = 0;
  std::size_t no_decisions = 0;
  std::size_t candidates_explored = 0;
};

/// Count policy applied to each candidate in order until one is accepted.
/// Rejected and undecided candidates are not revisited.
PomdpSelection pomdp_select(std::span<const Zone> candidates, const StationaryPolicy& policy,
                            LinkProber& prober);

struct RssSelection {
  Zone chosen;
  std::size_t instants = 0;
  std::vector<double> rss_dbm;  ///< per candidate, in input order
};

/// One probe per candidate, keep the strongest; ties go to the lowest zone.
/// Throws std::invalid_argument on an empty candidate list.
RssSelection rss_baseline_select(std::span<const Zone> candidates, LinkProber& prober);

/// Runs one closed-loop episode: BS assignment at period boundaries, one
/// packet per slot, exploration after `failure_trigger` consecutive losses.
/// `policy` must be set when config.policy is Pomdp. Probe records are
/// appended to `trace` when given, tagged with `run_id`.
RunMetrics run_episode(const ScenarioConfig& config, const StationaryPolicy* policy,
                       std::uint64_t seed, std::vector<TraceRecord>* trace = nullptr,
                       std::size_t run_id = 0);

/// Seed of run `index` under a base seed.
std::uint64_t episode_seed(std::uint64_t base_seed, std::size_t index);

}  // namespace relaysel
