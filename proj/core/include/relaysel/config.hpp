#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "relaysel/belief.hpp"
#include "relaysel/policy.hpp"
#include "relaysel/radio.hpp"
#include "relaysel/world.hpp"

namespace relaysel {

enum class PolicyKind { Pomdp, Rss };

const char* to_string(PolicyKind kind) noexcept;
/// Accepts "pomdp" or "rss"; throws ConfigError otherwise.
PolicyKind parse_policy_kind(std::string_view text);

struct TimingParams {
  double delta_s = 0.1;            ///< packet slot
  double epsilon_s = 0.001;        ///< exploration instant
  std::size_t slots_per_period = 20;  ///< N, packet slots between BS decisions
  std::size_t exploration_cap = 4;    ///< M, probes per candidate
};

struct TrafficParams {
  std::size_t packets = 100;
  /// Consecutive packet failures on the current relay that start exploration.
  std::size_t failure_trigger = 2;
  /// Safety bound on packet slots per run; a run hitting it is incomplete.
  std::size_t max_slots = 100'000;
};

struct SolverParams {
  double prior = 0.5;
  double tolerance = 1e-9;
  std::size_t max_iterations = 10'000;
};

/// Everything one experiment needs. Every field has a default; a config
/// document only lists what it changes.
struct ScenarioConfig {
  WorldConfig world;
  RadioParams radio;
  ChannelModel channel = ChannelModel::defaults();
  CostModel cost = CostModel::defaults();
  TimingParams timing;
  TrafficParams traffic;
  SolverParams solver;
  PolicyKind policy = PolicyKind::Pomdp;
  std::size_t runs = 1000;
  std::uint64_t seed = 1;

  /// Throws ConfigError.
  void validate() const;
};

/// Parses a JSON document; unknown keys and invalid values raise ConfigError.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Full document including defaults, keys in a stable order.
std::string dump_config(const ScenarioConfig& config);

}  // namespace relaysel
