#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaysel/belief.hpp"
#include "relaysel/radio.hpp"
#include "relaysel/rng.hpp"

namespace relaysel {

/// Grid cell of the service region. Ordering is row-major, matching
/// World::index.
struct Zone {
  int col = 0;
  int row = 0;

  friend bool operator==(const Zone&, const Zone&) = default;
  friend std::strong_ordering operator<=>(const Zone& a, const Zone& b) {
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.col <=> b.col;
  }
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct WorldConfig {
  double region_m = 100.0;
  double zone_m = 10.0;
  Zone source{2, 2};
  Zone destination{7, 7};
  int static_obstacles = 16;
  int dynamic_obstacles = 0;
  /// Chance that one dynamic obstacle on a link's path blocks it at an instant.
  double block_probability = 0.5;
  /// A static obstacle closer than this to a link segment blocks the link.
  double blocking_radius_m = 5.0;
  /// Communication range in zones (Chebyshev); 2 gives the 24 surrounding zones.
  int range_zones = 2;

  int zones_per_side() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Simulated service region: zones, static obstacles and the current zones
/// of the dynamic obstacles. Owned and mutated by one episode loop.
class World {
 public:
  const WorldConfig& config() const noexcept { return config_; }
  int zones_per_side() const noexcept { return side_; }
  std::size_t zone_count() const noexcept { return static_cast<std::size_t>(side_ * side_); }

  int index(Zone z) const noexcept { return z.row * side_ + z.col; }
  Zone zone_at(int index) const noexcept { return {index % side_, index / side_}; }
  bool contains(Zone z) const noexcept {
    return z.col >= 0 && z.row >= 0 && z.col < side_ && z.row < side_;
  }
  Point center(Zone z) const noexcept;

  std::span<const Point> static_obstacles() const noexcept { return statics_; }
  std::span<const Zone> dynamic_obstacles() const noexcept { return dynamics_; }

  double distance(Zone a, Zone b) const noexcept;
  /// Zones whose interior the centre-to-centre segment crosses.
  std::vector<int> path_zones(Zone a, Zone b) const;
  /// Whether a static obstacle lies within the blocking radius of the segment.
  bool statically_blocked(Zone a, Zone b) const;

  /// Cached path data for links leaving the source zone.
  std::span<const int> source_path(Zone relay) const;
  bool source_blocked(Zone relay) const;

  std::uint64_t block_seed() const noexcept { return block_seed_; }
  Rng& motion_rng() noexcept { return motion_; }

  /// Used by tests to stage specific obstacle layouts.
  void set_static_obstacles(std::vector<Point> points);
  void set_dynamic_obstacles(std::vector<Zone> zones);

 private:
  friend World build_world(const WorldConfig&, std::uint64_t);
  explicit World(WorldConfig config);
  void refresh_source_cache();

  WorldConfig config_;
  int side_ = 0;
  std::vector<Point> statics_;
  std::vector<Zone> dynamics_;
  std::vector<std::vector<int>> source_paths_;  // by relay zone index
  std::vector<char> source_blocked_;           // by relay zone index
  std::uint64_t block_seed_ = 0;
  Rng motion_;
};

/// Deterministic world for a seed. Static obstacles are uniform over the
/// region, redrawn when within the blocking radius of the source centre. A layout
/// that blocks every viable relay is redrawn whole; ConfigError after 1000
/// attempts. Dynamic obstacles start uniformly among the zones surrounding
/// the source.
World build_world(const WorldConfig& config, std::uint64_t seed);

/// Zones within range of `source` that are strictly closer to the
/// destination than the source itself, in zone-index order.
std::vector<Zone> viable_set(const World& world, Zone source);

/// Hidden state of link source->relay at a time key (unique per instant).
/// Blocking draws are a hash of (world seed, obstacle, link, instant), so they
/// are reproducible regardless of call order.
LinkState link_truth(const World& world, Zone relay, std::uint64_t instant);

/// One mobility step: each dynamic obstacle stays or moves to a uniformly
/// chosen in-region neighbouring zone.
void step_dynamics(World& world);

/// ACK draw given the true link state: Bernoulli(k) if good, Bernoulli(g) if bad.
Ack ack_sample(LinkState truth, const ChannelModel& model, Rng& rng);

/// RSS/SNR/capacity sample of source->relay with a fresh shadowing draw.
LinkSample sample_link(const World& world, const RadioParams& radio, Zone relay,
                       std::uint64_t instant, Rng& rng);

/// Discrete time base: packet slots of length delta, exploration instants of
/// length epsilon, global BS decisions every `slots_per_period` packet slots.
/// Time is kept in integer nanoseconds so accounting is exact.
class SlotClock {
 public:
  SlotClock(double delta_s, double epsilon_s, std::size_t slots_per_period);

  std::int64_t delta_ns() const noexcept { return delta_ns_; }
  std::int64_t epsilon_ns() const noexcept { return epsilon_ns_; }
  /// V = floor(delta / epsilon).
  std::size_t instants_per_slot() const noexcept {
    return static_cast<std::size_t>(delta_ns_ / epsilon_ns_);
  }
  std::size_t slots_per_period() const noexcept { return period_; }

  std::size_t packet_slots() const noexcept { return slots_; }
  std::size_t probes() const noexcept { return probes_; }
  std::int64_t now_ns() const noexcept {
    return static_cast<std::int64_t>(slots_) * delta_ns_ +
           static_cast<std::int64_t>(probes_) * epsilon_ns_;
  }
  double now_s() const noexcept { return static_cast<double>(now_ns()) * 1e-9; }

  std::size_t period() const noexcept { return slots_ / period_; }       ///< n
  std::size_t slot_in_period() const noexcept { return slots_ % period_; } ///< l
  bool at_global_boundary() const noexcept { return slot_in_period() == 0; }

  /// Advance by one packet slot / one probe instant. Each returns how many
  /// delta boundaries of elapsed time were crossed.
  std::size_t advance_slot();
  std::size_t advance_probe();

 private:
  std::size_t settle();

  std::int64_t delta_ns_;
  std::int64_t epsilon_ns_;
  std::size_t period_;
  std::size_t slots_ = 0;
  std::size_t probes_ = 0;
  std::int64_t boundaries_ = 0;
};

}  // namespace relaysel
