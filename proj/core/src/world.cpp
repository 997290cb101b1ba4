#include "relaysel/world.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace relaysel {
namespace {

double point_segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

// Liang-Barsky: parameter range of segment a->b inside the box.
bool clip_segment(Point a, Point b, double x0, double y0, double x1, double y1,
                  double& t_enter, double& t_exit) {
  t_enter = 0.0;
  t_exit = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0) {
      t_enter = std::max(t_enter, t);
    } else {
      t_exit = std::min(t_exit, t);
    }
  }
  return t_enter < t_exit;
}

int chebyshev(Zone a, Zone b) { return std::max(std::abs(a.col - b.col), std::abs(a.row - b.row)); }

}  // namespace

int WorldConfig::zones_per_side() const {
  return static_cast<int>(std::lround(region_m / zone_m));
}

void WorldConfig::validate() const {
  if (!(region_m > 0.0) || !(zone_m > 0.0) || !std::isfinite(region_m) || !std::isfinite(zone_m)) {
    throw ConfigError("world.region_m and world.zone_m must be positive");
  }
  const double ratio = region_m / zone_m;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0) {
    std::ostringstream msg;
    msg << "world.region_m (" << region_m << ") must be a whole multiple of world.zone_m ("
        << zone_m << ")";
    throw ConfigError(msg.str());
  }
  const int side = zones_per_side();
  const auto inside = [side](Zone z) {
    return z.col >= 0 && z.row >= 0 && z.col < side && z.row < side;
  };
  if (!inside(source)) throw ConfigError("world.source lies outside the zone grid");
  if (!inside(destination)) throw ConfigError("world.destination lies outside the zone grid");
  if (static_obstacles < 0 || dynamic_obstacles < 0) {
    throw ConfigError("obstacle counts must be non-negative");
  }
  if (!(block_probability >= 0.0 && block_probability <= 1.0)) {
    throw ConfigError("world.block_probability must lie in [0,1]");
  }
  if (!(blocking_radius_m >= 0.0) || blocking_radius_m * 2.0 >= region_m) {
    throw ConfigError("world.blocking_radius_m must be non-negative and small against the region");
  }
  if (range_zones < 1) throw ConfigError("world.range_zones must be >= 1");
}

World::World(WorldConfig config) : config_(config), side_(config.zones_per_side()) {}

Point World::center(Zone z) const noexcept {
  return {(z.col + 0.5) * config_.zone_m, (z.row + 0.5) * config_.zone_m};
}

double World::distance(Zone a, Zone b) const noexcept {
  const Point pa = center(a);
  const Point pb = center(b);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

std::vector<int> World::path_zones(Zone a, Zone b) const {
  const Point pa = center(a);
  const Point pb = center(b);
  const double length = std::hypot(pb.x - pa.x, pb.y - pa.y);
  std::vector<int> out;
  for (int row = 0; row < side_; ++row) {
    for (int col = 0; col < side_; ++col) {
      const double x0 = col * config_.zone_m;
      const double y0 = row * config_.zone_m;
      double t0 = 0.0;
      double t1 = 0.0;
      if (!clip_segment(pa, pb, x0, y0, x0 + config_.zone_m, y0 + config_.zone_m, t0, t1)) {
        continue;
      }
      // Touching a corner or an edge only does not count as crossing a zone.
      if ((t1 - t0) * length > 1e-9 * config_.zone_m || (length == 0.0 && t0 <= t1)) {
        out.push_back(row * side_ + col);
      }
    }
  }
  return out;
}

bool World::statically_blocked(Zone a, Zone b) const {
  const Point pa = center(a);
  const Point pb = center(b);
  return std::any_of(statics_.begin(), statics_.end(), [&](const Point& p) {
    return point_segment_distance(p, pa, pb) < config_.blocking_radius_m;
  });
}

std::span<const int> World::source_path(Zone relay) const {
  return source_paths_.at(static_cast<std::size_t>(index(relay)));
}

bool World::source_blocked(Zone relay) const {
  return source_blocked_.at(static_cast<std::size_t>(index(relay))) != 0;
}

void World::refresh_source_cache() {
  source_paths_.assign(zone_count(), {});
  source_blocked_.assign(zone_count(), 0);
  for (int i = 0; i < static_cast<int>(zone_count()); ++i) {
    const Zone z = zone_at(i);
    if (z == config_.source) continue;
    source_paths_[static_cast<std::size_t>(i)] = path_zones(config_.source, z);
    source_blocked_[static_cast<std::size_t>(i)] = statically_blocked(config_.source, z) ? 1 : 0;
  }
}

void World::set_static_obstacles(std::vector<Point> points) {
  for (const Point& p : points) {
    if (!(p.x >= 0.0 && p.y >= 0.0 && p.x < config_.region_m && p.y < config_.region_m)) {
      throw ConfigError("static obstacle outside the service region");
    }
  }
  statics_ = std::move(points);
  refresh_source_cache();
}

void World::set_dynamic_obstacles(std::vector<Zone> zones) {
  for (const Zone& z : zones) {
    if (!contains(z)) throw ConfigError("dynamic obstacle outside the zone grid");
  }
  dynamics_ = std::move(zones);
}

World build_world(const WorldConfig& config, std::uint64_t seed) {
  config.validate();
  World world(config);
  Rng layout(derive_seed(seed, 0x1a7007));

  // Layouts where every viable relay is statically blocked cannot deliver
  // anything; redraw them.
  const Point source = world.center(config.source);
  const std::vector<Zone> viable = viable_set(world, config.source);
  constexpr int kMaxLayoutAttempts = 1000;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxLayoutAttempts) {
      throw ConfigError("static obstacles leave no unobstructed viable relay in " +
                        std::to_string(kMaxLayoutAttempts) + " layouts");
    }
    world.statics_.clear();
    for (int i = 0; i < config.static_obstacles; ++i) {
      Point p;
      do {
        p = {uniform01(layout) * config.region_m, uniform01(layout) * config.region_m};
      } while (std::hypot(p.x - source.x, p.y - source.y) < config.blocking_radius_m);
      world.statics_.push_back(p);
    }
    if (viable.empty()) break;
    const bool clear_relay = std::any_of(viable.begin(), viable.end(), [&](Zone z) {
      return !world.statically_blocked(config.source, z);
    });
    if (clear_relay) break;
  }

  std::vector<Zone> ring;
  for (int row = 0; row < world.side_; ++row) {
    for (int col = 0; col < world.side_; ++col) {
      const Zone z{col, row};
      const int d = chebyshev(z, config.source);
      if (d >= 1 && d <= config.range_zones) ring.push_back(z);
    }
  }
  if (config.dynamic_obstacles > 0 && ring.empty()) {
    throw ConfigError("no zones surround the source to host dynamic obstacles");
  }
  for (int i = 0; i < config.dynamic_obstacles; ++i) {
    const auto pick = static_cast<std::size_t>(uniform01(layout) * static_cast<double>(ring.size()));
    world.dynamics_.push_back(ring[std::min(pick, ring.size() - 1)]);
  }

  world.block_seed_ = derive_seed(seed, 0xb10c);
  world.motion_.seed(derive_seed(seed, 0x3071));
  world.refresh_source_cache();
  return world;
}

std::vector<Zone> viable_set(const World& world, Zone source) {
  const Zone dest = world.config().destination;
  const double own = world.distance(source, dest);
  std::vector<Zone> out;
  for (int i = 0; i < static_cast<int>(world.zone_count()); ++i) {
    const Zone z = world.zone_at(i);
    const int d = chebyshev(z, source);
    if (d < 1 || d > world.config().range_zones) continue;
    if (world.distance(z, dest) < own) out.push_back(z);
  }
  return out;
}

LinkState link_truth(const World& world, Zone relay, std::uint64_t instant) {
  if (relay == world.config().source) {
    throw std::invalid_argument("a link needs two distinct zones");
  }
  if (world.source_blocked(relay)) return LinkState::Bad;
  const auto path = world.source_path(relay);
  const auto link = static_cast<std::uint64_t>(world.index(relay));
  const double p = world.config().block_probability;
  const auto obstacles = world.dynamic_obstacles();
  for (std::size_t o = 0; o < obstacles.size(); ++o) {
    if (!std::binary_search(path.begin(), path.end(), world.index(obstacles[o]))) continue;
    const std::uint64_t bits = derive_seed(derive_seed(world.block_seed(), instant), o, link);
    if (unit_from_bits(bits) < p) return LinkState::Bad;
  }
  return LinkState::Good;
}

void step_dynamics(World& world) {
  std::vector<Zone> moved(world.dynamic_obstacles().begin(), world.dynamic_obstacles().end());
  Rng& rng = world.motion_rng();
  Zone options[9];
  for (Zone& z : moved) {
    std::size_t n = 0;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const Zone next{z.col + dc, z.row + dr};
        if (world.contains(next)) options[n++] = next;
      }
    }
    const auto pick = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    z = options[std::min(pick, n - 1)];
  }
  world.set_dynamic_obstacles(std::move(moved));
}

Ack ack_sample(LinkState truth, const ChannelModel& model, Rng& rng) {
  const double p = truth == LinkState::Good ? model.k() : model.g();
  return bernoulli(rng, p) ? Ack::Success : Ack::Failure;
}

LinkSample sample_link(const World& world, const RadioParams& radio, Zone relay,
                       std::uint64_t instant, Rng& rng) {
  const LinkState truth = link_truth(world, relay, instant);
  double shadow = 0.0;
  if (radio.shadowing_sigma_db > 0.0) {
    shadow = std::normal_distribution<double>(0.0, radio.shadowing_sigma_db)(rng);
  }
  return make_link_sample(radio, world.distance(world.config().source, relay), shadow, truth);
}

SlotClock::SlotClock(double delta_s, double epsilon_s, std::size_t slots_per_period)
    : delta_ns_(std::llround(delta_s * 1e9)),
      epsilon_ns_(std::llround(epsilon_s * 1e9)),
      period_(slots_per_period) {
  if (!(epsilon_ns_ > 0) || !(delta_ns_ > 0)) {
    throw ConfigError("timing.delta_s and timing.epsilon_s must be positive (ns resolution)");
  }
  if (!(epsilon_ns_ < delta_ns_)) throw ConfigError("timing.epsilon_s must be below timing.delta_s");
  if (period_ == 0) throw ConfigError("timing.slots_per_period must be >= 1");
}

std::size_t SlotClock::settle() {
  const std::int64_t now = now_ns() / delta_ns_;
  const auto crossed = static_cast<std::size_t>(now - boundaries_);
  boundaries_ = now;
  return crossed;
}

std::size_t SlotClock::advance_slot() {
  ++slots_;
  return settle();
}

std::size_t SlotClock::advance_probe() {
  ++probes_;
  return settle();
}

}  // namespace relaysel
