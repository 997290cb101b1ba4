#include <cmath>
#include <set>

#include "doctest.h"
#include "relaysel/radio.hpp"
#include "relaysel/world.hpp"

using namespace relaysel;

namespace {

WorldConfig empty_world() {
  WorldConfig c;
  c.static_obstacles = 0;
  c.dynamic_obstacles = 0;
  return c;
}

RadioParams quiet_radio() {
  RadioParams r;
  r.shadowing_sigma_db = 0.0;
  return r;
}

}  // namespace

TEST_CASE("path loss and link budget") {
  const RadioParams r;
  CHECK(reference_loss_db(r) == doctest::Approx(68.0).epsilon(1e-3));
  CHECK(path_loss_db(r, 1) == doctest::Approx(68.0).epsilon(1e-3));
  CHECK(path_loss_db(r, 10) == doctest::Approx(93.0).epsilon(1e-3));
  CHECK(path_loss_db(r, 100) == doctest::Approx(118.0).epsilon(1e-3));
  CHECK_THROWS_AS(path_loss_db(r, 0), std::domain_error);
  CHECK_THROWS_AS(path_loss_db(r, -3), std::domain_error);
  for (double d = 1; d < 200; d += 7) CHECK(path_loss_db(r, d + 1) > path_loss_db(r, d));

  CHECK(noise_floor_dbm(r) == doctest::Approx(-100.99).epsilon(1e-4));
  const LinkSample s = make_link_sample(r, 10, 0, LinkState::Good);
  CHECK(s.rss_dbm == doctest::Approx(-57.0).epsilon(1e-3));
  CHECK(10 * std::log10(s.snr_linear) == doctest::Approx(43.99).epsilon(1e-3));
  CHECK(s.capacity_bps == doctest::Approx(2.92e8).epsilon(2e-3));
  CHECK(std::abs(s.capacity_bps - r.bandwidth_hz * std::log2(1 + s.snr_linear)) <=
        1e-9 * s.capacity_bps);
  CHECK(s.airtime_s(r) == doctest::Approx(1.8e-3).epsilon(0.01));
  CHECK(capacity_bps(r, 10) > capacity_bps(r, 9));
}

TEST_CASE("radio validation") {
  RadioParams r;
  r.path_loss_exponent = 1.5;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  r = RadioParams{};
  r.bandwidth_hz = 0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("world config validation") {
  WorldConfig c;
  CHECK_NOTHROW(c.validate());
  c.zone_m = 30;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = WorldConfig{};
  c.source = {10, 0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = WorldConfig{};
  c.dynamic_obstacles = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = WorldConfig{};
  c.block_probability = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("build_world") {
  const WorldConfig c;
  const World a = build_world(c, 42);
  const World b = build_world(c, 42);
  CHECK(a.zones_per_side() == 10);
  REQUIRE(a.static_obstacles().size() == 16);
  for (std::size_t i = 0; i < 16; ++i) {
    const Point p = a.static_obstacles()[i];
    CHECK(p.x == b.static_obstacles()[i].x);
    CHECK(p.y == b.static_obstacles()[i].y);
    CHECK((p.x >= 0 && p.x < 100 && p.y >= 0 && p.y < 100));
  }
  CHECK(a.dynamic_obstacles().empty());

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const World w = build_world(c, seed);
    bool clear = false;
    for (Zone z : viable_set(w, c.source)) clear = clear || !w.statically_blocked(c.source, z);
    CHECK(clear);
  }

  WorldConfig busy;
  busy.dynamic_obstacles = 16;
  const World d = build_world(busy, 7);
  REQUIRE(d.dynamic_obstacles().size() == 16);
  for (Zone z : d.dynamic_obstacles()) {
    const int cheb = std::max(std::abs(z.col - 2), std::abs(z.row - 2));
    CHECK((cheb >= 1 && cheb <= 2));
  }
  // Static layout does not depend on the dynamic obstacle count.
  for (std::size_t i = 0; i < 16; ++i) {
    CHECK(d.static_obstacles()[i].x == build_world(c, 7).static_obstacles()[i].x);
  }
}

TEST_CASE("viable set") {
  const World w = build_world(empty_world(), 1);
  const auto v = viable_set(w, {2, 2});
  CHECK(v.size() == 10);
  for (Zone z : v) CHECK(w.distance(z, {7, 7}) < w.distance({2, 2}, {7, 7}));
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i - 1] < v[i]);

  WorldConfig corner = empty_world();
  corner.source = {0, 0};
  corner.destination = {1, 0};
  const World cw = build_world(corner, 1);
  const auto cv = viable_set(cw, {0, 0});
  // (2,0) and (1,1) tie with the source, so only the destination zone is left.
  REQUIRE(cv.size() == 1);
  CHECK(cv[0] == Zone{1, 0});

  WorldConfig same = empty_world();
  same.destination = same.source;
  const World sw = build_world(same, 1);
  CHECK(viable_set(sw, same.source).empty());

  WorldConfig far = empty_world();
  far.source = {5, 5};
  far.destination = {0, 0};
  CHECK(viable_set(build_world(far, 1), far.source).size() <= 24);
}

TEST_CASE("path zones") {
  const World w = build_world(empty_world(), 1);
  const auto straight = w.path_zones({2, 2}, {4, 2});
  CHECK(straight == std::vector<int>{w.index({2, 2}), w.index({3, 2}), w.index({4, 2})});
  // A diagonal through a zone corner does not enter the side zones.
  const auto diag = w.path_zones({2, 2}, {3, 3});
  CHECK(diag == std::vector<int>{w.index({2, 2}), w.index({3, 3})});
}

TEST_CASE("link truth from static obstacles") {
  World w = build_world(empty_world(), 3);
  for (std::uint64_t t = 0; t < 100; ++t) CHECK(link_truth(w, {3, 3}, t) == LinkState::Good);
  // Midpoint of the (2,2)->(4,2) link.
  w.set_static_obstacles({{40.0, 25.0}});
  for (std::uint64_t t = 0; t < 100; ++t) CHECK(link_truth(w, {4, 2}, t) == LinkState::Bad);
  CHECK(w.statically_blocked({2, 2}, {4, 2}));
  CHECK_FALSE(w.statically_blocked({2, 2}, {2, 4}));
  CHECK_THROWS_AS(link_truth(w, {2, 2}, 0), std::invalid_argument);
  CHECK_THROWS_AS(w.set_static_obstacles({{150.0, 5.0}}), std::invalid_argument);
}

TEST_CASE("dynamic blockage rate") {
  World w = build_world(empty_world(), 5);
  w.set_dynamic_obstacles({{3, 2}});
  int bad = 0;
  const int n = 100'000;
  for (int t = 0; t < n; ++t) bad += link_truth(w, {4, 2}, t) == LinkState::Bad;
  CHECK(static_cast<double>(bad) / n == doctest::Approx(0.5).epsilon(0.02));
  // An obstacle off the path never blocks.
  w.set_dynamic_obstacles({{7, 7}});
  for (int t = 0; t < 1000; ++t) CHECK(link_truth(w, {4, 2}, t) == LinkState::Good);
}

TEST_CASE("blockage is coupled and monotone in obstacles on the path") {
  World w = build_world(empty_world(), 9);
  std::vector<Zone> obstacles;
  std::vector<int> previous(5000, 0);
  for (int count = 1; count <= 4; ++count) {
    obstacles.push_back({3, 2});
    w.set_dynamic_obstacles(obstacles);
    for (int t = 0; t < 5000; ++t) {
      const int bad = link_truth(w, {4, 2}, t) == LinkState::Bad;
      CHECK(bad >= previous[t]);
      previous[t] = bad;
    }
  }
}

TEST_CASE("step_dynamics") {
  WorldConfig c = empty_world();
  World still = build_world(c, 11);
  step_dynamics(still);
  CHECK(still.dynamic_obstacles().empty());

  c.dynamic_obstacles = 1;
  World a = build_world(c, 11);
  World b = build_world(c, 11);
  std::set<int> visited;
  for (int i = 0; i < 10'000; ++i) {
    const Zone before = a.dynamic_obstacles()[0];
    step_dynamics(a);
    step_dynamics(b);
    const Zone after = a.dynamic_obstacles()[0];
    CHECK(after == b.dynamic_obstacles()[0]);
    CHECK(std::max(std::abs(after.col - before.col), std::abs(after.row - before.row)) <= 1);
    CHECK(a.contains(after));
    visited.insert(a.index(after));
  }
  CHECK(visited.size() == 100);
}

TEST_CASE("ack sampling") {
  Rng rng(1);
  const ChannelModel perfect(0.8, 0.2, 1.0, 0.0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(ack_sample(LinkState::Good, perfect, rng) == Ack::Success);
    CHECK(ack_sample(LinkState::Bad, perfect, rng) == Ack::Failure);
  }
  const ChannelModel m = ChannelModel::defaults();
  int ok = 0;
  for (int i = 0; i < 100'000; ++i) ok += ack_sample(LinkState::Good, m, rng) == Ack::Success;
  CHECK(ok / 1e5 == doctest::Approx(0.9).epsilon(0.005 / 0.9));
}

TEST_CASE("sample_link") {
  const World w = build_world(empty_world(), 1);
  Rng rng(2);
  const LinkSample a = sample_link(w, quiet_radio(), {3, 2}, 0, rng);
  const LinkSample b = sample_link(w, quiet_radio(), {3, 2}, 5, rng);
  CHECK(a.rss_dbm == b.rss_dbm);
  CHECK(a.rss_dbm == doctest::Approx(-57.0).epsilon(1e-3));
  CHECK(a.truth == LinkState::Good);
}

TEST_CASE("slot clock") {
  CHECK_THROWS_AS(SlotClock(0.1, 0.1, 20), ConfigError);
  CHECK_THROWS_AS(SlotClock(0.1, 0.0, 20), ConfigError);
  CHECK_THROWS_AS(SlotClock(0.1, 0.001, 0), ConfigError);
  SlotClock c(0.1, 0.001, 20);
  CHECK(c.instants_per_slot() == 100);
  CHECK(SlotClock(0.1, 0.03, 20).instants_per_slot() == 3);
  CHECK(c.at_global_boundary());
  CHECK(c.advance_slot() == 1);
  CHECK(c.slot_in_period() == 1);
  std::size_t crossed = 0;
  for (int i = 0; i < 150; ++i) crossed += c.advance_probe();
  CHECK(crossed == 1);
  CHECK(c.now_ns() == 100'000'000 + 150 * 1'000'000);
  for (int i = 0; i < 19; ++i) c.advance_slot();
  CHECK(c.period() == 1);
  CHECK(c.at_global_boundary());
  CHECK(c.now_s() == doctest::Approx(2.15));
}
