#include <map>
#include <vector>

#include "doctest.h"
#include "relaysel/episode.hpp"

using namespace relaysel;

namespace {

// Replays fixed ACK and RSS scripts per relay zone.
class ScriptedProber final : public LinkProber {
 public:
  std::map<int, std::vector<Ack>> acks;
  std::map<int, double> rss;
  std::vector<Zone> probed;

  ProbeResult probe(Zone relay) override {
    probed.push_back(relay);
    const int key = relay.row * 100 + relay.col;
    ProbeResult r;
    r.sample.rss_dbm = rss.count(key) ? rss[key] : -60.0;
    auto& script = acks[key];
    const std::size_t used = cursor_[key]++;
    r.ack = script.empty() ? Ack::Failure : script[std::min(used, script.size() - 1)];
    return r;
  }

 private:
  std::map<int, std::size_t> cursor_;
};

int key(Zone z) { return z.row * 100 + z.col; }

StationaryPolicy counts_policy(std::size_t c, std::size_t d, std::size_t cap) {
  StationaryPolicy p;
  p.reject_after = c;
  p.accept_after = d;
  p.cap = cap;
  return p;
}

ScenarioConfig quiet_scenario() {
  ScenarioConfig c;
  c.world.static_obstacles = 0;
  c.world.dynamic_obstacles = 0;
  c.runs = 1;
  return c;
}

}  // namespace

TEST_CASE("pomdp_select accepts a good first candidate after d probes") {
  const std::vector<Zone> cands{{3, 2}, {2, 3}};
  ScriptedProber prober;
  prober.acks[key(cands[0])] = {Ack::Success};
  const PomdpSelection s = pomdp_select(cands, counts_policy(3, 3, 4), prober);
  REQUIRE(s.chosen.has_value());
  CHECK(*s.chosen == cands[0]);
  CHECK(s.instants == 3);
  CHECK(s.no_decisions == 0);
  CHECK(s.candidates_explored == 1);
}

TEST_CASE("pomdp_select rejects every bad candidate after c probes") {
  const std::vector<Zone> cands{{3, 2}, {2, 3}, {3, 3}};
  ScriptedProber prober;
  const PomdpSelection s = pomdp_select(cands, counts_policy(2, 3, 4), prober);
  CHECK_FALSE(s.chosen.has_value());
  CHECK(s.instants == 2 * cands.size());
  CHECK(s.no_decisions == 0);
  CHECK(s.candidates_explored == 3);
}

TEST_CASE("pomdp_select with a mixed pattern accepts on the trailing run") {
  const std::vector<Zone> cands{{3, 2}};
  ScriptedProber prober;
  prober.acks[key(cands[0])] = {Ack::Success, Ack::Failure, Ack::Success, Ack::Success};
  const PomdpSelection s = pomdp_select(cands, counts_policy(2, 2, 4), prober);
  REQUIRE(s.chosen.has_value());
  CHECK(s.instants == 4);
}

TEST_CASE("pomdp_select hits the cap without a decision") {
  const std::vector<Zone> cands{{3, 2}, {2, 3}};
  ScriptedProber prober;
  const PomdpSelection s = pomdp_select(cands, counts_policy(3, 3, 2), prober);
  CHECK_FALSE(s.chosen.has_value());
  CHECK(s.no_decisions == 2);
  CHECK(s.instants == 4);
}

TEST_CASE("rss baseline") {
  ScriptedProber prober;
  const std::vector<Zone> one{{3, 2}};
  const RssSelection single = rss_baseline_select(one, prober);
  CHECK(single.chosen == one[0]);
  CHECK(single.instants == 1);

  const std::vector<Zone> two{{4, 4}, {3, 2}};
  prober.rss[key(two[0])] = -70;
  prober.rss[key(two[1])] = -57;
  CHECK(rss_baseline_select(two, prober).chosen == two[1]);

  const std::vector<Zone> tied{{4, 4}, {2, 3}, {3, 2}};
  ScriptedProber flat;
  const RssSelection t = rss_baseline_select(tied, flat);
  CHECK(t.chosen == Zone{3, 2});
  CHECK(t.instants == 3);

  CHECK_THROWS_AS(rss_baseline_select(std::vector<Zone>{}, flat), std::invalid_argument);
}

TEST_CASE("rss baseline prefers the nearer relay without shadowing") {
  ScenarioConfig c = quiet_scenario();
  c.radio.shadowing_sigma_db = 0;
  // With no obstacles the engine never explores, so sample the world directly.
  const World w = build_world(c.world, 1);
  Rng rng(3);
  const double near = sample_link(w, c.radio, {3, 2}, 0, rng).rss_dbm;
  const double far = sample_link(w, c.radio, {4, 2}, 0, rng).rss_dbm;
  CHECK(near > far);
}

TEST_CASE("episode without obstacles") {
  for (PolicyKind kind : {PolicyKind::Pomdp, PolicyKind::Rss}) {
    ScenarioConfig c = quiet_scenario();
    c.policy = kind;
    const StationaryPolicy p = counts_policy(3, 3, 4);
    const RunMetrics m = run_episode(c, &p, 99);
    CHECK(m.completed);
    CHECK(m.packets_delivered == 100);
    CHECK(m.relay_switches == 0);
    CHECK(m.exploration_episodes == 0);
    CHECK(m.probes == 0);
    CHECK(m.e2e_delay_s == doctest::Approx(100 * 0.1).epsilon(1e-12));
  }
}

TEST_CASE("episode errors") {
  ScenarioConfig c = quiet_scenario();
  CHECK_THROWS_AS(run_episode(c, nullptr, 1), std::invalid_argument);
  c.world.destination = c.world.source;
  const StationaryPolicy p = counts_policy(3, 3, 4);
  CHECK_THROWS_AS(run_episode(c, &p, 1), ConfigError);
}

TEST_CASE("episode accounting and determinism") {
  for (PolicyKind kind : {PolicyKind::Pomdp, PolicyKind::Rss}) {
    ScenarioConfig c;
    c.world.dynamic_obstacles = 12;
    c.policy = kind;
    const StationaryPolicy p = counts_policy(3, 3, 4);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const RunMetrics m = run_episode(c, &p, seed);
      const RunMetrics again = run_episode(c, &p, seed);
      CHECK(m.e2e_delay_s == again.e2e_delay_s);
      CHECK(m.relay_switches == again.relay_switches);
      CHECK(m.probes == again.probes);

      const double slots_s = static_cast<double>(m.packet_slots) * 0.1;
      const double probes_s = static_cast<double>(m.probes) * 0.001;
      CHECK(m.e2e_delay_s == doctest::Approx(slots_s + probes_s).epsilon(1e-12));
      CHECK(m.exploration_time_s == doctest::Approx(probes_s).epsilon(1e-12));
      CHECK(m.exploration_time_s <= m.e2e_delay_s);
      CHECK(m.packet_slots >= m.packets_delivered);
      CHECK(m.packets_delivered == 100);
      CHECK(m.no_decision_episodes <= m.candidates_explored);
      if (kind == PolicyKind::Rss) CHECK(m.candidates_explored == 0);
    }
  }
}

TEST_CASE("deterministic acks never leave a candidate undecided") {
  ScenarioConfig c;
  c.world.dynamic_obstacles = 8;
  c.channel = ChannelModel(0.8, 0.2, 1.0, 0.0);
  const StationaryPolicy p = stationary_policy(c.channel, c.cost);
  REQUIRE(p.reject_after.has_value());
  REQUIRE(p.accept_after.has_value());
  REQUIRE(std::min(*p.reject_after, *p.accept_after) <= c.timing.exploration_cap);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CHECK(run_episode(c, &p, seed).no_decision_episodes == 0);
  }
}

TEST_CASE("a cap of two with counts of three never decides") {
  ScenarioConfig c;
  c.world.dynamic_obstacles = 8;
  c.timing.exploration_cap = 2;
  StationaryOptions o;
  o.cap = 2;
  const StationaryPolicy p = stationary_policy(c.channel, c.cost, o);
  REQUIRE(p.reject_after == 3u);
  std::size_t explored = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RunMetrics m = run_episode(c, &p, seed);
    CHECK(m.no_decision_episodes == m.candidates_explored);
    explored += m.candidates_explored;
  }
  CHECK(explored > 0);
}

TEST_CASE("trace records") {
  ScenarioConfig c;
  c.world.dynamic_obstacles = 8;
  const StationaryPolicy p = stationary_policy(c.channel, c.cost);
  std::vector<TraceRecord> trace;
  const RunMetrics m = run_episode(c, &p, 5, &trace, 7);
  CHECK(trace.size() == m.probes);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    CHECK(trace[i].run == 7);
    CHECK(trace[i].time_s > trace[i - 1].time_s);
  }
}
