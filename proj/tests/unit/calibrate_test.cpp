#include <sstream>

#include "doctest.h"
#include "relaysel/calibrate.hpp"
#include "relaysel/rng.hpp"
#include "relaysel/world.hpp"

using namespace relaysel;

namespace {

CalibrationPairs synthetic(const ChannelModel& m, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CalibrationPairs out;
  LinkState y = LinkState::Good;
  for (std::size_t i = 0; i < n; ++i) {
    const double p_good = y == LinkState::Good ? m.q() : m.s();
    const LinkState next = bernoulli(rng, p_good) ? LinkState::Good : LinkState::Bad;
    out.transitions.push_back({y, next});
    out.observations.push_back({next, ack_sample(next, m, rng)});
    y = next;
  }
  return out;
}

}  // namespace

TEST_CASE("calibration recovers a known model") {
  const ChannelModel truth(0.85, 0.3, 0.92, 0.25);
  const CalibrationPairs p = synthetic(truth, 100'000, 17);
  const ChannelModel est = calibrate(p.transitions, p.observations);
  CHECK(est.q() == doctest::Approx(truth.q()).epsilon(0.02 / truth.q()));
  CHECK(est.s() == doctest::Approx(truth.s()).epsilon(0.02 / truth.s()));
  CHECK(est.k() == doctest::Approx(truth.k()).epsilon(0.02 / truth.k()));
  CHECK(est.g() == doctest::Approx(truth.g()).epsilon(0.02 / truth.g()));
}

TEST_CASE("calibration data requirements") {
  std::vector<TransitionRecord> good_only(500, {LinkState::Good, LinkState::Good});
  std::vector<ObservationRecord> acks(500, {LinkState::Good, Ack::Success});
  CHECK_THROWS_AS(calibrate(good_only, acks), InsufficientData);

  const CalibrationPairs small = synthetic(ChannelModel::defaults(), 50, 3);
  CHECK_THROWS_AS(calibrate(small.transitions, small.observations), InsufficientData);

  // Enough data, but the estimates break k > g.
  std::vector<TransitionRecord> t;
  std::vector<ObservationRecord> o;
  for (int i = 0; i < 200; ++i) {
    t.push_back({LinkState::Good, i % 5 ? LinkState::Good : LinkState::Bad});
    t.push_back({LinkState::Bad, i % 5 ? LinkState::Bad : LinkState::Good});
    o.push_back({LinkState::Good, i % 2 ? Ack::Success : Ack::Failure});
    o.push_back({LinkState::Bad, i % 4 ? Ack::Success : Ack::Failure});
  }
  CHECK_THROWS_AS(calibrate(t, o), std::invalid_argument);
}

TEST_CASE("trace round trip and pairing") {
  const std::vector<TraceRecord> records{
      {0, 0.001, 23, 0, LinkState::Good, Ack::Success, -57.25},
      {0, 0.002, 23, 1, LinkState::Bad, Ack::Failure, -60.5},
      {0, 0.003, 32, 0, LinkState::Good, Ack::Success, -58},
      {1, 0.001, 23, 0, LinkState::Good, Ack::Failure, -55},
  };
  std::ostringstream os;
  write_trace(os, records);
  CHECK(os.str().rfind("run,time_s,link,probe,truth,ack,rss_dbm\n", 0) == 0);
  std::istringstream is(os.str());
  const auto back = read_trace(is);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].run == records[i].run);
    CHECK(back[i].link == records[i].link);
    CHECK(back[i].probe == records[i].probe);
    CHECK(back[i].truth == records[i].truth);
    CHECK(back[i].ack == records[i].ack);
    CHECK(back[i].rss_dbm == records[i].rss_dbm);
  }
  const CalibrationPairs p = pairs_from_trace(back);
  CHECK(p.observations.size() == 4);
  REQUIRE(p.transitions.size() == 1);
  CHECK(p.transitions[0].from == LinkState::Good);
  CHECK(p.transitions[0].to == LinkState::Bad);
}

TEST_CASE("malformed traces name the line") {
  std::istringstream bad("run,time_s,link,probe,truth,ack,rss_dbm\n0,0.1,3,0,1,1,-50\n0,x\n");
  try {
    read_trace(bad);
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream bad_flag("0,0.1,3,0,2,1,-50\n");
  CHECK_THROWS_AS(read_trace(bad_flag), std::runtime_error);
  std::istringstream headerless("0,0.1,3,0,1,1,-50\n");
  CHECK(read_trace(headerless).size() == 1);
}
