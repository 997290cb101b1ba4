#include <cmath>

#include "doctest.h"
#include "relaysel/belief.hpp"
#include "support.hpp"

using namespace relaysel;
using relaysel::testing::random_model;

namespace {
const ChannelModel kDefault = ChannelModel::defaults();
constexpr double kTol = 1e-12;
}  // namespace

TEST_CASE("channel model validation") {
  CHECK_NOTHROW(ChannelModel(0.8, 0.2, 0.9, 0.3));
  CHECK_THROWS_AS(ChannelModel(0.2, 0.8, 0.9, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(0.8, 0.2, 0.3, 0.9), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(0.5, 0.5, 0.9, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(1.2, 0.2, 0.9, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(0.8, -0.1, 0.9, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(ChannelModel(NAN, 0.2, 0.9, 0.3), std::invalid_argument);
  CHECK_NOTHROW(ChannelModel::relaxed(0.7, 0.7, 0.5, 0.5));
  CHECK_THROWS_AS(ChannelModel::relaxed(0.7, 1.5, 0.5, 0.5), std::invalid_argument);
  CHECK_FALSE(ChannelModel::relaxed(0.7, 0.7, 0.5, 0.5).ordered());
  CHECK(kDefault.ordered());
}

TEST_CASE("predict") {
  CHECK(predict(kDefault, 0.5) == doctest::Approx(0.5).epsilon(kTol));
  const auto flat = ChannelModel::relaxed(0.7, 0.7, 0.9, 0.3);
  for (double r : {0.0, 0.3, 1.0}) CHECK(std::abs(predict(flat, r) - 0.7) < kTol);
  CHECK(predict(ChannelModel(1.0, 0.0, 0.9, 0.3), 1.0) == 1.0);
  CHECK_THROWS_AS(predict(kDefault, 1.5), std::domain_error);
}

TEST_CASE("ack likelihood") {
  CHECK(std::abs(ack_likelihood(kDefault, 0.5) - 0.6) < kTol);
  CHECK(std::abs(ack_likelihood(kDefault, 1.0) - 0.78) < kTol);
  const auto blind = ChannelModel::relaxed(0.8, 0.2, 0.4, 0.4);
  for (double r : {0.0, 0.25, 0.9}) CHECK(std::abs(ack_likelihood(blind, r) - 0.4) < kTol);
}

TEST_CASE("update hand values") {
  CHECK(std::abs(update(kDefault, 0.5, Ack::Success) - 0.75) < kTol);
  CHECK(std::abs(update(kDefault, 0.5, Ack::Failure) - 0.125) < kTol);
  const ChannelModel perfect(0.8, 0.2, 1.0, 0.0);
  for (double r : {0.0, 0.4, 1.0}) CHECK(update(perfect, r, Ack::Success) == 1.0);
}

TEST_CASE("update with zero-probability evidence throws") {
  const auto mute = ChannelModel::relaxed(0.8, 0.2, 0.0, 0.0);
  CHECK_THROWS_AS(update(mute, 0.5, Ack::Success), DegenerateEvidence);
  const auto loud = ChannelModel::relaxed(0.8, 0.2, 1.0, 1.0);
  CHECK_THROWS_AS(update(loud, 0.5, Ack::Failure), DegenerateEvidence);
}

TEST_CASE("trajectories") {
  const auto f = failure_trajectory(kDefault, 0.5, 2);
  REQUIRE(f.size() == 2);
  CHECK(std::abs(f[0] - 0.125) < kTol);
  CHECK(std::abs(f[1] - 0.0275 / 0.535) < kTol);
  CHECK(std::abs(f[1] - 0.051402) < 1e-6);

  const auto s = success_trajectory(kDefault, 0.5, 2);
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] - 0.75) < kTol);
  CHECK(std::abs(s[1] - 0.585 / 0.690) < kTol);
  CHECK(std::abs(s[1] - 0.847826) < 1e-6);

  CHECK(failure_trajectory(kDefault, 0.5, 0).empty());
  CHECK(success_trajectory(kDefault, 0.5, 0).empty());

  const auto memoryless = ChannelModel::relaxed(0.6, 0.6, 0.9, 0.3);
  const auto flat = failure_trajectory(memoryless, 0.5, 3);
  CHECK(flat[0] == flat[1]);
  CHECK(flat[1] == flat[2]);

  const auto certain = success_trajectory(ChannelModel(0.8, 0.2, 1.0, 0.0), 0.3, 3);
  for (double v : certain) CHECK(v == 1.0);
}

TEST_CASE("filter properties over random models") {
  Rng rng(0xbe11ef);
  for (int trial = 0; trial < 100; ++trial) {
    const ChannelModel m = random_model(rng);
    double prev_s = -1.0, prev_f = -1.0;
    for (int i = 0; i <= 200; ++i) {
      const double r = i / 200.0;
      const double us = update(m, r, Ack::Success);
      const double uf = update(m, r, Ack::Failure);
      CHECK(us >= prev_s - kTol);
      CHECK(uf >= prev_f - kTol);
      prev_s = us;
      prev_f = uf;
      CHECK((us >= 0.0 && us <= 1.0));
      CHECK((uf >= 0.0 && uf <= 1.0));
      if (i > 0 && i < 200) CHECK(us > uf);
      const double y = ack_likelihood(m, r);
      CHECK(std::abs(y * us + (1 - y) * uf - predict(m, r)) < kTol);
    }
  }
}

TEST_CASE("trajectory monotonicity") {
  Rng rng(0x7a7e);
  for (int trial = 0; trial < 200; ++trial) {
    const ChannelModel m = random_model(rng);
    const double r0 = relaysel::testing::draw(rng, 0.0, 1.0);
    for (Ack w : {Ack::Failure, Ack::Success}) {
      const auto t = observation_trajectory(m, r0, w, 12);
      const double first = t.front();
      double prev = r0;
      for (double v : t) {
        if (first < r0) CHECK(v <= prev + 1e-15);
        if (first > r0) CHECK(v >= prev - 1e-15);
        // Strict until the fixed point is reached in floating point.
        if (std::abs(v - prev) > 1e-15) {
          CHECK(((first < r0) ? v < prev : v > prev));
        }
        prev = v;
      }
    }
  }
}
