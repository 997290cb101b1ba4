#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaysel {

/// ACK outcome of one probe packet.
enum class Ack : std::uint8_t { Failure = 0, Success = 1 };

/// Hidden quality of a relay link.
enum class LinkState : std::uint8_t { Bad = 0, Good = 1 };

/// Raised when an observation has zero predictive probability under the model.
class DegenerateEvidence : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two-state hidden link dynamics plus the ACK channel.
///
///   q = P(good -> good)    s = P(bad -> good)
///   k = P(ACK | good)      g = P(ACK | bad)
///
/// The threshold structure of the stopping problem relies on q > s and k > g,
/// so the regular constructor rejects models that break either ordering.
/// `relaxed()` only checks that the four values are probabilities; it exists
/// for degenerate analyses (q == s, k == g) of the filter itself.
class ChannelModel {
 public:
  ChannelModel(double q, double s, double k, double g);

  static ChannelModel relaxed(double q, double s, double k, double g);
  static ChannelModel defaults() { return {0.8, 0.2, 0.9, 0.3}; }

  double q() const noexcept { return q_; }
  double s() const noexcept { return s_; }
  double k() const noexcept { return k_; }
  double g() const noexcept { return g_; }

  /// True when q > s and k > g.
  bool ordered() const noexcept { return q_ > s_ && k_ > g_; }

  std::string describe() const;

 private:
  struct Unchecked {};
  ChannelModel(Unchecked, double q, double s, double k, double g);

  double q_;
  double s_;
  double k_;
  double g_;
};

/// One-step-ahead probability of the good state: q*r + (1-r)*s.
double predict(const ChannelModel& model, double r);

/// Predictive probability of an ACK success from belief r.
double ack_likelihood(const ChannelModel& model, double r);

/// Probability of observing `w` from belief r.
double observation_probability(const ChannelModel& model, double r, Ack w);

/// Bayes update of the good-state belief after observing `w`.
/// Throws DegenerateEvidence when the observation has probability zero.
double update(const ChannelModel& model, double r, Ack w);

/// Beliefs after 1..x successive identical observations starting from r0.
std::vector<double> observation_trajectory(const ChannelModel& model, double r0,
                                           Ack w, std::size_t x);

inline std::vector<double> failure_trajectory(const ChannelModel& model,
                                              double r0, std::size_t x) {
  return observation_trajectory(model, r0, Ack::Failure, x);
}

inline std::vector<double> success_trajectory(const ChannelModel& model,
                                              double r0, std::size_t x) {
  return observation_trajectory(model, r0, Ack::Success, x);
}

/// Throws std::domain_error unless 0 <= p <= 1.
void require_probability(double p, const char* what);

}  // namespace relaysel
