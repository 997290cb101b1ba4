#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaysel/belief.hpp"

namespace relaysel {

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TransitionRecord {
  LinkState from = LinkState::Good;
  LinkState to = LinkState::Good;
};

struct ObservationRecord {
  LinkState truth = LinkState::Good;
  Ack ack = Ack::Success;
};

/// Empirical (q, s, k, g). Each conditional needs at least `min_per_conditional`
/// samples, otherwise InsufficientData. Estimates that break q > s or k > g
/// are rejected with std::invalid_argument.
ChannelModel calibrate(std::span<const TransitionRecord> transitions,
                       std::span<const ObservationRecord> observations,
                       std::size_t min_per_conditional = 100);

/// One probe instant as exported by the simulator.
struct TraceRecord {
  std::size_t run = 0;
  double time_s = 0.0;
  int link = 0;            ///< relay zone index
  std::size_t probe = 0;   ///< position within one candidate's probe sequence
  LinkState truth = LinkState::Good;
  Ack ack = Ack::Success;
  double rss_dbm = 0.0;
};

/// Header: run,time_s,link,probe,truth,ack,rss_dbm with truth/ack as 0/1.
void write_trace(std::ostream& out, std::span<const TraceRecord> records);
/// Throws std::runtime_error with the offending line number on malformed input.
std::vector<TraceRecord> read_trace(std::istream& in);

struct CalibrationPairs {
  std::vector<TransitionRecord> transitions;
  std::vector<ObservationRecord> observations;
};

/// Every record contributes an observation pair; consecutive probes of the
/// same link in the same run (probe index j then j + 1) contribute a
/// transition pair.
CalibrationPairs pairs_from_trace(std::span<const TraceRecord> records);

}  // namespace relaysel
