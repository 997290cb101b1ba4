#include "relaysel/calibrate.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace relaysel {

ChannelModel calibrate(std::span<const TransitionRecord> transitions,
                       std::span<const ObservationRecord> observations,
                       std::size_t min_per_conditional) {
  std::size_t from_good = 0, good_good = 0, from_bad = 0, bad_good = 0;
  for (const auto& t : transitions) {
    if (t.from == LinkState::Good) {
      ++from_good;
      if (t.to == LinkState::Good) ++good_good;
    } else {
      ++from_bad;
      if (t.to == LinkState::Good) ++bad_good;
    }
  }
  std::size_t in_good = 0, ack_good = 0, in_bad = 0, ack_bad = 0;
  for (const auto& o : observations) {
    if (o.truth == LinkState::Good) {
      ++in_good;
      if (o.ack == Ack::Success) ++ack_good;
    } else {
      ++in_bad;
      if (o.ack == Ack::Success) ++ack_bad;
    }
  }

  const auto require = [min_per_conditional](std::size_t n, const char* what) {
    if (n < min_per_conditional) {
      std::ostringstream msg;
      msg << "not enough data to estimate " << what << ": " << n << " samples, need "
          << min_per_conditional;
      throw InsufficientData(msg.str());
    }
  };
  require(from_good, "q (transitions from good)");
  require(from_bad, "s (transitions from bad)");
  require(in_good, "k (observations in good)");
  require(in_bad, "g (observations in bad)");

  const auto ratio = [](std::size_t a, std::size_t b) {
    return static_cast<double>(a) / static_cast<double>(b);
  };
  const double q = ratio(good_good, from_good);
  const double s = ratio(bad_good, from_bad);
  const double k = ratio(ack_good, in_good);
  const double g = ratio(ack_bad, in_bad);
  try {
    return ChannelModel(q, s, k, g);
  } catch (const std::invalid_argument& e) {
    std::ostringstream msg;
    msg << "calibrated estimates are unusable for threshold policies (" << e.what()
        << "); counts: good->good " << good_good << "/" << from_good << ", bad->good "
        << bad_good << "/" << from_bad << ", ack|good " << ack_good << "/" << in_good
        << ", ack|bad " << ack_bad << "/" << in_bad;
    throw std::invalid_argument(msg.str());
  }
}

void write_trace(std::ostream& out, std::span<const TraceRecord> records) {
  out << "run,time_s,link,probe,truth,ack,rss_dbm\n";
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%zu,%.9f,%d,%zu,%d,%d,%.6f\n", r.run, r.time_s, r.link,
                  r.probe, r.truth == LinkState::Good ? 1 : 0, r.ack == Ack::Success ? 1 : 0,
                  r.rss_dbm);
    out << buf;
  }
}

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("run,", 0) == 0) continue;
    TraceRecord r;
    int truth = 0;
    int ack = 0;
    char tail = 0;
    const int got = std::sscanf(line.c_str(), "%zu,%lf,%d,%zu,%d,%d,%lf%c", &r.run, &r.time_s,
                                &r.link, &r.probe, &truth, &ack, &r.rss_dbm, &tail);
    if (got != 7 || (truth != 0 && truth != 1) || (ack != 0 && ack != 1)) {
      throw std::runtime_error("malformed trace record on line " + std::to_string(line_no) +
                               ": " + line);
    }
    r.truth = truth == 1 ? LinkState::Good : LinkState::Bad;
    r.ack = ack == 1 ? Ack::Success : Ack::Failure;
    out.push_back(r);
  }
  return out;
}

CalibrationPairs pairs_from_trace(std::span<const TraceRecord> records) {
  CalibrationPairs out;
  out.observations.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out.observations.push_back({r.truth, r.ack});
    if (i == 0) continue;
    const auto& prev = records[i - 1];
    if (prev.run == r.run && prev.link == r.link && prev.probe + 1 == r.probe) {
      out.transitions.push_back({prev.truth, r.truth});
    }
  }
  return out;
}

}  // namespace relaysel
