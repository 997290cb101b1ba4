#include "relaysel/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace relaysel {
namespace {

// Abscissa where `left` (steeper) and `right` (shallower) intersect.
double intersection(const Line& left, const Line& right) {
  return (right.intercept - left.intercept) / (left.slope - right.slope);
}

}  // namespace

Envelope Envelope::from_lines(std::span<const Line> candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("envelope needs at least one line");
  }
  for (const Line& l : candidates) {
    if (!std::isfinite(l.intercept) || !std::isfinite(l.slope)) {
      std::ostringstream msg;
      msg << "envelope line is not finite: (" << l.intercept << ", " << l.slope << ")";
      throw std::invalid_argument(msg.str());
    }
  }

  std::vector<Line> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end(), [](const Line& a, const Line& b) {
    if (a.slope != b.slope) return a.slope > b.slope;
    return a.intercept < b.intercept;
  });

  // Parallel lines: only the lowest can ever be active.
  std::vector<Line> distinct;
  distinct.reserve(sorted.size());
  for (const Line& l : sorted) {
    if (!distinct.empty() &&
        std::abs(distinct.back().slope - l.slope) <= kEnvelopeTolerance) {
      if (l.intercept < distinct.back().intercept) distinct.back() = l;
      continue;
    }
    distinct.push_back(l);
  }

  // Lower hull over the whole real line, slopes decreasing left to right.
  std::vector<Line> hull;
  hull.reserve(distinct.size());
  for (const Line& l : distinct) {
    while (hull.size() >= 2) {
      const Line& a = hull[hull.size() - 2];
      const Line& b = hull.back();
      if (intersection(b, l) - intersection(a, b) > kEnvelopeTolerance) break;
      hull.pop_back();
    }
    hull.push_back(l);
  }

  // Clip to [0,1]: keep lines whose active interval overlaps it with
  // positive length. The survivors are contiguous in hull order.
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t first = hull.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const double from = i == 0 ? -inf : intersection(hull[i - 1], hull[i]);
    const double to = i + 1 == hull.size() ? inf : intersection(hull[i], hull[i + 1]);
    if (std::min(to, 1.0) - std::max(from, 0.0) > kEnvelopeTolerance) {
      first = std::min(first, i);
      last = i;
    }
  }
  Envelope env;
  if (first == hull.size()) {
    // Every piece is thinner than the tolerance; keep whichever is lowest at
    // the middle of the interval.
    auto best = std::min_element(hull.begin(), hull.end(), [](const Line& a, const Line& b) {
      return a.at(0.5) < b.at(0.5);
    });
    env.lines_.push_back(*best);
    return env;
  }
  env.lines_.assign(hull.begin() + static_cast<std::ptrdiff_t>(first),
                    hull.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  env.breaks_.reserve(env.lines_.size() - 1);
  for (std::size_t i = 0; i + 1 < env.lines_.size(); ++i) {
    env.breaks_.push_back(intersection(env.lines_[i], env.lines_[i + 1]));
  }
  return env;
}

Envelope Envelope::constant(double value) {
  const Line l{value, 0.0};
  return from_lines(std::span<const Line>(&l, 1));
}

double Envelope::operator()(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream msg;
    msg << "envelope evaluated outside [0,1] at r=" << r;
    throw std::domain_error(msg.str());
  }
  double best = lines_.front().at(r);
  for (std::size_t i = 1; i < lines_.size(); ++i) best = std::min(best, lines_[i].at(r));
  return best;
}

bool Envelope::is_canonical() const {
  if (lines_.empty() || breaks_.size() + 1 != lines_.size()) return false;
  for (std::size_t i = 0; i + 1 < lines_.size(); ++i) {
    if (!(lines_[i].slope > lines_[i + 1].slope)) return false;
    const double b = breaks_[i];
    if (!(b > 0.0 && b < 1.0)) return false;
    if (i > 0 && !(b > breaks_[i - 1])) return false;
    const double gap = std::abs(lines_[i].at(b) - lines_[i + 1].at(b));
    if (gap > 1e-9 * (1.0 + std::abs(lines_[i].at(b)))) return false;
  }
  return true;
}

Envelope min_of(const Envelope& a, const Envelope& b) {
  std::vector<Line> all(a.lines().begin(), a.lines().end());
  all.insert(all.end(), b.lines().begin(), b.lines().end());
  return Envelope::from_lines(all);
}

Envelope sum(const Envelope& a, const Envelope& b) {
  std::vector<double> cuts;
  cuts.reserve(a.breakpoints().size() + b.breakpoints().size() + 2);
  cuts.push_back(0.0);
  std::merge(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
             b.breakpoints().end(), std::back_inserter(cuts));
  cuts.push_back(1.0);

  const auto active = [](const Envelope& env, double r) {
    const auto breaks = env.breakpoints();
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), r);
    return env.lines()[static_cast<std::size_t>(it - breaks.begin())];
  };

  std::vector<Line> pieces;
  pieces.reserve(cuts.size());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    pieces.push_back(active(a, mid) + active(b, mid));
  }
  if (pieces.empty()) pieces.push_back(active(a, 0.5) + active(b, 0.5));
  return Envelope::from_lines(pieces);
}

Envelope shift(const Envelope& env, double c) {
  std::vector<Line> moved(env.lines().begin(), env.lines().end());
  for (Line& l : moved) l.intercept += c;
  return Envelope::from_lines(moved);
}

Envelope branch_transform(const Envelope& env, const ChannelModel& model, Ack branch) {
  const double q = model.q();
  const double s = model.s();
  const double k = model.k();
  const double g = model.g();

  // P(ACK | r) = a + b r; predicted good mass = s + (q - s) r.
  const double a = s * k + (1.0 - s) * g;
  const double b = (q - s) * (k - g);
  const double hit = branch == Ack::Success ? k : 1.0 - k;

  const Line prob = branch == Ack::Success ? Line{a, b} : Line{1.0 - a, -b};
  const Line mass{s * hit, (q - s) * hit};

  std::vector<Line> mapped;
  mapped.reserve(env.size());
  for (const Line& l : env.lines()) {
    mapped.push_back({l.intercept * prob.intercept + l.slope * mass.intercept,
                      l.intercept * prob.slope + l.slope * mass.slope});
  }
  return Envelope::from_lines(mapped);
}

std::optional<double> crossing(const Envelope& env, Line probe, Side side, double lo,
                               double hi) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) {
    throw std::domain_error("crossing interval must satisfy 0 <= lo <= hi <= 1");
  }
  const auto lines = env.lines();
  const auto breaks = env.breakpoints();

  std::optional<double> leftmost;
  std::optional<double> rightmost;
  const auto record = [&](double r) {
    if (!leftmost || r < *leftmost) leftmost = r;
    if (!rightmost || r > *rightmost) rightmost = r;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const double seg_lo = std::max(lo, i == 0 ? 0.0 : breaks[i - 1]);
    const double seg_hi = std::min(hi, i + 1 == lines.size() ? 1.0 : breaks[i]);
    if (seg_lo > seg_hi) continue;

    const Line diff = probe - lines[i];
    const double at_lo = diff.at(seg_lo);
    const double at_hi = diff.at(seg_hi);
    const bool zero_lo = std::abs(at_lo) <= kEnvelopeTolerance;
    const bool zero_hi = std::abs(at_hi) <= kEnvelopeTolerance;
    if (zero_lo) record(seg_lo);
    if (zero_hi) record(seg_hi);
    if (!zero_lo && !zero_hi && (at_lo < 0.0) != (at_hi < 0.0)) {
      const double r = seg_lo + (seg_hi - seg_lo) * at_lo / (at_lo - at_hi);
      record(std::clamp(r, seg_lo, seg_hi));
    }
  }
  return side == Side::Leftmost ? leftmost : rightmost;
}

}  // namespace relaysel
