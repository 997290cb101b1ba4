#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "relaysel/belief.hpp"

namespace relaysel {

/// Affine function r -> intercept + slope * r.
struct Line {
  double intercept = 0.0;
  double slope = 0.0;

  double at(double r) const noexcept { return intercept + slope * r; }

  friend Line operator+(Line a, Line b) noexcept {
    return {a.intercept + b.intercept, a.slope + b.slope};
  }
  friend Line operator-(Line a, Line b) noexcept {
    return {a.intercept - b.intercept, a.slope - b.slope};
  }
  friend bool operator==(const Line&, const Line&) = default;
};

/// Coefficient and breakpoint tolerance of the envelope algebra.
inline constexpr double kEnvelopeTolerance = 1e-12;

/// Concave piecewise-linear function on [0,1], stored as the lower envelope
/// of a set of lines.
///
/// Canonical form: every stored line is the pointwise minimum on a
/// subinterval of [0,1] of positive length. Lines are ordered left to right,
/// which for a concave function means strictly decreasing slope, and
/// breakpoints()[i] is where lines()[i] hands over to lines()[i + 1].
class Envelope {
 public:
  /// Canonical lower envelope of `candidates` on [0,1].
  /// Throws std::invalid_argument if empty or if any coefficient is not finite.
  static Envelope from_lines(std::span<const Line> candidates);

  static Envelope constant(double value);

  /// Pointwise minimum over the stored lines. Throws std::domain_error
  /// outside [0,1].
  double operator()(double r) const;
  double evaluate(double r) const { return (*this)(r); }

  std::span<const Line> lines() const noexcept { return lines_; }
  std::span<const double> breakpoints() const noexcept { return breaks_; }
  std::size_t size() const noexcept { return lines_.size(); }

  /// Re-checks the canonical-form invariants; used by tests.
  bool is_canonical() const;

 private:
  Envelope() = default;

  std::vector<Line> lines_;
  std::vector<double> breaks_;
};

/// Lower envelope of the union of both line sets.
Envelope min_of(const Envelope& a, const Envelope& b);

/// Pointwise sum, built from the merged breakpoints of both operands.
Envelope sum(const Envelope& a, const Envelope& b);

/// Adds c to every intercept.
Envelope shift(const Envelope& env, double c);

/// r -> P(w = branch | r) * env(update(r, branch)).
///
/// The update denominator cancels against the branch probability, so each
/// line of env maps to a line and the result stays concave piecewise linear.
Envelope branch_transform(const Envelope& env, const ChannelModel& model,
                          Ack branch);

enum class Side { Leftmost, Rightmost };

/// Requested root of probe(r) - env(r) on [lo, hi] (default [0,1]), solved
/// exactly one segment at a time. When the probe coincides with a segment the
/// whole segment counts as roots: Leftmost reports its left end, Rightmost
/// its right end.
std::optional<double> crossing(const Envelope& env, Line probe, Side side,
                               double lo = 0.0, double hi = 1.0);

}  // namespace relaysel
