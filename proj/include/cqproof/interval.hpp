#ifndef CQPROOF_INTERVAL_HPP
#define CQPROOF_INTERVAL_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "cqproof/term.hpp"

namespace cqproof {

/// An interval endpoint over the integers extended with -inf/+inf.
struct TimePoint {
  enum class Kind { NegInf, Finite, PosInf };
  Kind kind = Kind::Finite;
  int64_t value = 0;

  static TimePoint neg_inf() { return {Kind::NegInf, 0}; }
  static TimePoint pos_inf() { return {Kind::PosInf, 0}; }
  static TimePoint at(int64_t v) { return {Kind::Finite, v}; }

  bool finite() const { return kind == Kind::Finite; }
  /// Saturating shift: infinities absorb finite offsets.
  TimePoint operator+(int64_t d) const { return finite() ? at(value + d) : *this; }
  TimePoint operator-(int64_t d) const { return finite() ? at(value - d) : *this; }

  bool operator==(const TimePoint& o) const {
    return kind == o.kind && (kind != Kind::Finite || value == o.value);
  }
  bool operator<(const TimePoint& o) const;
  bool operator<=(const TimePoint& o) const { return *this < o || *this == o; }
  std::string str() const;
};

/// A nonempty integer interval [lo,hi]; endpoints may be infinite.
/// Empty results of the arithmetic operations are represented as absence
/// (std::nullopt), never as an inverted interval.
struct Interval {
  TimePoint lo, hi;

  Interval() = default;
  Interval(TimePoint l, TimePoint h);
  static Interval closed(int64_t l, int64_t h) { return {TimePoint::at(l), TimePoint::at(h)}; }
  static Interval everything() { return {TimePoint::neg_inf(), TimePoint::pos_inf()}; }

  bool finite() const { return lo.finite() && hi.finite(); }
  /// Number of integer points; only valid on finite intervals.
  int64_t length() const { return hi.value - lo.value + 1; }
  bool contains(int64_t t) const;
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }

  /// Shift both endpoints by d (saturating at infinities).
  Interval shifted(int64_t d) const { return {lo + d, hi + d}; }

  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
  bool operator<(const Interval& o) const { return lo < o.lo || (lo == o.lo && hi < o.hi); }
  std::string str() const { return "[" + lo.str() + "," + hi.str() + "]"; }
};

std::optional<Interval> intersect(const Interval& a, const Interval& b);

/// [w1,w2] - [r1,r2] = [w1-r2, w2-r1]; r must be finite.
std::optional<Interval> interval_minus(const Interval& w, const Interval& r);

/// [w1,w2] + [r1,r2] = [w1+r1, w2+r2]; r must be finite.
std::optional<Interval> interval_plus(const Interval& w, const Interval& r);

/// The union if it is a single interval (overlapping or adjacent), else absent.
std::optional<Interval> union_if_contiguous(const Interval& a, const Interval& b);

}  // namespace cqproof

#endif
