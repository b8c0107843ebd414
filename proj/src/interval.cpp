#include "cqproof/interval.hpp"

namespace cqproof {

bool TimePoint::operator<(const TimePoint& o) const {
  auto rank = [](const TimePoint& t) { return t.kind == Kind::NegInf ? -1 : t.kind == Kind::PosInf ? 1 : 0; };
  int ra = rank(*this), rb = rank(o);
  if (ra != rb) return ra < rb;
  return ra == 0 && value < o.value;
}

std::string TimePoint::str() const {
  switch (kind) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "inf";
    case Kind::Finite: return std::to_string(value);
  }
  return {};
}

Interval::Interval(TimePoint l, TimePoint h) : lo(l), hi(h) {
  if (lo.kind == TimePoint::Kind::PosInf || hi.kind == TimePoint::Kind::NegInf || !(lo <= hi))
    throw InputError("empty or inverted interval [" + l.str() + "," + h.str() + "]");
}

bool Interval::contains(int64_t t) const {
  TimePoint p = TimePoint::at(t);
  return lo <= p && p <= hi;
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  TimePoint lo = a.lo < b.lo ? b.lo : a.lo;
  TimePoint hi = a.hi < b.hi ? a.hi : b.hi;
  if (!(lo <= hi)) return std::nullopt;
  return Interval(lo, hi);
}

std::optional<Interval> interval_minus(const Interval& w, const Interval& r) {
  if (!r.finite()) throw InputError("interval_minus: subtrahend must be finite");
  TimePoint lo = w.lo - r.hi.value;
  TimePoint hi = w.hi - r.lo.value;
  if (!(lo <= hi)) return std::nullopt;
  return Interval(lo, hi);
}

std::optional<Interval> interval_plus(const Interval& w, const Interval& r) {
  if (!r.finite()) throw InputError("interval_plus: addend must be finite");
  TimePoint lo = w.lo + r.lo.value;
  TimePoint hi = w.hi + r.hi.value;
  if (!(lo <= hi)) return std::nullopt;
  return Interval(lo, hi);
}

std::optional<Interval> union_if_contiguous(const Interval& a, const Interval& b) {
  const Interval& first = b.lo < a.lo ? b : a;
  const Interval& second = b.lo < a.lo ? a : b;
  // Contiguous iff second starts no later than one past the end of first.
  bool joinable = second.lo <= first.hi + 1;
  if (first.hi.kind == TimePoint::Kind::PosInf) joinable = true;
  if (!joinable) return std::nullopt;
  TimePoint hi = first.hi < second.hi ? second.hi : first.hi;
  return Interval(first.lo, hi);
}

}  // namespace cqproof
