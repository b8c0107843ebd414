#ifndef CQPROOF_TEMPORAL_HPP
#define CQPROOF_TEMPORAL_HPP

#include "cqproof/axioms.hpp"
#include "cqproof/mtcq.hpp"

namespace cqproof {

/// A ground assertion holding throughout an interval.
struct TemporalFact {
  Atom atom;
  Interval at;
  std::string str() const { return atom.str() + "@" + at.str(); }
  bool operator==(const TemporalFact& o) const { return atom == o.atom && at == o.at; }
};

struct TemporalABox {
  std::vector<TemporalFact> facts;

  void add(Atom a, Interval at);
  /// Sum of the finite interval lengths (infinite ones count once).
  int64_t temporal_magnitude() const;
};

/// Partition of the (finite) window into maximal intervals whose points
/// satisfy exactly the same facts. Ordered left to right.
std::vector<Interval> compute_rulers(const TemporalABox& tabox, const Interval& window);

/// Ruler partition of the whole timeline; the outermost pieces are
/// unbounded.
std::vector<Interval> compute_rulers_unbounded(const TemporalABox& tabox);

/// The assertions holding throughout the given ruler (callers must pass an
/// interval that does not cross fact endpoints).
std::vector<Atom> slice_at(const TemporalABox& tabox, const Interval& ruler);

/// Brute-force certain-answer evaluation over integer time points: the
/// per-point slice is chased atemporally and the semantics is folded
/// bottom-up. Returns the maximal intervals within `window` where the bound
/// query certainly holds. This is the oracle all temporal inferences are
/// tested against. The window must be finite; the evaluation internally
/// pads it by the query's temporal reach.
std::vector<Interval> eval_mtcq(const KnowledgeBase& kb, const TemporalABox& tabox,
                                const Mtcq::Ptr& query, const std::vector<Term>& answers,
                                const Interval& window);

/// Rewrites bounded always/until/since into the punctual next/previous
/// operators; logically equivalent (checked against eval_mtcq).
Mtcq::Ptr expand_next_form(const Mtcq::Ptr& f);

}  // namespace cqproof

#endif
