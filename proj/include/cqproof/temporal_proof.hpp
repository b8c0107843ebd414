#ifndef CQPROOF_TEMPORAL_PROOF_HPP
#define CQPROOF_TEMPORAL_PROOF_HPP

#include "cqproof/search.hpp"
#include "cqproof/temporal_schemas.hpp"

namespace cqproof {

struct TemporalGoal {
  KnowledgeBase kb;  // the global TBox; the atemporal ABox is unused
  TemporalABox tabox;
  Mtcq::Ptr query;
  std::vector<Term> answer;
  Interval at = Interval::closed(0, 0);
  std::optional<int> depth_bound;
  size_t fact_cap = 100000;
};

struct TemporalProofResult {
  Proof proof;
  uint64_t tree_size_value = 0;
  /// Per-subformula maximal derived intervals (the certain-answer set).
  std::vector<Interval> derived_intervals;
};

/// Derives the query interval by interval: per-ruler atemporal proofs for
/// the CQ leaves, coalescing whenever runs of rulers are contiguous, the
/// metric schemas bottom-up over the formula, and one final separation step
/// onto the requested interval. The entailment prerequisite is verified
/// first. Queries containing TOP are rejected as trivially valid.
TemporalProofResult temporal_min_proof(const TemporalGoal& goal);

/// All maximal intervals the deriver can certify for the (bound) query,
/// together with the supporting proof graph; temporal_min_proof separates
/// the requested interval out of these.
std::vector<Interval> temporal_certain_intervals(const TemporalGoal& goal);

/// The documented tree-size bound for constructed temporal proofs (the
/// finite-interval and unbounded variants coincide up to the ruler count).
uint64_t temporal_proof_bound(const TemporalGoal& goal);

}  // namespace cqproof

#endif
