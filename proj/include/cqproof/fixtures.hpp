#ifndef CQPROOF_FIXTURES_HPP
#define CQPROOF_FIXTURES_HPP

#include "cqproof/axioms.hpp"

namespace cqproof {

/// A generated hardness-gadget instance. The entailment prerequisite of the
/// optimal-proof problem holds for every generated fixture.
struct Fixture {
  std::string kind;  // "chain", "sat_sk" or "sat_cq"
  KnowledgeBase kb;
  CQ query;
  std::vector<Term> answer;
  uint64_t bound = 0;
  std::optional<bool> expected;  // the decision value at `bound`, when known
};

/// The inclusion-chain gadget: the query is frozen into an ABox over
/// subscripted predicates, and the TBox lifts subscript i to i+1 for
/// 0 <= i < n plus the final step onto the original predicate, so every
/// proof runs through a chain of depth n+1. At bound n the decision value
/// is false.
Fixture gen_chain(const CQ& query, const std::vector<Term>& answer, int n);

/// The satisfiability gadget: one constant per literal, tautological
/// clauses added for every variable, assertions c(clause, literal) plus a
/// clause chain, and a tree-shaped Boolean query selecting one literal per
/// clause. At bound 2+m+(m-1)+n, proofs of that tree size under the
/// set-abstraction deriver (or size under the positional one) exist iff the
/// clause set is satisfiable.
Fixture gen_sat(const std::vector<std::vector<int>>& clauses);

/// The same instance for the plain CQ deriver; the bound is the
/// corresponding tree-size count 4m+2n-1 for binary conjunction assembly.
Fixture gen_sat_cq(const std::vector<std::vector<int>>& clauses);

/// Exhaustive satisfiability check (test oracle for the fixtures).
bool brute_force_sat(const std::vector<std::vector<int>>& clauses, int num_vars);

}  // namespace cqproof

#endif
