#ifndef CQPROOF_TRANSLATE_HPP
#define CQPROOF_TRANSLATE_HPP

#include "cqproof/cq_schemas.hpp"
#include "cqproof/sk_schemas.hpp"

namespace cqproof {

/// Rewrites a CQ-deriver proof into a Skolemized-deriver proof of the same
/// conclusion: the input is grounded bottom-up (head existentials become
/// Skolem terms, constant abstractions are deferred into the final
/// abstraction step), every rule application contributes one ground modus
/// ponens step per added atom, and the conclusion is assembled with one
/// conjunction and one abstraction step.
Proof cq_to_sk(const Proof& p, const KnowledgeBase& kb);

/// Rewrites a Skolemized-deriver proof into a CQ-deriver proof: ABox leaves
/// are conjoined, ground modus ponens steps with equal rule and match are
/// aggregated into single rule applications introducing existential
/// variables in place of Skolem terms, and the query's variable multiplicity
/// is restored by tautology-and-modus-ponens duplication steps. Tree proofs
/// map to tree proofs (the output is always a tree).
Proof sk_to_cq(const Proof& p, const KnowledgeBase& kb);

/// Documented size bounds for the two directions, checked by tests:
/// forward:  |p| * (max head size + 1) + 2
/// backward: |p| * (max body size + 2) + 2 * |vars(conclusion)| + 2
uint64_t fwd_size_bound(const Proof& p, const KnowledgeBase& kb);
uint64_t bwd_size_bound(const Proof& p, const KnowledgeBase& kb);

}  // namespace cqproof

#endif
