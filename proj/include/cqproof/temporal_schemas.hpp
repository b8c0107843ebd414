#ifndef CQPROOF_TEMPORAL_SCHEMAS_HPP
#define CQPROOF_TEMPORAL_SCHEMAS_HPP

#include <memory>

#include "cqproof/hypergraph.hpp"
#include "cqproof/temporal.hpp"

namespace cqproof {

enum class TemporalKind {
  Tmp,       // temporal modus ponens over a global rule, interval inherited
  CsT,       // ground conjunction introduction at one interval
  EsT,       // existential abstraction at one interval
  Conj,      // (phi AND psi)@i from phi@i, psi@i
  Disj,      // (phi OR psi)@i from either disjunct
  Coal,      // contiguous union of same-formula annotations
  Sep,       // shrink to a subinterval
  BoxPlus,   // always-future introduction
  BoxMinus,  // always-past introduction
  Until,
  Since,
};

struct TemporalParams {
  std::optional<Interval> window;    // BoxPlus/BoxMinus/Until/Since
  std::optional<Interval> target;    // Sep
  Mtcq::Ptr other;                   // Disj: the introduced disjunct; Until/Since
                                     // lower-bound-zero form: the left formula
  bool premise_is_right = false;     // Disj: premise becomes the right side
  std::optional<CQ> abstract_to;     // EsT: the abstracted CQ
  std::optional<SkolemRule> sk_rule; // Tmp: the skolemized global rule
  std::optional<Substitution> pi;    // Tmp: the ground body match
};

/// Applies one temporal inference schema; throws InputError when a side
/// condition is violated or the produced interval would be empty.
AnnotatedFormula infer_temporal(TemporalKind kind, const std::vector<AnnotatedFormula>& premises,
                                const TemporalParams& params);

/// Admissibility oracle for the temporalized Skolemized deriver: the
/// atemporal schemas annotated with one shared interval plus the temporal
/// schemas above. Leaves are TBox axioms (global) and temporal facts.
class TemporalChecker : public SchemaChecker {
 public:
  TemporalChecker(KnowledgeBase kb, TemporalABox tabox);
  std::optional<std::string> admissible(const std::vector<Sentence>& premises,
                                        const Sentence& conclusion) const override;
  bool grounded(const Sentence& leaf) const override;

 private:
  KnowledgeBase kb_;
  TemporalABox tabox_;
};

std::shared_ptr<TemporalChecker> temporal_schema_checker(const KnowledgeBase& kb,
                                                         const TemporalABox& tabox);

}  // namespace cqproof

#endif
