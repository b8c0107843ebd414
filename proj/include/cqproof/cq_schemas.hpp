#ifndef CQPROOF_CQ_SCHEMAS_HPP
#define CQPROOF_CQ_SCHEMAS_HPP

#include <memory>
#include <set>

#include "cqproof/hypergraph.hpp"

namespace cqproof {

/// Modus ponens on CQs: pi must map the rule body into q's atoms. Any
/// subset of the matched atoms may be dropped and any subset of the
/// instantiated head atoms added, with head existentials renamed fresh.
/// `drop_positions` indexes q.atoms; `add_head` indexes rule.head.
CQ infer_mp(const CQ& q, const ExistentialRule& rule, const Substitution& pi,
            const std::vector<size_t>& drop_positions, const std::vector<size_t>& add_head);

/// Conjunction of two Boolean CQs; the second premise's variables are
/// renamed apart.
CQ infer_c(const CQ& q1, const CQ& q2);

/// Tautological rule phi -> exists x'. phi[x -> x'] for the chosen
/// variables. Zero premises.
ExistentialRule infer_t(const std::vector<Atom>& phi, const std::set<std::string>& abstracted_vars);

/// Replaces every occurrence of each chosen constant by one fresh
/// existential variable (one variable per constant).
CQ infer_e(const CQ& q, const std::set<std::string>& abstracted_constants);

/// Witness of an admissible modus ponens step reproducing a given
/// conclusion verbatim; used by the proof translations.
struct MpWitness {
  Substitution pi;                      // rule variables -> premise terms
  std::set<size_t> drop_positions;      // into the premise CQ's atom list
  std::vector<size_t> add_head;         // into rule.head
  /// For each added head atom, how its variables appear in the conclusion:
  /// rule variable name -> conclusion term.
  Substitution added_binding;
};

std::optional<MpWitness> explain_mp(const CQ& premise, const ExistentialRule& rule,
                                    const CQ& conclusion);

/// Admissibility oracle for the CQ deriver (modus ponens, conjunction,
/// tautology introduction, constant abstraction).
class CqChecker : public SchemaChecker {
 public:
  explicit CqChecker(KnowledgeBase kb);
  std::optional<std::string> admissible(const std::vector<Sentence>& premises,
                                        const Sentence& conclusion) const override;
  bool grounded(const Sentence& leaf) const override;
  const KnowledgeBase& kb() const { return kb_; }

  /// A rule sentence is a tautology iff its head equals its body with some
  /// variables freshly renamed. Returns the head-variable renaming.
  static std::optional<Substitution> tautology_renaming(const ExistentialRule& rule);

 private:
  KnowledgeBase kb_;
};

std::shared_ptr<CqChecker> cq_schema_checker(const KnowledgeBase& kb);

}  // namespace cqproof

#endif
