#ifndef CQPROOF_SK_SCHEMAS_HPP
#define CQPROOF_SK_SCHEMAS_HPP

#include <memory>

#include "cqproof/chase.hpp"
#include "cqproof/hypergraph.hpp"

namespace cqproof {

/// Ground conjunction of the given atoms, positionally (duplicates kept).
/// Represented as a Boolean ground CQ.
CQ infer_cs(const std::vector<Atom>& atoms);

/// Abstraction step: checks that sigma maps the target's atom list
/// positionally onto the conjunction's atom list and returns the target.
/// Constants in the target must match verbatim.
CQ infer_es(const CQ& conj, const CQ& target, const Substitution& sigma);

/// Set-semantics variant: sigma must map the target's atom *set* onto the
/// conjunction's atom set; duplicates may merge.
CQ infer_es_prime(const CQ& conj, const CQ& target, const Substitution& sigma);

/// Finds a substitution witnessing admissibility, if any.
std::optional<Substitution> find_es_substitution(const CQ& conj, const CQ& target);
std::optional<Substitution> find_es_prime_substitution(const CQ& conj, const CQ& target);

/// Admissibility oracle for the Skolemized deriver: modus ponens over
/// Skolemized TBox rules, ground conjunction introduction, and existential
/// abstraction (positional; the set-semantics variant optionally enabled).
class SkChecker : public SchemaChecker {
 public:
  SkChecker(KnowledgeBase kb, bool allow_set_abstraction);
  std::optional<std::string> admissible(const std::vector<Sentence>& premises,
                                        const Sentence& conclusion) const override;
  bool grounded(const Sentence& leaf) const override;

  const KnowledgeBase& kb() const { return kb_; }

 private:
  std::string rule_id_of(const Sentence& p) const;

  KnowledgeBase kb_;
  std::vector<SkolemRule> sk_rules_;
  bool allow_set_abstraction_;
};

std::shared_ptr<SkChecker> sk_schema_checker(const KnowledgeBase& kb,
                                             bool allow_set_abstraction = false);

}  // namespace cqproof

#endif
