#include "cqproof/sk_schemas.hpp"

#include <algorithm>
#include <set>

namespace cqproof {

CQ infer_cs(const std::vector<Atom>& atoms) {
  if (atoms.empty()) throw InputError("infer_cs: empty conjunction");
  for (const auto& a : atoms)
    if (!a.ground()) throw InputError("infer_cs: non-ground conjunct " + a.str());
  return CQ({}, atoms);
}

CQ infer_es(const CQ& conj, const CQ& target, const Substitution& sigma) {
  if (!conj.boolean() || !conj.ground()) throw InputError("infer_es: premise must be ground");
  if (conj.atoms.size() != target.atoms.size())
    throw InputError("infer_es: conjunct count differs from target atom count");
  for (size_t i = 0; i < conj.atoms.size(); ++i) {
    if (substitute(sigma, target.atoms[i]) != conj.atoms[i])
      throw InputError("infer_es: positional mismatch at conjunct " + std::to_string(i));
  }
  return target;
}

CQ infer_es_prime(const CQ& conj, const CQ& target, const Substitution& sigma) {
  if (!conj.boolean() || !conj.ground()) throw InputError("infer_es_prime: premise must be ground");
  std::set<Atom> image, given(conj.atoms.begin(), conj.atoms.end());
  for (const auto& a : target.atoms) image.insert(substitute(sigma, a));
  if (image != given) throw InputError("infer_es_prime: atom sets differ under sigma");
  return target;
}

std::optional<Substitution> find_es_substitution(const CQ& conj, const CQ& target) {
  if (conj.atoms.size() != target.atoms.size()) return std::nullopt;
  Substitution s;
  for (size_t i = 0; i < conj.atoms.size(); ++i)
    if (!unify_into(target.atoms[i], conj.atoms[i], s)) return std::nullopt;
  return s;
}

namespace {

bool es_prime_search(const std::vector<Atom>& pattern, size_t i, const std::set<Atom>& goal,
                     Substitution& s, std::set<Atom>& covered, std::optional<Substitution>& out) {
  if (i == pattern.size()) {
    if (covered == goal) {
      out = s;
      return true;
    }
    return false;
  }
  for (const auto& g : goal) {
    Substitution next = s;
    if (!unify_into(pattern[i], g, next)) continue;
    bool fresh = covered.insert(g).second;
    if (es_prime_search(pattern, i + 1, goal, next, covered, out)) return true;
    if (fresh) covered.erase(g);
  }
  return false;
}

}  // namespace

std::optional<Substitution> find_es_prime_substitution(const CQ& conj, const CQ& target) {
  std::set<Atom> goal(conj.atoms.begin(), conj.atoms.end());
  Substitution s;
  std::set<Atom> covered;
  std::optional<Substitution> out;
  es_prime_search(target.atoms, 0, goal, s, covered, out);
  return out;
}

SkChecker::SkChecker(KnowledgeBase kb, bool allow_set_abstraction)
    : kb_(std::move(kb)),
      sk_rules_(kb_.skolemized_tbox()),
      allow_set_abstraction_(allow_set_abstraction) {}

std::string SkChecker::rule_id_of(const Sentence& p) const {
  std::string k = sentence_key(p);
  for (size_t i = 0; i < kb_.tbox.size(); ++i) {
    Sentence ax = std::holds_alternative<DLLiteAxiom>(kb_.tbox[i])
                      ? Sentence(std::get<DLLiteAxiom>(kb_.tbox[i]))
                      : Sentence(std::get<ExistentialRule>(kb_.tbox[i]));
    if (sentence_key(ax) == k || sentence_key(Sentence(tbox_rule(kb_.tbox[i]))) == k)
      return std::to_string(i);
  }
  return "x";
}

std::optional<std::string> SkChecker::admissible(const std::vector<Sentence>& premises,
                                                 const Sentence& conclusion) const {
  const CQ* concl = as_cq(conclusion);
  if (!concl || !concl->boolean()) return std::nullopt;

  // Modus ponens over a Skolemized rule: ground-atom premises plus one rule.
  if (is_assertion(conclusion) && !premises.empty()) {
    std::vector<Atom> atom_premises;
    std::optional<SkolemRule> rule;
    bool shape_ok = true;
    for (const auto& p : premises) {
      if (is_assertion(p)) {
        atom_premises.push_back(std::get<CQ>(p).atoms[0]);
      } else if (std::holds_alternative<DLLiteAxiom>(p)) {
        if (rule) shape_ok = false;
        rule = skolemize(translate_axiom(std::get<DLLiteAxiom>(p)), rule_id_of(p));
      } else if (std::holds_alternative<ExistentialRule>(p)) {
        if (rule) shape_ok = false;
        rule = skolemize(std::get<ExistentialRule>(p), rule_id_of(p));
      } else {
        shape_ok = false;
      }
    }
    if (shape_ok && rule && atom_premises.size() + 1 == premises.size()) {
      const Atom& target = concl->atoms[0];
      std::set<Atom> premise_set(atom_premises.begin(), atom_premises.end());
      for (const auto& pi : match(rule->body, atom_premises)) {
        std::set<Atom> image;
        for (const auto& b : rule->body) image.insert(substitute(pi, b));
        if (image != premise_set) continue;
        for (const auto& h : rule->head)
          if (substitute(pi, h) == target) return "MPs";
      }
    }
  }

  // Ground conjunction introduction: premises are the conjuncts, in order.
  if (concl->ground() && concl->atoms.size() == premises.size() && !premises.empty()) {
    bool all = true;
    for (size_t i = 0; i < premises.size(); ++i) {
      const CQ* p = as_cq(premises[i]);
      if (!p || !is_assertion(premises[i]) || p->atoms[0] != concl->atoms[i]) {
        all = false;
        break;
      }
    }
    if (all) return "Cs";
  }

  // Existential abstraction from a single ground conjunction premise.
  if (premises.size() == 1 && !concl->ground()) {
    const CQ* conj = as_cq(premises[0]);
    if (conj && conj->boolean() && conj->ground()) {
      if (find_es_substitution(*conj, *concl)) return "Es";
      if (allow_set_abstraction_ && find_es_prime_substitution(*conj, *concl)) return "Es'";
    }
  }
  return std::nullopt;
}

bool SkChecker::grounded(const Sentence& leaf) const { return in_theory(leaf, kb_); }

std::shared_ptr<SkChecker> sk_schema_checker(const KnowledgeBase& kb, bool allow_set_abstraction) {
  return std::make_shared<SkChecker>(kb, allow_set_abstraction);
}

}  // namespace cqproof
