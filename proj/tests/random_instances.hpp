#ifndef CQPROOF_TESTS_RANDOM_INSTANCES_HPP
#define CQPROOF_TESTS_RANDOM_INSTANCES_HPP

// Randomized DL-Lite instances whose query is sampled from the chase, so
// the entailment prerequisite holds by construction.

#include <optional>
#include <random>

#include "cqproof/search.hpp"

namespace cqproof::testing {

struct RandomInstance {
  KnowledgeBase kb;
  CQ query;
  std::vector<Term> answer;

  SearchGoal goal(Deriver d, Measure m) const {
    SearchGoal g;
    g.kb = kb;
    g.query = query;
    g.answer = answer;
    g.deriver = d;
    g.measure = m;
    return g;
  }
};

inline DLLiteAxiom random_axiom(std::mt19937& rng) {
  static const std::vector<std::string> concepts{"A", "B", "Cc", "D"};
  static const std::vector<std::string> roles{"R", "S", "T", "P"};
  auto concept_expr = [&]() {
    if (rng() % 2)
      return ConceptExpr::named(concepts[rng() % concepts.size()]);
    return ConceptExpr::exists({roles[rng() % roles.size()], rng() % 2 == 0});
  };
  if (rng() % 4 == 0) {
    return DLLiteAxiom::role_incl({roles[rng() % roles.size()], rng() % 2 == 0},
                                  {roles[rng() % roles.size()], rng() % 2 == 0});
  }
  return DLLiteAxiom::concept_incl(concept_expr(), concept_expr());
}

inline std::optional<RandomInstance> random_entailed_instance(std::mt19937& rng,
                                                              size_t max_axioms = 8,
                                                              size_t max_abox = 6,
                                                              size_t max_query_atoms = 5,
                                                              bool want_tree_shaped = false) {
  static const std::vector<std::string> concepts{"A", "B", "Cc", "D"};
  static const std::vector<std::string> roles{"R", "S", "T", "P"};
  static const std::vector<std::string> consts{"a", "b", "c"};

  KnowledgeBase kb;
  size_t n_ax = 1 + rng() % max_axioms;
  for (size_t i = 0; i < n_ax; ++i) kb.tbox.push_back(random_axiom(rng));
  size_t n_ab = 1 + rng() % max_abox;
  for (size_t i = 0; i < n_ab; ++i) {
    if (rng() % 2) {
      kb.add_assertion(Atom::unary(concepts[rng() % concepts.size()],
                                   Term::constant(consts[rng() % consts.size()])));
    } else {
      kb.add_assertion(Atom::binary(roles[rng() % roles.size()],
                                    Term::constant(consts[rng() % consts.size()]),
                                    Term::constant(consts[rng() % consts.size()])));
    }
  }

  // Sample the query from the chase, so it is entailed.
  ChaseResult chase_result;
  try {
    chase_result = chase(kb, kb.skolemized_tbox(), ChaseConfig{3, 3000});
  } catch (const CapExceeded&) {
    return std::nullopt;
  }
  const auto& facts = chase_result.facts;
  if (facts.empty()) return std::nullopt;

  size_t want = 1 + rng() % max_query_atoms;
  std::vector<Atom> picked{facts[rng() % facts.size()]};
  for (int tries = 0; picked.size() < want && tries < 40; ++tries) {
    const Atom& cand = facts[rng() % facts.size()];
    // Prefer atoms sharing a term with the current selection.
    auto terms = atoms_terms(picked);
    bool connected = std::any_of(cand.args.begin(), cand.args.end(),
                                 [&](const Term& t) { return terms.count(t) != 0; });
    if (!connected && rng() % 4 != 0) continue;
    if (std::find(picked.begin(), picked.end(), cand) == picked.end()) picked.push_back(cand);
  }

  // Abstract the ground terms into variables; optionally keep one constant
  // as the answer.
  std::map<Term, Term> var_of;
  size_t next = 0;
  std::optional<Term> answer_const;
  for (const auto& a : picked)
    for (const auto& t : a.args)
      if (t.is_constant() && !answer_const && rng() % 3 == 0) answer_const = t;
  std::vector<Atom> atoms;
  for (const auto& a : picked) {
    std::vector<Term> args;
    for (const auto& t : a.args) {
      if (answer_const && t == *answer_const) {
        args.push_back(t);
        continue;
      }
      auto it = var_of.find(t);
      if (it == var_of.end())
        it = var_of.emplace(t, Term::variable("q" + std::to_string(next++))).first;
      args.push_back(it->second);
    }
    atoms.push_back(Atom(a.pred, std::move(args)));
  }

  RandomInstance inst;
  inst.kb = std::move(kb);
  try {
    inst.query = CQ({}, atoms);
  } catch (const InputError&) {
    return std::nullopt;
  }
  if (want_tree_shaped && !is_tree_shaped(inst.query)) return std::nullopt;
  return inst;
}

}  // namespace cqproof::testing

#endif
