#include "doctest.h"

#include <random>

#include "example_kb.hpp"

using namespace cqproof;
using namespace cqproof::testing;

TEST_CASE("chase on the example KB materializes the four derived atoms") {
  auto kb = example_kb();
  auto rules = kb.skolemized_tbox();
  ChaseConfig cfg{2, 100000};
  auto r = chase(kb, rules, cfg);
  Term b = C("b");
  std::vector<Atom> expect = {
      Atom::unary("B", b),
      Atom::binary("P", b, f_of(b)),
      Atom::binary("S", f_of(b), g_of(f_of(b))),
      Atom::binary("R", f_of(b), b),
      Atom::binary("T", b, h_of(b)),
  };
  CHECK(r.facts.size() == expect.size());
  for (const auto& a : expect) CHECK(r.contains(a));
  CHECK(r.from_abox(expect[0]));
  CHECK_FALSE(r.from_abox(expect[1]));
  // Witness of P(b,f(b)) is the modus ponens step from B(b).
  const auto& w = r.witnesses.at(expect[1]);
  CHECK(w.rule_index == 2);
  CHECK(w.premises == std::vector<Atom>{Atom::unary("B", b)});
}

TEST_CASE("empty TBox: chase equals the ABox") {
  KnowledgeBase kb;
  kb.add_assertion(Atom::unary("A", C("a")));
  kb.add_assertion(Atom::binary("R", C("a"), C("b")));
  auto r = chase(kb, kb.skolemized_tbox(), ChaseConfig{3});
  CHECK(r.facts.size() == 2);
}

TEST_CASE("depth bound cuts the recursive role chain after three steps") {
  KnowledgeBase kb;
  kb.tbox = {DLLiteAxiom::concept_incl(ConceptExpr::exists({"R", true}),
                                       ConceptExpr::exists({"R", false}))};
  kb.add_assertion(Atom::binary("R", C("a"), C("b")));
  auto r = chase(kb, kb.skolemized_tbox(), ChaseConfig{3});
  CHECK(r.facts.size() == 4);  // the assertion plus a chain of three
  int max_depth = 0;
  for (const auto& a : r.facts) max_depth = std::max(max_depth, a.term_depth());
  CHECK(max_depth == 3);
}

TEST_CASE("fact cap is an explicit error") {
  KnowledgeBase kb;
  kb.tbox = {DLLiteAxiom::concept_incl(ConceptExpr::exists({"R", true}),
                                       ConceptExpr::exists({"R", false}))};
  kb.add_assertion(Atom::binary("R", C("a"), C("b")));
  CHECK_THROWS_AS(chase(kb, kb.skolemized_tbox(), ChaseConfig{50, 10}), CapExceeded);
}

TEST_CASE("chase monotonicity: larger ABox never loses atoms") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    KnowledgeBase kb = example_kb();
    auto r1 = chase(kb, kb.skolemized_tbox(), ChaseConfig{3});
    kb.add_assertion(Atom::unary("A", C("a" + std::to_string(rng() % 3))));
    auto r2 = chase(kb, kb.skolemized_tbox(), ChaseConfig{3});
    for (const auto& a : r1.facts) CHECK(r2.contains(a));
  }
}

TEST_CASE("infer_mps mirrors the first derivations of the golden proof") {
  auto kb = example_kb();
  auto rules = kb.skolemized_tbox();
  Term b = C("b");

  Substitution pi1{{"x", b}};
  auto out1 = infer_mps({Atom::unary("B", b)}, rules[2], pi1);
  CHECK(out1 == std::vector<Atom>{Atom::binary("P", b, f_of(b))});

  Substitution pi2{{"x", b}, {"y", f_of(b)}};
  auto out2 = infer_mps({Atom::binary("P", b, f_of(b))}, rules[4], pi2);
  CHECK(out2 == std::vector<Atom>{Atom::binary("R", f_of(b), b)});

  // pi not matching the premises is rejected.
  Substitution bad{{"x", C("c")}};
  CHECK_THROWS_AS(infer_mps({Atom::unary("B", b)}, rules[2], bad), InputError);
}

TEST_CASE("infer_mps allows the same premise atom to be used twice") {
  ExistentialRule rule({Atom::unary("A", V("x")), Atom::unary("A", V("y"))},
                       {Atom::binary("R", V("x"), V("y"))});
  auto sk = skolemize(rule, "0");
  Substitution pi{{"x", C("a")}, {"y", C("a")}};
  auto out = infer_mps({Atom::unary("A", C("a"))}, sk, pi);
  CHECK(out == std::vector<Atom>{Atom::binary("R", C("a"), C("a"))});
}

TEST_CASE("infer_cs keeps order and duplicates") {
  Atom a = Atom::unary("A", C("a")), b = Atom::unary("B", C("b"));
  auto one = infer_cs({a});
  CHECK(one.atoms == std::vector<Atom>{a});
  auto conj = infer_cs({b, a, b});
  CHECK(conj.atoms == std::vector<Atom>{b, a, b});
  CHECK_THROWS_AS(infer_cs({Atom::unary("A", V("x"))}), InputError);
}

TEST_CASE("infer_es: golden abstraction and the duplicate-atom rejection") {
  auto kb = example_kb();
  Term b = C("b");
  Atom p = Atom::binary("P", b, f_of(b)), s = Atom::binary("S", f_of(b), g_of(f_of(b))),
       r = Atom::binary("R", f_of(b), b), t = Atom::binary("T", b, h_of(b));
  CQ conj = infer_cs({r, t, t, r, s, s, p});
  CQ target = bind_answers(example_query(), {b});
  auto sigma = find_es_substitution(conj, target);
  REQUIRE(sigma);
  CHECK(sigma->at("x") == f_of(b));
  CHECK(sigma->at("y") == b);
  CHECK(sigma->at("z") == h_of(b));
  CHECK(sigma->at("zp") == g_of(f_of(b)));
  CHECK(infer_es(conj, target, *sigma) == target);

  // A(a) does not abstract to ex x,y. A(x) and A(y): the premise would have
  // to be the two-conjunct A(a) and A(a).
  CQ single({}, {Atom::unary("A", C("a"))});
  CQ doubled({}, {Atom::unary("A", V("x")), Atom::unary("A", V("y"))});
  CHECK_FALSE(find_es_substitution(single, doubled));
  CQ two({}, {Atom::unary("A", C("a")), Atom::unary("A", C("a"))});
  CHECK(find_es_substitution(two, doubled));
}

TEST_CASE("trivial abstraction: one ground atom to ex x. A(x)") {
  CQ conj({}, {Atom::unary("A", C("a"))});
  CQ target({}, {Atom::unary("A", V("x"))});
  auto sigma = find_es_substitution(conj, target);
  REQUIRE(sigma);
  CHECK(sigma->at("x") == C("a"));
}

TEST_CASE("set-abstraction accepts merged duplicates") {
  CQ single({}, {Atom::unary("A", C("a"))});
  CQ doubled({}, {Atom::unary("A", V("x")), Atom::unary("A", V("y"))});
  auto sigma = find_es_prime_substitution(single, doubled);
  REQUIRE(sigma);
  CHECK(infer_es_prime(single, doubled, *sigma) == doubled);
  // Every positionally admissible abstraction is also set-admissible.
  CQ two({}, {Atom::unary("A", C("a")), Atom::unary("A", C("a"))});
  CHECK(find_es_prime_substitution(two, doubled));
}

TEST_CASE("checker: golden edges accepted, corrupted edges rejected") {
  auto kb = example_kb();
  auto checker = sk_schema_checker(kb);
  auto p = example_sk_proof();
  for (const auto& e : p.graph.edges()) {
    std::vector<Sentence> premises;
    for (VertexId s : e.sources) premises.push_back(p.graph.label(s));
    auto verdict = checker->admissible(premises, p.graph.label(e.target));
    REQUIRE(verdict);
    CHECK(*verdict == e.rule);
  }
  // A modus ponens conclusion outside pi(head) is rejected.
  std::vector<Sentence> premises{assertion_sentence(Atom::unary("B", C("b"))),
                                 Sentence(std::get<DLLiteAxiom>(kb.tbox[2]))};
  CHECK_FALSE(checker->admissible(premises, assertion_sentence(Atom::unary("B", C("c")))));
  // Merged duplicates need the set-abstraction variant.
  CQ single({}, {Atom::unary("B", C("b"))});
  CQ doubled({}, {Atom::unary("B", V("x")), Atom::unary("B", V("y"))});
  CHECK_FALSE(checker->admissible({Sentence(single)}, Sentence(doubled)));
  auto prime = sk_schema_checker(kb, true);
  auto verdict = prime->admissible({Sentence(single)}, Sentence(doubled));
  REQUIRE(verdict);
  CHECK(*verdict == "Es'");
}

TEST_CASE("derivations_of finds all single-step derivations") {
  auto kb = example_kb();
  auto rules = kb.skolemized_tbox();
  auto r = chase(kb, rules, ChaseConfig{2});
  Term b = C("b");
  auto ds = derivations_of(Atom::binary("R", f_of(b), b), r, rules);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].rule_index == 4);
  CHECK(ds[0].premises == std::vector<Atom>{Atom::binary("P", b, f_of(b))});
  CHECK(derivations_of(Atom::unary("B", b), r, rules).empty());
}

TEST_CASE("chase soundness: derived atoms hold in every saturation") {
  // Saturating with a larger depth bound never removes atoms, so the
  // bounded chase is a subset of the deeper one.
  auto kb = example_kb();
  auto rules = kb.skolemized_tbox();
  auto shallow = chase(kb, rules, ChaseConfig{2});
  auto deep = chase(kb, rules, ChaseConfig{6});
  for (const auto& a : shallow.facts) CHECK(deep.contains(a));
}

namespace {

// Independent brute-force admissibility for modus ponens edges: enumerate
// every rule and every total assignment of body variables to premise terms
// (no matching machinery involved).
bool brute_mps_admissible(const KnowledgeBase& kb, const std::vector<Sentence>& premises,
                          const Sentence& conclusion) {
  const CQ* concl = as_cq(conclusion);
  if (!concl || concl->atoms.size() != 1 || !concl->ground()) return false;
  std::vector<Atom> atoms;
  std::optional<size_t> rule_idx;
  for (const auto& p : premises) {
    if (is_assertion(p))
      atoms.push_back(std::get<CQ>(p).atoms[0]);
    else if (auto idx = tbox_index_of(kb, p))
      rule_idx = idx;
    else
      return false;
  }
  if (!rule_idx || atoms.size() + 1 != premises.size()) return false;
  SkolemRule rule = skolemize(tbox_rule(kb.tbox[*rule_idx]), std::to_string(*rule_idx));
  std::vector<Term> universe;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (std::find(universe.begin(), universe.end(), t) == universe.end()) universe.push_back(t);
  std::vector<std::string> vars;
  for (const auto& v : atoms_vars(rule.body)) vars.push_back(v);
  std::vector<size_t> idx(vars.size(), 0);
  if (universe.empty()) return false;
  while (true) {
    Substitution s;
    for (size_t i = 0; i < vars.size(); ++i) s.emplace(vars[i], universe[idx[i]]);
    std::set<Atom> image;
    for (const auto& b : rule.body) image.insert(substitute(s, b));
    if (image == std::set<Atom>(atoms.begin(), atoms.end())) {
      for (const auto& h : rule.head)
        if (substitute(s, h) == concl->atoms[0]) return true;
    }
    size_t k = 0;
    while (k < idx.size() && ++idx[k] == universe.size()) idx[k++] = 0;
    if (k == idx.size() || vars.empty()) break;
  }
  return false;
}

}  // namespace

TEST_CASE("checker verdicts match a brute-force edge re-derivation") {
  auto kb = example_kb();
  auto checker = sk_schema_checker(kb);
  auto p = example_sk_proof();
  int compared = 0;
  for (const auto& e : p.graph.edges()) {
    if (e.rule != "MPs") continue;
    std::vector<Sentence> premises;
    for (VertexId s : e.sources) premises.push_back(p.graph.label(s));
    bool fast = checker->admissible(premises, p.graph.label(e.target)).has_value();
    bool slow = brute_mps_admissible(kb, premises, p.graph.label(e.target));
    CHECK(fast == slow);
    CHECK(fast);
    ++compared;
    // Mutated conclusions are rejected by both.
    Sentence wrong = assertion_sentence(Atom::unary("Zz", C("b")));
    CHECK_FALSE(checker->admissible(premises, wrong));
    CHECK_FALSE(brute_mps_admissible(kb, premises, wrong));
    // Swapped argument order is rejected by both (where arity permits).
    const CQ* cq = as_cq(p.graph.label(e.target));
    if (cq->atoms[0].arity() == 2) {
      Atom swapped(cq->atoms[0].pred, {cq->atoms[0].args[1], cq->atoms[0].args[0]});
      bool f2 = checker->admissible(premises, assertion_sentence(swapped)).has_value();
      bool s2 = brute_mps_admissible(kb, premises, assertion_sentence(swapped));
      CHECK(f2 == s2);
    }
  }
  CHECK(compared == 4);
}
