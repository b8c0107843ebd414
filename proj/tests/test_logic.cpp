#include "doctest.h"

#include <algorithm>

#include "cqproof/axioms.hpp"
#include "cqproof/cq.hpp"
#include "cqproof/sentence.hpp"
#include "cqproof/subst.hpp"

using namespace cqproof;

namespace {

Term C(const std::string& n) { return Term::constant(n); }
Term V(const std::string& n) { return Term::variable(n); }

}  // namespace

TEST_CASE("terms: kinds, depth, order") {
  Term b = C("b");
  Term f_b = Term::skolem("f", b);
  Term g_f_b = Term::skolem("g", f_b);
  CHECK(b.depth() == 0);
  CHECK(f_b.depth() == 1);
  CHECK(g_f_b.depth() == 2);
  CHECK(f_b.is_ground());
  CHECK_FALSE(Term::skolem("f", V("x")).is_ground());
  CHECK(b < f_b);  // constants before skolem terms
  CHECK(f_b == Term::skolem("f", C("b")));
  CHECK_THROWS_AS(Term::constant(""), InputError);
  CHECK_THROWS_AS(Term::variable("a b"), InputError);
}

TEST_CASE("atoms: arity checks") {
  CHECK_THROWS_AS(Atom("P", {}), InputError);
  CHECK_THROWS_AS(Atom("P", {C("a"), C("b"), C("c")}), InputError);
  CHECK(Atom::unary("A", C("a")).ground());
  CHECK_FALSE(Atom::binary("P", C("a"), V("x")).ground());
}

TEST_CASE("translate_axiom: role inclusion with inverse rhs") {
  // P rsub R-  ==>  P(x,y) -> R(y,x)
  auto ax = DLLiteAxiom::role_incl({"P", false}, {"R", true});
  auto rule = translate_axiom(ax);
  REQUIRE(rule.body.size() == 1);
  REQUIRE(rule.head.size() == 1);
  CHECK(rule.body[0] == Atom::binary("P", V("x"), V("y")));
  CHECK(rule.head[0] == Atom::binary("R", V("y"), V("x")));
  CHECK(rule.existential_vars.empty());
}

TEST_CASE("translate_axiom: name-to-name inclusion") {
  auto rule = translate_axiom(
      DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::named("B")));
  CHECK(rule.body[0] == Atom::unary("A", V("x")));
  CHECK(rule.head[0] == Atom::unary("B", V("x")));
}

TEST_CASE("translate_axiom: exists P- sub exists S, skolemized and back") {
  // exists P- sub exists S  ==>  P(y,x) -> S(x,u), skolemized S(x, fn(x))
  auto ax = DLLiteAxiom::concept_incl(ConceptExpr::exists({"P", true}),
                                      ConceptExpr::exists({"S", false}));
  auto rule = translate_axiom(ax);
  REQUIRE(rule.body.size() == 1);
  CHECK(rule.body[0].pred == "P");
  REQUIRE(rule.existential_vars.size() == 1);
  auto sk = skolemize(rule, "3");
  REQUIRE(sk.head.size() == 1);
  CHECK(sk.head[0].pred == "S");
  CHECK(sk.head[0].args[1].is_skolem());
  CHECK(sk.head[0].args[1].name() == "fn_3_u");
  // Round trip recovers the rule up to renaming.
  auto back = deskolemize(sk);
  CHECK(sentence_equal(Sentence(back), Sentence(rule)));
}

TEST_CASE("skolemize: rule without existentials unchanged") {
  auto rule = translate_axiom(
      DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::named("B")));
  auto sk = skolemize(rule, "0");
  CHECK(sk.head == rule.head);
  CHECK(sk.body == rule.body);
}

TEST_CASE("skolemize: B sub exists P gives P(x, f(x))") {
  auto ax = DLLiteAxiom::concept_incl(ConceptExpr::named("B"),
                                      ConceptExpr::exists({"P", false}));
  auto sk = skolemize(translate_axiom(ax), "2");
  REQUIRE(sk.head.size() == 1);
  CHECK(sk.head[0].args[0] == V("x"));
  CHECK(sk.head[0].args[1] == Term::skolem("fn_2_u", V("x")));
}

TEST_CASE("canonicalize: renaming invariance") {
  CQ a({}, {Atom::binary("P", C("b"), V("z"))});
  CQ b({}, {Atom::binary("P", C("b"), V("w"))});
  CHECK(canonicalize_cq(a).atoms == canonicalize_cq(b).atoms);
  CHECK(cq_equal(a, b));
}

TEST_CASE("canonicalize: atom order irrelevant, idempotent") {
  CQ a({}, {Atom::unary("A", V("x")), Atom::binary("R", V("x"), V("y"))});
  CQ b({}, {Atom::binary("R", V("u"), V("v")), Atom::unary("A", V("u"))});
  CHECK(canonicalize_cq(a).atoms == canonicalize_cq(b).atoms);
  auto once = canonicalize_cq(a);
  auto twice = canonicalize_cq(once);
  CHECK(once.atoms == twice.atoms);
}

TEST_CASE("canonicalize: no variable merging") {
  CQ q({}, {Atom::binary("P", C("b"), V("z")), Atom::binary("P", C("b"), V("zp"))});
  auto c = canonicalize_cq(q);
  CHECK(atoms_vars(c.atoms).size() == 2);
}

TEST_CASE("canonicalize: answer variables and constants kept") {
  CQ q({"x"}, {Atom::binary("P", V("x"), V("y"))});
  auto c = canonicalize_cq(q);
  CHECK(c.answer_vars == std::vector<std::string>{"x"});
  bool has_x = false;
  for (const auto& a : c.atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && t.name() == "x") has_x = true;
  CHECK(has_x);
}

TEST_CASE("match: single binary pattern on skolem fact") {
  std::vector<Atom> pattern{Atom::binary("P", V("x"), V("y"))};
  std::vector<Atom> facts{Atom::binary("P", C("b"), Term::skolem("f", C("b")))};
  auto ms = match(pattern, facts);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].at("x") == C("b"));
  CHECK(ms[0].at("y") == Term::skolem("f", C("b")));
}

TEST_CASE("match: predicate mismatch yields empty") {
  CHECK(match({Atom::unary("A", V("x"))}, {Atom::unary("B", C("b"))}).empty());
}

TEST_CASE("match: two-atom join") {
  std::vector<Atom> pattern{Atom::binary("R", V("x"), V("y")), Atom::binary("T", V("y"), V("z"))};
  std::vector<Atom> facts{Atom::binary("R", Term::skolem("f", C("b")), C("b")),
                          Atom::binary("T", C("b"), Term::skolem("h", C("b")))};
  auto ms = match(pattern, facts);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].at("x") == Term::skolem("f", C("b")));
  CHECK(ms[0].at("y") == C("b"));
  CHECK(ms[0].at("z") == Term::skolem("h", C("b")));
}

TEST_CASE("match: sound and complete against brute-force enumeration") {
  // Small random-ish universes, checked against assigning every pattern
  // variable to every term occurring in the facts.
  std::vector<Atom> facts{
      Atom::binary("R", C("a"), C("b")), Atom::binary("R", C("b"), C("a")),
      Atom::unary("A", C("a")), Atom::unary("A", C("b")),
      Atom::binary("S", C("a"), Term::skolem("f", C("a")))};
  std::vector<std::vector<Atom>> patterns{
      {Atom::binary("R", V("x"), V("y")), Atom::binary("R", V("y"), V("x"))},
      {Atom::unary("A", V("x")), Atom::binary("R", V("x"), V("y")), Atom::unary("A", V("y"))},
      {Atom::binary("S", V("x"), V("y")), Atom::unary("A", V("x"))},
      {Atom::binary("R", V("x"), V("x"))},
  };
  std::vector<Term> universe;
  for (const auto& f : facts)
    for (const auto& t : f.args)
      if (std::find(universe.begin(), universe.end(), t) == universe.end()) universe.push_back(t);

  for (const auto& pattern : patterns) {
    auto got = match(pattern, facts);
    // Brute force over all assignments.
    std::vector<std::string> vars;
    for (const auto& v : atoms_vars(pattern)) vars.push_back(v);
    std::vector<Substitution> expected;
    std::vector<size_t> idx(vars.size(), 0);
    while (true) {
      Substitution s;
      for (size_t i = 0; i < vars.size(); ++i) s.emplace(vars[i], universe[idx[i]]);
      bool all_in = true;
      for (const auto& p : pattern) {
        Atom img = substitute(s, p);
        if (std::find(facts.begin(), facts.end(), img) == facts.end()) {
          all_in = false;
          break;
        }
      }
      if (all_in) expected.push_back(s);
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == universe.size()) idx[k++] = 0;
      if (k == idx.size()) break;
      if (vars.empty()) break;
    }
    // got is sorted and unique; expected may repeat in enumeration order.
    std::sort(expected.begin(), expected.end());
    expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
    CHECK(got == expected);
  }
}

TEST_CASE("freeze: single atom with fresh witness") {
  CQ q({"x"}, {Atom::binary("P", V("x"), V("z"))});
  auto frozen = freeze_cq(q, {C("b")});
  REQUIRE(frozen.size() == 1);
  CHECK(frozen[0].args[0] == C("b"));
  CHECK(frozen[0].args[1].is_constant());
  CHECK(frozen[0].args[1] != C("b"));
}

TEST_CASE("freeze: boolean ground CQ is its own atom set") {
  CQ q({}, {Atom::unary("A", C("a")), Atom::unary("B", C("b"))});
  CHECK(freeze_cq(q, {}) == q.atoms);
}

TEST_CASE("abox_to_query basics and round trip") {
  std::vector<Atom> abox{Atom::unary("B", C("b"))};
  auto q1 = abox_to_query(abox, {C("b")});
  CHECK(q1.atoms == abox);
  CHECK(atoms_vars(q1.atoms).empty());

  auto q2 = abox_to_query({Atom::binary("P", C("b"), C("c"))}, {C("b")});
  REQUIRE(q2.atoms.size() == 1);
  CHECK(q2.atoms[0].args[0] == C("b"));
  CHECK(q2.atoms[0].args[1].is_variable());
}

TEST_CASE("round trip freeze then abox_to_query is canonical identity") {
  // Example-style query with seven atoms.
  auto x = V("x"), xp = V("xp"), xpp = V("xpp"), y = V("y"), yp = V("yp"), z = V("z"), zp = V("zp");
  CQ q({"w"}, {Atom::binary("R", x, y), Atom::binary("T", y, z), Atom::binary("T", yp, z),
               Atom::binary("R", xp, yp), Atom::binary("S", xp, zp), Atom::binary("S", xpp, zp),
               Atom::binary("P", V("w"), xpp)});
  auto bound = bind_answers(q, {C("b")});
  auto frozen = freeze_cq(q, {C("b")});
  CHECK(frozen.size() == 7);
  // 7 fresh constants plus the answer constant.
  std::set<Term> consts;
  for (const auto& a : frozen)
    for (const auto& t : a.args) consts.insert(t);
  CHECK(consts.size() == 8);
  auto back = abox_to_query(frozen, {C("b")});
  CHECK(cq_equal(back, bound));
}

TEST_CASE("axiom shapes: translate, skolemize, deskolemize round trip") {
  std::vector<DLLiteAxiom> shapes{
      DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::named("B")),
      DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::exists({"R", false})),
      DLLiteAxiom::concept_incl(ConceptExpr::exists({"R", false}), ConceptExpr::named("A")),
      DLLiteAxiom::concept_incl(ConceptExpr::exists({"R", true}), ConceptExpr::exists({"S", false})),
      DLLiteAxiom::role_incl({"P", false}, {"R", false}),
      DLLiteAxiom::role_incl({"P", true}, {"R", true}),
  };
  for (size_t i = 0; i < shapes.size(); ++i) {
    auto rule = translate_axiom(shapes[i]);
    auto back = deskolemize(skolemize(rule, std::to_string(i)));
    CHECK(sentence_equal(Sentence(back), Sentence(rule)));
  }
}
