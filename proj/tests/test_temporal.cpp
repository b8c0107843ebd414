#include "doctest.h"
#include <functional>

#include "cqproof/temporal_proof.hpp"
#include "example_kb.hpp"
#include "random_temporal.hpp"

using namespace cqproof;
using namespace cqproof::testing;

namespace {

bool point_in(const std::vector<Interval>& ivs, int64_t t) {
  return std::any_of(ivs.begin(), ivs.end(), [&](const Interval& i) { return i.contains(t); });
}

std::vector<int64_t> sample_points() {
  std::vector<int64_t> pts;
  for (int64_t t = -10; t <= 10; ++t) pts.push_back(t);
  return pts;
}

}  // namespace

TEST_CASE("interval arithmetic: worked examples") {
  Interval a = Interval::closed(0, 5), b = Interval::closed(1, 2);
  CHECK(*interval_minus(a, b) == Interval::closed(-2, 4));
  CHECK(*intersect(a.shifted(1), Interval::closed(3, 3)) == Interval::closed(3, 3));
  CHECK(*union_if_contiguous(Interval::closed(0, 3), Interval::closed(2, 5)) ==
        Interval::closed(0, 5));
  CHECK_FALSE(union_if_contiguous(Interval::closed(0, 1), Interval::closed(3, 4)));
  // Adjacent intervals join.
  CHECK(*union_if_contiguous(Interval::closed(0, 1), Interval::closed(2, 4)) ==
        Interval::closed(0, 4));
}

TEST_CASE("interval arithmetic agrees with point sets, exhaustively") {
  // Endpoints in [-8,8] plus infinities.
  std::vector<TimePoint> endpoints{TimePoint::neg_inf(), TimePoint::pos_inf()};
  for (int64_t v = -8; v <= 8; ++v) endpoints.push_back(TimePoint::at(v));
  std::vector<Interval> intervals;
  for (const auto& lo : endpoints)
    for (const auto& hi : endpoints)
      if (lo <= hi && !(lo == TimePoint::pos_inf()) && !(hi == TimePoint::neg_inf()))
        intervals.push_back(Interval(lo, hi));

  auto pts = sample_points();
  for (const auto& x : intervals) {
    for (const auto& y : intervals) {
      auto inter = intersect(x, y);
      for (int64_t t : pts) {
        bool expect = x.contains(t) && y.contains(t);
        CHECK(expect == (inter && inter->contains(t)));
      }
      if (y.finite()) {
        // t in x - y iff some shift lands in x. (Guarded sampling keeps the
        // check exact on the sampled points because |y| <= 17.)
        auto diff = interval_minus(x, y);
        for (int64_t t : pts) {
          bool expect = false;
          for (int64_t k = y.lo.value; k <= y.hi.value; ++k)
            if (x.contains(t + k)) expect = true;
          CHECK(expect == (diff && diff->contains(t)));
        }
        auto sum = interval_plus(x, y);
        for (int64_t t : pts) {
          bool expect = false;
          for (int64_t k = y.lo.value; k <= y.hi.value; ++k)
            if (x.contains(t - k)) expect = true;
          CHECK(expect == (sum && sum->contains(t)));
        }
      }
      auto uni = union_if_contiguous(x, y);
      if (uni) {
        for (int64_t t : pts) CHECK(uni->contains(t) == (x.contains(t) || y.contains(t)));
      } else {
        // A gap exists between the two.
        bool gap = false;
        for (int64_t t = -30; t <= 30; ++t)
          if (!x.contains(t) && !y.contains(t) &&
              ((x.hi < TimePoint::at(t) && TimePoint::at(t) < y.lo) ||
               (y.hi < TimePoint::at(t) && TimePoint::at(t) < x.lo)))
            gap = true;
        CHECK(gap);
      }
    }
  }
}

TEST_CASE("rulers partition the window by active facts") {
  TemporalABox tabox;
  tabox.add(Atom::unary("A", C("a")), Interval::closed(0, 5));
  auto rulers = compute_rulers(tabox, Interval::closed(-2, 8));
  REQUIRE(rulers.size() == 3);
  CHECK(rulers[0] == Interval::closed(-2, -1));
  CHECK(rulers[1] == Interval::closed(0, 5));
  CHECK(rulers[2] == Interval::closed(6, 8));

  TemporalABox empty;
  auto whole = compute_rulers(empty, Interval::closed(-2, 8));
  REQUIRE(whole.size() == 1);
  CHECK(whole[0] == Interval::closed(-2, 8));

  // Bound from the fact count.
  TemporalABox several;
  several.add(Atom::unary("A", C("a")), Interval::closed(0, 2));
  several.add(Atom::unary("B", C("a")), Interval::closed(1, 4));
  several.add(Atom::unary("A", C("b")), Interval::closed(7, 7));
  auto rs = compute_rulers(several, Interval::closed(-8, 8));
  CHECK(rs.size() <= 2 * several.facts.size() + 1);
  // Every ruler's points satisfy the same facts.
  for (const auto& r : rs) {
    auto base = slice_at(several, r);
    for (int64_t t = r.lo.value; t <= r.hi.value; ++t) {
      std::vector<Atom> at_t;
      for (const auto& f : several.facts)
        if (f.at.contains(t) &&
            std::find(at_t.begin(), at_t.end(), f.atom) == at_t.end())
          at_t.push_back(f.atom);
      CHECK(at_t == base);
    }
  }
}

TEST_CASE("evaluation: box, top, until") {
  KnowledgeBase kb;
  TemporalABox tabox;
  tabox.add(Atom::unary("A", C("a")), Interval::closed(0, 5));
  Interval window = Interval::closed(-8, 8);

  auto box = eval_mtcq(kb, tabox, Mtcq::box_plus(Interval::closed(1, 2),
                                                 Mtcq::leaf(CQ({}, {Atom::unary("A", C("a"))}))),
                       {}, window);
  REQUIRE(box.size() == 1);
  CHECK(box[0] == Interval::closed(-1, 3));

  auto top = eval_mtcq(kb, tabox, Mtcq::top(), {}, window);
  REQUIRE(top.size() == 1);
  CHECK(top[0] == window);

  TemporalABox tabox2 = tabox;
  tabox2.add(Atom::unary("B", C("a")), Interval::closed(3, 3));
  auto until = eval_mtcq(kb, tabox2,
                         Mtcq::until(Interval::closed(1, 2),
                                     Mtcq::leaf(CQ({}, {Atom::unary("A", C("a"))})),
                                     Mtcq::leaf(CQ({}, {Atom::unary("B", C("a"))}))),
                         {}, window);
  REQUIRE(until.size() == 1);
  CHECK(until[0] == Interval::closed(1, 2));
}

TEST_CASE("evaluation uses the ontology per time point") {
  KnowledgeBase kb;
  kb.tbox = {DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::named("B"))};
  TemporalABox tabox;
  tabox.add(Atom::unary("A", C("a")), Interval::closed(0, 2));
  auto out = eval_mtcq(kb, tabox, Mtcq::leaf(CQ({"x"}, {Atom::unary("B", V("x"))})), {C("a")},
                       Interval::closed(-3, 5));
  REQUIRE(out.size() == 1);
  CHECK(out[0] == Interval::closed(0, 2));
}

TEST_CASE("temporal inference schemas: worked examples") {
  auto a_leaf = Mtcq::leaf(CQ({}, {Atom::unary("A", C("a"))}));

  auto box = infer_temporal(TemporalKind::BoxPlus,
                            {AnnotatedFormula{a_leaf, Interval::closed(0, 5)}},
                            {.window = Interval::closed(1, 2)});
  CHECK(box.at == Interval::closed(-1, 3));

  auto coal = infer_temporal(TemporalKind::Coal,
                             {AnnotatedFormula{a_leaf, Interval::closed(0, 3)},
                              AnnotatedFormula{a_leaf, Interval::closed(2, 5)}},
                             {});
  CHECK(coal.at == Interval::closed(0, 5));
  CHECK_THROWS_AS(infer_temporal(TemporalKind::Coal,
                                 {AnnotatedFormula{a_leaf, Interval::closed(0, 1)},
                                  AnnotatedFormula{a_leaf, Interval::closed(3, 4)}},
                                 {}),
                  InputError);

  auto b_leaf = Mtcq::leaf(CQ({}, {Atom::unary("B", C("a"))}));
  auto until = infer_temporal(TemporalKind::Until,
                              {AnnotatedFormula{a_leaf, Interval::closed(0, 5)},
                               AnnotatedFormula{b_leaf, Interval::closed(3, 3)}},
                              {.window = Interval::closed(1, 2)});
  CHECK(until.at == Interval::closed(1, 2));

  auto sep = infer_temporal(TemporalKind::Sep, {AnnotatedFormula{a_leaf, Interval::closed(0, 5)}},
                            {.target = Interval::closed(2, 3)});
  CHECK(sep.at == Interval::closed(2, 3));
  CHECK_THROWS_AS(infer_temporal(TemporalKind::Sep,
                                 {AnnotatedFormula{a_leaf, Interval::closed(0, 5)}},
                                 {.target = Interval::closed(5, 7)}),
                  InputError);
}

TEST_CASE("next-form expansion bases") {
  auto phi = Mtcq::leaf(CQ({}, {Atom::unary("A", C("a"))}));
  auto psi = Mtcq::leaf(CQ({}, {Atom::unary("B", C("a"))}));

  auto base_box = expand_next_form(Mtcq::box_plus(Interval::closed(0, 0), phi));
  CHECK(base_box->equal_upto_renaming(*phi));

  auto base_until = expand_next_form(Mtcq::until(Interval::closed(0, 0), phi, psi));
  CHECK(base_until->equal_upto_renaming(*psi));

  auto punct = expand_next_form(Mtcq::box_plus(Interval::closed(1, 1), phi));
  CHECK(punct->op() == Mtcq::Op::Next);
  CHECK(punct->left()->equal_upto_renaming(*phi));

  // Expanded forms contain only punctual operators.
  std::function<bool(const Mtcq::Ptr&)> punctual_only = [&](const Mtcq::Ptr& f) -> bool {
    switch (f->op()) {
      case Mtcq::Op::BoxPlus:
      case Mtcq::Op::BoxMinus:
      case Mtcq::Op::Until:
      case Mtcq::Op::Since:
        return false;
      default:
        break;
    }
    bool ok = true;
    if (f->left()) ok = ok && punctual_only(f->left());
    if (f->right()) ok = ok && punctual_only(f->right());
    return ok;
  };
  std::mt19937 rng(3);
  for (int i = 0; i < 30; ++i) {
    auto f = random_mtcq(rng, 3);
    CHECK(punctual_only(expand_next_form(f)));
  }
}

TEST_CASE("next-form expansion preserves the evaluation") {
  std::mt19937 rng(17);
  KnowledgeBase kb;
  kb.tbox = {DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::named("B"))};
  Interval window = Interval::closed(-10, 10);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = random_temporal_instance(rng, 4, 2);
    auto before = eval_mtcq(inst.kb, inst.tabox, inst.query, {}, window);
    auto after = eval_mtcq(inst.kb, inst.tabox, expand_next_form(inst.query), {}, window);
    CHECK(before == after);
  }
}

TEST_CASE("temporal proof: rule application then separation") {
  TemporalGoal goal;
  goal.kb.tbox = {DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::named("B"))};
  goal.tabox.add(Atom::unary("A", C("a")), Interval::closed(0, 5));
  goal.query = Mtcq::leaf(CQ({"x"}, {Atom::unary("B", V("x"))}));
  goal.answer = {C("a")};
  goal.at = Interval::closed(1, 2);
  auto r = temporal_min_proof(goal);
  auto checker = temporal_schema_checker(goal.kb, goal.tabox);
  auto report = validate_proof(r.proof, *checker);
  INFO(report.summary());
  CHECK(report.ok());
  // Fact leaf, axiom leaf, derived atom at the ruler, separation onto [1,2].
  CHECK(proof_size(r.proof) == 4);
  bool has_tmp = false, has_sep = false;
  for (const auto& e : r.proof.graph.edges()) {
    if (e.rule == "TMP") has_tmp = true;
    if (e.rule == "SEP") has_sep = true;
  }
  CHECK(has_tmp);
  CHECK(has_sep);
}

TEST_CASE("temporal proof: TOP is rejected as trivially valid") {
  TemporalGoal goal;
  goal.tabox.add(Atom::unary("A", C("a")), Interval::closed(0, 1));
  goal.query = Mtcq::top();
  CHECK_THROWS_AS(temporal_min_proof(goal), InputError);
}

TEST_CASE("temporal proof: coalescing across rulers") {
  TemporalGoal goal;
  goal.kb = example_kb();
  goal.tabox.add(Atom::unary("B", C("b")), Interval::closed(0, 3));
  goal.tabox.add(Atom::unary("B", C("b")), Interval::closed(4, 7));
  goal.query = Mtcq::leaf(example_query());
  goal.answer = {C("b")};
  goal.at = Interval::closed(0, 7);
  auto r = temporal_min_proof(goal);
  auto report = validate_proof(r.proof, *temporal_schema_checker(goal.kb, goal.tabox));
  INFO(report.summary());
  CHECK(report.ok());
  bool has_coal = false;
  for (const auto& e : r.proof.graph.edges())
    if (e.rule == "COAL") has_coal = true;
  CHECK(has_coal);
  CHECK(point_in(r.derived_intervals, 0));
  CHECK(point_in(r.derived_intervals, 7));
  CHECK(r.tree_size_value <= temporal_proof_bound(goal));
}

TEST_CASE("derived intervals are sound and complete against the evaluator") {
  std::mt19937 rng(91);
  Interval window = Interval::closed(-12, 12);
  int done = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_temporal_instance(rng, 4, 2);
    TemporalGoal goal;
    goal.kb = inst.kb;
    goal.tabox = inst.tabox;
    goal.query = inst.query;
    // An unbounded target keeps every ruler relevant, so the derived
    // maximal intervals must match the evaluator exactly.
    goal.at = Interval::everything();
    std::vector<Interval> derived;
    try {
      derived = temporal_certain_intervals(goal);
    } catch (const InputError&) {
      continue;  // TOP-containing formula
    }
    auto truth = eval_mtcq(inst.kb, inst.tabox, inst.query, {}, window);
    for (int64_t t = window.lo.value; t <= window.hi.value; ++t) {
      bool derived_here = point_in(derived, t);
      bool true_here = point_in(truth, t);
      CHECK(derived_here == true_here);
      if (derived_here != true_here) {
        MESSAGE("formula: ", inst.query->str(), " at t=", t);
      }
    }
    // Every certain point admits a validating pointwise proof.
    for (int64_t t = -4; t <= 4; ++t) {
      if (!point_in(truth, t)) continue;
      goal.at = Interval::closed(t, t);
      auto r = temporal_min_proof(goal);
      CHECK(validate_proof(r.proof, *temporal_schema_checker(goal.kb, goal.tabox)).ok());
      CHECK(r.tree_size_value <= temporal_proof_bound(goal));
    }
    ++done;
  }
  CHECK(done >= 30);
}
