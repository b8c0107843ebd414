#ifndef CQPROOF_TESTS_RANDOM_TEMPORAL_HPP
#define CQPROOF_TESTS_RANDOM_TEMPORAL_HPP

#include <random>

#include "cqproof/temporal_proof.hpp"

namespace cqproof::testing {

struct RandomTemporalInstance {
  KnowledgeBase kb;  // tbox only
  TemporalABox tabox;
  Mtcq::Ptr query;   // Boolean
};

inline Mtcq::Ptr random_mtcq(std::mt19937& rng, int depth) {
  auto leaf = [&]() {
    static const std::vector<std::string> concepts{"A", "B"};
    static const std::vector<std::string> consts{"a", "b"};
    if (rng() % 3 == 0) {
      return Mtcq::leaf(CQ({}, {Atom::binary("R", Term::constant(consts[rng() % 2]),
                                             Term::variable("z"))}));
    }
    return Mtcq::leaf(
        CQ({}, {Atom::unary(concepts[rng() % 2], Term::constant(consts[rng() % 2]))}));
  };
  if (depth <= 0) return leaf();
  int64_t r1 = rng() % 3;
  int64_t r2 = r1 + rng() % 3;
  switch (rng() % 7) {
    case 0: return leaf();
    case 1: return Mtcq::conj(random_mtcq(rng, depth - 1), random_mtcq(rng, depth - 1));
    case 2: return Mtcq::disj(random_mtcq(rng, depth - 1), random_mtcq(rng, depth - 1));
    case 3: return Mtcq::box_plus(Interval::closed(r1, r2), random_mtcq(rng, depth - 1));
    case 4: return Mtcq::box_minus(Interval::closed(r1, r2), random_mtcq(rng, depth - 1));
    case 5:
      return Mtcq::until(Interval::closed(r1, r2), random_mtcq(rng, depth - 1),
                         random_mtcq(rng, depth - 1));
    default:
      return Mtcq::since(Interval::closed(r1, r2), random_mtcq(rng, depth - 1),
                         random_mtcq(rng, depth - 1));
  }
}

inline RandomTemporalInstance random_temporal_instance(std::mt19937& rng, int max_facts = 5,
                                                       int formula_depth = 3) {
  RandomTemporalInstance inst;
  if (rng() % 2)
    inst.kb.tbox.push_back(
        DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::named("B")));
  if (rng() % 3 == 0)
    inst.kb.tbox.push_back(DLLiteAxiom::concept_incl(ConceptExpr::exists({"R", false}),
                                                     ConceptExpr::named("A")));
  static const std::vector<std::string> consts{"a", "b"};
  int n = 1 + rng() % max_facts;
  for (int i = 0; i < n; ++i) {
    int64_t lo = static_cast<int64_t>(rng() % 17) - 8;
    int64_t hi = lo + rng() % 5;
    Atom atom = rng() % 3 == 0 ? Atom::binary("R", Term::constant(consts[rng() % 2]),
                                              Term::constant(consts[rng() % 2]))
                               : Atom::unary(rng() % 2 ? "A" : "B",
                                             Term::constant(consts[rng() % 2]));
    inst.tabox.add(atom, Interval::closed(lo, hi));
  }
  inst.query = random_mtcq(rng, formula_depth);
  return inst;
}

}  // namespace cqproof::testing

#endif
