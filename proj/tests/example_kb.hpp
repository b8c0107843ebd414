#ifndef CQPROOF_TESTS_EXAMPLE_KB_HPP
#define CQPROOF_TESTS_EXAMPLE_KB_HPP

// The running example: five inclusions, one assertion, and a seven-atom
// query with certain answer b. Used as a golden fixture across suites.

#include "cqproof/sentence.hpp"
#include "cqproof/sk_schemas.hpp"

namespace cqproof::testing {

inline Term C(const std::string& n) { return Term::constant(n); }
inline Term V(const std::string& n) { return Term::variable(n); }

inline KnowledgeBase example_kb() {
  KnowledgeBase kb;
  kb.tbox = {
      DLLiteAxiom::concept_incl(ConceptExpr::named("A"), ConceptExpr::exists({"R", false})),
      DLLiteAxiom::concept_incl(ConceptExpr::exists({"R", true}), ConceptExpr::exists({"T", false})),
      DLLiteAxiom::concept_incl(ConceptExpr::named("B"), ConceptExpr::exists({"P", false})),
      DLLiteAxiom::concept_incl(ConceptExpr::exists({"P", true}), ConceptExpr::exists({"S", false})),
      DLLiteAxiom::role_incl({"P", false}, {"R", true}),
  };
  kb.add_assertion(Atom::unary("B", C("b")));
  return kb;
}

inline CQ example_query() {
  auto x = V("x"), xp = V("xp"), xpp = V("xpp"), y = V("y"), yp = V("yp"), z = V("z"),
       zp = V("zp"), ypp = V("ypp");
  return CQ({"ypp"},
            {Atom::binary("R", x, y), Atom::binary("T", y, z), Atom::binary("T", yp, z),
             Atom::binary("R", xp, yp), Atom::binary("S", xp, zp), Atom::binary("S", xpp, zp),
             Atom::binary("P", ypp, xpp)});
}

// Skolem terms as produced by the positional rule ids of example_kb().
inline Term f_of(const Term& t) { return Term::skolem("fn_2_u", t); }   // B sub exists P
inline Term g_of(const Term& t) { return Term::skolem("fn_3_u", t); }   // exists P- sub exists S
inline Term h_of(const Term& t) { return Term::skolem("fn_1_u", t); }   // exists R- sub exists T

/// The Skolemized proof of q(b): five leaves, four derived atoms, the
/// seven-conjunct conjunction, and the final CQ. Size 11, tree size 39.
inline Proof example_sk_proof() {
  KnowledgeBase kb = example_kb();
  Term b = C("b");
  Atom p_atom = Atom::binary("P", b, f_of(b));
  Atom s_atom = Atom::binary("S", f_of(b), g_of(f_of(b)));
  Atom r_atom = Atom::binary("R", f_of(b), b);
  Atom t_atom = Atom::binary("T", b, h_of(b));

  Proof p;
  auto& g = p.graph;
  VertexId v_b = g.add_vertex(assertion_sentence(Atom::unary("B", b)));
  VertexId v_ax_p = g.add_vertex(Sentence(std::get<DLLiteAxiom>(kb.tbox[2])));
  VertexId v_p = g.add_vertex(assertion_sentence(p_atom));
  VertexId v_ax_s = g.add_vertex(Sentence(std::get<DLLiteAxiom>(kb.tbox[3])));
  VertexId v_s = g.add_vertex(assertion_sentence(s_atom));
  VertexId v_ax_r = g.add_vertex(Sentence(std::get<DLLiteAxiom>(kb.tbox[4])));
  VertexId v_r = g.add_vertex(assertion_sentence(r_atom));
  VertexId v_ax_t = g.add_vertex(Sentence(std::get<DLLiteAxiom>(kb.tbox[1])));
  VertexId v_t = g.add_vertex(assertion_sentence(t_atom));

  std::vector<Atom> conj = {r_atom, t_atom, t_atom, r_atom, s_atom, s_atom, p_atom};
  VertexId v_conj = g.add_vertex(Sentence(infer_cs(conj)));
  VertexId v_q = g.add_vertex(Sentence(bind_answers(example_query(), {b})));

  g.add_edge({v_b, v_ax_p}, v_p, "MPs");
  g.add_edge({v_p, v_ax_s}, v_s, "MPs");
  g.add_edge({v_p, v_ax_r}, v_r, "MPs");
  g.add_edge({v_r, v_ax_t}, v_t, "MPs");
  g.add_edge({v_r, v_t, v_t, v_r, v_s, v_s, v_p}, v_conj, "Cs");
  g.add_edge({v_conj}, v_q, "Es");
  p.sink = v_q;
  return p;
}

}  // namespace cqproof::testing

#endif
