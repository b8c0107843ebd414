#include "cqproof/compressed.hpp"

#include <algorithm>
#include <queue>

namespace cqproof {

Term placeholder_for(const std::string& role, bool object_position) {
  return Term::constant("b_ex_" + role + (object_position ? "_inv" : ""));
}

namespace {

// The conclusion of applying a DL-Lite inclusion to one atom, with fresh
// witnesses replaced by the placeholder of their role direction.
std::optional<Atom> apply_pattern(const DLLiteAxiom& ax, const Atom& premise) {
  if (ax.kind == DLLiteAxiom::Kind::RoleInclusion) {
    if (premise.arity() != 2 || premise.pred != ax.rlhs.name) return std::nullopt;
    Term s = premise.args[0], o = premise.args[1];
    if (ax.rlhs.inverse) std::swap(s, o);
    return ax.rrhs.inverse ? Atom::binary(ax.rrhs.name, o, s) : Atom::binary(ax.rrhs.name, s, o);
  }
  // Concept inclusion: determine the subject satisfying the left side.
  Term subject = premise.args[0];
  if (ax.clhs.kind == ConceptExpr::Kind::Name) {
    if (premise.arity() != 1 || premise.pred != ax.clhs.name) return std::nullopt;
  } else {
    if (premise.arity() != 2 || premise.pred != ax.clhs.role.name) return std::nullopt;
    subject = ax.clhs.role.inverse ? premise.args[1] : premise.args[0];
  }
  if (ax.crhs.kind == ConceptExpr::Kind::Name) return Atom::unary(ax.crhs.name, subject);
  const RoleExpr& r = ax.crhs.role;
  Term witness = placeholder_for(r.name, !r.inverse);
  return r.inverse ? Atom::binary(r.name, witness, subject)
                   : Atom::binary(r.name, subject, witness);
}

}  // namespace

CompressedStructure build_compressed(const KnowledgeBase& kb) {
  if (!kb.dl_lite_only())
    throw InputError("build_compressed: the TBox contains non-DL-Lite rules");

  CompressedStructure cs;
  std::vector<VertexId> axiom_vertices;
  std::vector<DLLiteAxiom> axioms;
  for (const auto& e : kb.tbox) {
    axioms.push_back(std::get<DLLiteAxiom>(e));
    axiom_vertices.push_back(cs.graph.add_vertex(Sentence(axioms.back())));
  }

  std::vector<Atom> pending;
  auto add_atom = [&](const Atom& a) -> bool {
    if (cs.atom_vertex.count(a)) return false;
    cs.atom_vertex.emplace(a, cs.graph.add_vertex(assertion_sentence(a)));
    pending.push_back(a);
    return true;
  };
  for (const auto& a : kb.abox) add_atom(a);

  while (!pending.empty()) {
    Atom a = pending.back();
    pending.pop_back();
    for (size_t i = 0; i < axioms.size(); ++i) {
      auto concl = apply_pattern(axioms[i], a);
      if (!concl) continue;
      add_atom(*concl);
      // One incoming edge per distinct (premise, axiom) pair; the vertex may
      // gain several incoming edges, this is a structure, not a proof.
      bool dup = false;
      for (int ei : cs.graph.incoming(cs.atom_vertex.at(*concl))) {
        const auto& e = cs.graph.edges()[ei];
        if (e.sources == std::vector<VertexId>{cs.atom_vertex.at(a), axiom_vertices[i]}) dup = true;
      }
      if (!dup)
        cs.graph.add_edge({cs.atom_vertex.at(a), axiom_vertices[i]}, cs.atom_vertex.at(*concl),
                          "MPs");
    }
  }

  // Individuals: ABox constants then placeholders, each once.
  std::set<Term> seen;
  for (const auto& [atom, v] : cs.atom_vertex)
    for (const auto& t : atom.args)
      if (seen.insert(t).second) cs.individuals.push_back(t);
  std::sort(cs.individuals.begin(), cs.individuals.end());

  // Per-vertex minimal tree cost: ABox atoms cost 1, an application costs
  // 2 + premise cost (conclusion vertex plus the axiom leaf).
  std::set<Atom> abox(kb.abox.begin(), kb.abox.end());
  using Entry = std::pair<uint64_t, Atom>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  for (const auto& a : kb.abox) queue.push({1, a});
  while (!queue.empty()) {
    auto [cost, atom] = queue.top();
    queue.pop();
    if (cs.min_tree_cost.count(atom)) continue;
    cs.min_tree_cost.emplace(atom, cost);
    for (size_t i = 0; i < axioms.size(); ++i) {
      auto concl = apply_pattern(axioms[i], atom);
      if (concl && !cs.min_tree_cost.count(*concl)) queue.push({cost + 2, *concl});
    }
  }
  return cs;
}

}  // namespace cqproof
