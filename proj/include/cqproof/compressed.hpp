#ifndef CQPROOF_COMPRESSED_HPP
#define CQPROOF_COMPRESSED_HPP

#include "cqproof/hypergraph.hpp"

namespace cqproof {

/// The polynomial-size abstraction of the Skolemized structure used by the
/// tree-shaped algorithm: one placeholder individual per role direction
/// stands in for all anonymous witnesses of that role, so its inferences
/// are not sound in the classical sense; costs on it lower-bound the real
/// per-atom proof costs and coincide for placeholder-free atoms.
struct CompressedStructure {
  ProofGraph graph;                         // axiom vertices + atom vertices
  std::map<Atom, VertexId> atom_vertex;     // ABox constants and placeholders
  std::map<Atom, uint64_t> min_tree_cost;   // per-vertex minimal tree cost
  std::vector<Term> individuals;            // constants plus placeholders

  bool contains(const Atom& a) const { return atom_vertex.count(a) != 0; }
};

/// Placeholder individual for the anonymous witness connected through the
/// given role atom position: the object of Q satisfies exists Q-.
Term placeholder_for(const std::string& role, bool object_position);

/// Builds the compressed structure for a DL-Lite_R KB: every axiom and ABox
/// atom is a vertex, and the five inference patterns over constants and
/// placeholders are saturated to a fixpoint. Throws InputError if the TBox
/// contains non-DL-Lite rules.
CompressedStructure build_compressed(const KnowledgeBase& kb);

}  // namespace cqproof

#endif
