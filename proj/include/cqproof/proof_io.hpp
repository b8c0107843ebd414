#ifndef CQPROOF_PROOF_IO_HPP
#define CQPROOF_PROOF_IO_HPP

#include "cqproof/hypergraph.hpp"

namespace cqproof {

/// JSON rendering: vertices with structured labels, hyperedges with ordered
/// sources, the sink, and the three measures. Byte-stable for a given proof.
std::string export_proof_json(const Proof& p);

/// Graphviz rendering; hyperedges go through point-shaped junction nodes.
std::string export_proof_dot(const Proof& p);

/// Re-imports an exported proof (labels are reconstructed exactly).
Proof import_proof_json(const std::string& text);

}  // namespace cqproof

#endif
