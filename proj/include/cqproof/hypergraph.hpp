#ifndef CQPROOF_HYPERGRAPH_HPP
#define CQPROOF_HYPERGRAPH_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cqproof/sentence.hpp"

namespace cqproof {

using VertexId = int;

/// A directed labeled hyperedge: ordered premise tuple -> conclusion.
/// Premise positions may repeat a vertex. `rule` names the inference schema
/// that produced the edge (informational; validation re-checks it).
struct HyperEdge {
  std::vector<VertexId> sources;
  VertexId target = -1;
  std::string rule;
};

/// A directed labeled hypergraph with a total vertex labeling.
class ProofGraph {
 public:
  VertexId add_vertex(Sentence label);
  void add_edge(std::vector<VertexId> sources, VertexId target, std::string rule = {});

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  const Sentence& label(VertexId v) const { return labels_.at(v); }
  const std::vector<HyperEdge>& edges() const { return edges_; }
  const std::vector<int>& incoming(VertexId v) const;   // edge indices
  const std::vector<int>& outgoing(VertexId v) const;   // edge indices where v is a source
  bool is_leaf(VertexId v) const { return incoming(v).empty(); }
  std::vector<VertexId> leaves() const;
  std::vector<VertexId> sinks() const;

  bool acyclic() const;
  /// Vertices in an order where premises precede conclusions; requires acyclicity.
  std::vector<VertexId> topological_order() const;

  /// Label-weighted hypergraph size (reporting only, never minimized).
  uint64_t weighted_size() const;

 private:
  std::vector<Sentence> labels_;
  std::vector<HyperEdge> edges_;
  std::vector<std::vector<int>> in_, out_;
};

/// A proof: a hypergraph with a designated sink. Structural validity
/// (single sink, acyclicity, unique premise sets, groundedness) is checked
/// by validate_proof, not enforced by the type.
struct Proof {
  ProofGraph graph;
  VertexId sink = -1;
};

uint64_t proof_size(const Proof& p);       // |V|
uint64_t tree_size(const Proof& p);        // size of the tree unraveling
uint64_t depth(const Proof& p);            // longest leaf-to-sink path, in edges

/// Unravels the graph below `v` into a tree proof. The returned mapping
/// (per new vertex, the original vertex) is a homomorphism into `g`.
Proof unravel(const ProofGraph& g, VertexId v, std::map<VertexId, VertexId>* hom = nullptr);

/// Checks that `h` maps p.graph homomorphically into g (labels preserved,
/// edges mapped to edges).
bool check_homomorphism(const Proof& p, const ProofGraph& g,
                        const std::map<VertexId, VertexId>& h);

/// Oracle deciding whether one inference step is admissible in a deriver.
class SchemaChecker {
 public:
  virtual ~SchemaChecker() = default;
  /// Returns the schema name if (premises, conclusion) is an admissible
  /// inference, absence otherwise. Deterministic.
  virtual std::optional<std::string> admissible(const std::vector<Sentence>& premises,
                                                const Sentence& conclusion) const = 0;
  /// Whether a leaf label is part of the theory the proofs are grounded in.
  virtual bool grounded(const Sentence& leaf) const = 0;
};

struct ValidityReport {
  bool single_sink = false;
  bool is_acyclic = false;
  bool unique_premises = false;  // at most one incoming hyperedge per vertex
  bool leaves_grounded = false;
  bool schemas_admissible = false;
  std::vector<std::string> failures;

  bool ok() const {
    return single_sink && is_acyclic && unique_premises && leaves_grounded && schemas_admissible;
  }
  std::string summary() const;
};

ValidityReport validate_proof(const Proof& p, const SchemaChecker& checker);

}  // namespace cqproof

#endif
