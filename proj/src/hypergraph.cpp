#include "cqproof/hypergraph.hpp"

#include <algorithm>
#include <functional>

namespace cqproof {

VertexId ProofGraph::add_vertex(Sentence label) {
  labels_.push_back(std::move(label));
  in_.emplace_back();
  out_.emplace_back();
  return static_cast<VertexId>(labels_.size()) - 1;
}

void ProofGraph::add_edge(std::vector<VertexId> sources, VertexId target, std::string rule) {
  int n = vertex_count();
  if (target < 0 || target >= n) throw InputError("edge target is not a declared vertex");
  for (VertexId s : sources)
    if (s < 0 || s >= n) throw InputError("edge source is not a declared vertex");
  int idx = static_cast<int>(edges_.size());
  edges_.push_back({sources, target, std::move(rule)});
  in_[target].push_back(idx);
  for (VertexId s : sources) {
    if (out_[s].empty() || out_[s].back() != idx) out_[s].push_back(idx);
  }
}

const std::vector<int>& ProofGraph::incoming(VertexId v) const { return in_.at(v); }
const std::vector<int>& ProofGraph::outgoing(VertexId v) const { return out_.at(v); }

std::vector<VertexId> ProofGraph::leaves() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (in_[v].empty()) out.push_back(v);
  return out;
}

std::vector<VertexId> ProofGraph::sinks() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (out_[v].empty()) out.push_back(v);
  return out;
}

bool ProofGraph::acyclic() const {
  return static_cast<int>(topological_order().size()) == vertex_count();
}

std::vector<VertexId> ProofGraph::topological_order() const {
  // Kahn over the vertex dependency relation: source -> target per edge.
  std::vector<int> pending(vertex_count(), 0);
  for (VertexId v = 0; v < vertex_count(); ++v)
    for (int e : in_[v]) pending[v] += static_cast<int>(edges_[e].sources.size());
  std::vector<VertexId> ready, order;
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (pending[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    VertexId v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int e : out_[v]) {
      int occurrences = static_cast<int>(
          std::count(edges_[e].sources.begin(), edges_[e].sources.end(), v));
      pending[edges_[e].target] -= occurrences;
      if (pending[edges_[e].target] == 0) ready.push_back(edges_[e].target);
    }
  }
  return order;
}

uint64_t ProofGraph::weighted_size() const {
  uint64_t total = 0;
  for (const auto& e : edges_) {
    total += sentence_size(labels_[e.target]);
    for (VertexId s : e.sources) total += sentence_size(labels_[s]);
  }
  return total;
}

uint64_t proof_size(const Proof& p) { return p.graph.vertex_count(); }

namespace {

uint64_t tree_size_at(const ProofGraph& g, VertexId v, std::vector<uint64_t>& memo,
                      std::vector<int>& state) {
  if (state[v] == 2) return memo[v];
  if (state[v] == 1) throw InputError("tree_size: cycle detected");
  state[v] = 1;
  const auto& in = g.incoming(v);
  uint64_t total = 1;
  if (!in.empty()) {
    // Proof vertices have at most one incoming hyperedge; if several are
    // present we still measure along the first (validation flags it).
    for (VertexId s : g.edges()[in.front()].sources) total += tree_size_at(g, s, memo, state);
  }
  state[v] = 2;
  memo[v] = total;
  return total;
}

}  // namespace

uint64_t tree_size(const Proof& p) {
  std::vector<uint64_t> memo(p.graph.vertex_count(), 0);
  std::vector<int> state(p.graph.vertex_count(), 0);
  return tree_size_at(p.graph, p.sink, memo, state);
}

namespace {

uint64_t depth_at(const ProofGraph& g, VertexId v, std::vector<int64_t>& memo,
                  std::vector<int>& state) {
  if (state[v] == 2) return memo[v];
  if (state[v] == 1) throw InputError("depth: cycle detected");
  state[v] = 1;
  uint64_t best = 0;
  for (int e : g.incoming(v))
    for (VertexId s : g.edges()[e].sources)
      best = std::max(best, depth_at(g, s, memo, state) + 1);
  state[v] = 2;
  memo[v] = static_cast<int64_t>(best);
  return best;
}

}  // namespace

uint64_t depth(const Proof& p) {
  std::vector<int64_t> memo(p.graph.vertex_count(), 0);
  std::vector<int> state(p.graph.vertex_count(), 0);
  return depth_at(p.graph, p.sink, memo, state);
}

namespace {

VertexId unravel_at(const ProofGraph& g, VertexId v, Proof& out,
                    std::map<VertexId, VertexId>* hom, std::vector<int>& on_path) {
  if (on_path[v]) throw InputError("unravel: cycle detected");
  VertexId copy = out.graph.add_vertex(g.label(v));
  if (hom) hom->emplace(copy, v);
  const auto& in = g.incoming(v);
  if (!in.empty()) {
    on_path[v] = 1;
    const HyperEdge& e = g.edges()[in.front()];
    std::vector<VertexId> sources;
    sources.reserve(e.sources.size());
    for (VertexId s : e.sources) sources.push_back(unravel_at(g, s, out, hom, on_path));
    out.graph.add_edge(std::move(sources), copy, e.rule);
    on_path[v] = 0;
  }
  return copy;
}

}  // namespace

Proof unravel(const ProofGraph& g, VertexId v, std::map<VertexId, VertexId>* hom) {
  Proof out;
  std::vector<int> on_path(g.vertex_count(), 0);
  out.sink = unravel_at(g, v, out, hom, on_path);
  return out;
}

bool check_homomorphism(const Proof& p, const ProofGraph& g,
                        const std::map<VertexId, VertexId>& h) {
  for (VertexId v = 0; v < p.graph.vertex_count(); ++v) {
    auto it = h.find(v);
    if (it == h.end()) return false;
    if (it->second < 0 || it->second >= g.vertex_count()) return false;
    if (!sentence_equal(p.graph.label(v), g.label(it->second))) return false;
  }
  for (const auto& e : p.graph.edges()) {
    std::vector<VertexId> img;
    img.reserve(e.sources.size());
    for (VertexId s : e.sources) img.push_back(h.at(s));
    VertexId tgt = h.at(e.target);
    bool found = false;
    for (const auto& ge : g.edges()) {
      if (ge.target == tgt && ge.sources == img) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::string ValidityReport::summary() const {
  auto flag = [](bool b) { return b ? "pass" : "FAIL"; };
  std::string s;
  s += std::string("single_sink: ") + flag(single_sink) + "\n";
  s += std::string("acyclic: ") + flag(is_acyclic) + "\n";
  s += std::string("unique_premises: ") + flag(unique_premises) + "\n";
  s += std::string("leaves_grounded: ") + flag(leaves_grounded) + "\n";
  s += std::string("schemas_admissible: ") + flag(schemas_admissible) + "\n";
  for (const auto& f : failures) s += "  - " + f + "\n";
  return s;
}

ValidityReport validate_proof(const Proof& p, const SchemaChecker& checker) {
  ValidityReport r;
  const ProofGraph& g = p.graph;
  if (p.sink < 0 || p.sink >= g.vertex_count()) {
    r.failures.push_back("designated sink is not a vertex");
    return r;
  }

  auto sinks = g.sinks();
  r.single_sink = sinks.size() == 1 && sinks[0] == p.sink;
  if (!r.single_sink)
    r.failures.push_back("expected exactly one sink (the designated one), found " +
                         std::to_string(sinks.size()));

  r.is_acyclic = g.acyclic();
  if (!r.is_acyclic) r.failures.push_back("hypergraph contains a cycle");

  r.unique_premises = true;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (g.incoming(v).size() > 1) {
      r.unique_premises = false;
      r.failures.push_back("vertex " + std::to_string(v) + " has several incoming hyperedges");
    }
  }

  r.leaves_grounded = true;
  for (VertexId v : g.leaves()) {
    if (!checker.grounded(g.label(v))) {
      r.leaves_grounded = false;
      r.failures.push_back("leaf not grounded in the theory: " + sentence_str(g.label(v)));
    }
  }

  r.schemas_admissible = true;
  for (const auto& e : g.edges()) {
    std::vector<Sentence> premises;
    premises.reserve(e.sources.size());
    for (VertexId s : e.sources) premises.push_back(g.label(s));
    if (!checker.admissible(premises, g.label(e.target))) {
      r.schemas_admissible = false;
      r.failures.push_back("inadmissible inference for: " + sentence_str(g.label(e.target)));
    }
  }
  return r;
}

}  // namespace cqproof
