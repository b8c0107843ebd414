#ifndef CQPROOF_SEARCH_HPP
#define CQPROOF_SEARCH_HPP

#include "cqproof/chase.hpp"
#include "cqproof/cq_schemas.hpp"
#include "cqproof/sk_schemas.hpp"

namespace cqproof {

enum class Deriver { Cq, Sk, SkPrime };
enum class Measure { Size, TreeSize };

std::string deriver_name(Deriver d);

struct SearchLimits {
  /// Branch-and-bound expansions for size minimization.
  size_t expansion_cap = 1000000;
  /// Materialized vertices when searching the CQ deriver's structure.
  size_t structure_cap = 50000;
};

struct SearchGoal {
  KnowledgeBase kb;
  CQ query;
  std::vector<Term> answer;
  Deriver deriver = Deriver::Sk;
  Measure measure = Measure::TreeSize;
  std::optional<uint64_t> bound;         // for the decision problem
  std::optional<int> depth_bound;        // chase depth; defaulted if absent
  size_t fact_cap = 100000;
  SearchLimits limits;

  CQ bound_query() const { return bind_answers(query, answer); }
  int effective_depth_bound() const {
    return depth_bound ? *depth_bound : default_depth_bound(kb, query);
  }
};

struct SearchResult {
  Proof proof;
  uint64_t value = 0;  // the minimized measure
};

/// Minimal tree-size proof in the goal's deriver, within the bounded chase.
/// Deterministic under the documented lexicographic tie-breaking.
SearchResult min_tree_size(const SearchGoal& goal);

/// Minimal size (vertex count) proof, via iterative-deepening branch and
/// bound with an admissible open-atom lower bound. Exact; throws CapExceeded
/// when the expansion cap is hit.
SearchResult min_size(const SearchGoal& goal);

/// Is there a proof with measure <= goal.bound? The entailment prerequisite
/// is verified first (PreconditionError if it fails within the depth bound).
bool decide_op(const SearchGoal& goal);

/// Gaifman-graph check: connected and acyclic over the query's terms.
bool is_tree_shaped(const CQ& q);

/// Minimal tree-size proof for tree-shaped queries under the Skolemized
/// deriver, by dynamic programming over per-term assignments instead of
/// global match enumeration (polynomial in chase size x query size).
SearchResult tree_shaped_min(const SearchGoal& goal);

/// Independent oracle: naive recursive enumeration (tree size) or
/// exhaustive sub-hypergraph enumeration (size) over the materialized
/// bounded structure. Test use only; throws CapExceeded beyond `cap`.
uint64_t brute_force_min(const SearchGoal& goal, uint64_t cap);

/// Materialized per-atom minimal tree costs over the bounded chase
/// (exposed for the cost-graph construction and for reporting).
struct AtomCosts {
  ChaseResult chase;
  std::vector<SkolemRule> rules;
  std::map<Atom, std::vector<Witness>> derivations;
  std::map<Atom, uint64_t> tree_cost;
};

AtomCosts compute_atom_costs(const KnowledgeBase& kb, const SearchGoal& goal);

/// The cost graph of the tree-shaped algorithm: one node per (query term,
/// candidate assignment), edges along the rooted Gaifman tree labeled with
/// the summed per-atom costs.
struct CostGraph {
  struct Node {
    Term term;           // query term
    Term value;          // assigned chase term
    uint64_t best = 0;   // minimal subtree cost after elimination
    Term choice_of_parent;  // unused marker for roots
  };
  std::vector<Node> nodes;
  Term root;
  std::vector<Term> order;  // parent-first traversal of the Gaifman tree
};

}  // namespace cqproof

#endif
