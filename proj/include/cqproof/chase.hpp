#ifndef CQPROOF_CHASE_HPP
#define CQPROOF_CHASE_HPP

#include <cstdint>
#include <map>

#include "cqproof/axioms.hpp"

namespace cqproof {

struct ChaseConfig {
  /// Maximum Skolem nesting depth of emitted terms.
  int depth_bound = 0;
  /// Hard cap on the number of derived atoms; exceeding it is an error.
  size_t fact_cap = 100000;
};

/// Default depth bound: (number of TBox rules + 1) * (number of query atoms).
int default_depth_bound(const KnowledgeBase& kb, const CQ& query);

/// How a chase atom was first obtained.
struct Witness {
  size_t rule_index = 0;          // into the Skolemized rule list
  std::vector<Atom> premises;     // ground body instance, in body order
  int round = 0;
};

struct ChaseResult {
  std::vector<Atom> facts;              // ABox atoms first, then derived, in derivation order
  std::map<Atom, Witness> witnesses;    // first derivation per non-ABox atom
  std::map<Atom, int> round_of;         // 0 for ABox atoms

  bool contains(const Atom& a) const { return round_of.count(a) != 0; }
  bool from_abox(const Atom& a) const {
    auto it = round_of.find(a);
    return it != round_of.end() && it->second == 0;
  }
};

/// Round-based Skolem chase, restricted to terms within cfg.depth_bound.
/// Deterministic: rules are applied in list order, matches in lexicographic
/// order. Throws CapExceeded when cfg.fact_cap is hit.
ChaseResult chase(const KnowledgeBase& kb, const std::vector<SkolemRule>& rules,
                  const ChaseConfig& cfg);

/// All ways to derive `target` in one step from `facts`: (rule index, ground
/// body instance). Used by minimal-proof search to explore alternatives
/// beyond the stored first witness.
std::vector<Witness> derivations_of(const Atom& target, const ChaseResult& chase_result,
                                    const std::vector<SkolemRule>& rules);

/// Ground instances of the rule head under pi; pi must map the body exactly
/// onto the given premises (as a set). This is the single-step inference the
/// chase and the Skolemized modus ponens schema share.
std::vector<Atom> infer_mps(const std::vector<Atom>& premises, const SkolemRule& rule,
                            const Substitution& pi);

}  // namespace cqproof

#endif
