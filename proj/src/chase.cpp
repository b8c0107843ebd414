#include "cqproof/chase.hpp"

#include <algorithm>
#include <set>

namespace cqproof {

int default_depth_bound(const KnowledgeBase& kb, const CQ& query) {
  return static_cast<int>((kb.tbox.size() + 1) * query.atoms.size());
}

std::vector<Atom> infer_mps(const std::vector<Atom>& premises, const SkolemRule& rule,
                            const Substitution& pi) {
  std::set<Atom> premise_set(premises.begin(), premises.end());
  std::set<Atom> body_image;
  for (const auto& b : rule.body) {
    Atom img = substitute(pi, b);
    if (!img.ground()) throw InputError("infer_mps: substitution does not ground the body");
    body_image.insert(img);
  }
  if (body_image != premise_set)
    throw InputError("infer_mps: substitution does not map the rule body onto the premises");
  std::vector<Atom> out;
  for (const auto& h : rule.head) {
    Atom img = substitute(pi, h);
    if (!img.ground()) throw InputError("infer_mps: non-ground conclusion");
    out.push_back(img);
  }
  return out;
}

ChaseResult chase(const KnowledgeBase& kb, const std::vector<SkolemRule>& rules,
                  const ChaseConfig& cfg) {
  ChaseResult r;
  for (const auto& a : kb.abox) {
    if (!a.ground()) throw InputError("chase: ABox must be ground");
    if (!r.round_of.count(a)) {
      r.facts.push_back(a);
      r.round_of.emplace(a, 0);
    }
  }

  for (int round = 1;; ++round) {
    // Collect this round's new atoms from the facts of previous rounds.
    std::vector<std::pair<Atom, Witness>> fresh;
    for (size_t ri = 0; ri < rules.size(); ++ri) {
      const SkolemRule& rule = rules[ri];
      for (const auto& pi : match(rule.body, r.facts)) {
        std::vector<Atom> premises;
        premises.reserve(rule.body.size());
        for (const auto& b : rule.body) premises.push_back(substitute(pi, b));
        for (const auto& h : rule.head) {
          Atom derived = substitute(pi, h);
          if (derived.term_depth() > cfg.depth_bound) continue;
          if (r.round_of.count(derived)) continue;
          bool queued = std::any_of(fresh.begin(), fresh.end(),
                                    [&](const auto& p) { return p.first == derived; });
          if (!queued) fresh.emplace_back(derived, Witness{ri, premises, round});
        }
      }
    }
    if (fresh.empty()) break;
    for (auto& [atom, wit] : fresh) {
      if (r.facts.size() >= cfg.fact_cap)
        throw CapExceeded("chase: fact cap of " + std::to_string(cfg.fact_cap) + " exceeded");
      r.facts.push_back(atom);
      r.round_of.emplace(atom, round);
      r.witnesses.emplace(atom, std::move(wit));
    }
  }
  return r;
}

std::vector<Witness> derivations_of(const Atom& target, const ChaseResult& chase_result,
                                    const std::vector<SkolemRule>& rules) {
  std::vector<Witness> out;
  for (size_t ri = 0; ri < rules.size(); ++ri) {
    const SkolemRule& rule = rules[ri];
    for (const auto& h : rule.head) {
      Substitution partial;
      if (!unify_into(h, target, partial)) continue;
      // Complete the partial substitution over the remaining body variables.
      for (const auto& pi : match(substitute(partial, rule.body), chase_result.facts)) {
        Substitution full = partial;
        for (const auto& [v, t] : pi) full.emplace(v, t);
        std::vector<Atom> premises;
        bool ok = true;
        for (const auto& b : rule.body) {
          Atom img = substitute(full, b);
          if (!img.ground() || !chase_result.contains(img)) {
            ok = false;
            break;
          }
          premises.push_back(img);
        }
        if (!ok) continue;
        // Re-check the head: other head atoms need not be derivable, but the
        // matched one must reproduce the target.
        if (substitute(full, h) != target) continue;
        Witness w{ri, premises, 0};
        bool dup = std::any_of(out.begin(), out.end(), [&](const Witness& o) {
          return o.rule_index == w.rule_index && o.premises == w.premises;
        });
        if (!dup) out.push_back(std::move(w));
      }
    }
  }
  return out;
}

}  // namespace cqproof
