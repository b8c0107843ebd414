#include "cqproof/search.hpp"
#include <functional>

#include <algorithm>
#include <queue>

#include "cqproof/compressed.hpp"

namespace cqproof {

std::string deriver_name(Deriver d) {
  switch (d) {
    case Deriver::Cq: return "cq";
    case Deriver::Sk: return "sk";
    case Deriver::SkPrime: return "sk-prime";
  }
  return {};
}

namespace {

constexpr uint64_t kInf = static_cast<uint64_t>(-1) / 4;

std::string subst_key(const Substitution& s) {
  std::string out;
  for (const auto& [v, t] : s) out += v + "=" + t.str() + ";";
  return out;
}

}  // namespace

AtomCosts compute_atom_costs(const KnowledgeBase& kb, const SearchGoal& goal) {
  AtomCosts out;
  out.rules = kb.skolemized_tbox();
  out.chase = chase(kb, out.rules, ChaseConfig{goal.effective_depth_bound(), goal.fact_cap});
  for (const auto& a : out.chase.facts)
    out.derivations.emplace(a, derivations_of(a, out.chase, out.rules));

  // Minimal tree cost per atom: an ABox leaf costs 1, a rule application
  // costs 2 plus premise costs (conclusion vertex plus axiom leaf).
  // Bellman-Ford style relaxation to a fixpoint; costs are positive, so the
  // fixpoint is the exact minimum.
  std::map<Atom, uint64_t> cost;
  for (const auto& a : out.chase.facts) cost.emplace(a, out.chase.from_abox(a) ? 1 : kInf);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& a : out.chase.facts) {
      if (out.chase.from_abox(a)) continue;
      for (const auto& w : out.derivations.at(a)) {
        uint64_t c = 2;
        for (const auto& p : w.premises) {
          uint64_t pc = cost.at(p);
          if (pc >= kInf) {
            c = kInf;
            break;
          }
          c += pc;
        }
        if (c < cost.at(a)) {
          cost.insert_or_assign(a, c);
          changed = true;
        }
      }
    }
  }
  out.tree_cost = std::move(cost);
  return out;
}

namespace {

// How the final conjunction and abstraction steps look for one match.
struct ConjPlan {
  std::vector<Atom> conj;  // premise atoms of the conjunction, in order
  bool need_cs = false;
  bool need_es = false;
  std::string es_rule;  // "Es" or "Es'"
};

ConjPlan plan_for(const CQ& goal_cq, const Substitution& sigma, Deriver deriver) {
  ConjPlan plan;
  std::vector<Atom> images = substitute(sigma, goal_cq.atoms);
  for (const auto& a : images)
    if (!a.ground()) throw InputError("proof search: match does not ground the query");
  if (goal_cq.ground()) {
    plan.conj = images;
    plan.need_cs = images.size() >= 2;
    return plan;
  }
  plan.need_es = true;
  plan.es_rule = "Es";
  if (deriver == Deriver::SkPrime) {
    std::set<Atom> dedup(images.begin(), images.end());
    std::vector<Atom> distinct(dedup.begin(), dedup.end());
    if (distinct.size() < images.size()) {
      plan.conj = std::move(distinct);
      plan.es_rule = "Es'";
    } else {
      plan.conj = images;
    }
  } else {
    plan.conj = images;
  }
  plan.need_cs = plan.conj.size() >= 2;
  return plan;
}

uint64_t plan_tree_cost(const ConjPlan& plan, const AtomCosts& costs) {
  uint64_t total = (plan.need_cs ? 1 : 0) + (plan.need_es ? 1 : 0);
  for (const auto& a : plan.conj) {
    auto it = costs.tree_cost.find(a);
    if (it == costs.tree_cost.end() || it->second >= kInf) return kInf;
    total += it->second;
  }
  return total;
}

uint64_t plan_extra_vertices(const ConjPlan& plan) {
  return (plan.need_cs ? 1 : 0) + (plan.need_es ? 1 : 0);
}

// Deterministic best single-step derivation for tree-minimal chains.
std::optional<Witness> best_derivation(const Atom& a, const AtomCosts& costs) {
  std::optional<Witness> best;
  uint64_t best_cost = kInf;
  for (const auto& w : costs.derivations.at(a)) {
    uint64_t c = 2;
    for (const auto& p : w.premises) {
      uint64_t pc = costs.tree_cost.at(p);
      c = (pc >= kInf || c >= kInf) ? kInf : c + pc;
    }
    if (c >= kInf) continue;
    if (!best || c < best_cost) {
      best = w;
      best_cost = c;
    }
  }
  return best;
}

// Assembles the proof for one match: per-atom derivation chains, shared
// vertices, then the conjunction and abstraction steps.
Proof assemble_sk(const KnowledgeBase& kb, const AtomCosts& costs, const CQ& goal_cq,
                  const ConjPlan& plan,
                  const std::function<std::optional<Witness>(const Atom&)>& chooser) {
  Proof out;
  std::map<Atom, VertexId> atom_vertex;
  std::map<size_t, VertexId> rule_vertex;

  std::function<VertexId(const Atom&)> ensure = [&](const Atom& a) -> VertexId {
    auto it = atom_vertex.find(a);
    if (it != atom_vertex.end()) return it->second;
    if (costs.chase.from_abox(a)) {
      VertexId v = out.graph.add_vertex(assertion_sentence(a));
      atom_vertex.emplace(a, v);
      return v;
    }
    auto w = chooser(a);
    if (!w) throw PreconditionError("proof search: no derivation for " + a.str());
    // Reserve nothing yet: premises first, the conclusion vertex after, so
    // chains read bottom-up in vertex order.
    std::vector<VertexId> sources;
    for (const auto& p : w->premises) sources.push_back(ensure(p));
    auto rit = rule_vertex.find(w->rule_index);
    if (rit == rule_vertex.end()) {
      const TBoxEntry& e = kb.tbox[w->rule_index];
      Sentence rl = std::holds_alternative<DLLiteAxiom>(e)
                        ? Sentence(std::get<DLLiteAxiom>(e))
                        : Sentence(std::get<ExistentialRule>(e));
      rit = rule_vertex.emplace(w->rule_index, out.graph.add_vertex(rl)).first;
    }
    sources.push_back(rit->second);
    VertexId v = out.graph.add_vertex(assertion_sentence(a));
    atom_vertex.emplace(a, v);
    out.graph.add_edge(std::move(sources), v, "MPs");
    return v;
  };

  for (const auto& a : plan.conj) ensure(a);

  if (!plan.need_cs && !plan.need_es) {
    out.sink = atom_vertex.at(plan.conj[0]);
    return out;
  }
  VertexId conj_v;
  if (plan.need_cs) {
    std::vector<VertexId> sources;
    for (const auto& a : plan.conj) sources.push_back(atom_vertex.at(a));
    Sentence label = plan.need_es ? Sentence(infer_cs(plan.conj)) : Sentence(goal_cq);
    conj_v = out.graph.add_vertex(label);
    out.graph.add_edge(std::move(sources), conj_v, "Cs");
  } else {
    conj_v = atom_vertex.at(plan.conj[0]);
  }
  if (!plan.need_es) {
    out.sink = conj_v;
    return out;
  }
  out.sink = out.graph.add_vertex(Sentence(goal_cq));
  out.graph.add_edge({conj_v}, out.sink, plan.es_rule);
  return out;
}

std::vector<Substitution> goal_matches(const CQ& goal_cq, const AtomCosts& costs) {
  return match(goal_cq.atoms, costs.chase.facts);
}

// ---------------------------------------------------------------------------
// Size minimization for the Skolemized derivers: iterative-deepening branch
// and bound over the choice of one derivation per needed ground atom.

struct SizeSearch {
  const AtomCosts* costs;
  size_t cap = 1000000;
  size_t expansions = 0;

  std::map<Atom, Witness> best_choice;
  uint64_t best = kInf;

  void run(const std::set<Atom>& needed) {
    best = kInf;
    std::set<Atom> seen = needed;
    std::vector<Atom> open;
    for (const auto& a : needed)
      if (!costs->chase.from_abox(a)) open.push_back(a);
    std::sort(open.begin(), open.end());
    std::map<Atom, Witness> choice;
    std::set<size_t> rules_used;
    // Iterative deepening on the vertex count.
    for (uint64_t limit = needed.size(); limit < kInf; ++limit) {
      if (dfs(open, seen, choice, rules_used, needed.size(), limit)) return;
      if (expansions > cap)
        throw CapExceeded("min_size: expansion cap exceeded (" + std::to_string(cap) + ")");
    }
  }

 private:
  bool dfs(std::vector<Atom> open, std::set<Atom> seen, std::map<Atom, Witness>& choice,
           std::set<size_t>& rules_used, uint64_t count, uint64_t limit) {
    if (++expansions > cap)
      throw CapExceeded("min_size: expansion cap exceeded (" + std::to_string(cap) + ")");
    if (count > limit) return false;
    if (open.empty()) {
      best = count;
      best_choice = choice;
      return true;
    }
    Atom a = open.front();
    open.erase(open.begin());
    auto derivs = costs->derivations.at(a);
    // Deterministic order: by rule index, then premise tuple.
    std::sort(derivs.begin(), derivs.end(), [](const Witness& x, const Witness& y) {
      if (x.rule_index != y.rule_index) return x.rule_index < y.rule_index;
      return x.premises < y.premises;
    });
    // A derivation may not depend on its own conclusion through the
    // choices made so far (chains of inverse inclusions admit such loops).
    auto reaches = [&](const Atom& from, const Atom& target) {
      std::vector<Atom> stack{from};
      std::set<Atom> seen2;
      while (!stack.empty()) {
        Atom x = stack.back();
        stack.pop_back();
        if (x == target) return true;
        if (!seen2.insert(x).second) continue;
        auto it = choice.find(x);
        if (it == choice.end()) continue;
        for (const auto& p : it->second.premises) stack.push_back(p);
      }
      return false;
    };
    for (const auto& w : derivs) {
      bool cyclic = std::any_of(w.premises.begin(), w.premises.end(),
                                [&](const Atom& p) { return p == a || reaches(p, a); });
      if (cyclic) continue;
      std::vector<Atom> next_open = open;
      std::set<Atom> next_seen = seen;
      uint64_t next_count = count;
      bool new_rule = !rules_used.count(w.rule_index);
      if (new_rule) next_count += 1;
      for (const auto& p : w.premises) {
        if (next_seen.insert(p).second) {
          next_count += 1;
          if (!costs->chase.from_abox(p)) {
            next_open.push_back(p);
            std::sort(next_open.begin(), next_open.end());
          }
        }
      }
      choice.emplace(a, w);
      if (new_rule) rules_used.insert(w.rule_index);
      if (dfs(std::move(next_open), std::move(next_seen), choice, rules_used, next_count, limit))
        return true;
      if (new_rule) rules_used.erase(w.rule_index);
      choice.erase(a);
    }
    return false;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// CQ-deriver structure: forward materialization with recorded productions.

namespace {

struct CqProduction {
  enum class Kind { Leaf, Mp, Conj, Abstract };
  Kind kind = Kind::Leaf;
  std::vector<size_t> premises;               // node ids
  std::optional<size_t> tbox_index;           // for Mp over a TBox entry
  std::optional<ExistentialRule> tautology;   // for Mp over a tautology
};

struct CqStructure {
  std::vector<CQ> labels;                      // canonical representatives
  std::vector<uint64_t> tcost;                 // settled minimal tree cost
  std::vector<std::vector<CqProduction>> prods;
  std::map<std::string, size_t> index;         // canonical key -> node
  std::optional<size_t> goal_node;
};

constexpr size_t kMaxTautBody = 3;

// All nonempty subsets of indices 0..n-1, smallest first.
std::vector<std::vector<size_t>> nonempty_subsets(size_t n) {
  std::vector<std::vector<size_t>> out;
  for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
    std::vector<size_t> s;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

CqStructure materialize_cq(const SearchGoal& goal, const AtomCosts& costs) {
  CqStructure st;
  CQ goal_cq = goal.bound_query();
  std::string goal_key = sentence_key(Sentence(goal_cq));
  // Work budget: every candidate conclusion costs one unit (canonicalizing
  // candidates dominates the running time, so the cap must bound these,
  // not just the node count).
  size_t work = 0;
  auto spend = [&]() {
    if (++work > goal.limits.expansion_cap)
      throw CapExceeded("cq search: work cap exceeded (" +
                        std::to_string(goal.limits.expansion_cap) + " candidate conclusions)");
  };
  size_t atom_cap = goal_cq.atoms.size();
  for (const auto& e : goal.kb.tbox)
    atom_cap = std::max(atom_cap, goal_cq.atoms.size() + tbox_rule(e).head.size());

  using Entry = std::pair<uint64_t, std::string>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  std::map<std::string, uint64_t> dist;
  std::vector<bool> settled;
  std::vector<size_t> settle_order;

  auto node_of = [&](const CQ& q) -> size_t {
    spend();
    CQ canon = canonicalize_cq(q);
    std::string key = sentence_key(Sentence(canon));
    auto it = st.index.find(key);
    if (it != st.index.end()) return it->second;
    if (st.labels.size() >= goal.limits.structure_cap)
      throw CapExceeded("cq search: structure cap exceeded");
    st.index.emplace(key, st.labels.size());
    st.labels.push_back(canon);
    st.prods.emplace_back();
    st.tcost.push_back(kInf);
    settled.push_back(false);
    return st.labels.size() - 1;
  };

  auto relax = [&](size_t node, uint64_t cost, CqProduction prod) {
    st.prods[node].push_back(std::move(prod));
    std::string key = sentence_key(Sentence(st.labels[node]));
    auto it = dist.find(key);
    if (it == dist.end() || cost < it->second) {
      dist.insert_or_assign(key, cost);
      queue.push({cost, key});
    }
  };

  // Assertions are the leaves.
  for (const auto& a : goal.kb.abox) {
    size_t n = node_of(CQ({}, {a}));
    relax(n, 1, CqProduction{CqProduction::Kind::Leaf, {}, {}, {}});
  }

  auto rules = goal.kb.rules();

  auto expand = [&](size_t n0) {
    const CQ q0 = st.labels[n0];
    uint64_t c0 = st.tcost[n0];
    // Modus ponens with TBox rules.
    for (size_t ri = 0; ri < rules.size(); ++ri) {
      for (const auto& pi : match(rules[ri].body, q0.atoms)) {
        std::set<Atom> matched;
        for (const auto& b : rules[ri].body) matched.insert(substitute(pi, b));
        std::vector<Atom> mlist(matched.begin(), matched.end());
        for (const auto& dsel : nonempty_subsets(mlist.size())) {
          std::vector<size_t> dpos;
          std::set<Atom> dropped;
          for (size_t i : dsel) dropped.insert(mlist[i]);
          for (size_t p = 0; p < q0.atoms.size(); ++p)
            if (dropped.count(q0.atoms[p])) dpos.push_back(p);
          for (size_t hmask = 0; hmask < (size_t{1} << rules[ri].head.size()); ++hmask) {
            std::vector<size_t> hsel;
            for (size_t i = 0; i < rules[ri].head.size(); ++i)
              if (hmask & (size_t{1} << i)) hsel.push_back(i);
            if (dpos.size() == q0.atoms.size() && hsel.empty()) continue;
            spend();
            try {
              CQ concl = infer_mp(q0, rules[ri], pi, dpos, hsel);
              if (concl.atoms.size() > atom_cap) continue;
              relax(node_of(concl), c0 + 2,
                    CqProduction{CqProduction::Kind::Mp, {n0}, ri, {}});
            } catch (const InputError&) {
            }
          }
        }
        // The drop-nothing case.
        for (size_t hmask = 1; hmask < (size_t{1} << rules[ri].head.size()); ++hmask) {
          std::vector<size_t> hsel;
          for (size_t i = 0; i < rules[ri].head.size(); ++i)
            if (hmask & (size_t{1} << i)) hsel.push_back(i);
          spend();
          try {
            CQ concl = infer_mp(q0, rules[ri], pi, {}, hsel);
            if (concl.atoms.size() > atom_cap) continue;
            relax(node_of(concl), c0 + 2, CqProduction{CqProduction::Kind::Mp, {n0}, ri, {}});
          } catch (const InputError&) {
          }
        }
      }
    }
    // Weakening: drop any nonempty proper subset via an identity tautology.
    for (const auto& dsel : nonempty_subsets(std::min<size_t>(q0.atoms.size(), 10))) {
      if (dsel.size() == q0.atoms.size()) continue;
      spend();
      std::vector<Atom> kept, dropped;
      std::set<size_t> dset(dsel.begin(), dsel.end());
      for (size_t i = 0; i < q0.atoms.size(); ++i)
        (dset.count(i) ? dropped : kept).push_back(q0.atoms[i]);
      ExistentialRule taut(dropped, dropped);
      relax(node_of(CQ({}, kept)), c0 + 2,
            CqProduction{CqProduction::Kind::Mp, {n0}, {}, taut});
    }
    // Copying: tautologies over small atom groups with some variables
    // abstracted, optionally dropping part of the matched group.
    auto q0_vars = atoms_vars(q0.atoms);
    for (const auto& gsel : nonempty_subsets(std::min<size_t>(q0.atoms.size(), 10))) {
      if (gsel.size() > kMaxTautBody) continue;
      std::vector<Atom> group;
      for (size_t i : gsel) group.push_back(q0.atoms[i]);
      std::vector<std::string> gvars;
      for (const auto& v : atoms_vars(group)) gvars.push_back(v);
      for (const auto& wsel : nonempty_subsets(gvars.size())) {
        std::set<std::string> abstracted;
        for (size_t i : wsel) abstracted.insert(gvars[i]);
        ExistentialRule taut = infer_t(group, abstracted);
        Substitution identity;
        for (const auto& v : atoms_vars(group)) identity.emplace(v, Term::variable(v));
        for (size_t dmask = 0; dmask < (size_t{1} << gsel.size()); ++dmask) {
          spend();
          std::vector<size_t> dpos;
          for (size_t i = 0; i < gsel.size(); ++i)
            if (dmask & (size_t{1} << i)) dpos.push_back(gsel[i]);
          std::vector<size_t> all_heads(taut.head.size());
          for (size_t i = 0; i < all_heads.size(); ++i) all_heads[i] = i;
          try {
            CQ concl = infer_mp(q0, taut, identity, dpos, all_heads);
            if (concl.atoms.size() > atom_cap) continue;
            relax(node_of(concl), c0 + 2, CqProduction{CqProduction::Kind::Mp, {n0}, {}, taut});
          } catch (const InputError&) {
          }
        }
      }
    }
    // Constant abstraction.
    std::vector<std::string> consts;
    for (const auto& t : atoms_terms(q0.atoms))
      if (t.is_constant()) consts.push_back(t.name());
    if (consts.size() <= 10) {
      for (const auto& sel : nonempty_subsets(consts.size())) {
        spend();
        std::set<std::string> chosen;
        for (size_t i : sel) chosen.insert(consts[i]);
        CQ concl = infer_e(q0, chosen);
        relax(node_of(concl), c0 + 1, CqProduction{CqProduction::Kind::Abstract, {n0}, {}, {}});
      }
    }
    // Conjunction with every settled node (including itself).
    for (size_t other : settle_order) {
      spend();
      if (st.labels[other].atoms.size() + q0.atoms.size() > atom_cap) continue;
      CQ concl = infer_c(q0, st.labels[other]);
      relax(node_of(concl), c0 + st.tcost[other] + 1,
            CqProduction{CqProduction::Kind::Conj, {n0, other}, {}, {}});
    }
  };

  uint64_t goal_cost = kInf;
  size_t expansions = 0;
  while (!queue.empty()) {
    auto [cost, key] = queue.top();
    queue.pop();
    if (cost > goal_cost) break;
    size_t n = st.index.at(key);
    if (settled[n]) continue;
    settled[n] = true;
    st.tcost[n] = cost;
    settle_order.push_back(n);
    if (key == goal_key) {
      st.goal_node = n;
      goal_cost = cost;
      continue;  // keep settling ties for the size search
    }
    if (++expansions > goal.limits.structure_cap)
      throw CapExceeded("cq search: expansion cap exceeded");
    expand(n);
  }
  (void)costs;
  return st;
}

Proof assemble_cq(const SearchGoal& goal, const CqStructure& st,
                  const std::map<size_t, const CqProduction*>& choice, size_t goal_node) {
  Proof out;
  std::map<size_t, VertexId> node_vertex;
  std::map<size_t, VertexId> axiom_vertex;
  std::map<std::string, VertexId> taut_vertex;

  std::function<VertexId(size_t)> ensure = [&](size_t n) -> VertexId {
    auto it = node_vertex.find(n);
    if (it != node_vertex.end()) return it->second;
    const CqProduction* prod = choice.at(n);
    std::vector<VertexId> sources;
    std::string rule_name;
    switch (prod->kind) {
      case CqProduction::Kind::Leaf:
        break;
      case CqProduction::Kind::Mp: {
        sources.push_back(ensure(prod->premises[0]));
        if (prod->tbox_index) {
          auto ait = axiom_vertex.find(*prod->tbox_index);
          if (ait == axiom_vertex.end()) {
            const TBoxEntry& e = goal.kb.tbox[*prod->tbox_index];
            Sentence rl = std::holds_alternative<DLLiteAxiom>(e)
                              ? Sentence(std::get<DLLiteAxiom>(e))
                              : Sentence(std::get<ExistentialRule>(e));
            ait = axiom_vertex.emplace(*prod->tbox_index, out.graph.add_vertex(rl)).first;
          }
          sources.push_back(ait->second);
        } else {
          std::string key = sentence_key(Sentence(*prod->tautology));
          auto tit = taut_vertex.find(key);
          if (tit == taut_vertex.end()) {
            VertexId tv = out.graph.add_vertex(Sentence(*prod->tautology));
            out.graph.add_edge({}, tv, "T");
            tit = taut_vertex.emplace(key, tv).first;
          }
          sources.push_back(tit->second);
        }
        rule_name = "MP";
        break;
      }
      case CqProduction::Kind::Conj:
        sources.push_back(ensure(prod->premises[0]));
        sources.push_back(ensure(prod->premises[1]));
        rule_name = "C";
        break;
      case CqProduction::Kind::Abstract:
        sources.push_back(ensure(prod->premises[0]));
        rule_name = "E";
        break;
    }
    VertexId v = out.graph.add_vertex(Sentence(st.labels[n]));
    node_vertex.emplace(n, v);
    if (!sources.empty() || prod->kind != CqProduction::Kind::Leaf)
      out.graph.add_edge(std::move(sources), v, rule_name);
    return v;
  };
  out.sink = ensure(goal_node);
  return out;
}

SearchResult cq_min(const SearchGoal& goal, const AtomCosts& costs) {
  CqStructure st = materialize_cq(goal, costs);
  if (!st.goal_node)
    throw PreconditionError("cq search: no proof found within the materialized structure");
  size_t gn = *st.goal_node;

  if (goal.measure == Measure::TreeSize) {
    // Choose the tree-cost-minimal production per needed node.
    std::map<size_t, const CqProduction*> choice;
    std::function<uint64_t(size_t)> pick = [&](size_t n) -> uint64_t {
      auto it = choice.find(n);
      if (it != choice.end()) return st.tcost[n];
      const CqProduction* best = nullptr;
      uint64_t best_cost = kInf;
      for (const auto& p : st.prods[n]) {
        uint64_t c = 0;
        switch (p.kind) {
          case CqProduction::Kind::Leaf: c = 1; break;
          case CqProduction::Kind::Mp: c = 2 + st.tcost[p.premises[0]]; break;
          case CqProduction::Kind::Conj:
            c = 1 + st.tcost[p.premises[0]] + st.tcost[p.premises[1]];
            break;
          case CqProduction::Kind::Abstract: c = 1 + st.tcost[p.premises[0]]; break;
        }
        if (c < best_cost) {
          best_cost = c;
          best = &p;
        }
      }
      if (!best) throw PreconditionError("cq search: node without production");
      choice.emplace(n, best);
      for (size_t pr : best->premises) pick(pr);
      return best_cost;
    };
    pick(gn);
    Proof proof = assemble_cq(goal, st, choice, gn);
    return {std::move(proof), st.tcost[gn]};
  }

  // Size minimization over the materialized structure: branch and bound on
  // the production choice per needed node, counting distinct vertices.
  struct Best {
    uint64_t value = kInf;
    std::map<size_t, const CqProduction*> choice;
  } best;
  size_t expansions = 0;

  std::map<size_t, const CqProduction*> choice;
  std::set<size_t> counted_nodes, counted_axioms;
  std::set<std::string> counted_tauts;

  std::function<void(std::vector<size_t>, uint64_t)> dfs = [&](std::vector<size_t> open,
                                                               uint64_t count) {
    if (++expansions > goal.limits.expansion_cap)
      throw CapExceeded("min_size: expansion cap exceeded");
    if (count >= best.value) return;
    if (open.empty()) {
      best.value = count;
      best.choice = choice;
      return;
    }
    size_t n = open.back();
    open.pop_back();
    if (choice.count(n)) {
      dfs(open, count);
      return;
    }
    for (const auto& p : st.prods[n]) {
      uint64_t add = 0;
      std::vector<size_t> next_open = open;
      std::vector<size_t> added_nodes;
      bool new_axiom = false, new_taut = false;
      std::string taut_key;
      if (p.kind == CqProduction::Kind::Mp) {
        if (p.tbox_index) {
          new_axiom = !counted_axioms.count(*p.tbox_index);
          if (new_axiom) add += 1;
        } else {
          taut_key = sentence_key(Sentence(*p.tautology));
          new_taut = !counted_tauts.count(taut_key);
          if (new_taut) add += 1;
        }
      }
      for (size_t pr : p.premises) {
        if (counted_nodes.insert(pr).second) {
          add += 1;
          added_nodes.push_back(pr);
          next_open.push_back(pr);
        }
      }
      choice.emplace(n, &p);
      if (new_axiom) counted_axioms.insert(*p.tbox_index);
      if (new_taut) counted_tauts.insert(taut_key);
      dfs(next_open, count + add);
      if (new_axiom) counted_axioms.erase(*p.tbox_index);
      if (new_taut) counted_tauts.erase(taut_key);
      choice.erase(n);
      for (size_t pr : added_nodes) counted_nodes.erase(pr);
    }
  };
  counted_nodes.insert(gn);
  dfs({gn}, 1);
  if (best.value >= kInf) throw PreconditionError("cq search: size minimization failed");
  Proof proof = assemble_cq(goal, st, best.choice, gn);
  return {std::move(proof), best.value};
}

}  // namespace

// ---------------------------------------------------------------------------

SearchResult min_tree_size(const SearchGoal& goal) {
  AtomCosts costs = compute_atom_costs(goal.kb, goal);
  if (goal.deriver == Deriver::Cq) {
    SearchGoal g = goal;
    g.measure = Measure::TreeSize;
    return cq_min(g, costs);
  }
  CQ goal_cq = goal.bound_query();
  auto matches = goal_matches(goal_cq, costs);
  if (matches.empty())
    throw PreconditionError(
        "the entailment prerequisite does not hold within the chase depth bound");

  uint64_t best = kInf;
  std::optional<ConjPlan> best_plan;
  std::string best_key;
  for (const auto& sigma : matches) {
    ConjPlan plan = plan_for(goal_cq, sigma, goal.deriver);
    uint64_t c = plan_tree_cost(plan, costs);
    std::string key = subst_key(sigma);
    if (c < best || (c == best && key < best_key)) {
      best = c;
      best_plan = plan;
      best_key = key;
    }
  }
  if (!best_plan || best >= kInf)
    throw PreconditionError("no proof within the bounded structure");
  Proof proof = assemble_sk(goal.kb, costs, goal_cq, *best_plan,
                            [&](const Atom& a) { return best_derivation(a, costs); });
  return {std::move(proof), best};
}

SearchResult min_size(const SearchGoal& goal) {
  AtomCosts costs = compute_atom_costs(goal.kb, goal);
  if (goal.deriver == Deriver::Cq) {
    SearchGoal g = goal;
    g.measure = Measure::Size;
    return cq_min(g, costs);
  }
  CQ goal_cq = goal.bound_query();
  auto matches = goal_matches(goal_cq, costs);
  if (matches.empty())
    throw PreconditionError(
        "the entailment prerequisite does not hold within the chase depth bound");

  uint64_t best = kInf;
  std::optional<ConjPlan> best_plan;
  std::map<Atom, Witness> best_choice;
  std::string best_key;
  for (const auto& sigma : matches) {
    ConjPlan plan = plan_for(goal_cq, sigma, goal.deriver);
    std::set<Atom> needed(plan.conj.begin(), plan.conj.end());
    SizeSearch search;
    search.costs = &costs;
    search.cap = goal.limits.expansion_cap;
    search.run(needed);
    uint64_t total = search.best + plan_extra_vertices(plan);
    std::string key = subst_key(sigma);
    if (total < best || (total == best && key < best_key)) {
      best = total;
      best_plan = plan;
      best_choice = search.best_choice;
      best_key = key;
    }
  }
  if (!best_plan) throw PreconditionError("no proof within the bounded structure");
  Proof proof = assemble_sk(goal.kb, costs, goal_cq, *best_plan, [&](const Atom& a) {
    auto it = best_choice.find(a);
    if (it != best_choice.end()) return std::optional<Witness>(it->second);
    return std::optional<Witness>();
  });
  return {std::move(proof), best};
}

bool decide_op(const SearchGoal& goal) {
  if (!goal.bound) throw InputError("decide_op: no bound given");
  uint64_t n = *goal.bound;
  if (goal.deriver == Deriver::Cq) {
    SearchResult r = goal.measure == Measure::TreeSize ? min_tree_size(goal) : min_size(goal);
    return r.value <= n;
  }
  // The skolemized derivers enumerate matches; the decision can stop as
  // soon as one match attains the bound.
  AtomCosts costs = compute_atom_costs(goal.kb, goal);
  CQ goal_cq = goal.bound_query();
  auto matches = goal_matches(goal_cq, costs);
  if (matches.empty())
    throw PreconditionError(
        "the entailment prerequisite does not hold within the chase depth bound");
  for (const auto& sigma : matches) {
    ConjPlan plan = plan_for(goal_cq, sigma, goal.deriver);
    if (goal.measure == Measure::TreeSize) {
      if (plan_tree_cost(plan, costs) <= n) return true;
    } else {
      std::set<Atom> needed(plan.conj.begin(), plan.conj.end());
      uint64_t extras = plan_extra_vertices(plan);
      if (needed.size() + extras > n) continue;  // admissible lower bound
      SizeSearch search;
      search.costs = &costs;
      search.cap = goal.limits.expansion_cap;
      search.run(needed);
      if (search.best + extras <= n) return true;
    }
  }
  return false;
}

bool is_tree_shaped(const CQ& q) {
  std::vector<Term> terms;
  for (const auto& t : atoms_terms(q.atoms)) terms.push_back(t);
  std::map<Term, size_t> id;
  for (size_t i = 0; i < terms.size(); ++i) id.emplace(terms[i], i);
  std::set<std::pair<size_t, size_t>> edges;
  for (const auto& a : q.atoms) {
    if (a.arity() != 2) continue;
    size_t u = id.at(a.args[0]), v = id.at(a.args[1]);
    if (u == v) return false;  // self-loop
    edges.insert({std::min(u, v), std::max(u, v)});
  }
  if (edges.size() != terms.size() - 1) return false;
  // Connectivity via union-find.
  std::vector<size_t> parent(terms.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<size_t(size_t)> find = [&](size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& [u, v] : edges) {
    size_t ru = find(u), rv = find(v);
    if (ru == rv) return false;  // cycle
    parent[ru] = rv;
  }
  for (size_t i = 0; i < terms.size(); ++i)
    if (find(i) != find(0)) return false;
  return true;
}

SearchResult tree_shaped_min(const SearchGoal& goal) {
  if (goal.deriver != Deriver::Sk)
    throw InputError("tree_shaped_min: only the skolemized deriver is supported");
  if (goal.measure != Measure::TreeSize)
    throw InputError("tree_shaped_min: only tree size is supported");
  CQ goal_cq = goal.bound_query();
  if (!is_tree_shaped(goal_cq)) throw InputError("tree_shaped_min: query is not tree-shaped");

  // The compressed structure doubles as the DL-Lite check; its per-vertex
  // costs are the role-level summary of the chase costs used below.
  CompressedStructure compressed = build_compressed(goal.kb);
  (void)compressed;

  AtomCosts costs = compute_atom_costs(goal.kb, goal);

  // Rooted Gaifman tree.
  std::vector<Term> terms;
  for (const auto& t : atoms_terms(goal_cq.atoms)) terms.push_back(t);
  std::sort(terms.begin(), terms.end());
  Term root = terms.front();
  if (!goal.answer.empty()) root = goal.answer.front();
  std::map<Term, std::vector<Term>> adjacent;
  for (const auto& a : goal_cq.atoms) {
    if (a.arity() != 2 || a.args[0] == a.args[1]) continue;
    adjacent[a.args[0]].push_back(a.args[1]);
    adjacent[a.args[1]].push_back(a.args[0]);
  }
  std::vector<Term> order{root};
  std::map<Term, Term> parent;
  std::set<Term> visited{root};
  for (size_t i = 0; i < order.size(); ++i) {
    for (const auto& nb : adjacent[order[i]]) {
      if (visited.insert(nb).second) {
        parent.emplace(nb, order[i]);
        order.push_back(nb);
      }
    }
  }

  // Atom attribution: unary/loop atoms to their term, binary atoms to the
  // tree edge (parent, child).
  auto node_atoms = [&](const Term& t) {
    std::vector<Atom> out;
    for (const auto& a : goal_cq.atoms) {
      auto ts = atoms_terms({a});
      if (ts.size() == 1 && *ts.begin() == t) out.push_back(a);
    }
    return out;
  };
  auto edge_atoms = [&](const Term& par, const Term& child) {
    std::vector<Atom> out;
    for (const auto& a : goal_cq.atoms) {
      auto ts = atoms_terms({a});
      if (ts.size() == 2 && ts.count(par) && ts.count(child)) out.push_back(a);
    }
    return out;
  };

  // Candidate assignments.
  std::vector<Term> elements;
  for (const auto& f : costs.chase.facts)
    for (const auto& t : f.args)
      if (std::find(elements.begin(), elements.end(), t) == elements.end())
        elements.push_back(t);
  std::sort(elements.begin(), elements.end());
  auto candidates = [&](const Term& t) {
    return t.is_variable() ? elements : std::vector<Term>{t};
  };

  auto atom_cost = [&](const Atom& a, const std::map<Term, Term>& assign) -> uint64_t {
    std::vector<Term> args;
    for (const auto& t : a.args) {
      auto it = assign.find(t);
      args.push_back(it == assign.end() ? t : it->second);
    }
    Atom inst(a.pred, std::move(args));
    auto it = costs.tree_cost.find(inst);
    return it == costs.tree_cost.end() ? kInf : it->second;
  };

  // Per-atom-occurrence cost table D[term][candidate].
  std::map<Term, std::map<Term, uint64_t>> table;
  std::map<Term, std::map<Term, std::map<Term, Term>>> pick;  // term -> cand -> child -> child cand
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Term& t = *it;
    std::vector<Term> children;
    for (const auto& [c, p] : parent)
      if (p == t) children.push_back(c);
    std::sort(children.begin(), children.end());
    for (const auto& cand : candidates(t)) {
      std::map<Term, Term> assign{{t, cand}};
      uint64_t total = 0;
      for (const auto& a : node_atoms(t)) {
        uint64_t c = atom_cost(a, assign);
        total = (c >= kInf || total >= kInf) ? kInf : total + c;
      }
      for (const auto& child : children) {
        uint64_t best_child = kInf;
        Term best_cand = cand;
        for (const auto& ccand : candidates(child)) {
          auto dit = table.at(child).find(ccand);
          if (dit == table.at(child).end() || dit->second >= kInf) continue;
          std::map<Term, Term> both{{t, cand}, {child, ccand}};
          uint64_t sum = dit->second;
          for (const auto& a : edge_atoms(t, child)) {
            uint64_t c = atom_cost(a, both);
            sum = (c >= kInf || sum >= kInf) ? kInf : sum + c;
          }
          if (sum < best_child) {
            best_child = sum;
            best_cand = ccand;
          }
        }
        total = (best_child >= kInf || total >= kInf) ? kInf : total + best_child;
        pick[t][cand].emplace(child, best_cand);
      }
      table[t].emplace(cand, total);
    }
  }

  uint64_t body_total = kInf;
  Term root_cand = root;
  for (const auto& [cand, c] : table.at(root)) {
    if (c < body_total) {
      body_total = c;
      root_cand = cand;
    }
  }
  if (body_total >= kInf)
    throw PreconditionError(
        "the entailment prerequisite does not hold within the chase depth bound");

  // Reconstruct the assignment (top-down) and hand off to the assembler.
  Substitution sigma;
  std::vector<std::pair<Term, Term>> stack{{root, root_cand}};
  while (!stack.empty()) {
    auto [t, cand] = stack.back();
    stack.pop_back();
    if (t.is_variable()) sigma.emplace(t.name(), cand);
    auto pit = pick.find(t);
    if (pit == pick.end()) continue;
    auto cit = pit->second.find(cand);
    if (cit == pit->second.end()) continue;
    for (const auto& [child, ccand] : cit->second) stack.push_back({child, ccand});
  }

  ConjPlan plan = plan_for(goal_cq, sigma, Deriver::Sk);
  uint64_t total = body_total + (plan.need_cs ? 1 : 0) + (plan.need_es ? 1 : 0);
  Proof proof = assemble_sk(goal.kb, costs, goal_cq, plan,
                            [&](const Atom& a) { return best_derivation(a, costs); });
  return {std::move(proof), total};
}

// ---------------------------------------------------------------------------
// Brute-force oracles (test use).

namespace {

uint64_t bf_tree_atom(const Atom& a, const AtomCosts& costs, uint64_t budget) {
  if (costs.chase.from_abox(a)) return 1;
  if (budget < 3) return kInf;
  uint64_t best = kInf;
  for (const auto& w : derivations_of(a, costs.chase, costs.rules)) {
    uint64_t total = 2;
    for (const auto& p : w.premises) {
      uint64_t c = bf_tree_atom(p, costs, budget - total);
      if (c >= kInf) {
        total = kInf;
        break;
      }
      total += c;
      if (total > budget) {
        total = kInf;
        break;
      }
    }
    best = std::min(best, total);
  }
  return best;
}

}  // namespace

uint64_t brute_force_min(const SearchGoal& goal, uint64_t cap) {
  if (goal.deriver == Deriver::Cq)
    throw InputError("brute_force_min: only the skolemized derivers are supported");
  AtomCosts costs = compute_atom_costs(goal.kb, goal);
  CQ goal_cq = goal.bound_query();
  auto matches = goal_matches(goal_cq, costs);
  if (matches.empty()) throw PreconditionError("brute_force_min: prerequisite fails");

  uint64_t best = kInf;
  if (goal.measure == Measure::TreeSize) {
    for (const auto& sigma : matches) {
      ConjPlan plan = plan_for(goal_cq, sigma, goal.deriver);
      uint64_t total = plan_extra_vertices(plan);
      for (const auto& a : plan.conj) {
        uint64_t c = bf_tree_atom(a, costs, cap);
        total = (c >= kInf || total >= kInf) ? kInf : total + c;
      }
      best = std::min(best, total);
    }
    if (best >= kInf) throw CapExceeded("brute_force_min: no proof within the budget");
    return best;
  }

  // Size: exhaustive enumeration of fact subsets plus rule subsets.
  const auto& facts = costs.chase.facts;
  size_t nf = facts.size(), nr = costs.rules.size();
  if (nf + nr > 26) throw CapExceeded("brute_force_min: universe too large");
  uint64_t checked = 0;
  for (const auto& sigma : matches) {
    ConjPlan plan = plan_for(goal_cq, sigma, goal.deriver);
    std::set<Atom> needed(plan.conj.begin(), plan.conj.end());
    for (uint64_t mask = 0; mask < (uint64_t{1} << (nf + nr)); ++mask) {
      if (++checked > cap * 100000ULL) throw CapExceeded("brute_force_min: enumeration cap");
      std::set<Atom> satoms;
      std::set<size_t> srules;
      for (size_t i = 0; i < nf; ++i)
        if (mask & (uint64_t{1} << i)) satoms.insert(facts[i]);
      for (size_t i = 0; i < nr; ++i)
        if (mask & (uint64_t{1} << (nf + i))) srules.insert(i);
      uint64_t value = satoms.size() + srules.size() + plan_extra_vertices(plan);
      if (value >= best) continue;
      bool covers = std::all_of(needed.begin(), needed.end(),
                                [&](const Atom& a) { return satoms.count(a) != 0; });
      if (!covers) continue;
      // Grounded fixpoint: every selected atom must be derivable in some
      // acyclic order from the ABox through selected atoms and rules.
      std::set<Atom> grounded;
      for (const auto& a : satoms)
        if (costs.chase.from_abox(a)) grounded.insert(a);
      bool grew = true;
      while (grew) {
        grew = false;
        for (const auto& a : satoms) {
          if (grounded.count(a)) continue;
          for (const auto& w : costs.derivations.at(a)) {
            if (!srules.count(w.rule_index)) continue;
            if (std::all_of(w.premises.begin(), w.premises.end(),
                            [&](const Atom& p) { return grounded.count(p) != 0; })) {
              grounded.insert(a);
              grew = true;
              break;
            }
          }
        }
      }
      if (grounded.size() == satoms.size()) best = value;
    }
  }
  if (best >= kInf) throw CapExceeded("brute_force_min: no valid sub-hypergraph found");
  return best;
}

}  // namespace cqproof
