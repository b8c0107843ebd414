#include "cqproof/translate.hpp"

#include <algorithm>

namespace cqproof {

namespace {

uint64_t max_head_size(const KnowledgeBase& kb) {
  uint64_t m = 1;
  for (const auto& e : kb.tbox) m = std::max<uint64_t>(m, tbox_rule(e).head.size());
  return m;
}

uint64_t max_body_size(const KnowledgeBase& kb) {
  uint64_t m = 1;
  for (const auto& e : kb.tbox) m = std::max<uint64_t>(m, tbox_rule(e).body.size());
  return m;
}

std::string fresh_name(const std::string& base, std::set<std::string>& taken) {
  std::string n = base;
  int k = 0;
  while (taken.count(n)) n = base + std::to_string(k++);
  taken.insert(n);
  return n;
}

}  // namespace

uint64_t fwd_size_bound(const Proof& p, const KnowledgeBase& kb) {
  return proof_size(p) * (max_head_size(kb) + 1) + 2;
}

uint64_t bwd_size_bound(const Proof& p, const KnowledgeBase& kb) {
  const CQ* q = as_cq(p.graph.label(p.sink));
  uint64_t vars = q ? atoms_vars(q->atoms).size() : 0;
  return proof_size(p) * (max_body_size(kb) + 2) + 2 * vars + 2;
}

// ---------------------------------------------------------------------------
// CQ-deriver proof -> Skolemized proof.

namespace {

// Exact witness of a constant-abstraction edge: the abstracted constants and
// the grounding of the conclusion's fresh variables.
struct EWitness {
  Substitution new_var_values;  // conclusion variable -> the constant it abstracts
};

std::optional<EWitness> explain_e(const CQ& premise, const CQ& conclusion) {
  if (premise.atoms.size() != conclusion.atoms.size()) return std::nullopt;
  std::vector<std::string> consts;
  for (const auto& t : atoms_terms(premise.atoms))
    if (t.is_constant()) consts.push_back(t.name());
  if (consts.size() > 16) throw CapExceeded("explain_e: too many constants");
  auto premise_vars = atoms_vars(premise.atoms);
  for (size_t mask = 1; mask < (size_t{1} << consts.size()); ++mask) {
    std::set<std::string> chosen;
    for (size_t i = 0; i < consts.size(); ++i)
      if (mask & (size_t{1} << i)) chosen.insert(consts[i]);
    CQ cand = infer_e(premise, chosen);
    // Positionally align cand with the conclusion, binding only the fresh
    // abstraction variables.
    std::set<std::string> wild;
    for (const auto& v : atoms_vars(cand.atoms))
      if (!premise_vars.count(v)) wild.insert(v);
    Substitution bind;
    bool ok = true;
    for (size_t i = 0; i < cand.atoms.size() && ok; ++i) {
      const Atom &ca = cand.atoms[i], &ga = conclusion.atoms[i];
      if (ca.pred != ga.pred || ca.args.size() != ga.args.size()) {
        ok = false;
        break;
      }
      for (size_t k = 0; k < ca.args.size(); ++k) {
        const Term &ct = ca.args[k], &gt = ga.args[k];
        if (ct.is_variable() && wild.count(ct.name())) {
          if (!gt.is_variable() || premise_vars.count(gt.name())) {
            ok = false;
            break;
          }
          auto it = bind.find(ct.name());
          if (it == bind.end())
            bind.emplace(ct.name(), gt);
          else if (!(it->second == gt)) {
            ok = false;
            break;
          }
        } else if (!(ct == gt)) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    // Injective on the fresh variables.
    std::set<std::string> images;
    for (const auto& [v, t] : bind)
      if (!images.insert(t.name()).second) ok = false;
    if (!ok) continue;
    EWitness w;
    // cand's fresh var for constant c is named deterministically by infer_e;
    // recover which constant each conclusion variable stands for.
    for (const auto& c : chosen) {
      // infer_e names the variable after the constant; find it by value.
      for (size_t i = 0; i < cand.atoms.size(); ++i) {
        for (size_t k = 0; k < cand.atoms[i].args.size(); ++k) {
          if (premise.atoms[i].args[k].is_constant() && premise.atoms[i].args[k].name() == c &&
              cand.atoms[i].args[k].is_variable()) {
            w.new_var_values.emplace(bind.at(cand.atoms[i].args[k].name()).name(),
                                     Term::constant(c));
          }
        }
      }
    }
    return w;
  }
  return std::nullopt;
}

// Exact witness of a conjunction edge: which premise forms the prefix and
// the renaming of the suffix premise's variables into conclusion terms.
struct CWitness {
  bool flipped = false;          // premises[1] is the prefix
  Substitution suffix_renaming;  // suffix premise variable -> conclusion term
};

std::optional<CWitness> explain_c(const CQ& q1, const CQ& q2, const CQ& conclusion) {
  for (int flip = 0; flip < 2; ++flip) {
    const CQ& a = flip ? q2 : q1;
    const CQ& b = flip ? q1 : q2;
    if (a.atoms.size() + b.atoms.size() != conclusion.atoms.size()) continue;
    std::vector<Atom> prefix(conclusion.atoms.begin(), conclusion.atoms.begin() + a.atoms.size());
    if (prefix != a.atoms) continue;
    Substitution rename;
    bool ok = true;
    std::set<std::string> bvars = atoms_vars(b.atoms);
    for (size_t i = 0; i < b.atoms.size() && ok; ++i) {
      const Atom& img = conclusion.atoms[a.atoms.size() + i];
      Substitution tmp = rename;
      // Bind every variable of b (they are all renamable).
      if (!unify_into(b.atoms[i], img, tmp))
        ok = false;
      else
        rename = tmp;
    }
    if (!ok) continue;
    // Renaming apart: variables map to variables, injectively, and the two
    // parts of the conclusion share none.
    std::set<std::string> images;
    for (const auto& [v_old, t_new] : rename) {
      if (!t_new.is_variable() || !images.insert(t_new.name()).second) ok = false;
    }
    if (!ok) continue;
    auto pv = atoms_vars(prefix);
    bool disjoint = true;
    for (size_t i = a.atoms.size(); i < conclusion.atoms.size(); ++i)
      for (const auto& t : conclusion.atoms[i].args)
        if (t.is_variable() && pv.count(t.name())) disjoint = false;
    if (!disjoint) continue;
    CWitness w;
    w.flipped = flip == 1;
    w.suffix_renaming = rename;
    return w;
  }
  return std::nullopt;
}

struct SkStep {
  size_t rule_index;
  std::vector<Atom> premises;  // ground, in rule body order
  Atom conclusion;             // ground
};

}  // namespace

Proof cq_to_sk(const Proof& p, const KnowledgeBase& kb) {
  auto checker = cq_schema_checker(kb);
  auto report = validate_proof(p, *checker);
  if (!report.ok()) throw InputError("cq_to_sk: input proof is not valid:\n" + report.summary());

  const ProofGraph& g = p.graph;
  std::map<VertexId, Substitution> sigma;  // grounding of each CQ vertex's variables
  std::vector<SkStep> steps;

  auto ground_term = [&](const Substitution& s, const Term& t) { return substitute(s, t); };

  for (VertexId v : g.topological_order()) {
    const CQ* label = as_cq(g.label(v));
    if (!label) continue;
    if (g.incoming(v).empty()) {
      sigma[v] = {};  // assertions are ground
      continue;
    }
    const HyperEdge& e = g.edges()[g.incoming(v).front()];
    std::vector<const Sentence*> prem;
    for (VertexId s : e.sources) prem.push_back(&g.label(s));

    if (prem.size() == 2) {
      // Modus ponens or conjunction.
      bool done = false;
      for (int flip = 0; flip < 2 && !done; ++flip) {
        VertexId qv = e.sources[flip];
        const Sentence& rs = *prem[1 - flip];
        const CQ* q = as_cq(g.label(qv));
        if (!q || !q->boolean()) continue;
        std::optional<ExistentialRule> rule;
        if (const auto* ax = std::get_if<DLLiteAxiom>(&rs))
          rule = translate_axiom(*ax);
        else if (const auto* er = std::get_if<ExistentialRule>(&rs))
          rule = *er;
        if (!rule) continue;
        auto w = explain_mp(*q, *rule, *label);
        if (!w) continue;
        const Substitution& sq = sigma.at(qv);
        Substitution sc;
        for (const auto& lv : atoms_vars(label->atoms)) {
          auto it = sq.find(lv);
          if (it != sq.end()) sc.emplace(lv, it->second);
        }
        // Tautological rules first: their conclusions reuse the matched
        // ground values, even when the rule form coincides with a stored
        // (degenerate) axiom.
        auto taut_ren = CqChecker::tautology_renaming(*rule);
        auto idx = taut_ren ? std::nullopt : tbox_index_of(kb, rs);
        if (idx) {
          // Head existentials ground to Skolem terms over the frontier value.
          for (const auto& [rv, ct] : w->added_binding) {
            if (!ct.is_variable()) continue;
            if (rule->frontier_vars.empty())
              throw InputError("cq_to_sk: rule without frontier cannot be skolemized");
            Term frontier_val =
                ground_term(sq, substitute(w->pi, Term::variable(rule->frontier_vars.front())));
            sc.emplace(ct.name(),
                       Term::skolem("fn_" + std::to_string(*idx) + "_" + rv, frontier_val));
          }
          // One ground step per added head atom.
          std::vector<Atom> gprem;
          for (const auto& b : rule->body) {
            Atom ga = substitute(sq, substitute(w->pi, b));
            if (!ga.ground()) throw InputError("cq_to_sk: failed to ground premise " + b.str());
            gprem.push_back(ga);
          }
          // pi (body variables) and the fresh-variable binding have disjoint
          // domains; one simultaneous pass avoids capturing rule variables.
          Substitution head_map = w->pi;
          for (const auto& [rv, ct] : w->added_binding) head_map.emplace(rv, ct);
          for (size_t hi : w->add_head) {
            Atom added = substitute(head_map, rule->head[hi]);
            Atom gconcl = substitute(sc, added);
            if (!gconcl.ground()) throw InputError("cq_to_sk: failed to ground " + added.str());
            steps.push_back({*idx, gprem, gconcl});
          }
        } else {
          // Tautological rule: added atoms reuse the matched ground values.
          const auto& ren = taut_ren;
          if (!ren) throw InputError("cq_to_sk: rule premise is neither in the TBox nor a tautology");
          for (const auto& [bodyvar, headterm] : *ren) {
            if (!headterm.is_variable()) continue;
            auto bound = w->added_binding.find(headterm.name());
            if (bound == w->added_binding.end() || !bound->second.is_variable()) continue;
            sc.emplace(bound->second.name(),
                       ground_term(sq, substitute(w->pi, Term::variable(bodyvar))));
          }
        }
        sigma[v] = std::move(sc);
        done = true;
      }
      if (done) continue;
      // Conjunction of two Boolean CQs.
      const CQ* q1 = as_cq(*prem[0]);
      const CQ* q2 = as_cq(*prem[1]);
      if (q1 && q2) {
        auto w = explain_c(*q1, *q2, *label);
        if (!w) throw InputError("cq_to_sk: cannot reconstruct conjunction step");
        VertexId v1 = e.sources[w->flipped ? 1 : 0];
        VertexId v2 = e.sources[w->flipped ? 0 : 1];
        Substitution sc = sigma.at(v1);
        const Substitution& s2 = sigma.at(v2);
        for (const auto& [v_old, t_new] : w->suffix_renaming) {
          if (!t_new.is_variable()) continue;
          auto it = s2.find(v_old);
          if (it != s2.end()) sc.emplace(t_new.name(), it->second);
        }
        sigma[v] = std::move(sc);
        continue;
      }
      throw InputError("cq_to_sk: unsupported two-premise step");
    }
    if (prem.size() == 1) {
      const CQ* q = as_cq(*prem[0]);
      if (!q) throw InputError("cq_to_sk: unsupported single-premise step");
      auto w = explain_e(*q, *label);
      if (!w) throw InputError("cq_to_sk: cannot reconstruct abstraction step");
      Substitution sc = sigma.at(e.sources[0]);
      for (const auto& [nv, c] : w->new_var_values) sc.emplace(nv, c);
      sigma[v] = std::move(sc);
      continue;
    }
    throw InputError("cq_to_sk: unsupported inference arity");
  }

  // Assemble the Skolemized proof.
  const CQ& sink_cq = *as_cq(g.label(p.sink));
  const Substitution& ssink = sigma.at(p.sink);
  std::vector<Atom> conj;
  for (const auto& a : sink_cq.atoms) {
    Atom ga = substitute(ssink, a);
    if (!ga.ground()) throw InputError("cq_to_sk: sink grounding incomplete at " + a.str());
    conj.push_back(ga);
  }

  Proof out;
  std::map<Atom, VertexId> atom_vertex;
  std::map<size_t, VertexId> rule_vertex;
  std::set<Atom> abox(kb.abox.begin(), kb.abox.end());

  auto atom_node = [&](const Atom& a) -> std::optional<VertexId> {
    auto it = atom_vertex.find(a);
    if (it != atom_vertex.end()) return it->second;
    if (abox.count(a)) {
      VertexId nv = out.graph.add_vertex(assertion_sentence(a));
      atom_vertex.emplace(a, nv);
      return nv;
    }
    return std::nullopt;
  };

  for (const auto& st : steps) {
    // The first derivation of an atom wins; ABox atoms stay leaves.
    if (abox.count(st.conclusion) || atom_vertex.count(st.conclusion)) continue;
    std::vector<VertexId> sources;
    bool ok = true;
    for (const auto& pa : st.premises) {
      auto nv = atom_node(pa);
      if (!nv) {
        ok = false;
        break;
      }
      sources.push_back(*nv);
    }
    if (!ok) throw InputError("cq_to_sk: premise atom not derivable: step for " + st.conclusion.str());
    auto rit = rule_vertex.find(st.rule_index);
    if (rit == rule_vertex.end()) {
      Sentence rl = std::holds_alternative<DLLiteAxiom>(kb.tbox[st.rule_index])
                        ? Sentence(std::get<DLLiteAxiom>(kb.tbox[st.rule_index]))
                        : Sentence(std::get<ExistentialRule>(kb.tbox[st.rule_index]));
      rit = rule_vertex.emplace(st.rule_index, out.graph.add_vertex(rl)).first;
    }
    sources.push_back(rit->second);
    VertexId cv = out.graph.add_vertex(assertion_sentence(st.conclusion));
    atom_vertex.emplace(st.conclusion, cv);
    out.graph.add_edge(std::move(sources), cv, "MPs");
  }

  // Final conjunction and abstraction.
  for (const auto& a : conj)
    if (!atom_node(a)) throw InputError("cq_to_sk: conjunct " + a.str() + " has no derivation");

  if (sink_cq.ground() && sink_cq.atoms.size() == 1) {
    out.sink = atom_vertex.at(conj[0]);
  } else if (sink_cq.ground()) {
    std::vector<VertexId> sources;
    for (const auto& a : conj) sources.push_back(atom_vertex.at(a));
    out.sink = out.graph.add_vertex(Sentence(sink_cq));
    out.graph.add_edge(std::move(sources), out.sink, "Cs");
  } else {
    VertexId conj_v;
    if (conj.size() == 1) {
      conj_v = atom_vertex.at(conj[0]);
    } else {
      std::vector<VertexId> sources;
      for (const auto& a : conj) sources.push_back(atom_vertex.at(a));
      conj_v = out.graph.add_vertex(Sentence(infer_cs(conj)));
      out.graph.add_edge(std::move(sources), conj_v, "Cs");
    }
    out.sink = out.graph.add_vertex(Sentence(sink_cq));
    out.graph.add_edge({conj_v}, out.sink, "Es");
  }

  // Prune vertices not reachable from the sink.
  std::vector<bool> keep(out.graph.vertex_count(), false);
  std::vector<VertexId> stack{out.sink};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (int ei : out.graph.incoming(v))
      for (VertexId s : out.graph.edges()[ei].sources) stack.push_back(s);
  }
  Proof pruned;
  std::map<VertexId, VertexId> remap;
  for (VertexId v = 0; v < out.graph.vertex_count(); ++v)
    if (keep[v]) remap.emplace(v, pruned.graph.add_vertex(out.graph.label(v)));
  for (const auto& e : out.graph.edges()) {
    if (!keep[e.target]) continue;
    std::vector<VertexId> src;
    for (VertexId s : e.sources) src.push_back(remap.at(s));
    pruned.graph.add_edge(std::move(src), remap.at(e.target), e.rule);
  }
  pruned.sink = remap.at(out.sink);
  return pruned;
}

// ---------------------------------------------------------------------------
// Skolemized proof -> CQ-deriver proof.

namespace {

// A Skolemized modus ponens application: rule index and the full ground
// match of its body.
struct SkApplication {
  size_t rule_index;
  Substitution pi;             // rule variables -> ground terms
  std::vector<Atom> derived;   // conclusions of this application used in the proof
};

std::string subst_signature(const Substitution& s) {
  std::string out;
  for (const auto& [v, t] : s) out += v + "=" + t.str() + ";";
  return out;
}

}  // namespace

Proof sk_to_cq(const Proof& p, const KnowledgeBase& kb) {
  auto checker = sk_schema_checker(kb, /*allow_set_abstraction=*/true);
  auto report = validate_proof(p, *checker);
  if (!report.ok()) throw InputError("sk_to_cq: input proof is not valid:\n" + report.summary());

  const ProofGraph& g = p.graph;
  const CQ* sink_cq = as_cq(g.label(p.sink));
  if (!sink_cq) throw InputError("sk_to_cq: sink is not a CQ");

  // The grounding of the conclusion's variables, from the final abstraction
  // step (identity for ground conclusions).
  Substitution sigma;
  if (!sink_cq->ground()) {
    const HyperEdge& e = g.edges()[g.incoming(p.sink).front()];
    const CQ* conj = as_cq(g.label(e.sources.at(0)));
    if (!conj) throw InputError("sk_to_cq: abstraction premise is not a ground conjunction");
    auto s = find_es_substitution(*conj, *sink_cq);
    if (!s) s = find_es_prime_substitution(*conj, *sink_cq);
    if (!s) throw InputError("sk_to_cq: cannot recover the abstraction substitution");
    sigma = *s;
  }

  auto sk_rules = kb.skolemized_tbox();

  // Collect ABox leaves and Skolemized modus ponens applications in
  // topological order, grouped by (rule, ground match).
  std::vector<Atom> abox_atoms;
  std::vector<SkApplication> apps;
  std::map<std::string, size_t> app_index;
  for (VertexId v : g.topological_order()) {
    const Sentence& label = g.label(v);
    if (g.incoming(v).empty()) {
      if (is_assertion(label)) {
        const Atom& a = std::get<CQ>(label).atoms[0];
        if (std::find(abox_atoms.begin(), abox_atoms.end(), a) == abox_atoms.end())
          abox_atoms.push_back(a);
      }
      continue;
    }
    const HyperEdge& e = g.edges()[g.incoming(v).front()];
    if (!is_assertion(label)) continue;  // conjunction / abstraction handled separately
    const Atom& target = std::get<CQ>(label).atoms[0];
    // Recover the rule and the ground match of this modus ponens step.
    std::optional<size_t> rule_idx;
    std::vector<Atom> atom_premises;
    for (VertexId s : e.sources) {
      const Sentence& ps = g.label(s);
      if (is_assertion(ps))
        atom_premises.push_back(std::get<CQ>(ps).atoms[0]);
      else if (auto idx = tbox_index_of(kb, ps))
        rule_idx = idx;
    }
    if (!rule_idx) throw InputError("sk_to_cq: modus ponens step without a TBox rule premise");
    const SkolemRule& skr = sk_rules[*rule_idx];
    std::optional<Substitution> found;
    std::set<Atom> premise_set(atom_premises.begin(), atom_premises.end());
    for (const auto& pi : match(skr.body, atom_premises)) {
      std::set<Atom> image;
      for (const auto& b : skr.body) image.insert(substitute(pi, b));
      if (image != premise_set) continue;
      bool hits = false;
      for (const auto& h : skr.head)
        if (substitute(pi, h) == target) hits = true;
      if (hits) {
        found = pi;
        break;
      }
    }
    if (!found) throw InputError("sk_to_cq: cannot reconstruct step for " + target.str());
    std::string key = std::to_string(*rule_idx) + "|" + subst_signature(*found);
    auto it = app_index.find(key);
    if (it == app_index.end()) {
      app_index.emplace(key, apps.size());
      apps.push_back({*rule_idx, *found, {target}});
    } else {
      apps[it->second].derived.push_back(target);
    }
  }

  if (abox_atoms.empty()) throw InputError("sk_to_cq: proof uses no ABox assertions");

  // Build the output: conjoin the assertions, replay the rule applications
  // (Skolem terms become existential variables), then restore the query's
  // variable multiplicity and drop scaffolding atoms.
  Proof out;
  std::set<std::string> taken;  // variable names used in the big CQ
  std::map<Term, Term> desk;    // ground skolem term -> its variable

  auto desk_term = [&](const Term& t) -> Term {
    if (!t.is_skolem()) return t;
    auto it = desk.find(t);
    if (it == desk.end())
      throw InputError("sk_to_cq: skolem term " + t.str() +
                       " lacks a creating rule application in the proof");
    return it->second;
  };

  VertexId cur = out.graph.add_vertex(assertion_sentence(abox_atoms[0]));
  CQ cur_cq({}, {abox_atoms[0]});
  for (size_t i = 1; i < abox_atoms.size(); ++i) {
    VertexId leaf = out.graph.add_vertex(assertion_sentence(abox_atoms[i]));
    CQ next = infer_c(cur_cq, CQ({}, {abox_atoms[i]}));
    VertexId nv = out.graph.add_vertex(Sentence(next));
    out.graph.add_edge({cur, leaf}, nv, "C");
    cur = nv;
    cur_cq = std::move(next);
  }
  for (const auto& a : abox_atoms) taken.merge(atom_vars(a));

  for (const auto& app : apps) {
    const TBoxEntry& entry = kb.tbox[app.rule_index];
    ExistentialRule rule = tbox_rule(entry);
    const SkolemRule& skr = sk_rules[app.rule_index];
    // Body variables map to the de-Skolemized images of their ground values.
    Substitution pi_cq;
    for (const auto& bv : atoms_vars(rule.body)) pi_cq.emplace(bv, desk_term(app.pi.at(bv)));
    // Fresh existential variables, one per head existential; their Skolem
    // instances now denote these variables.
    Substitution ext = pi_cq;
    for (const auto& u : rule.existential_vars) {
      Term var = Term::variable(fresh_name("w", taken));
      ext.emplace(u, var);
      // The Skolem instance of u under this application.
      for (const auto& h : skr.head) {
        for (const auto& t : h.args) {
          if (t.is_skolem() && t.name() == "fn_" + std::to_string(app.rule_index) + "_" + u) {
            Term inst = substitute(app.pi, t);
            desk.emplace(inst, var);
          }
        }
      }
    }
    // Which head atoms produce the derived conclusions.
    std::vector<size_t> add_head;
    for (size_t hi = 0; hi < skr.head.size(); ++hi) {
      for (const auto& d : app.derived)
        if (substitute(app.pi, skr.head[hi]) == d) add_head.push_back(hi);
    }
    std::vector<Atom> atoms = cur_cq.atoms;
    for (size_t hi : add_head) {
      Atom added = substitute(ext, rule.head[hi]);
      if (std::find(atoms.begin(), atoms.end(), added) == atoms.end()) atoms.push_back(added);
    }
    CQ next({}, atoms);
    VertexId rule_v = out.graph.add_vertex(std::holds_alternative<DLLiteAxiom>(entry)
                                               ? Sentence(std::get<DLLiteAxiom>(entry))
                                               : Sentence(std::get<ExistentialRule>(entry)));
    VertexId nv = out.graph.add_vertex(Sentence(next));
    out.graph.add_edge({cur, rule_v}, nv, "MP");
    cur = nv;
    cur_cq = std::move(next);
  }

  // Restore the query's variable multiplicity: materialize each query
  // variable by copying its atom neighborhood with a tautological rule.
  std::map<std::string, Term> theta;  // query variable -> current term
  std::vector<std::string> qvars;
  for (const auto& a : sink_cq->atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && !theta.count(t.name())) {
        theta.emplace(t.name(), desk_term(sigma.at(t.name())));
        qvars.push_back(t.name());
      }

  auto hybrid = [&](const Atom& a) {
    std::vector<Term> args;
    for (const auto& t : a.args) args.push_back(t.is_variable() ? theta.at(t.name()) : t);
    return Atom(a.pred, std::move(args));
  };

  for (const auto& x : qvars) {
    // Pattern variables, one per query term occurring next to x.
    std::map<std::string, Term> pat;  // query term rendering -> pattern var
    std::set<std::string> pat_taken;
    auto pattern_var = [&](const Term& query_term) {
      std::string key = query_term.str();
      auto it = pat.find(key);
      if (it == pat.end())
        it = pat.emplace(key, Term::variable(fresh_name("p", pat_taken))).first;
      return it->second;
    };
    std::vector<Atom> body;
    std::vector<Atom> image;
    Substitution pi;
    for (const auto& a : sink_cq->atoms) {
      bool has_x = std::any_of(a.args.begin(), a.args.end(), [&](const Term& t) {
        return t.is_variable() && t.name() == x;
      });
      if (!has_x) continue;
      std::vector<Term> pargs;
      for (const auto& t : a.args) {
        Term pv = pattern_var(t);
        pargs.push_back(pv);
        Term value = t.is_variable() ? theta.at(t.name()) : t;
        auto it = pi.find(pv.name());
        if (it == pi.end())
          pi.emplace(pv.name(), value);
        else if (!(it->second == value))
          throw InputError("sk_to_cq: inconsistent materialization of " + x);
      }
      Atom patom(a.pred, std::move(pargs));
      if (std::find(body.begin(), body.end(), patom) == body.end()) {
        body.push_back(patom);
        image.push_back(hybrid(a));
      }
    }
    // Head: the same pattern with x's variable renamed fresh.
    Term fresh = Term::variable(fresh_name("q_" + x, taken));
    Substitution rename{{pattern_var(Term::variable(x)).name(), fresh}};
    ExistentialRule taut(body, substitute(rename, body));
    VertexId taut_v = out.graph.add_vertex(Sentence(taut));
    out.graph.add_edge({}, taut_v, "T");

    Substitution ext = pi;
    ext.emplace(pattern_var(Term::variable(x)).name() + "__unused", fresh);  // placeholder, see below
    ext.erase(pattern_var(Term::variable(x)).name() + "__unused");
    // The added atoms: pattern image with x's positions renamed to `fresh`.
    std::vector<Atom> atoms = cur_cq.atoms;
    for (const auto& b : substitute(rename, body)) {
      Atom added = substitute(pi, b);
      // `fresh` is not in pi's domain, so it survives substitution.
      if (std::find(atoms.begin(), atoms.end(), added) == atoms.end()) atoms.push_back(added);
    }
    CQ next({}, atoms);
    VertexId nv = out.graph.add_vertex(Sentence(next));
    out.graph.add_edge({cur, taut_v}, nv, "MP");
    cur = nv;
    cur_cq = std::move(next);
    theta.insert_or_assign(x, fresh);
  }

  // Drop everything that is not a query atom image.
  std::vector<Atom> final_atoms;
  for (const auto& a : sink_cq->atoms) {
    Atom img = hybrid(a);
    if (std::find(final_atoms.begin(), final_atoms.end(), img) == final_atoms.end())
      final_atoms.push_back(img);
  }
  std::set<Atom> final_set(final_atoms.begin(), final_atoms.end());
  std::vector<Atom> leftovers;
  for (const auto& a : cur_cq.atoms)
    if (!final_set.count(a) &&
        std::find(leftovers.begin(), leftovers.end(), a) == leftovers.end())
      leftovers.push_back(a);

  if (!leftovers.empty()) {
    std::map<std::string, Term> pat;
    std::set<std::string> pat_taken;
    std::vector<Atom> body;
    Substitution pi;
    for (const auto& a : leftovers) {
      std::vector<Term> pargs;
      for (const auto& t : a.args) {
        std::string key = t.str();
        auto it = pat.find(key);
        if (it == pat.end()) it = pat.emplace(key, Term::variable(fresh_name("p", pat_taken))).first;
        pargs.push_back(it->second);
        pi.emplace(it->second.name(), t);
      }
      body.push_back(Atom(a.pred, std::move(pargs)));
    }
    ExistentialRule taut(body, body);  // identity tautology, used to drop its match
    VertexId taut_v = out.graph.add_vertex(Sentence(taut));
    out.graph.add_edge({}, taut_v, "T");
    std::vector<Atom> kept;
    for (const auto& a : cur_cq.atoms)
      if (final_set.count(a)) kept.push_back(a);
    CQ next({}, kept);
    VertexId nv = out.graph.add_vertex(Sentence(next));
    out.graph.add_edge({cur, taut_v}, nv, "MP");
    cur = nv;
    cur_cq = std::move(next);
  }

  out.sink = cur;
  return out;
}

}  // namespace cqproof

