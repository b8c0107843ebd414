#include "cqproof/cq_schemas.hpp"

#include <algorithm>

namespace cqproof {

namespace {

std::string fresh_var(const std::string& base, std::set<std::string>& taken) {
  std::string name = base;
  int k = 0;
  while (taken.count(name)) name = base + "_" + std::to_string(k++);
  taken.insert(name);
  return name;
}

void append_unique(std::vector<Atom>& atoms, const Atom& a) {
  if (std::find(atoms.begin(), atoms.end(), a) == atoms.end()) atoms.push_back(a);
}

}  // namespace

CQ infer_mp(const CQ& q, const ExistentialRule& rule, const Substitution& pi,
            const std::vector<size_t>& drop_positions, const std::vector<size_t>& add_head) {
  if (!q.boolean()) throw InputError("infer_mp: premise must be a Boolean CQ");
  // pi(body) must be a subset of q's atoms.
  std::set<Atom> q_atoms(q.atoms.begin(), q.atoms.end());
  std::set<Atom> matched;
  for (const auto& b : rule.body) {
    Atom img = substitute(pi, b);
    if (!q_atoms.count(img))
      throw InputError("infer_mp: matched body atom " + img.str() + " is not in the premise");
    matched.insert(img);
  }
  std::set<size_t> drop(drop_positions.begin(), drop_positions.end());
  for (size_t p : drop) {
    if (p >= q.atoms.size()) throw InputError("infer_mp: drop position out of range");
    if (!matched.count(q.atoms[p]))
      throw InputError("infer_mp: dropped atom " + q.atoms[p].str() + " was not matched");
  }

  std::vector<Atom> out;
  for (size_t p = 0; p < q.atoms.size(); ++p)
    if (!drop.count(p)) append_unique(out, q.atoms[p]);

  // Existential head variables are renamed into fresh variables, shared
  // across all added atoms of this application.
  std::set<std::string> taken = atoms_vars(q.atoms);
  for (const auto& [v, t] : pi)
    if (t.is_variable()) taken.insert(t.name());
  Substitution ext = pi;
  for (const auto& u : rule.existential_vars) ext.emplace(u, Term::variable(fresh_var(u, taken)));

  for (size_t i : add_head) {
    if (i >= rule.head.size()) throw InputError("infer_mp: head index out of range");
    Atom img = substitute(ext, rule.head[i]);
    append_unique(out, img);
  }
  if (out.empty()) throw InputError("infer_mp: conclusion would be empty");
  return CQ({}, out);
}

CQ infer_c(const CQ& q1, const CQ& q2) {
  if (!q1.boolean() || !q2.boolean()) throw InputError("infer_c: premises must be Boolean CQs");
  std::set<std::string> taken = atoms_vars(q1.atoms);
  Substitution rename;
  for (const auto& v : atoms_vars(q2.atoms)) {
    std::string nv = fresh_var(v, taken);
    if (nv != v) rename.emplace(v, Term::variable(nv));
  }
  std::vector<Atom> atoms = q1.atoms;
  for (const auto& a : q2.atoms) atoms.push_back(substitute(rename, a));
  return CQ({}, std::move(atoms));
}

ExistentialRule infer_t(const std::vector<Atom>& phi, const std::set<std::string>& abstracted_vars) {
  auto vars = atoms_vars(phi);
  for (const auto& v : abstracted_vars)
    if (!vars.count(v)) throw InputError("infer_t: abstracted variable '" + v + "' not in pattern");
  std::set<std::string> taken = vars;
  Substitution rename;
  for (const auto& v : abstracted_vars) rename.emplace(v, Term::variable(fresh_var(v + "r", taken)));
  return ExistentialRule(phi, substitute(rename, phi));
}

CQ infer_e(const CQ& q, const std::set<std::string>& abstracted_constants) {
  std::set<std::string> consts;
  for (const auto& t : atoms_terms(q.atoms))
    if (t.is_constant()) consts.insert(t.name());
  for (const auto& c : abstracted_constants)
    if (!consts.count(c)) throw InputError("infer_e: constant '" + c + "' does not occur");
  std::set<std::string> taken = atoms_vars(q.atoms);
  std::map<std::string, Term> to_var;
  for (const auto& c : abstracted_constants) to_var.emplace(c, Term::variable(fresh_var("e_" + c, taken)));

  std::vector<Atom> atoms;
  for (const auto& a : q.atoms) {
    std::vector<Term> args;
    for (const auto& t : a.args) {
      if (t.is_constant() && to_var.count(t.name()))
        args.push_back(to_var.at(t.name()));
      else
        args.push_back(t);
    }
    atoms.push_back(Atom(a.pred, std::move(args)));
  }
  return CQ(q.answer_vars, std::move(atoms));
}

namespace {

// Matching where only the `wildcards` variables bind; every other variable
// is treated as a fixed symbol.
bool restricted_unify(const Term& pattern, const Term& image, const std::set<std::string>& wildcards,
                      Substitution& s) {
  switch (pattern.kind()) {
    case Term::Kind::Constant:
      return pattern == image;
    case Term::Kind::Variable: {
      if (!wildcards.count(pattern.name())) return pattern == image;
      auto it = s.find(pattern.name());
      if (it != s.end()) return it->second == image;
      s.emplace(pattern.name(), image);
      return true;
    }
    case Term::Kind::Skolem:
      return image.is_skolem() && image.name() == pattern.name() &&
             restricted_unify(pattern.argument(), image.argument(), wildcards, s);
  }
  return false;
}

bool restricted_unify_atom(const Atom& pattern, const Atom& image,
                           const std::set<std::string>& wildcards, Substitution& s) {
  if (pattern.pred != image.pred || pattern.args.size() != image.args.size()) return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!restricted_unify(pattern.args[i], image.args[i], wildcards, s)) return false;
  return true;
}

// Exhaustive search: assign each added-atom pattern to some conclusion atom
// such that, together with the kept atoms, the conclusion is covered
// exactly.
bool cover_added(const std::vector<Atom>& patterns, size_t i, const std::vector<Atom>& goal_atoms,
                 const std::set<Atom>& kept, const std::set<std::string>& wildcards, Substitution& s,
                 std::set<Atom>& covered, Substitution& out) {
  if (i == patterns.size()) {
    for (const auto& g : goal_atoms)
      if (!kept.count(g) && !covered.count(g)) return false;
    out = s;
    return true;
  }
  for (const auto& g : goal_atoms) {
    Substitution next = s;
    if (!restricted_unify_atom(patterns[i], g, wildcards, next)) continue;
    bool fresh = covered.insert(g).second;
    if (cover_added(patterns, i + 1, goal_atoms, kept, wildcards, next, covered, out)) return true;
    if (fresh) covered.erase(g);
  }
  return false;
}

std::vector<std::vector<size_t>> subsets_of(size_t n, size_t cap = 16) {
  if (n > cap) throw CapExceeded("subset enumeration too large");
  std::vector<std::vector<size_t>> out;
  for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
    std::vector<size_t> s;
    for (size_t i = 0; i < n; ++i)
      if (mask & (size_t{1} << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::optional<MpWitness> explain_mp(const CQ& premise, const ExistentialRule& rule_in,
                                    const CQ& conclusion) {
  if (!premise.boolean() || !conclusion.boolean()) return std::nullopt;
  std::set<Atom> concl_set(conclusion.atoms.begin(), conclusion.atoms.end());
  std::set<std::string> premise_vars = atoms_vars(premise.atoms);

  // Rename head existentials apart from everything in sight, so that
  // substituting the body match into the head cannot capture them.
  std::set<std::string> avoid = premise_vars;
  avoid.merge(atoms_vars(conclusion.atoms));
  avoid.merge(atoms_vars(rule_in.body));
  Substitution exren;
  std::map<std::string, std::string> back;
  for (const auto& u : rule_in.existential_vars) {
    std::string nu = fresh_var("__ex_" + u, avoid);
    exren.emplace(u, Term::variable(nu));
    back.emplace(nu, u);
  }
  ExistentialRule rule(rule_in.body, substitute(exren, rule_in.head));
  std::set<std::string> existentials(rule.existential_vars.begin(), rule.existential_vars.end());

  for (const auto& pi : match(rule.body, premise.atoms)) {
    // Matched atom values and the premise positions carrying them.
    std::set<Atom> matched;
    for (const auto& b : rule.body) matched.insert(substitute(pi, b));
    std::vector<Atom> matched_list(matched.begin(), matched.end());

    for (const auto& drop_sel : subsets_of(matched_list.size())) {
      std::set<Atom> dropped;
      for (size_t i : drop_sel) dropped.insert(matched_list[i]);
      std::set<size_t> drop_positions;
      std::vector<Atom> kept;
      for (size_t p = 0; p < premise.atoms.size(); ++p) {
        if (dropped.count(premise.atoms[p]))
          drop_positions.insert(p);
        else
          kept.push_back(premise.atoms[p]);
      }
      // Every kept atom must appear in the conclusion; otherwise no add
      // subset can fix it.
      bool kept_ok = std::all_of(kept.begin(), kept.end(),
                                 [&](const Atom& a) { return concl_set.count(a) != 0; });
      if (!kept_ok) continue;
      std::set<Atom> kept_set(kept.begin(), kept.end());

      for (const auto& add_sel : subsets_of(rule.head.size())) {
        std::vector<Atom> patterns;
        for (size_t i : add_sel) patterns.push_back(substitute(pi, rule.head[i]));
        Substitution binding, s;
        std::set<Atom> covered;
        if (!cover_added(patterns, 0, conclusion.atoms, kept_set, existentials, s, covered,
                         binding))
          continue;
        // Existentials must bind to fresh variables, not premise terms.
        bool fresh_ok = true;
        for (const auto& [v, t] : binding) {
          if (!t.is_variable() || premise_vars.count(t.name())) fresh_ok = false;
        }
        if (!fresh_ok) continue;
        // Distinct existentials bind distinct fresh variables.
        std::set<Term> images;
        for (const auto& [v, t] : binding) images.insert(t);
        if (images.size() != binding.size()) continue;
        MpWitness w;
        w.pi = pi;
        w.drop_positions = drop_positions;
        w.add_head = add_sel;
        for (const auto& [v, t] : binding) w.added_binding.emplace(back.at(v), t);
        return w;
      }
    }
  }
  return std::nullopt;
}

CqChecker::CqChecker(KnowledgeBase kb) : kb_(std::move(kb)) {}

std::optional<Substitution> CqChecker::tautology_renaming(const ExistentialRule& rule) {
  if (rule.body.size() != rule.head.size()) return std::nullopt;
  Substitution fwd;  // body var -> head term (positional)
  for (size_t i = 0; i < rule.body.size(); ++i) {
    const Atom &b = rule.body[i], &h = rule.head[i];
    if (b.pred != h.pred || b.args.size() != h.args.size()) return std::nullopt;
    for (size_t k = 0; k < b.args.size(); ++k) {
      const Term &tb = b.args[k], &th = h.args[k];
      if (!tb.is_variable()) {
        if (!(tb == th)) return std::nullopt;
        continue;
      }
      if (!th.is_variable()) return std::nullopt;
      auto it = fwd.find(tb.name());
      if (it == fwd.end())
        fwd.emplace(tb.name(), th);
      else if (!(it->second == th))
        return std::nullopt;
    }
  }
  // Injective, and renamed targets are fresh (not body variables).
  auto body_vars = atoms_vars(rule.body);
  std::set<std::string> images;
  for (const auto& [v, t] : fwd) {
    if (!images.insert(t.name()).second) return std::nullopt;
    if (t.name() != v && body_vars.count(t.name())) return std::nullopt;
  }
  return fwd;
}

std::optional<std::string> CqChecker::admissible(const std::vector<Sentence>& premises,
                                                 const Sentence& conclusion) const {
  // Tautology introduction: no premises, rule conclusion.
  if (premises.empty()) {
    const auto* rule = std::get_if<ExistentialRule>(&conclusion);
    if (rule && tautology_renaming(*rule)) return "T";
    return std::nullopt;
  }

  const CQ* concl = as_cq(conclusion);
  if (!concl || !concl->boolean()) return std::nullopt;

  // Modus ponens: one CQ premise, one rule premise.
  if (premises.size() == 2) {
    for (int flip = 0; flip < 2; ++flip) {
      const Sentence& sq = premises[flip];
      const Sentence& sr = premises[1 - flip];
      const CQ* q = as_cq(sq);
      if (!q || !q->boolean()) continue;
      std::optional<ExistentialRule> rule;
      if (const auto* ax = std::get_if<DLLiteAxiom>(&sr))
        rule = translate_axiom(*ax);
      else if (const auto* er = std::get_if<ExistentialRule>(&sr))
        rule = *er;
      if (!rule) continue;
      if (explain_mp(*q, *rule, *concl)) return "MP";
    }
  }

  // Conjunction: two Boolean CQ premises, renamed apart.
  if (premises.size() == 2) {
    const CQ* a = as_cq(premises[0]);
    const CQ* b = as_cq(premises[1]);
    if (a && b && a->boolean() && b->boolean()) {
      for (int flip = 0; flip < 2; ++flip) {
        const CQ& q1 = flip ? *b : *a;
        const CQ& q2 = flip ? *a : *b;
        if (q1.atoms.size() + q2.atoms.size() != concl->atoms.size()) continue;
        std::vector<Atom> prefix(concl->atoms.begin(), concl->atoms.begin() + q1.atoms.size());
        std::vector<Atom> suffix(concl->atoms.begin() + q1.atoms.size(), concl->atoms.end());
        auto pv = atoms_vars(prefix);
        bool disjoint = true;
        for (const auto& v : atoms_vars(suffix))
          if (pv.count(v)) disjoint = false;
        if (!disjoint) continue;
        try {
          if (cq_equal(CQ({}, prefix), q1) && cq_equal(CQ({}, suffix), q2)) return "C";
        } catch (const InputError&) {
        }
      }
    }
  }

  // Constant abstraction: single CQ premise.
  if (premises.size() == 1) {
    const CQ* q = as_cq(premises[0]);
    if (q && q->boolean()) {
      std::vector<std::string> consts;
      for (const auto& t : atoms_terms(q->atoms))
        if (t.is_constant()) consts.push_back(t.name());
      if (consts.size() <= 12) {
        for (const auto& sel : subsets_of(consts.size())) {
          if (sel.empty()) continue;
          std::set<std::string> chosen;
          for (size_t i : sel) chosen.insert(consts[i]);
          if (cq_equal(infer_e(*q, chosen), *concl)) return "E";
        }
      }
    }
  }
  return std::nullopt;
}

bool CqChecker::grounded(const Sentence& leaf) const { return in_theory(leaf, kb_); }

std::shared_ptr<CqChecker> cq_schema_checker(const KnowledgeBase& kb) {
  return std::make_shared<CqChecker>(kb);
}

}  // namespace cqproof
