#include "cqproof/cq.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cqproof {

CQ::CQ(std::vector<std::string> answers, std::vector<Atom> as)
    : answer_vars(std::move(answers)), atoms(std::move(as)) {
  if (atoms.empty()) throw InputError("a CQ must contain at least one atom");
  auto vars = atoms_vars(atoms);
  std::set<std::string> seen;
  for (const auto& v : answer_vars) {
    if (!vars.count(v)) throw InputError("answer variable '" + v + "' does not occur in the query");
    if (!seen.insert(v).second) throw InputError("duplicate answer variable '" + v + "'");
  }
}

bool CQ::ground() const {
  return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.ground(); });
}

std::vector<std::string> CQ::existential_vars() const {
  std::vector<std::string> out;
  std::set<std::string> answers(answer_vars.begin(), answer_vars.end());
  std::set<std::string> seen;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_variable() && !answers.count(t.name()) && seen.insert(t.name()).second)
        out.push_back(t.name());
  return out;
}

std::string CQ::str() const {
  std::string s;
  auto ex = existential_vars();
  if (!ex.empty()) {
    s += "ex ";
    for (size_t i = 0; i < ex.size(); ++i) {
      if (i) s += ",";
      s += ex[i];
    }
    s += ". ";
  }
  return s + atoms_str(atoms);
}

namespace {

std::vector<std::string> canon_pool(const std::set<std::string>& avoid, size_t count) {
  std::vector<std::string> pool;
  for (size_t i = 0; pool.size() < count; ++i) {
    std::string cand = "v" + std::to_string(i);
    if (!avoid.count(cand)) pool.push_back(cand);
  }
  return pool;
}

struct CanonCtx {
  const std::vector<Atom>* atoms;
  std::set<std::string> fixed;  // answer variables, never renamed
  std::vector<std::string> pool;
  std::vector<Atom> best;
  bool have_best = false;
};

Atom rename_atom(const Atom& a, const std::map<std::string, std::string>& vmap) {
  std::vector<Term> args;
  for (const auto& t : a.args) {
    if (t.is_variable()) {
      auto it = vmap.find(t.name());
      args.push_back(Term::variable(it == vmap.end() ? t.name() : it->second));
    } else {
      args.push_back(t);
    }
  }
  return Atom(a.pred, std::move(args));
}

bool atom_seq_less(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Atom& x, const Atom& y) { return x.str() < y.str(); });
}

void canon_rec(CanonCtx& ctx, std::vector<bool>& used, std::map<std::string, std::string>& vmap,
               size_t assigned, std::vector<Atom>& acc) {
  const auto& atoms = *ctx.atoms;
  if (acc.size() == atoms.size()) {
    if (!ctx.have_best || atom_seq_less(acc, ctx.best)) {
      ctx.best = acc;
      ctx.have_best = true;
    }
    return;
  }
  // Candidates: for each unused atom, rename via vmap extended with fresh
  // canonical names for its not-yet-mapped existential variables.
  struct Choice {
    size_t idx;
    Atom renamed;
    std::vector<std::pair<std::string, std::string>> ext;
  };
  std::vector<Choice> choices;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (used[i]) continue;
    std::map<std::string, std::string> m = vmap;
    std::vector<std::pair<std::string, std::string>> ext;
    size_t next = assigned;
    for (const auto& t : atoms[i].args) {
      if (t.is_variable() && !ctx.fixed.count(t.name()) && !m.count(t.name())) {
        m.emplace(t.name(), ctx.pool[next]);
        ext.emplace_back(t.name(), ctx.pool[next]);
        ++next;
      }
    }
    choices.push_back({i, rename_atom(atoms[i], m), std::move(ext)});
  }
  std::string min_key;
  for (const auto& c : choices) {
    std::string k = c.renamed.str();
    if (min_key.empty() || k < min_key) min_key = k;
  }
  std::set<std::string> tried;  // dedupe identical (render, extension) branches
  for (const auto& c : choices) {
    if (c.renamed.str() != min_key) continue;
    std::string sig = c.renamed.str();
    for (const auto& [from, to] : c.ext) sig += "|" + from + ">" + to;
    if (!tried.insert(sig).second) continue;
    used[c.idx] = true;
    for (const auto& [from, to] : c.ext) vmap.emplace(from, to);
    acc.push_back(c.renamed);
    canon_rec(ctx, used, vmap, assigned + c.ext.size(), acc);
    acc.pop_back();
    for (const auto& [from, to] : c.ext) vmap.erase(from);
    used[c.idx] = false;
  }
}

}  // namespace

CQ canonicalize_cq(const CQ& q) {
  CanonCtx ctx;
  ctx.atoms = &q.atoms;
  ctx.fixed = std::set<std::string>(q.answer_vars.begin(), q.answer_vars.end());
  ctx.pool = canon_pool(ctx.fixed, atoms_vars(q.atoms).size());
  std::vector<bool> used(q.atoms.size(), false);
  std::map<std::string, std::string> vmap;
  std::vector<Atom> acc;
  canon_rec(ctx, used, vmap, 0, acc);
  // Exact duplicate conjuncts are idempotent; the canonical form keeps one.
  auto& best = ctx.best;
  best.erase(std::unique(best.begin(), best.end()), best.end());
  return CQ(q.answer_vars, best);
}

bool cq_equal(const CQ& a, const CQ& b) {
  if (a.answer_vars != b.answer_vars) return false;
  CQ ca = canonicalize_cq(a), cb = canonicalize_cq(b);
  return ca.atoms == cb.atoms;
}

CQ bind_answers(const CQ& q, const std::vector<Term>& answers) {
  if (answers.size() != q.answer_vars.size())
    throw InputError("answer tuple arity mismatch: expected " + std::to_string(q.answer_vars.size()) +
                     ", got " + std::to_string(answers.size()));
  Substitution s;
  for (size_t i = 0; i < answers.size(); ++i) s.emplace(q.answer_vars[i], answers[i]);
  return CQ({}, substitute(s, q.atoms));
}

std::vector<Atom> freeze_cq(const CQ& q, const std::vector<Term>& answers) {
  if (answers.size() != q.answer_vars.size())
    throw InputError("freeze_cq: answer tuple arity mismatch");
  for (const auto& t : answers)
    if (!t.is_constant()) throw InputError("freeze_cq: answers must be constants");
  std::set<std::string> taken;
  for (const auto& t : atoms_terms(q.atoms))
    if (t.is_constant()) taken.insert(t.name());
  for (const auto& t : answers) taken.insert(t.name());

  Substitution s;
  for (size_t i = 0; i < answers.size(); ++i) s.emplace(q.answer_vars[i], answers[i]);
  for (const auto& v : q.existential_vars()) {
    std::string name = "c_" + v;
    while (taken.count(name)) name += "_";
    taken.insert(name);
    s.emplace(v, Term::constant(name));
  }
  return substitute(s, q.atoms);
}

CQ abox_to_query(const std::vector<Atom>& abox, const std::vector<Term>& answers) {
  std::set<std::string> keep;
  for (const auto& t : answers) {
    if (!t.is_constant()) throw InputError("abox_to_query: answers must be constants");
    keep.insert(t.name());
  }
  for (const auto& a : abox)
    if (!a.ground()) throw InputError("abox_to_query: input must be ground");

  std::map<std::string, Term> to_var;
  size_t next = 0;
  std::vector<Atom> atoms;
  for (const auto& a : abox) {
    std::vector<Term> args;
    for (const auto& t : a.args) {
      if (t.is_constant() && !keep.count(t.name())) {
        auto it = to_var.find(t.name());
        if (it == to_var.end())
          it = to_var.emplace(t.name(), Term::variable("z" + std::to_string(next++))).first;
        args.push_back(it->second);
      } else {
        args.push_back(t);
      }
    }
    atoms.push_back(Atom(a.pred, std::move(args)));
  }
  return CQ({}, std::move(atoms));
}

}  // namespace cqproof
