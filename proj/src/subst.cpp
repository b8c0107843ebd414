#include "cqproof/subst.hpp"

#include <algorithm>
#include <set>

namespace cqproof {

Term substitute(const Substitution& s, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Constant:
      return t;
    case Term::Kind::Variable: {
      auto it = s.find(t.name());
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::Skolem:
      return Term::skolem(t.name(), substitute(s, t.argument()));
  }
  return t;
}

Atom substitute(const Substitution& s, const Atom& a) {
  std::vector<Term> args;
  args.reserve(a.args.size());
  for (const auto& t : a.args) args.push_back(substitute(s, t));
  return Atom(a.pred, std::move(args));
}

std::vector<Atom> substitute(const Substitution& s, const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(substitute(s, a));
  return out;
}

static bool unify_term(const Term& pattern, const Term& image, Substitution& s) {
  switch (pattern.kind()) {
    case Term::Kind::Constant:
      return pattern == image;
    case Term::Kind::Variable: {
      auto it = s.find(pattern.name());
      if (it != s.end()) return it->second == image;
      s.emplace(pattern.name(), image);
      return true;
    }
    case Term::Kind::Skolem:
      return image.is_skolem() && image.name() == pattern.name() &&
             unify_term(pattern.argument(), image.argument(), s);
  }
  return false;
}

bool unify_into(const Atom& pattern, const Atom& image, Substitution& s) {
  if (pattern.pred != image.pred || pattern.args.size() != image.args.size()) return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!unify_term(pattern.args[i], image.args[i], s)) return false;
  return true;
}

namespace {

// Unification against a mutable binding environment with an undo trail.
bool unify_trail(const Term& pattern, const Term& image, Substitution& s,
                 std::vector<std::string>& trail) {
  switch (pattern.kind()) {
    case Term::Kind::Constant:
      return pattern == image;
    case Term::Kind::Variable: {
      auto it = s.find(pattern.name());
      if (it != s.end()) return it->second == image;
      s.emplace(pattern.name(), image);
      trail.push_back(pattern.name());
      return true;
    }
    case Term::Kind::Skolem:
      return image.is_skolem() && image.name() == pattern.name() &&
             unify_trail(pattern.argument(), image.argument(), s, trail);
  }
  return false;
}

void match_rec(const std::vector<Atom>& pattern, size_t i, const std::vector<Atom>& facts,
               Substitution& cur, std::vector<std::string>& trail,
               std::vector<Substitution>& out) {
  if (i == pattern.size()) {
    out.push_back(cur);
    return;
  }
  for (const auto& f : facts) {
    size_t mark = trail.size();
    bool ok = f.pred == pattern[i].pred && f.args.size() == pattern[i].args.size();
    for (size_t k = 0; ok && k < f.args.size(); ++k)
      ok = unify_trail(pattern[i].args[k], f.args[k], cur, trail);
    if (ok) match_rec(pattern, i + 1, facts, cur, trail, out);
    while (trail.size() > mark) {
      cur.erase(trail.back());
      trail.pop_back();
    }
  }
}

// Join order: repeatedly pick the atom sharing the most variables with the
// already chosen ones (ties by constant count, then position). Purely an
// evaluation order; the result set is unaffected.
std::vector<Atom> join_order(const std::vector<Atom>& pattern) {
  std::vector<Atom> ordered;
  std::vector<bool> used(pattern.size(), false);
  std::set<std::string> bound;
  for (size_t step = 0; step < pattern.size(); ++step) {
    int best = -1;
    int best_shared = -1, best_consts = -1;
    for (size_t i = 0; i < pattern.size(); ++i) {
      if (used[i]) continue;
      int shared = 0, consts = 0;
      for (const auto& t : pattern[i].args) {
        if (t.is_variable() && bound.count(t.name())) ++shared;
        if (!t.is_variable()) ++consts;
      }
      if (shared > best_shared || (shared == best_shared && consts > best_consts)) {
        best = static_cast<int>(i);
        best_shared = shared;
        best_consts = consts;
      }
    }
    used[best] = true;
    ordered.push_back(pattern[best]);
    for (const auto& t : pattern[best].args)
      if (t.is_variable()) bound.insert(t.name());
  }
  return ordered;
}

}  // namespace

std::vector<Substitution> match(const std::vector<Atom>& pattern, const std::vector<Atom>& facts) {
  std::vector<Atom> ordered = join_order(pattern);
  std::vector<Substitution> out;
  Substitution cur;
  std::vector<std::string> trail;
  match_rec(ordered, 0, facts, cur, trail, out);
  // Order and deduplicate via serialized keys (cheaper than map-lexicographic
  // comparisons on the substitutions themselves).
  std::vector<std::pair<std::string, size_t>> keys;
  keys.reserve(out.size());
  for (size_t i = 0; i < out.size(); ++i) {
    std::string k;
    for (const auto& [v, t] : out[i]) k += v + "\x01" + t.str() + "\x02";
    keys.emplace_back(std::move(k), i);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<Substitution> sorted;
  sorted.reserve(out.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    if (i && keys[i].first == keys[i - 1].first) continue;
    sorted.push_back(std::move(out[keys[i].second]));
  }
  return sorted;
}

}  // namespace cqproof
