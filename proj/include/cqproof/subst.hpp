#ifndef CQPROOF_SUBST_HPP
#define CQPROOF_SUBST_HPP

#include <map>
#include <optional>
#include <vector>

#include "cqproof/atom.hpp"

namespace cqproof {

/// Variable-name -> term map.
using Substitution = std::map<std::string, Term>;

Term substitute(const Substitution& s, const Term& t);
Atom substitute(const Substitution& s, const Atom& a);
std::vector<Atom> substitute(const Substitution& s, const std::vector<Atom>& atoms);

/// Extends `s` so that substitute(s, pattern) == image; fails on clashes.
bool unify_into(const Atom& pattern, const Atom& image, Substitution& s);

/// All substitutions pi over the variables of `pattern` with
/// pi(pattern) a subset of `facts` (set semantics). Complete and
/// duplicate-free; results are in deterministic (map-lexicographic) order.
std::vector<Substitution> match(const std::vector<Atom>& pattern, const std::vector<Atom>& facts);

}  // namespace cqproof

#endif
