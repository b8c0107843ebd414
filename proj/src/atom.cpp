#include "cqproof/atom.hpp"

#include <algorithm>

namespace cqproof {

Atom::Atom(std::string p, std::vector<Term> a) : pred(std::move(p)), args(std::move(a)) {
  if (!valid_identifier(pred)) throw InputError("invalid predicate name: '" + pred + "'");
  if (args.empty() || args.size() > 2)
    throw InputError("atom arity must be 1 or 2: " + pred + " has arity " + std::to_string(args.size()));
}

Atom Atom::unary(std::string p, Term t) { return Atom(std::move(p), {std::move(t)}); }

Atom Atom::binary(std::string p, Term t1, Term t2) {
  return Atom(std::move(p), {std::move(t1), std::move(t2)});
}

bool Atom::ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

int Atom::term_depth() const {
  int d = 0;
  for (const auto& t : args) d = std::max(d, t.depth());
  return d;
}

std::string Atom::str() const {
  std::string s = pred + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += args[i].str();
  }
  return s + ")";
}

bool Atom::operator<(const Atom& o) const {
  if (pred != o.pred) return pred < o.pred;
  return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(), o.args.end());
}

std::set<std::string> atom_vars(const Atom& a) {
  std::set<std::string> out;
  for (const auto& t : a.args)
    if (t.is_variable()) out.insert(t.name());
  return out;
}

std::set<std::string> atoms_vars(const std::vector<Atom>& atoms) {
  std::set<std::string> out;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_variable()) out.insert(t.name());
  return out;
}

std::set<Term> atoms_terms(const std::vector<Atom>& atoms) {
  std::set<Term> out;
  for (const auto& a : atoms)
    for (const auto& t : a.args) out.insert(t);
  return out;
}

std::string atoms_str(const std::vector<Atom>& atoms, const char* sep) {
  std::string s;
  for (size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += sep;
    s += atoms[i].str();
  }
  return s;
}

}  // namespace cqproof
