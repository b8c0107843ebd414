#ifndef CQPROOF_ATOM_HPP
#define CQPROOF_ATOM_HPP

#include <set>
#include <string>
#include <vector>

#include "cqproof/term.hpp"

namespace cqproof {

/// A unary or binary atom A(t) / P(t1,t2).
struct Atom {
  std::string pred;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string p, std::vector<Term> a);
  static Atom unary(std::string p, Term t);
  static Atom binary(std::string p, Term t1, Term t2);

  int arity() const { return static_cast<int>(args.size()); }
  bool ground() const;
  int term_depth() const;
  std::string str() const;

  bool operator==(const Atom& o) const { return pred == o.pred && args == o.args; }
  bool operator!=(const Atom& o) const { return !(*this == o); }
  bool operator<(const Atom& o) const;
};

std::set<std::string> atom_vars(const Atom& a);
std::set<std::string> atoms_vars(const std::vector<Atom>& atoms);
std::set<Term> atoms_terms(const std::vector<Atom>& atoms);
std::string atoms_str(const std::vector<Atom>& atoms, const char* sep = " & ");

}  // namespace cqproof

#endif
