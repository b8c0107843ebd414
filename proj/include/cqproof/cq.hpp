#ifndef CQPROOF_CQ_HPP
#define CQPROOF_CQ_HPP

#include <string>
#include <vector>

#include "cqproof/subst.hpp"

namespace cqproof {

/// A conjunctive query: an ordered atom list with distinguished answer
/// variables. Variables not listed as answers are existentially quantified.
/// A CQ without variables and a single atom coincides with an ABox assertion.
struct CQ {
  std::vector<std::string> answer_vars;
  std::vector<Atom> atoms;

  CQ() = default;
  CQ(std::vector<std::string> answers, std::vector<Atom> as);

  bool boolean() const { return answer_vars.empty(); }
  bool ground() const;
  std::vector<std::string> existential_vars() const;
  std::string str() const;

  bool operator==(const CQ& o) const { return answer_vars == o.answer_vars && atoms == o.atoms; }
};

/// Renames existential variables to v0,v1,... by first occurrence in the
/// lexicographically least admissible atom ordering. Answer variables and
/// constants are kept. CQs that are equal up to renaming of existential
/// variables (and atom reordering) canonicalize identically.
CQ canonicalize_cq(const CQ& q);

/// Canonical-form equality.
bool cq_equal(const CQ& a, const CQ& b);

/// Instantiates the answer variables, yielding a Boolean CQ.
CQ bind_answers(const CQ& q, const std::vector<Term>& answers);

/// Replaces answer variables by the given constants and every existential
/// variable by a distinct fresh constant. The result is a valid ABox.
std::vector<Atom> freeze_cq(const CQ& q, const std::vector<Term>& answers);

/// Turns a ground atom set into a CQ: constants outside `answers` become
/// distinct existential variables. Inverse of freeze_cq up to renaming.
CQ abox_to_query(const std::vector<Atom>& abox, const std::vector<Term>& answers);

}  // namespace cqproof

#endif
