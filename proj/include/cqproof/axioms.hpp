#ifndef CQPROOF_AXIOMS_HPP
#define CQPROOF_AXIOMS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cqproof/cq.hpp"

namespace cqproof {

/// A role name or its inverse.
struct RoleExpr {
  std::string name;
  bool inverse = false;

  RoleExpr flipped() const { return {name, !inverse}; }
  std::string str() const { return inverse ? name + "-" : name; }
  bool operator==(const RoleExpr& o) const { return name == o.name && inverse == o.inverse; }
  bool operator<(const RoleExpr& o) const {
    return name != o.name ? name < o.name : inverse < o.inverse;
  }
};

/// A concept name or an unqualified existential restriction over a role.
struct ConceptExpr {
  enum class Kind { Name, Exists };
  Kind kind;
  std::string name;  // for Name
  RoleExpr role;     // for Exists

  static ConceptExpr named(std::string n) { return {Kind::Name, std::move(n), {}}; }
  static ConceptExpr exists(RoleExpr r) { return {Kind::Exists, {}, std::move(r)}; }
  std::string str() const { return kind == Kind::Name ? name : "exists " + role.str(); }
  bool operator==(const ConceptExpr& o) const {
    return kind == o.kind && name == o.name && role == o.role;
  }
};

/// A positive DL-Lite_R inclusion (concept or role).
struct DLLiteAxiom {
  enum class Kind { ConceptInclusion, RoleInclusion };
  Kind kind;
  ConceptExpr clhs, crhs;  // for ConceptInclusion
  RoleExpr rlhs, rrhs;     // for RoleInclusion

  static DLLiteAxiom concept_incl(ConceptExpr lhs, ConceptExpr rhs) {
    return {Kind::ConceptInclusion, std::move(lhs), std::move(rhs), {}, {}};
  }
  static DLLiteAxiom role_incl(RoleExpr lhs, RoleExpr rhs) {
    return {Kind::RoleInclusion, {}, {}, std::move(lhs), std::move(rhs)};
  }
  std::string str() const {
    return kind == Kind::ConceptInclusion ? clhs.str() + " sub " + crhs.str()
                                          : rlhs.str() + " rsub " + rrhs.str();
  }
  bool operator==(const DLLiteAxiom& o) const {
    return kind == o.kind && clhs == o.clhs && crhs == o.crhs && rlhs == o.rlhs && rrhs == o.rrhs;
  }
};

/// body(y,z) -> exists u. head(z,u); frontier variables are shared between
/// body and head, existential variables occur in the head only.
struct ExistentialRule {
  std::vector<Atom> body;
  std::vector<Atom> head;
  std::vector<std::string> frontier_vars;
  std::vector<std::string> existential_vars;

  ExistentialRule() = default;
  ExistentialRule(std::vector<Atom> b, std::vector<Atom> h);
  std::string str() const;
  bool operator==(const ExistentialRule& o) const { return body == o.body && head == o.head; }
};

/// A Skolemized rule: no existential variables, head terms may be Skolem
/// terms over frontier variables.
struct SkolemRule {
  std::vector<Atom> body;
  std::vector<Atom> head;
  std::string str() const { return atoms_str(body, ", ") + " -> " + atoms_str(head, ", "); }
};

ExistentialRule translate_axiom(const DLLiteAxiom& ax);

/// Replaces each existential head variable u by fn_<rule_id>_<u>(x) where x
/// is the frontier variable it depends on. Deterministic across runs.
SkolemRule skolemize(const ExistentialRule& rule, const std::string& rule_id);

/// Inverse of skolemize: Skolem terms in the head become existential
/// variables again. Recovers the original rule up to variable renaming.
ExistentialRule deskolemize(const SkolemRule& rule);

using TBoxEntry = std::variant<DLLiteAxiom, ExistentialRule>;

ExistentialRule tbox_rule(const TBoxEntry& e);
std::string tbox_entry_str(const TBoxEntry& e);

struct KnowledgeBase {
  std::vector<TBoxEntry> tbox;
  std::vector<Atom> abox;  // ground atoms over constants

  void add_assertion(Atom a);
  bool dl_lite_only() const;
  /// The TBox as Skolemized rules, in TBox order; rule ids are positional.
  std::vector<SkolemRule> skolemized_tbox() const;
  std::vector<ExistentialRule> rules() const;
};

}  // namespace cqproof

#endif
