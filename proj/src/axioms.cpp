#include "cqproof/axioms.hpp"

#include <algorithm>
#include <set>

namespace cqproof {

ExistentialRule::ExistentialRule(std::vector<Atom> b, std::vector<Atom> h)
    : body(std::move(b)), head(std::move(h)) {
  if (body.empty()) throw InputError("rule body must be nonempty");
  if (head.empty()) throw InputError("rule head must be nonempty");
  auto bv = atoms_vars(body);
  auto hv = atoms_vars(head);
  for (const auto& v : bv)
    if (hv.count(v)) frontier_vars.push_back(v);
  for (const auto& v : hv)
    if (!bv.count(v)) existential_vars.push_back(v);
}

std::string ExistentialRule::str() const {
  std::string s = atoms_str(body, ", ") + " -> ";
  if (!existential_vars.empty()) {
    s += "exists ";
    for (size_t i = 0; i < existential_vars.size(); ++i) {
      if (i) s += ",";
      s += existential_vars[i];
    }
    s += " . ";
  }
  return s + atoms_str(head, ", ");
}

namespace {

// Atom for a role expression applied to (s, t): an inverse role swaps the
// argument order, i.e. P-(s,t) is stored as P(t,s).
Atom role_atom(const RoleExpr& r, Term s, Term t) {
  return r.inverse ? Atom::binary(r.name, std::move(t), std::move(s))
                   : Atom::binary(r.name, std::move(s), std::move(t));
}

}  // namespace

ExistentialRule translate_axiom(const DLLiteAxiom& ax) {
  Term x = Term::variable("x");
  Term y = Term::variable("y");
  Term u = Term::variable("u");
  if (ax.kind == DLLiteAxiom::Kind::RoleInclusion) {
    return ExistentialRule({role_atom(ax.rlhs, x, y)}, {role_atom(ax.rrhs, x, y)});
  }
  std::vector<Atom> body, head;
  Term subject = x;
  if (ax.clhs.kind == ConceptExpr::Kind::Name) {
    body.push_back(Atom::unary(ax.clhs.name, x));
  } else {
    body.push_back(role_atom(ax.clhs.role, x, y));
  }
  if (ax.crhs.kind == ConceptExpr::Kind::Name) {
    head.push_back(Atom::unary(ax.crhs.name, subject));
  } else {
    head.push_back(role_atom(ax.crhs.role, subject, u));
  }
  return ExistentialRule(std::move(body), std::move(head));
}

SkolemRule skolemize(const ExistentialRule& rule, const std::string& rule_id) {
  Substitution s;
  for (const auto& u : rule.existential_vars) {
    if (rule.frontier_vars.empty())
      throw InputError("cannot skolemize rule without frontier variables: " + rule.str());
    // Each existential depends on one frontier variable; we use the first.
    s.emplace(u, Term::skolem("fn_" + rule_id + "_" + u, Term::variable(rule.frontier_vars.front())));
  }
  return SkolemRule{rule.body, substitute(s, rule.head)};
}

ExistentialRule deskolemize(const SkolemRule& rule) {
  std::map<Term, Term> back;
  size_t next = 0;
  std::vector<Atom> head;
  for (const auto& a : rule.head) {
    std::vector<Term> args;
    for (const auto& t : a.args) {
      if (t.is_skolem()) {
        auto it = back.find(t);
        if (it == back.end())
          it = back.emplace(t, Term::variable("u" + std::to_string(next++))).first;
        args.push_back(it->second);
      } else {
        args.push_back(t);
      }
    }
    head.push_back(Atom(a.pred, std::move(args)));
  }
  return ExistentialRule(rule.body, std::move(head));
}

ExistentialRule tbox_rule(const TBoxEntry& e) {
  if (std::holds_alternative<DLLiteAxiom>(e)) return translate_axiom(std::get<DLLiteAxiom>(e));
  return std::get<ExistentialRule>(e);
}

std::string tbox_entry_str(const TBoxEntry& e) {
  if (std::holds_alternative<DLLiteAxiom>(e)) return std::get<DLLiteAxiom>(e).str();
  return std::get<ExistentialRule>(e).str();
}

void KnowledgeBase::add_assertion(Atom a) {
  if (!a.ground()) throw InputError("ABox assertions must be ground: " + a.str());
  for (const auto& t : a.args)
    if (!t.is_constant()) throw InputError("ABox assertions may only use constants: " + a.str());
  abox.push_back(std::move(a));
}

bool KnowledgeBase::dl_lite_only() const {
  return std::all_of(tbox.begin(), tbox.end(),
                     [](const TBoxEntry& e) { return std::holds_alternative<DLLiteAxiom>(e); });
}

std::vector<SkolemRule> KnowledgeBase::skolemized_tbox() const {
  std::vector<SkolemRule> out;
  for (size_t i = 0; i < tbox.size(); ++i)
    out.push_back(skolemize(tbox_rule(tbox[i]), std::to_string(i)));
  return out;
}

std::vector<ExistentialRule> KnowledgeBase::rules() const {
  std::vector<ExistentialRule> out;
  for (const auto& e : tbox) out.push_back(tbox_rule(e));
  return out;
}

}  // namespace cqproof
