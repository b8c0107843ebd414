#include "cqproof/sentence.hpp"

#include <algorithm>

namespace cqproof {

namespace {

std::string cq_key(const CQ& q) {
  CQ c = canonicalize_cq(q);
  std::string s = "cq|";
  for (const auto& v : c.answer_vars) s += v + ",";
  s += "|";
  for (const auto& a : c.atoms) s += a.str() + "&";
  return s;
}

struct KeyVisitor {
  std::string operator()(const CQ& q) const { return cq_key(q); }
  std::string operator()(const DLLiteAxiom& a) const { return "ax|" + a.str(); }
  std::string operator()(const ExistentialRule& r) const {
    // Rules are compared up to variable renaming, via the CQ canonicalizer
    // applied to body and head with shared variables. Predicates are tagged
    // so body and head atoms cannot be confused by the atom sort.
    std::vector<Atom> all;
    for (const auto& a : r.body) all.push_back(Atom("BODY__" + a.pred, a.args));
    for (const auto& a : r.head) all.push_back(Atom("HEAD__" + a.pred, a.args));
    CQ c = canonicalize_cq(CQ({}, all));
    std::string s = "rule|";
    for (const auto& a : c.atoms) s += a.str() + "&";
    return s;
  }
  std::string operator()(const AnnotatedFormula& f) const {
    std::string inner;
    if (f.formula->op() == Mtcq::Op::CqLeaf)
      inner = cq_key(f.formula->cq());
    else
      inner = f.formula->str();
    return "at|" + f.at.str() + "|" + inner;
  }
};

}  // namespace

std::string sentence_key(const Sentence& s) { return std::visit(KeyVisitor{}, s); }

std::string sentence_str(const Sentence& s) {
  if (const auto* q = std::get_if<CQ>(&s)) return q->str();
  if (const auto* a = std::get_if<DLLiteAxiom>(&s)) return a->str();
  if (const auto* r = std::get_if<ExistentialRule>(&s)) return r->str();
  return std::get<AnnotatedFormula>(s).str();
}

std::string sentence_kind(const Sentence& s) {
  if (is_assertion(s)) return "assertion";
  if (std::holds_alternative<CQ>(s)) return "cq";
  if (std::holds_alternative<DLLiteAxiom>(s)) return "axiom";
  if (std::holds_alternative<ExistentialRule>(s)) return "rule";
  return "annotated";
}

namespace {

uint64_t term_size(const Term& t) { return t.is_skolem() ? 1 + term_size(t.argument()) : 1; }

uint64_t atoms_size(const std::vector<Atom>& atoms) {
  uint64_t n = 0;
  for (const auto& a : atoms) {
    n += 1;
    for (const auto& t : a.args) n += term_size(t);
  }
  return n;
}

}  // namespace

uint64_t sentence_size(const Sentence& s) {
  if (const auto* q = std::get_if<CQ>(&s)) return atoms_size(q->atoms);
  if (std::holds_alternative<DLLiteAxiom>(s)) return 3;
  if (const auto* r = std::get_if<ExistentialRule>(&s))
    return atoms_size(r->body) + atoms_size(r->head);
  const auto& f = std::get<AnnotatedFormula>(s);
  if (f.formula->op() == Mtcq::Op::CqLeaf) return 1 + atoms_size(f.formula->cq().atoms);
  return 1 + static_cast<uint64_t>(f.formula->str().size() / 4);
}

bool sentence_equal(const Sentence& a, const Sentence& b) {
  return sentence_key(a) == sentence_key(b);
}

bool is_assertion(const Sentence& s) {
  const auto* q = std::get_if<CQ>(&s);
  return q && q->boolean() && q->atoms.size() == 1 && q->atoms[0].ground();
}

bool is_ground_cq(const Sentence& s) {
  const auto* q = std::get_if<CQ>(&s);
  return q && q->boolean() && q->ground();
}

const CQ* as_cq(const Sentence& s) { return std::get_if<CQ>(&s); }

const AnnotatedFormula* as_annotated(const Sentence& s) {
  return std::get_if<AnnotatedFormula>(&s);
}

Sentence assertion_sentence(const Atom& ground_atom) {
  return Sentence(CQ({}, {ground_atom}));
}

std::optional<size_t> tbox_index_of(const KnowledgeBase& kb, const Sentence& s) {
  if (!std::holds_alternative<DLLiteAxiom>(s) && !std::holds_alternative<ExistentialRule>(s))
    return std::nullopt;
  std::string k = sentence_key(s);
  for (size_t i = 0; i < kb.tbox.size(); ++i) {
    Sentence ax = std::holds_alternative<DLLiteAxiom>(kb.tbox[i])
                      ? Sentence(std::get<DLLiteAxiom>(kb.tbox[i]))
                      : Sentence(std::get<ExistentialRule>(kb.tbox[i]));
    if (sentence_key(ax) == k || sentence_key(Sentence(tbox_rule(kb.tbox[i]))) == k) return i;
  }
  return std::nullopt;
}

bool in_theory(const Sentence& s, const KnowledgeBase& kb) {
  if (is_assertion(s)) {
    const Atom& a = std::get<CQ>(s).atoms[0];
    return std::find(kb.abox.begin(), kb.abox.end(), a) != kb.abox.end();
  }
  if (std::holds_alternative<DLLiteAxiom>(s) || std::holds_alternative<ExistentialRule>(s)) {
    std::string k = sentence_key(s);
    for (const auto& e : kb.tbox) {
      Sentence t = std::holds_alternative<DLLiteAxiom>(e)
                       ? Sentence(std::get<DLLiteAxiom>(e))
                       : Sentence(std::get<ExistentialRule>(e));
      if (sentence_key(t) == k) return true;
      // A rule leaf also counts as grounded if it is the rule form of a
      // stored axiom.
      if (std::holds_alternative<ExistentialRule>(s) &&
          sentence_key(Sentence(tbox_rule(e))) == k)
        return true;
    }
    return false;
  }
  return false;
}

}  // namespace cqproof
