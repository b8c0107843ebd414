#include "cqproof/fixtures.hpp"

#include <algorithm>
#include <set>

#include "cqproof/cq.hpp"

namespace cqproof {

Fixture gen_chain(const CQ& query, const std::vector<Term>& answer, int n) {
  if (n < 0) throw InputError("gen_chain: n must be non-negative");
  Fixture f;
  f.kind = "chain";
  f.query = query;
  f.answer = answer;
  if (f.answer.empty() && !query.answer_vars.empty()) {
    // Freezing binds answer variables to fresh individuals, which become
    // the certain answer of the generated instance.
    for (size_t i = 0; i < query.answer_vars.size(); ++i)
      f.answer.push_back(Term::constant("cst" + std::to_string(i)));
  }
  f.bound = static_cast<uint64_t>(n);
  f.expected = false;

  // Freeze the query, then push every predicate down to subscript 0.
  std::vector<Atom> frozen = freeze_cq(query, f.answer);
  std::set<std::pair<std::string, int>> preds;  // (name, arity)
  for (const auto& a : query.atoms) preds.insert({a.pred, a.arity()});
  auto sub = [](const std::string& p, int i) { return p + "_" + std::to_string(i); };
  for (const auto& a : frozen) f.kb.add_assertion(Atom(sub(a.pred, 0), a.args));

  for (const auto& [pred, arity] : preds) {
    for (int i = 0; i < n; ++i) {
      if (arity == 1)
        f.kb.tbox.push_back(DLLiteAxiom::concept_incl(ConceptExpr::named(sub(pred, i)),
                                                      ConceptExpr::named(sub(pred, i + 1))));
      else
        f.kb.tbox.push_back(
            DLLiteAxiom::role_incl({sub(pred, i), false}, {sub(pred, i + 1), false}));
    }
    if (arity == 1)
      f.kb.tbox.push_back(
          DLLiteAxiom::concept_incl(ConceptExpr::named(sub(pred, n)), ConceptExpr::named(pred)));
    else
      f.kb.tbox.push_back(DLLiteAxiom::role_incl({sub(pred, n), false}, {pred, false}));
  }
  return f;
}

namespace {

struct SatEncoding {
  std::vector<std::vector<int>> clauses;  // with tautological clauses added
  int num_vars = 0;
};

std::string literal_constant(int lit) {
  return lit > 0 ? "p" + std::to_string(lit) : "np" + std::to_string(-lit);
}

SatEncoding normalize(const std::vector<std::vector<int>>& clauses) {
  SatEncoding enc;
  std::set<std::vector<int>> seen;
  for (auto clause : clauses) {
    if (clause.empty()) throw InputError("gen_sat: empty clause");
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    for (int lit : clause) {
      if (lit == 0) throw InputError("gen_sat: literal 0");
      enc.num_vars = std::max(enc.num_vars, std::abs(lit));
    }
    if (seen.insert(clause).second) enc.clauses.push_back(clause);
  }
  // Tautological clauses p v -p for every variable, if not present.
  for (int v = 1; v <= enc.num_vars; ++v) {
    std::vector<int> taut{-v, v};
    if (seen.insert(taut).second) enc.clauses.push_back(taut);
  }
  return enc;
}

Fixture sat_core(const SatEncoding& enc) {
  Fixture f;
  f.kb = {};
  size_t m = enc.clauses.size();
  auto clause_const = [](size_t i) { return Term::constant("cl" + std::to_string(i + 1)); };

  for (int v = 1; v <= enc.num_vars; ++v) {
    f.kb.add_assertion(Atom::unary("T", Term::constant(literal_constant(v))));
    f.kb.add_assertion(Atom::unary("T", Term::constant(literal_constant(-v))));
  }
  for (size_t i = 0; i < m; ++i) {
    for (int lit : enc.clauses[i])
      f.kb.add_assertion(
          Atom::binary("c", clause_const(i), Term::constant(literal_constant(lit))));
    if (i + 1 < m) f.kb.add_assertion(Atom::binary("r", clause_const(i), clause_const(i + 1)));
  }

  std::vector<Atom> atoms;
  auto xc = [](size_t i) { return Term::variable("xc" + std::to_string(i + 1)); };
  auto xp = [](size_t i) { return Term::variable("xp" + std::to_string(i + 1)); };
  for (size_t i = 0; i < m; ++i) {
    atoms.push_back(Atom::binary("c", xc(i), xp(i)));
    atoms.push_back(Atom::unary("T", xp(i)));
    if (i + 1 < m) atoms.push_back(Atom::binary("r", xc(i), xc(i + 1)));
  }
  f.query = CQ({}, atoms);
  return f;
}

}  // namespace

Fixture gen_sat(const std::vector<std::vector<int>>& clauses) {
  SatEncoding enc = normalize(clauses);
  Fixture f = sat_core(enc);
  f.kind = "sat_sk";
  size_t m = enc.clauses.size();
  f.bound = 2 + m + (m - 1) + static_cast<uint64_t>(enc.num_vars);
  f.expected = brute_force_sat(enc.clauses, enc.num_vars);
  return f;
}

Fixture gen_sat_cq(const std::vector<std::vector<int>>& clauses) {
  SatEncoding enc = normalize(clauses);
  Fixture f = sat_core(enc);
  f.kind = "sat_cq";
  size_t m = enc.clauses.size();
  f.bound = 4 * m + 2 * static_cast<uint64_t>(enc.num_vars) - 1;
  f.expected = brute_force_sat(enc.clauses, enc.num_vars);
  return f;
}

bool brute_force_sat(const std::vector<std::vector<int>>& clauses, int num_vars) {
  for (uint32_t mask = 0; mask < (uint32_t{1} << num_vars); ++mask) {
    bool all = true;
    for (const auto& clause : clauses) {
      bool sat = false;
      for (int lit : clause) {
        bool value = (mask >> (std::abs(lit) - 1)) & 1;
        if ((lit > 0) == value) sat = true;
      }
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace cqproof
