// Python bindings: a thin string/dict layer over the library's main
// operations (parsing, proving, deciding, translating, temporal evaluation
// and the fixture generators).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqproof/fixtures.hpp"
#include "cqproof/parser.hpp"
#include "cqproof/proof_io.hpp"
#include "cqproof/search.hpp"
#include "cqproof/temporal_proof.hpp"
#include "cqproof/translate.hpp"

namespace py = pybind11;
using namespace cqproof;

namespace {

SearchGoal make_goal(const std::string& kb_text, const std::string& query_text,
                     const std::vector<std::string>& answer, const std::string& deriver,
                     const std::string& measure) {
  SearchGoal goal;
  goal.kb = parse_kb(kb_text);
  ParsedQuery pq = parse_query(query_text);
  goal.query = pq.query;
  if (answer.empty()) {
    goal.answer = pq.answers;
  } else {
    for (const auto& a : answer) goal.answer.push_back(Term::constant(a));
  }
  goal.deriver = deriver == "cq" ? Deriver::Cq
                 : deriver == "sk-prime" ? Deriver::SkPrime
                                         : Deriver::Sk;
  goal.measure = measure == "size" ? Measure::Size : Measure::TreeSize;
  return goal;
}

py::dict proof_dict(const Proof& p, uint64_t value) {
  py::dict out;
  out["value"] = value;
  out["size"] = proof_size(p);
  out["tree_size"] = tree_size(p);
  out["depth"] = depth(p);
  out["json"] = export_proof_json(p);
  out["dot"] = export_proof_dot(p);
  return out;
}

Interval interval_from(int64_t lo, int64_t hi) { return Interval::closed(lo, hi); }

}  // namespace

PYBIND11_MODULE(_cqproof, m) {
  m.doc() = "Explanation proofs for conjunctive query answers over DL-Lite ontologies";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def("prove",
        [](const std::string& kb, const std::string& query, const std::vector<std::string>& answer,
           const std::string& deriver, const std::string& measure, bool tree_shaped_fast) {
          SearchGoal goal = make_goal(kb, query, answer, deriver, measure);
          SearchResult r = tree_shaped_fast ? tree_shaped_min(goal)
                           : goal.measure == Measure::TreeSize ? min_tree_size(goal)
                                                               : min_size(goal);
          return proof_dict(r.proof, r.value);
        },
        py::arg("kb"), py::arg("query"), py::arg("answer") = std::vector<std::string>{},
        py::arg("deriver") = "sk", py::arg("measure") = "tree",
        py::arg("tree_shaped_fast") = false,
        "Compute a measure-minimal proof; returns measures and renderings.");

  m.def("decide",
        [](const std::string& kb, const std::string& query, uint64_t bound,
           const std::vector<std::string>& answer, const std::string& deriver,
           const std::string& measure) {
          SearchGoal goal = make_goal(kb, query, answer, deriver, measure);
          goal.bound = bound;
          return decide_op(goal);
        },
        py::arg("kb"), py::arg("query"), py::arg("bound"),
        py::arg("answer") = std::vector<std::string>{}, py::arg("deriver") = "sk",
        py::arg("measure") = "tree",
        "Is there a proof with the measure at most the bound?");

  m.def("validate",
        [](const std::string& kb_text, const std::string& proof_json, const std::string& deriver) {
          KnowledgeBase kb = parse_kb(kb_text);
          Proof p = import_proof_json(proof_json);
          ValidityReport rep = deriver == "cq"
                                   ? validate_proof(p, *cq_schema_checker(kb))
                                   : validate_proof(p, *sk_schema_checker(kb, deriver == "sk-prime"));
          py::dict out;
          out["ok"] = rep.ok();
          out["single_sink"] = rep.single_sink;
          out["acyclic"] = rep.is_acyclic;
          out["unique_premises"] = rep.unique_premises;
          out["leaves_grounded"] = rep.leaves_grounded;
          out["schemas_admissible"] = rep.schemas_admissible;
          out["failures"] = rep.failures;
          return out;
        },
        py::arg("kb"), py::arg("proof_json"), py::arg("deriver") = "sk",
        "Validate a proof against a knowledge base.");

  m.def("translate",
        [](const std::string& kb_text, const std::string& proof_json, const std::string& to) {
          KnowledgeBase kb = parse_kb(kb_text);
          Proof p = import_proof_json(proof_json);
          Proof q = to == "sk" ? cq_to_sk(p, kb) : sk_to_cq(p, kb);
          return export_proof_json(q);
        },
        py::arg("kb"), py::arg("proof_json"), py::arg("to"),
        "Translate a proof between the CQ and skolemized derivers.");

  m.def("is_tree_shaped",
        [](const std::string& query_text) {
          return is_tree_shaped(parse_query(query_text).query);
        },
        py::arg("query"), "Gaifman-graph tree check.");

  m.def("eval_temporal",
        [](const std::string& kb_text, const std::string& temporal_text,
           const std::vector<std::string>& answer, int64_t window_lo, int64_t window_hi) {
          KnowledgeBase kb = parse_kb(kb_text);
          ParsedTemporal pt = parse_temporal(temporal_text);
          std::vector<Term> ans;
          if (answer.empty())
            ans = pt.answers;
          else
            for (const auto& a : answer) ans.push_back(Term::constant(a));
          auto out = eval_mtcq(kb, pt.tabox, pt.query, ans, interval_from(window_lo, window_hi));
          std::vector<std::pair<int64_t, int64_t>> pairs;
          for (const auto& iv : out) pairs.emplace_back(iv.lo.value, iv.hi.value);
          return pairs;
        },
        py::arg("kb"), py::arg("temporal"), py::arg("answer") = std::vector<std::string>{},
        py::arg("window_lo") = -16, py::arg("window_hi") = 16,
        "Certain-answer intervals of a metric temporal query over a window.");

  m.def("temporal_prove",
        [](const std::string& kb_text, const std::string& temporal_text,
           const std::vector<std::string>& answer, int64_t at_lo, int64_t at_hi) {
          TemporalGoal goal;
          goal.kb = parse_kb(kb_text);
          ParsedTemporal pt = parse_temporal(temporal_text);
          goal.tabox = pt.tabox;
          goal.query = pt.query;
          if (answer.empty())
            goal.answer = pt.answers;
          else
            for (const auto& a : answer) goal.answer.push_back(Term::constant(a));
          goal.at = interval_from(at_lo, at_hi);
          auto r = temporal_min_proof(goal);
          py::dict out = proof_dict(r.proof, r.tree_size_value);
          std::vector<std::pair<std::string, std::string>> derived;
          for (const auto& iv : r.derived_intervals)
            derived.emplace_back(iv.lo.str(), iv.hi.str());
          out["certain_intervals"] = derived;
          return out;
        },
        py::arg("kb"), py::arg("temporal"), py::arg("answer") = std::vector<std::string>{},
        py::arg("at_lo") = 0, py::arg("at_hi") = 0,
        "Prove a metric temporal query at the given interval.");

  m.def("expand_next_form",
        [](const std::string& kb_text, const std::string& temporal_text, int64_t window_lo,
           int64_t window_hi) {
          KnowledgeBase kb = parse_kb(kb_text);
          ParsedTemporal pt = parse_temporal(temporal_text);
          auto expanded = expand_next_form(pt.query);
          auto before = eval_mtcq(kb, pt.tabox, pt.query, pt.answers,
                                  interval_from(window_lo, window_hi));
          auto after =
              eval_mtcq(kb, pt.tabox, expanded, pt.answers, interval_from(window_lo, window_hi));
          py::dict out;
          out["equivalent"] = before == after;
          out["formula"] = expanded->str();
          return out;
        },
        py::arg("kb"), py::arg("temporal"), py::arg("window_lo") = -16,
        py::arg("window_hi") = 16,
        "Rewrite into punctual next/previous form and cross-check the evaluation.");

  m.def("gen_chain",
        [](const std::string& query_text, int n) {
          ParsedQuery pq = parse_query(query_text);
          Fixture f = gen_chain(pq.query, pq.answers, n);
          py::dict out;
          out["kind"] = f.kind;
          out["kb"] = print_kb(f.kb);
          out["query"] = print_query(f.query, f.answer);
          out["bound"] = f.bound;
          return out;
        },
        py::arg("query"), py::arg("n"), "Inclusion-chain hardness gadget.");

  m.def("gen_sat",
        [](const std::vector<std::vector<int>>& clauses) {
          Fixture f = gen_sat(clauses);
          py::dict out;
          out["kind"] = f.kind;
          out["kb"] = print_kb(f.kb);
          out["query"] = print_query(f.query, f.answer);
          out["bound"] = f.bound;
          out["expected"] = *f.expected;
          return out;
        },
        py::arg("clauses"), "Satisfiability hardness gadget.");

  m.def("export_dot",
        [](const std::string& proof_json) { return export_proof_dot(import_proof_json(proof_json)); },
        py::arg("proof_json"), "Re-render an exported proof as graphviz.");
}
