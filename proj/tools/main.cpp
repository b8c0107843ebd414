// Command-line front end: check / prove / decide / translate /
// temporal-prove / gen-fixture / export over the cqproof library.
// Exit codes: 0 ok, 1 decision false or validation failed, 2 input error,
// 3 resource cap exceeded.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqproof/fixtures.hpp"
#include "cqproof/parser.hpp"
#include "cqproof/proof_io.hpp"
#include "cqproof/search.hpp"
#include "cqproof/temporal_proof.hpp"
#include "cqproof/translate.hpp"

namespace {

using namespace cqproof;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

std::vector<Term> parse_answer_list(const std::string& csv) {
  std::vector<Term> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    size_t a = item.find_first_not_of(" \t");
    size_t b = item.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    out.push_back(Term::constant(item.substr(a, b - a + 1)));
  }
  return out;
}

Deriver parse_deriver(const std::string& s) {
  if (s == "cq") return Deriver::Cq;
  if (s == "sk") return Deriver::Sk;
  if (s == "sk-prime") return Deriver::SkPrime;
  throw InputError("unknown deriver: " + s + " (expected cq, sk or sk-prime)");
}

Measure parse_measure(const std::string& s) {
  if (s == "size") return Measure::Size;
  if (s == "tree") return Measure::TreeSize;
  throw InputError("unknown measure: " + s + " (expected size or tree)");
}

void write_proof(const Proof& p, const std::string& out_path, const std::string& format) {
  std::string rendered = format == "dot" ? export_proof_dot(p) : export_proof_json(p);
  if (out_path.empty())
    std::cout << rendered;
  else
    spill(out_path, rendered);
}

struct CommonProveArgs {
  std::string kb_path, query_path, answer_csv, out_path;
  std::string deriver = "sk", measure = "tree", format = "json";
  uint64_t bound = 0;
  bool has_bound = false;
  bool tree_shaped_fast = false;
  int depth_bound = -1;
  size_t expansion_cap = 1000000;
};

SearchGoal make_goal(const CommonProveArgs& args) {
  SearchGoal goal;
  goal.kb = parse_kb(slurp(args.kb_path));
  ParsedQuery pq = parse_query(slurp(args.query_path));
  goal.query = pq.query;
  goal.answer = args.answer_csv.empty() ? pq.answers : parse_answer_list(args.answer_csv);
  goal.deriver = parse_deriver(args.deriver);
  goal.measure = parse_measure(args.measure);
  if (args.has_bound) goal.bound = args.bound;
  if (args.depth_bound >= 0) goal.depth_bound = args.depth_bound;
  goal.limits.expansion_cap = args.expansion_cap;
  return goal;
}

int run_prove(const CommonProveArgs& args) {
  SearchGoal goal = make_goal(args);
  SearchResult r;
  if (args.tree_shaped_fast) {
    r = tree_shaped_min(goal);
  } else {
    r = goal.measure == Measure::TreeSize ? min_tree_size(goal) : min_size(goal);
  }
  std::cerr << "minimal " << (goal.measure == Measure::TreeSize ? "tree size" : "size") << ": "
            << r.value << " (size " << proof_size(r.proof) << ", tree size "
            << tree_size(r.proof) << ", depth " << depth(r.proof) << ")\n";
  write_proof(r.proof, args.out_path, args.format);
  if (goal.bound && r.value > *goal.bound) return 1;
  return 0;
}

int run_decide(const CommonProveArgs& args) {
  SearchGoal goal = make_goal(args);
  bool yes = decide_op(goal);
  std::cout << (yes ? "true" : "false") << "\n";
  return yes ? 0 : 1;
}

int run_check(const std::string& kb_path, const std::string& proof_path,
              const std::string& deriver, const std::string& temporal_path) {
  Proof p = import_proof_json(slurp(proof_path));
  ValidityReport report;
  if (!temporal_path.empty()) {
    KnowledgeBase kb = parse_kb(slurp(kb_path));
    ParsedTemporal pt = parse_temporal(slurp(temporal_path));
    report = validate_proof(p, *temporal_schema_checker(kb, pt.tabox));
  } else {
    KnowledgeBase kb = parse_kb(slurp(kb_path));
    if (deriver == "cq")
      report = validate_proof(p, *cq_schema_checker(kb));
    else
      report = validate_proof(p, *sk_schema_checker(kb, deriver == "sk-prime"));
  }
  std::cout << report.summary();
  std::cout << "sink: " << sentence_str(p.graph.label(p.sink)) << "\n";
  std::cout << "measures: size " << proof_size(p) << ", tree size " << tree_size(p) << ", depth "
            << depth(p) << "\n";
  return report.ok() ? 0 : 1;
}

int run_translate(const std::string& kb_path, const std::string& proof_path,
                  const std::string& to, const std::string& out_path, const std::string& format) {
  KnowledgeBase kb = parse_kb(slurp(kb_path));
  Proof p = import_proof_json(slurp(proof_path));
  Proof q = to == "sk" ? cq_to_sk(p, kb) : sk_to_cq(p, kb);
  write_proof(q, out_path, format);
  return 0;
}

int run_temporal_prove(const std::string& kb_path, const std::string& temporal_path,
                       const std::string& answer_csv, const std::string& at_text,
                       const std::string& out_path, const std::string& format) {
  TemporalGoal goal;
  goal.kb = parse_kb(slurp(kb_path));
  ParsedTemporal pt = parse_temporal(slurp(temporal_path));
  goal.tabox = pt.tabox;
  goal.query = pt.query;
  goal.answer = answer_csv.empty() ? pt.answers : parse_answer_list(answer_csv);
  // The target interval, e.g. [1,4] or [-inf,3]; reuse the fact syntax.
  std::string probe = "cqproof/1\nProbe(a)@" + at_text + ".\nquery q : TOP .\n";
  goal.at = parse_temporal(probe).tabox.facts.at(0).at;
  auto r = temporal_min_proof(goal);
  std::cerr << "tree size: " << r.tree_size_value << "; certain intervals:";
  for (const auto& iv : r.derived_intervals) std::cerr << " " << iv.str();
  std::cerr << "\n";
  write_proof(r.proof, out_path, format);
  return 0;
}

std::vector<std::vector<int>> parse_clauses(const std::string& text) {
  // Clauses separated by ';', literals by ',': "1,-2;2,3".
  std::vector<std::vector<int>> out;
  std::istringstream in(text);
  std::string clause;
  while (std::getline(in, clause, ';')) {
    std::vector<int> lits;
    std::istringstream cin(clause);
    std::string lit;
    while (std::getline(cin, lit, ',')) {
      if (lit.find_first_not_of(" \t") == std::string::npos) continue;
      lits.push_back(std::stoi(lit));
    }
    if (!lits.empty()) out.push_back(lits);
  }
  return out;
}

int run_gen_fixture(const std::string& kind, const std::string& query_path, int n,
                    const std::string& clause_text, const std::string& out_dir) {
  Fixture f;
  if (kind == "chain") {
    ParsedQuery pq = parse_query(slurp(query_path));
    f = gen_chain(pq.query, pq.answers, n);
  } else if (kind == "sat") {
    f = gen_sat(parse_clauses(clause_text));
  } else {
    throw InputError("unknown fixture kind: " + kind + " (expected chain or sat)");
  }
  spill(out_dir + "/fixture.kb", print_kb(f.kb));
  spill(out_dir + "/fixture.q", print_query(f.query, f.answer));
  std::ostringstream meta;
  meta << "cqproof/1\n# kind " << f.kind << "\n# bound " << f.bound;
  if (f.expected) meta << "\n# expected " << (*f.expected ? "true" : "false");
  meta << "\n";
  spill(out_dir + "/fixture.meta", meta.str());
  std::cout << "kind " << f.kind << ", bound " << f.bound;
  if (f.expected) std::cout << ", expected " << (*f.expected ? "true" : "false");
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explanation proofs for conjunctive query answers over DL-Lite ontologies"};
  app.require_subcommand(1);

  CommonProveArgs prove_args;
  auto add_prove_options = [&](CLI::App* cmd, bool bound_required) {
    cmd->add_option("--kb", prove_args.kb_path, "knowledge base file")->required();
    cmd->add_option("--query", prove_args.query_path, "query file")->required();
    cmd->add_option("--answer", prove_args.answer_csv, "answer constants, comma separated");
    cmd->add_option("--deriver", prove_args.deriver, "cq | sk | sk-prime");
    cmd->add_option("--measure", prove_args.measure, "size | tree");
    auto* b = cmd->add_option("--bound", prove_args.bound, "decision bound");
    if (bound_required) b->required();
    cmd->add_option("--depth-bound", prove_args.depth_bound, "chase depth bound");
    cmd->add_option("--expansion-cap", prove_args.expansion_cap, "search expansion cap");
    return b;
  };

  auto* prove = app.add_subcommand("prove", "compute a measure-minimal proof");
  auto* prove_bound = add_prove_options(prove, false);
  prove->add_flag("--tree-shaped-fast", prove_args.tree_shaped_fast,
                  "use the polynomial algorithm for tree-shaped queries");
  prove->add_option("--out", prove_args.out_path, "output file (default stdout)");
  prove->add_option("--format", prove_args.format, "json | dot");

  auto* decide = app.add_subcommand("decide", "is there a proof within the bound?");
  add_prove_options(decide, true);

  std::string check_kb, check_proof, check_deriver = "sk", check_temporal;
  auto* check = app.add_subcommand("check", "validate a proof against a knowledge base");
  check->add_option("--kb", check_kb, "knowledge base file")->required();
  check->add_option("--proof", check_proof, "proof file (json)")->required();
  check->add_option("--deriver", check_deriver, "cq | sk | sk-prime");
  check->add_option("--temporal", check_temporal, "temporal file (validates temporally)");

  std::string tr_kb, tr_proof, tr_to, tr_out, tr_format = "json";
  auto* translate = app.add_subcommand("translate", "translate a proof between derivers");
  translate->add_option("--kb", tr_kb)->required();
  translate->add_option("--proof", tr_proof)->required();
  translate->add_option("--to", tr_to, "cq | sk")->required();
  translate->add_option("--out", tr_out);
  translate->add_option("--format", tr_format, "json | dot");

  std::string tp_kb, tp_temporal, tp_answer, tp_at = "[0,0]", tp_out, tp_format = "json";
  auto* tprove = app.add_subcommand("temporal-prove", "prove a metric temporal query");
  tprove->add_option("--kb", tp_kb, "knowledge base file (the global TBox)")->required();
  tprove->add_option("--temporal", tp_temporal, "temporal facts and query")->required();
  tprove->add_option("--answer", tp_answer, "answer constants, comma separated");
  tprove->add_option("--at", tp_at, "target interval, e.g. [1,4]");
  tprove->add_option("--out", tp_out);
  tprove->add_option("--format", tp_format, "json | dot");

  std::string gf_kind, gf_query, gf_clauses, gf_out = ".";
  int gf_n = 1;
  auto* gen = app.add_subcommand("gen-fixture", "generate a hardness gadget instance");
  gen->add_option("kind", gf_kind, "chain | sat")->required();
  gen->add_option("--query", gf_query, "query file (chain)");
  gen->add_option("--n", gf_n, "chain length parameter");
  gen->add_option("--clauses", gf_clauses, "clauses, e.g. \"1,-2;2\"");
  gen->add_option("--out-dir", gf_out, "output directory");

  std::string ex_proof, ex_format = "dot", ex_out;
  auto* exp = app.add_subcommand("export", "re-render a proof file");
  exp->add_option("--proof", ex_proof)->required();
  exp->add_option("--format", ex_format, "json | dot");
  exp->add_option("--out", ex_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (prove->parsed()) {
      prove_args.has_bound = prove_bound->count() > 0;
      return run_prove(prove_args);
    }
    if (decide->parsed()) {
      prove_args.has_bound = true;
      return run_decide(prove_args);
    }
    if (check->parsed()) return run_check(check_kb, check_proof, check_deriver, check_temporal);
    if (translate->parsed()) {
      if (tr_to != "cq" && tr_to != "sk") throw InputError("--to must be cq or sk");
      return run_translate(tr_kb, tr_proof, tr_to, tr_out, tr_format);
    }
    if (tprove->parsed())
      return run_temporal_prove(tp_kb, tp_temporal, tp_answer, tp_at, tp_out, tp_format);
    if (gen->parsed()) return run_gen_fixture(gf_kind, gf_query, gf_n, gf_clauses, gf_out);
    if (exp->parsed()) {
      Proof p = import_proof_json(slurp(ex_proof));
      write_proof(p, ex_out, ex_format);
      return 0;
    }
  } catch (const CapExceeded& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
