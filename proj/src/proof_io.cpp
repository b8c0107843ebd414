#include "cqproof/proof_io.hpp"

#include "json.hpp"

#include "cqproof/parser.hpp"

namespace cqproof {

namespace {

using Json = nlohmann::ordered_json;

Json atom_json(const Atom& a) {
  Json arr = Json::array();
  arr.push_back(a.pred);
  for (const auto& t : a.args) arr.push_back(print_term(t));
  return arr;
}

Atom atom_from_json(const Json& j) {
  std::vector<Term> args;
  for (size_t i = 1; i < j.size(); ++i) args.push_back(parse_term(j[i].get<std::string>()));
  return Atom(j[0].get<std::string>(), std::move(args));
}

Json cq_json(const CQ& q) {
  Json j;
  j["answer_vars"] = q.answer_vars;
  Json atoms = Json::array();
  for (const auto& a : q.atoms) atoms.push_back(atom_json(a));
  j["atoms"] = std::move(atoms);
  return j;
}

CQ cq_from_json(const Json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) atoms.push_back(atom_from_json(a));
  return CQ(j.at("answer_vars").get<std::vector<std::string>>(), std::move(atoms));
}

Json interval_json(const Interval& i) {
  Json j = Json::array();
  j.push_back(i.lo.finite() ? Json(i.lo.value) : Json(i.lo.str()));
  j.push_back(i.hi.finite() ? Json(i.hi.value) : Json(i.hi.str()));
  return j;
}

TimePoint time_point_from_json(const Json& j) {
  if (j.is_number_integer()) return TimePoint::at(j.get<int64_t>());
  std::string s = j.get<std::string>();
  if (s == "inf") return TimePoint::pos_inf();
  if (s == "-inf") return TimePoint::neg_inf();
  throw InputError("bad interval endpoint: " + s);
}

Json mtcq_json(const Mtcq::Ptr& f) {
  Json j;
  switch (f->op()) {
    case Mtcq::Op::CqLeaf:
      j["op"] = "leaf";
      j["cq"] = cq_json(f->cq());
      return j;
    case Mtcq::Op::Top:
      j["op"] = "top";
      return j;
    case Mtcq::Op::And:
    case Mtcq::Op::Or:
      j["op"] = f->op() == Mtcq::Op::And ? "and" : "or";
      j["left"] = mtcq_json(f->left());
      j["right"] = mtcq_json(f->right());
      return j;
    case Mtcq::Op::BoxPlus:
    case Mtcq::Op::BoxMinus:
      j["op"] = f->op() == Mtcq::Op::BoxPlus ? "boxp" : "boxm";
      j["window"] = interval_json(f->window());
      j["arg"] = mtcq_json(f->left());
      return j;
    case Mtcq::Op::Until:
    case Mtcq::Op::Since:
      j["op"] = f->op() == Mtcq::Op::Until ? "until" : "since";
      j["window"] = interval_json(f->window());
      j["left"] = mtcq_json(f->left());
      j["right"] = mtcq_json(f->right());
      return j;
    case Mtcq::Op::Next:
    case Mtcq::Op::Prev:
      j["op"] = f->op() == Mtcq::Op::Next ? "next" : "prev";
      j["arg"] = mtcq_json(f->left());
      return j;
  }
  return j;
}

Mtcq::Ptr mtcq_from_json(const Json& j) {
  std::string op = j.at("op").get<std::string>();
  if (op == "leaf") return Mtcq::leaf(cq_from_json(j.at("cq")));
  if (op == "top") return Mtcq::top();
  if (op == "and") return Mtcq::conj(mtcq_from_json(j.at("left")), mtcq_from_json(j.at("right")));
  if (op == "or") return Mtcq::disj(mtcq_from_json(j.at("left")), mtcq_from_json(j.at("right")));
  auto window = [&]() {
    return Interval(time_point_from_json(j.at("window")[0]),
                    time_point_from_json(j.at("window")[1]));
  };
  if (op == "boxp") return Mtcq::box_plus(window(), mtcq_from_json(j.at("arg")));
  if (op == "boxm") return Mtcq::box_minus(window(), mtcq_from_json(j.at("arg")));
  if (op == "until")
    return Mtcq::until(window(), mtcq_from_json(j.at("left")), mtcq_from_json(j.at("right")));
  if (op == "since")
    return Mtcq::since(window(), mtcq_from_json(j.at("left")), mtcq_from_json(j.at("right")));
  if (op == "next") return Mtcq::next(mtcq_from_json(j.at("arg")));
  if (op == "prev") return Mtcq::prev(mtcq_from_json(j.at("arg")));
  throw InputError("unknown formula operator: " + op);
}

Json axiom_json(const DLLiteAxiom& ax) {
  Json j;
  j["axiom"] = ax.str();
  return j;
}

DLLiteAxiom axiom_from_json(const Json& j) {
  // Reuse the KB parser on a one-line file.
  std::string text = "cqproof/1\n" + j.at("axiom").get<std::string>() + ".\n";
  KnowledgeBase kb = parse_kb(text);
  if (kb.tbox.size() != 1 || !std::holds_alternative<DLLiteAxiom>(kb.tbox[0]))
    throw InputError("bad axiom: " + j.at("axiom").get<std::string>());
  return std::get<DLLiteAxiom>(kb.tbox[0]);
}

Json rule_json(const ExistentialRule& r) {
  Json j;
  Json body = Json::array(), head = Json::array();
  for (const auto& a : r.body) body.push_back(atom_json(a));
  for (const auto& a : r.head) head.push_back(atom_json(a));
  j["body"] = std::move(body);
  j["head"] = std::move(head);
  return j;
}

ExistentialRule rule_from_json(const Json& j) {
  std::vector<Atom> body, head;
  for (const auto& a : j.at("body")) body.push_back(atom_from_json(a));
  for (const auto& a : j.at("head")) head.push_back(atom_from_json(a));
  return ExistentialRule(std::move(body), std::move(head));
}

Json label_json(const Sentence& s) {
  Json j;
  if (const CQ* q = as_cq(s)) {
    j["kind"] = "cq";
    j["cq"] = cq_json(*q);
  } else if (const auto* ax = std::get_if<DLLiteAxiom>(&s)) {
    j["kind"] = "axiom";
    j.update(axiom_json(*ax));
  } else if (const auto* r = std::get_if<ExistentialRule>(&s)) {
    j["kind"] = "rule";
    j.update(rule_json(*r));
  } else {
    const auto& a = std::get<AnnotatedFormula>(s);
    j["kind"] = "annotated";
    j["formula"] = mtcq_json(a.formula);
    j["at"] = interval_json(a.at);
  }
  return j;
}

Sentence label_from_json(const Json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "cq") return Sentence(cq_from_json(j.at("cq")));
  if (kind == "axiom") return Sentence(axiom_from_json(j));
  if (kind == "rule") return Sentence(rule_from_json(j));
  if (kind == "annotated")
    return Sentence(AnnotatedFormula{
        mtcq_from_json(j.at("formula")),
        Interval(time_point_from_json(j.at("at")[0]), time_point_from_json(j.at("at")[1]))});
  throw InputError("unknown label kind: " + kind);
}

}  // namespace

std::string export_proof_json(const Proof& p) {
  Json j;
  j["format"] = "cqproof/1";
  Json vertices = Json::array();
  for (VertexId v = 0; v < p.graph.vertex_count(); ++v) {
    Json vj;
    vj["id"] = v;
    vj["kind"] = sentence_kind(p.graph.label(v));
    vj["label"] = sentence_str(p.graph.label(v));
    vj["data"] = label_json(p.graph.label(v));
    vertices.push_back(std::move(vj));
  }
  j["vertices"] = std::move(vertices);
  Json edges = Json::array();
  for (const auto& e : p.graph.edges()) {
    Json ej;
    ej["sources"] = e.sources;
    ej["target"] = e.target;
    ej["rule"] = e.rule;
    edges.push_back(std::move(ej));
  }
  j["edges"] = std::move(edges);
  j["sink"] = p.sink;
  Json measures;
  measures["size"] = proof_size(p);
  measures["tree_size"] = tree_size(p);
  measures["depth"] = depth(p);
  j["measures"] = std::move(measures);
  return j.dump(2) + "\n";
}

Proof import_proof_json(const std::string& text) {
  Json j = Json::parse(text);
  if (j.at("format").get<std::string>() != "cqproof/1")
    throw InputError("unsupported proof format");
  Proof p;
  for (const auto& vj : j.at("vertices")) p.graph.add_vertex(label_from_json(vj.at("data")));
  for (const auto& ej : j.at("edges")) {
    p.graph.add_edge(ej.at("sources").get<std::vector<VertexId>>(), ej.at("target").get<VertexId>(),
                     ej.value("rule", std::string{}));
  }
  p.sink = j.at("sink").get<VertexId>();
  if (p.sink < 0 || p.sink >= p.graph.vertex_count()) throw InputError("bad sink vertex");
  return p;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_proof_dot(const Proof& p) {
  std::string out = "digraph proof {\n  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (VertexId v = 0; v < p.graph.vertex_count(); ++v) {
    std::string kind = sentence_kind(p.graph.label(v));
    std::string style = kind == "axiom" || kind == "rule"
                            ? ", style=rounded, color=gray40, fontcolor=gray40"
                            : "";
    if (v == p.sink) style += ", style=filled, fillcolor=gray90";
    out += "  v" + std::to_string(v) + " [label=\"" + dot_escape(sentence_str(p.graph.label(v))) +
           "\"" + style + "];\n";
  }
  for (size_t i = 0; i < p.graph.edges().size(); ++i) {
    const auto& e = p.graph.edges()[i];
    if (e.sources.size() == 1) {
      out += "  v" + std::to_string(e.sources[0]) + " -> v" + std::to_string(e.target) +
             " [label=\"" + dot_escape(e.rule) + "\"];\n";
      continue;
    }
    // Hyperedges are rendered through a junction point.
    std::string junction = "j" + std::to_string(i);
    out += "  " + junction + " [shape=point, width=0.06];\n";
    for (VertexId s : e.sources)
      out += "  v" + std::to_string(s) + " -> " + junction + " [dir=none];\n";
    out += "  " + junction + " -> v" + std::to_string(e.target) + " [label=\"" +
           dot_escape(e.rule) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace cqproof
