#include "cqproof/parser.hpp"

#include <algorithm>
#include <functional>
#include <cctype>
#include <sstream>

namespace cqproof {

namespace {

// Cursor over one statement line.
struct Cursor {
  const std::string& s;
  int line;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, bool unsupported = false) const {
    throw ParseError(msg, line, static_cast<int>(pos) + 1, unsupported);
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool try_consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!try_consume(c)) fail(std::string("expected '") + c + "'");
  }
  bool try_keyword(const std::string& kw) {
    skip_ws();
    if (s.compare(pos, kw.size(), kw) != 0) return false;
    size_t end = pos + kw.size();
    if (end < s.size() &&
        (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_')) return false;
    pos = end;
    return true;
  }
  std::string identifier() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected an identifier");
    return s.substr(start, pos - start);
  }
  int64_t integer() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected an integer");
    return std::stoll(s.substr(start, pos - start));
  }
};

struct Line {
  std::string text;
  int number;
};

std::vector<Line> statement_lines(const std::string& text, const char* expected_header) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw = raw.substr(0, hash);
    size_t a = raw.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = raw.find_last_not_of(" \t\r");
    std::string trimmed = raw.substr(a, b - a + 1);
    if (!header_seen) {
      if (trimmed != expected_header)
        throw ParseError("missing '" + std::string(expected_header) + "' header", number, 1);
      header_seen = true;
      continue;
    }
    out.push_back({trimmed, number});
  }
  if (!header_seen)
    throw ParseError("missing '" + std::string(expected_header) + "' header", number, 1);
  return out;
}

// An atom whose bare arguments are variables; '$name' denotes a constant
// and 'f(...)' a skolem term.
Term pattern_term(Cursor& c) {
  if (c.try_consume('$')) return Term::constant(c.identifier());
  if (c.try_consume('?')) return Term::variable(c.identifier());
  std::string name = c.identifier();
  if (c.try_consume('(')) {
    Term arg = pattern_term(c);
    c.expect(')');
    return Term::skolem(name, arg);
  }
  return Term::variable(name);
}

Atom pattern_atom(Cursor& c) {
  std::string pred = c.identifier();
  c.expect('(');
  std::vector<Term> args{pattern_term(c)};
  if (c.try_consume(',')) args.push_back(pattern_term(c));
  if (c.peek() == ',') c.fail("atoms of arity greater than two are not supported", true);
  c.expect(')');
  return Atom(pred, std::move(args));
}

// A ground atom in an assertion: bare arguments are constants.
Atom ground_atom(Cursor& c) {
  std::string pred = c.identifier();
  c.expect('(');
  std::vector<Term> args{Term::constant(c.identifier())};
  if (c.try_consume(',')) args.push_back(Term::constant(c.identifier()));
  if (c.peek() == ',') c.fail("atoms of arity greater than two are not supported", true);
  c.expect(')');
  return Atom(pred, std::move(args));
}

RoleExpr role_expr(Cursor& c) {
  std::string name = c.identifier();
  bool inverse = c.try_consume('-');
  return {name, inverse};
}

ConceptExpr concept_expr(Cursor& c) {
  if (c.try_keyword("exists")) return ConceptExpr::exists(role_expr(c));
  return ConceptExpr::named(c.identifier());
}

TimePoint time_point(Cursor& c) {
  if (c.try_keyword("inf")) return TimePoint::pos_inf();
  c.skip_ws();
  if (c.s.compare(c.pos, 4, "-inf") == 0) {
    c.pos += 4;
    return TimePoint::neg_inf();
  }
  return TimePoint::at(c.integer());
}

Interval interval(Cursor& c) {
  c.expect('[');
  TimePoint lo = time_point(c);
  c.expect(',');
  TimePoint hi = time_point(c);
  c.expect(']');
  if (!(lo <= hi)) c.fail("empty interval");
  return Interval(lo, hi);
}

ExistentialRule parse_rule(Cursor& c) {
  std::vector<Atom> body{pattern_atom(c)};
  while (c.try_consume(',')) body.push_back(pattern_atom(c));
  if (!c.try_consume('-') || !c.try_consume('>')) c.fail("expected '->'");
  if (c.try_keyword("exists")) {
    // Declared existential variables; checked against the computed ones.
    std::vector<std::string> declared{c.identifier()};
    while (c.try_consume(',')) declared.push_back(c.identifier());
    c.expect('.');
    std::vector<Atom> head{pattern_atom(c)};
    while (c.try_consume(',')) head.push_back(pattern_atom(c));
    ExistentialRule rule(body, head);
    std::set<std::string> have(rule.existential_vars.begin(), rule.existential_vars.end());
    for (const auto& v : declared)
      if (!have.count(v)) c.fail("declared existential variable '" + v + "' not in the head");
    return rule;
  }
  std::vector<Atom> head{pattern_atom(c)};
  while (c.try_consume(',')) head.push_back(pattern_atom(c));
  ExistentialRule rule(body, head);
  if (!rule.existential_vars.empty())
    c.fail("head variables " + rule.existential_vars.front() +
           "... must be declared with 'exists'");
  return rule;
}

}  // namespace

KnowledgeBase parse_kb(const std::string& text) {
  KnowledgeBase kb;
  for (const auto& line : statement_lines(text, "cqproof/1")) {
    Cursor c{line.text, line.number};
    if (line.text.find("@") != std::string::npos)
      c.fail("temporal assertions belong in a temporal file", true);
    if (line.text.find("->") != std::string::npos) {
      kb.tbox.push_back(parse_rule(c));
      c.expect('.');
      if (!c.done()) c.fail("trailing input after '.'");
      continue;
    }
    if (line.text.find(" rsub ") != std::string::npos) {
      RoleExpr lhs = role_expr(c);
      if (!c.try_keyword("rsub")) c.fail("expected 'rsub'");
      RoleExpr rhs = role_expr(c);
      c.expect('.');
      kb.tbox.push_back(DLLiteAxiom::role_incl(lhs, rhs));
      continue;
    }
    if (line.text.find(" sub ") != std::string::npos) {
      ConceptExpr lhs = concept_expr(c);
      if (!c.try_keyword("sub")) c.fail("expected 'sub'");
      ConceptExpr rhs = concept_expr(c);
      c.expect('.');
      kb.tbox.push_back(DLLiteAxiom::concept_incl(lhs, rhs));
      continue;
    }
    Atom a = ground_atom(c);
    c.expect('.');
    if (!c.done()) c.fail("trailing input after '.'");
    kb.add_assertion(std::move(a));
  }
  return kb;
}

ParsedQuery parse_query(const std::string& text) {
  std::optional<CQ> query;
  std::vector<Term> answers;
  for (const auto& line : statement_lines(text, "cqproof/1")) {
    Cursor c{line.text, line.number};
    if (c.try_keyword("answers")) {
      answers.push_back(Term::constant(c.identifier()));
      while (c.try_consume(',')) answers.push_back(Term::constant(c.identifier()));
      c.expect('.');
      continue;
    }
    if (query) c.fail("a query file may contain only one query");
    c.identifier();  // the query name
    std::vector<std::string> head_vars;
    if (c.try_consume('(')) {
      if (!c.try_consume(')')) {
        head_vars.push_back(c.identifier());
        while (c.try_consume(',')) head_vars.push_back(c.identifier());
        c.expect(')');
      }
    }
    if (!c.try_consume(':') || !c.try_consume('-')) c.fail("expected ':-'");
    std::vector<Atom> atoms{pattern_atom(c)};
    while (c.try_consume(',')) atoms.push_back(pattern_atom(c));
    c.expect('.');
    try {
      query = CQ(head_vars, atoms);
    } catch (const InputError& e) {
      c.fail(e.what());
    }
  }
  if (!query) throw ParseError("no query statement found", 1, 1);
  return {*query, answers};
}

namespace {

Mtcq::Ptr parse_mtcq_expr(Cursor& c, const std::vector<std::string>& head_vars);

Mtcq::Ptr parse_mtcq_primary(Cursor& c, const std::vector<std::string>& head_vars) {
  if (c.try_keyword("TOP")) return Mtcq::top();
  if (c.try_keyword("BOXP")) {
    Interval w = interval(c);
    return Mtcq::box_plus(w, parse_mtcq_primary(c, head_vars));
  }
  if (c.try_keyword("BOXM")) {
    Interval w = interval(c);
    return Mtcq::box_minus(w, parse_mtcq_primary(c, head_vars));
  }
  if (c.try_consume('(')) {
    Mtcq::Ptr f = parse_mtcq_expr(c, head_vars);
    c.expect(')');
    return f;
  }
  if (c.try_consume('{')) {
    std::vector<Atom> atoms{pattern_atom(c)};
    while (c.try_consume(',')) atoms.push_back(pattern_atom(c));
    c.expect('}');
    auto vars = atoms_vars(atoms);
    std::vector<std::string> present;
    for (const auto& v : head_vars) {
      if (!vars.count(v))
        c.fail("answer variable '" + v + "' does not occur in every query leaf");
      present.push_back(v);
    }
    try {
      return Mtcq::leaf(CQ(present, atoms));
    } catch (const InputError& e) {
      c.fail(e.what());
    }
  }
  c.fail("expected TOP, BOXP, BOXM, '(' or '{'");
}

Mtcq::Ptr parse_mtcq_metric(Cursor& c, const std::vector<std::string>& head_vars) {
  Mtcq::Ptr f = parse_mtcq_primary(c, head_vars);
  while (true) {
    if (c.try_keyword("UNTIL")) {
      Interval w = interval(c);
      f = Mtcq::until(w, f, parse_mtcq_primary(c, head_vars));
    } else if (c.try_keyword("SINCE")) {
      Interval w = interval(c);
      f = Mtcq::since(w, f, parse_mtcq_primary(c, head_vars));
    } else {
      return f;
    }
  }
}

Mtcq::Ptr parse_mtcq_and(Cursor& c, const std::vector<std::string>& head_vars) {
  Mtcq::Ptr f = parse_mtcq_metric(c, head_vars);
  while (c.try_keyword("AND")) f = Mtcq::conj(f, parse_mtcq_metric(c, head_vars));
  return f;
}

Mtcq::Ptr parse_mtcq_expr(Cursor& c, const std::vector<std::string>& head_vars) {
  Mtcq::Ptr f = parse_mtcq_and(c, head_vars);
  while (c.try_keyword("OR")) f = Mtcq::disj(f, parse_mtcq_and(c, head_vars));
  return f;
}

}  // namespace

ParsedTemporal parse_temporal(const std::string& text) {
  ParsedTemporal out;
  bool have_query = false;
  for (const auto& line : statement_lines(text, "cqproof/1")) {
    Cursor c{line.text, line.number};
    if (c.try_keyword("answers")) {
      out.answers.push_back(Term::constant(c.identifier()));
      while (c.try_consume(',')) out.answers.push_back(Term::constant(c.identifier()));
      c.expect('.');
      continue;
    }
    if (c.try_keyword("query")) {
      if (have_query) c.fail("a temporal file may contain only one query");
      c.identifier();  // query name
      std::vector<std::string> head_vars;
      if (c.try_consume('(')) {
        if (!c.try_consume(')')) {
          head_vars.push_back(c.identifier());
          while (c.try_consume(',')) head_vars.push_back(c.identifier());
          c.expect(')');
        }
      }
      c.expect(':');
      out.query = parse_mtcq_expr(c, head_vars);
      c.expect('.');
      have_query = true;
      continue;
    }
    Atom a = ground_atom(c);
    c.expect('@');
    Interval at = interval(c);
    c.expect('.');
    out.tabox.add(std::move(a), at);
  }
  if (!have_query) throw ParseError("no query statement found", 1, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Printers (parse . print is the identity on canonical files).

std::string print_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Constant:
      return t.name();
    case Term::Kind::Variable:
      return "?" + t.name();
    case Term::Kind::Skolem:
      return t.name() + "(" + print_term(t.argument()) + ")";
  }
  return {};
}

Term parse_term(const std::string& s) {
  Cursor c{s, 1};
  // Here a bare identifier is a constant (ground context).
  std::function<Term()> rec = [&]() -> Term {
    if (c.try_consume('?')) return Term::variable(c.identifier());
    std::string name = c.identifier();
    if (c.try_consume('(')) {
      Term arg = rec();
      c.expect(')');
      return Term::skolem(name, arg);
    }
    return Term::constant(name);
  };
  Term t = rec();
  if (!c.done()) c.fail("trailing input in term");
  return t;
}

namespace {

std::string pattern_atom_str(const Atom& a) {
  std::string s = a.pred + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    const Term& t = a.args[i];
    if (t.is_constant())
      s += "$" + t.name();
    else if (t.is_variable())
      s += t.name();
    else
      s += print_term(t);
  }
  return s + ")";
}

std::string ground_atom_str(const Atom& a) {
  std::string s = a.pred + "(";
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += a.args[i].name();
  }
  return s + ")";
}

std::string mtcq_str(const Mtcq::Ptr& f) {
  switch (f->op()) {
    case Mtcq::Op::CqLeaf: {
      std::string s = "{ ";
      for (size_t i = 0; i < f->cq().atoms.size(); ++i) {
        if (i) s += ", ";
        s += pattern_atom_str(f->cq().atoms[i]);
      }
      return s + " }";
    }
    case Mtcq::Op::Top:
      return "TOP";
    case Mtcq::Op::And:
      return "(" + mtcq_str(f->left()) + " AND " + mtcq_str(f->right()) + ")";
    case Mtcq::Op::Or:
      return "(" + mtcq_str(f->left()) + " OR " + mtcq_str(f->right()) + ")";
    case Mtcq::Op::BoxPlus:
      return "BOXP" + f->window().str() + " (" + mtcq_str(f->left()) + ")";
    case Mtcq::Op::BoxMinus:
      return "BOXM" + f->window().str() + " (" + mtcq_str(f->left()) + ")";
    case Mtcq::Op::Until:
      return "(" + mtcq_str(f->left()) + " UNTIL" + f->window().str() + " " +
             mtcq_str(f->right()) + ")";
    case Mtcq::Op::Since:
      return "(" + mtcq_str(f->left()) + " SINCE" + f->window().str() + " " +
             mtcq_str(f->right()) + ")";
    case Mtcq::Op::Next:
    case Mtcq::Op::Prev:
      throw InputError("punctual operators have no surface syntax");
  }
  return {};
}

}  // namespace

std::string print_kb(const KnowledgeBase& kb) {
  std::string out = "cqproof/1\n";
  for (const auto& e : kb.tbox) {
    if (const auto* ax = std::get_if<DLLiteAxiom>(&e)) {
      out += ax->str() + ".\n";
    } else {
      const auto& r = std::get<ExistentialRule>(e);
      std::string s;
      for (size_t i = 0; i < r.body.size(); ++i) {
        if (i) s += ", ";
        s += pattern_atom_str(r.body[i]);
      }
      s += " -> ";
      if (!r.existential_vars.empty()) {
        s += "exists ";
        for (size_t i = 0; i < r.existential_vars.size(); ++i) {
          if (i) s += ", ";
          s += r.existential_vars[i];
        }
        s += " . ";
      }
      for (size_t i = 0; i < r.head.size(); ++i) {
        if (i) s += ", ";
        s += pattern_atom_str(r.head[i]);
      }
      out += s + ".\n";
    }
  }
  for (const auto& a : kb.abox) out += ground_atom_str(a) + ".\n";
  return out;
}

std::string print_query(const CQ& q, const std::vector<Term>& answers) {
  std::string out = "cqproof/1\nq(";
  for (size_t i = 0; i < q.answer_vars.size(); ++i) {
    if (i) out += ", ";
    out += q.answer_vars[i];
  }
  out += ") :- ";
  for (size_t i = 0; i < q.atoms.size(); ++i) {
    if (i) out += ", ";
    out += pattern_atom_str(q.atoms[i]);
  }
  out += ".\n";
  if (!answers.empty()) {
    out += "answers ";
    for (size_t i = 0; i < answers.size(); ++i) {
      if (i) out += ", ";
      out += answers[i].name();
    }
    out += ".\n";
  }
  return out;
}

std::string print_temporal(const TemporalABox& tabox, const Mtcq::Ptr& query,
                           const std::vector<Term>& answers) {
  std::string out = "cqproof/1\n";
  for (const auto& f : tabox.facts)
    out += ground_atom_str(f.atom) + "@" + f.at.str() + ".\n";
  auto head_vars = query->answer_vars();
  out += "query q(";
  for (size_t i = 0; i < head_vars.size(); ++i) {
    if (i) out += ", ";
    out += head_vars[i];
  }
  out += ") : " + mtcq_str(query) + " .\n";
  if (!answers.empty()) {
    out += "answers ";
    for (size_t i = 0; i < answers.size(); ++i) {
      if (i) out += ", ";
      out += answers[i].name();
    }
    out += ".\n";
  }
  return out;
}

}  // namespace cqproof
