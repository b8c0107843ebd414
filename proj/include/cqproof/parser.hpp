#ifndef CQPROOF_PARSER_HPP
#define CQPROOF_PARSER_HPP

#include "cqproof/temporal.hpp"

namespace cqproof {

/// Syntax error with location. `unsupported` distinguishes constructs that
/// are recognized but outside DL-Lite_R (or otherwise unsupported) from
/// plain malformed input.
class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, int line, int column, bool unsupported = false)
      : InputError(msg + " (line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ")"),
        line(line),
        column(column),
        unsupported(unsupported) {}
  int line;
  int column;
  bool unsupported;
};

/// Line-oriented knowledge-base files ('.'-terminated statements):
///   cqproof/1                      header
///   B sub exists P.                concept inclusion
///   P rsub R-.                     role inclusion
///   A(x), R(x,y) -> exists u . S(y,u).          existential rule
///   B(b).  P(a,b).                 assertions
///   A(a)@[0,5].                    temporal assertion (see parse_temporal)
/// In rule atoms, bare identifiers are variables and '$name' denotes a
/// constant. '#' starts a comment.
KnowledgeBase parse_kb(const std::string& text);

/// Query files:
///   cqproof/1
///   q(x) :- R(x,y), T(y,z).
///   answers b.                     (optional answer tuple)
/// Bare identifiers in atoms are variables; '$name' is a constant.
struct ParsedQuery {
  CQ query;
  std::vector<Term> answers;
};
ParsedQuery parse_query(const std::string& text);

/// Temporal files: temporal assertions plus one metric query,
///   A(a)@[0,5].
///   query q(x) : BOXP[1,2] { A(x) } .
/// with TOP, AND, OR, BOXP/BOXM/UNTIL/SINCE[l,u] and '{ atoms }' CQ leaves.
struct ParsedTemporal {
  TemporalABox tabox;
  Mtcq::Ptr query;
  std::vector<Term> answers;
};
ParsedTemporal parse_temporal(const std::string& text);

std::string print_kb(const KnowledgeBase& kb);
std::string print_query(const CQ& q, const std::vector<Term>& answers);
std::string print_temporal(const TemporalABox& tabox, const Mtcq::Ptr& query,
                           const std::vector<Term>& answers);

/// Term surface forms: 'b' constant, '?x' variable, 'f(b)' skolem.
Term parse_term(const std::string& s);
std::string print_term(const Term& t);

}  // namespace cqproof

#endif
