#include "cqproof/term.hpp"

#include <cctype>

namespace cqproof {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return true;
}

static void check_name(const std::string& n, const char* what) {
  if (!valid_identifier(n)) throw InputError(std::string("invalid ") + what + ": '" + n + "'");
}

Term Term::constant(std::string name) {
  check_name(name, "constant name");
  return Term(Kind::Constant, std::move(name), nullptr, 0, true);
}

Term Term::variable(std::string name) {
  check_name(name, "variable name");
  return Term(Kind::Variable, std::move(name), nullptr, 0, false);
}

Term Term::skolem(std::string fn, Term argument) {
  check_name(fn, "skolem function name");
  int d = argument.depth() + 1;
  bool g = argument.is_ground();
  return Term(Kind::Skolem, std::move(fn), std::make_shared<const Term>(std::move(argument)), d, g);
}

const Term& Term::argument() const {
  if (!arg_) throw InputError("term has no argument");
  return *arg_;
}

std::string Term::str() const {
  switch (kind_) {
    case Kind::Constant:
      return name_;
    case Kind::Variable:
      return "?" + name_;
    case Kind::Skolem:
      return name_ + "(" + arg_->str() + ")";
  }
  return {};
}

bool Term::operator==(const Term& o) const {
  if (kind_ != o.kind_ || name_ != o.name_) return false;
  if (kind_ != Kind::Skolem) return true;
  return *arg_ == *o.arg_;
}

bool Term::operator<(const Term& o) const {
  if (kind_ != o.kind_) return static_cast<int>(kind_) < static_cast<int>(o.kind_);
  if (name_ != o.name_) return name_ < o.name_;
  if (kind_ != Kind::Skolem) return false;
  return *arg_ < *o.arg_;
}

}  // namespace cqproof
