#ifndef CQPROOF_TERM_HPP
#define CQPROOF_TERM_HPP

#include <memory>
#include <stdexcept>
#include <string>

namespace cqproof {

/// First-order terms: individual names, variables, and unary Skolem terms.
/// Immutable value type with a total order (used for deterministic output).
class Term {
 public:
  enum class Kind { Constant, Variable, Skolem };

  static Term constant(std::string name);
  static Term variable(std::string name);
  static Term skolem(std::string fn, Term argument);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Term& argument() const;

  bool is_constant() const { return kind_ == Kind::Constant; }
  bool is_variable() const { return kind_ == Kind::Variable; }
  bool is_skolem() const { return kind_ == Kind::Skolem; }
  bool is_ground() const { return kind_ != Kind::Variable && ground_; }

  /// Nesting depth: constants and variables have depth 0, f(t) has depth(t)+1.
  int depth() const { return depth_; }

  std::string str() const;

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const;

 private:
  Term(Kind k, std::string n, std::shared_ptr<const Term> arg, int depth, bool ground)
      : kind_(k), name_(std::move(n)), arg_(std::move(arg)), depth_(depth), ground_(ground) {}

  Kind kind_;
  std::string name_;
  std::shared_ptr<const Term> arg_;  // only for Skolem
  int depth_ = 0;
  bool ground_ = true;
};

/// Thrown on malformed input (bad identifiers, arity mismatches, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a configured resource cap is exceeded (fact cap, search cap).
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a stated precondition does not hold (e.g. the entailment
/// prerequisite of the optimal-proof decision problem).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool valid_identifier(const std::string& s);

}  // namespace cqproof

#endif
