#ifndef CQPROOF_MTCQ_HPP
#define CQPROOF_MTCQ_HPP

#include <memory>

#include "cqproof/cq.hpp"
#include "cqproof/interval.hpp"

namespace cqproof {

/// Metric temporal conjunctive queries:
///   phi ::= psi | TOP | phi AND phi | phi OR phi
///         | BOXP[I] phi | BOXM[I] phi | phi UNTIL[I] phi | phi SINCE[I] phi
/// where psi is a CQ and I is a finite interval with non-negative endpoints.
/// NEXT/PREV are the punctual operators produced by next-form expansion.
class Mtcq {
 public:
  enum class Op { CqLeaf, Top, And, Or, BoxPlus, BoxMinus, Until, Since, Next, Prev };
  using Ptr = std::shared_ptr<const Mtcq>;

  static Ptr leaf(CQ q);
  static Ptr top();
  static Ptr conj(Ptr l, Ptr r);
  static Ptr disj(Ptr l, Ptr r);
  static Ptr box_plus(Interval w, Ptr f);
  static Ptr box_minus(Interval w, Ptr f);
  static Ptr until(Interval w, Ptr l, Ptr r);
  static Ptr since(Interval w, Ptr l, Ptr r);
  static Ptr next(Ptr f);
  static Ptr prev(Ptr f);

  Op op() const { return op_; }
  const CQ& cq() const { return cq_; }
  const Interval& window() const { return window_; }
  const Ptr& left() const { return left_; }
  const Ptr& right() const { return right_; }

  bool is_temporal_free() const;  // only CqLeaf/Top/And/Or
  bool contains_top() const;
  /// How far (in time points) the truth value at a point may depend on
  /// other points, in each direction.
  int64_t future_reach() const;
  int64_t past_reach() const;
  int64_t temporal_extent() const { return future_reach() + past_reach(); }
  /// Free (answer) variables, shared across all CQ leaves.
  std::vector<std::string> answer_vars() const;

  std::string str() const;
  bool equal_upto_renaming(const Mtcq& o) const;

 private:
  Mtcq(Op op, CQ cq, Interval w, Ptr l, Ptr r)
      : op_(op), cq_(std::move(cq)), window_(w), left_(std::move(l)), right_(std::move(r)) {}

  Op op_;
  CQ cq_;
  Interval window_;
  Ptr left_, right_;
};

/// An MTCQ (or a plain CQ / ground conjunction, as a leaf) annotated with a
/// validity interval.
struct AnnotatedFormula {
  Mtcq::Ptr formula;
  Interval at;

  std::string str() const { return formula->str() + " @ " + at.str(); }
  bool operator==(const AnnotatedFormula& o) const {
    return at == o.at && formula->equal_upto_renaming(*o.formula);
  }
};

/// Substitutes the answer variables in every CQ leaf.
Mtcq::Ptr bind_answers(const Mtcq::Ptr& f, const std::vector<Term>& answers);

}  // namespace cqproof

#endif
