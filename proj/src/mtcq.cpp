#include "cqproof/mtcq.hpp"

#include <algorithm>

namespace cqproof {

namespace {

void check_window(const Interval& w) {
  if (!w.finite() || w.lo.value < 0)
    throw InputError("temporal operator windows must be finite with non-negative endpoints, got " +
                     w.str());
}

CQ dummy_cq() { return CQ({}, {Atom::unary("top", Term::constant("t"))}); }

}  // namespace

Mtcq::Ptr Mtcq::leaf(CQ q) {
  return Ptr(new Mtcq(Op::CqLeaf, std::move(q), Interval::closed(0, 0), nullptr, nullptr));
}

Mtcq::Ptr Mtcq::top() {
  return Ptr(new Mtcq(Op::Top, dummy_cq(), Interval::closed(0, 0), nullptr, nullptr));
}

Mtcq::Ptr Mtcq::conj(Ptr l, Ptr r) {
  return Ptr(new Mtcq(Op::And, dummy_cq(), Interval::closed(0, 0), std::move(l), std::move(r)));
}

Mtcq::Ptr Mtcq::disj(Ptr l, Ptr r) {
  return Ptr(new Mtcq(Op::Or, dummy_cq(), Interval::closed(0, 0), std::move(l), std::move(r)));
}

Mtcq::Ptr Mtcq::box_plus(Interval w, Ptr f) {
  check_window(w);
  return Ptr(new Mtcq(Op::BoxPlus, dummy_cq(), w, std::move(f), nullptr));
}

Mtcq::Ptr Mtcq::box_minus(Interval w, Ptr f) {
  check_window(w);
  return Ptr(new Mtcq(Op::BoxMinus, dummy_cq(), w, std::move(f), nullptr));
}

Mtcq::Ptr Mtcq::until(Interval w, Ptr l, Ptr r) {
  check_window(w);
  return Ptr(new Mtcq(Op::Until, dummy_cq(), w, std::move(l), std::move(r)));
}

Mtcq::Ptr Mtcq::since(Interval w, Ptr l, Ptr r) {
  check_window(w);
  return Ptr(new Mtcq(Op::Since, dummy_cq(), w, std::move(l), std::move(r)));
}

Mtcq::Ptr Mtcq::next(Ptr f) {
  return Ptr(new Mtcq(Op::Next, dummy_cq(), Interval::closed(1, 1), std::move(f), nullptr));
}

Mtcq::Ptr Mtcq::prev(Ptr f) {
  return Ptr(new Mtcq(Op::Prev, dummy_cq(), Interval::closed(1, 1), std::move(f), nullptr));
}

bool Mtcq::is_temporal_free() const {
  switch (op_) {
    case Op::CqLeaf:
    case Op::Top:
      return true;
    case Op::And:
    case Op::Or:
      return left_->is_temporal_free() && right_->is_temporal_free();
    default:
      return false;
  }
}

bool Mtcq::contains_top() const {
  if (op_ == Op::Top) return true;
  if (left_ && left_->contains_top()) return true;
  return right_ && right_->contains_top();
}

int64_t Mtcq::future_reach() const {
  switch (op_) {
    case Op::CqLeaf:
    case Op::Top:
      return 0;
    case Op::And:
    case Op::Or:
      return std::max(left_->future_reach(), right_->future_reach());
    case Op::BoxPlus:
    case Op::Next:
      return window_.hi.value + left_->future_reach();
    case Op::BoxMinus:
    case Op::Prev:
      return std::max<int64_t>(0, left_->future_reach() - window_.lo.value);
    case Op::Until:
      return window_.hi.value + std::max(left_->future_reach(), right_->future_reach());
    case Op::Since:
      return std::max(left_->future_reach(),
                      std::max<int64_t>(0, right_->future_reach() - window_.lo.value));
  }
  return 0;
}

int64_t Mtcq::past_reach() const {
  switch (op_) {
    case Op::CqLeaf:
    case Op::Top:
      return 0;
    case Op::And:
    case Op::Or:
      return std::max(left_->past_reach(), right_->past_reach());
    case Op::BoxMinus:
    case Op::Prev:
      return window_.hi.value + left_->past_reach();
    case Op::BoxPlus:
    case Op::Next:
      return std::max<int64_t>(0, left_->past_reach() - window_.lo.value);
    case Op::Since:
      return window_.hi.value + std::max(left_->past_reach(), right_->past_reach());
    case Op::Until:
      return std::max(right_->past_reach(), left_->past_reach());
  }
  return 0;
}

std::vector<std::string> Mtcq::answer_vars() const {
  if (op_ == Op::CqLeaf) return cq_.answer_vars;
  if (left_) {
    auto l = left_->answer_vars();
    if (!l.empty()) return l;
  }
  if (right_) return right_->answer_vars();
  return {};
}

std::string Mtcq::str() const {
  switch (op_) {
    case Op::CqLeaf:
      return "{" + cq_.str() + "}";
    case Op::Top:
      return "TOP";
    case Op::And:
      return "(" + left_->str() + " AND " + right_->str() + ")";
    case Op::Or:
      return "(" + left_->str() + " OR " + right_->str() + ")";
    case Op::BoxPlus:
      return "BOXP" + window_.str() + " " + left_->str();
    case Op::BoxMinus:
      return "BOXM" + window_.str() + " " + left_->str();
    case Op::Until:
      return "(" + left_->str() + " UNTIL" + window_.str() + " " + right_->str() + ")";
    case Op::Since:
      return "(" + left_->str() + " SINCE" + window_.str() + " " + right_->str() + ")";
    case Op::Next:
      return "NEXT " + left_->str();
    case Op::Prev:
      return "PREV " + left_->str();
  }
  return {};
}

bool Mtcq::equal_upto_renaming(const Mtcq& o) const {
  if (op_ != o.op_) return false;
  switch (op_) {
    case Op::CqLeaf:
      return cq_equal(cq_, o.cq_);
    case Op::Top:
      return true;
    case Op::And:
    case Op::Or:
      return left_->equal_upto_renaming(*o.left_) && right_->equal_upto_renaming(*o.right_);
    case Op::Next:
    case Op::Prev:
      return left_->equal_upto_renaming(*o.left_);
    case Op::BoxPlus:
    case Op::BoxMinus:
      return window_ == o.window_ && left_->equal_upto_renaming(*o.left_);
    case Op::Until:
    case Op::Since:
      return window_ == o.window_ && left_->equal_upto_renaming(*o.left_) &&
             right_->equal_upto_renaming(*o.right_);
  }
  return false;
}

Mtcq::Ptr bind_answers(const Mtcq::Ptr& f, const std::vector<Term>& answers) {
  switch (f->op()) {
    case Mtcq::Op::CqLeaf:
      return Mtcq::leaf(bind_answers(f->cq(), answers));
    case Mtcq::Op::Top:
      return f;
    case Mtcq::Op::And:
      return Mtcq::conj(bind_answers(f->left(), answers), bind_answers(f->right(), answers));
    case Mtcq::Op::Or:
      return Mtcq::disj(bind_answers(f->left(), answers), bind_answers(f->right(), answers));
    case Mtcq::Op::BoxPlus:
      return Mtcq::box_plus(f->window(), bind_answers(f->left(), answers));
    case Mtcq::Op::BoxMinus:
      return Mtcq::box_minus(f->window(), bind_answers(f->left(), answers));
    case Mtcq::Op::Until:
      return Mtcq::until(f->window(), bind_answers(f->left(), answers),
                         bind_answers(f->right(), answers));
    case Mtcq::Op::Since:
      return Mtcq::since(f->window(), bind_answers(f->left(), answers),
                         bind_answers(f->right(), answers));
    case Mtcq::Op::Next:
      return Mtcq::next(bind_answers(f->left(), answers));
    case Mtcq::Op::Prev:
      return Mtcq::prev(bind_answers(f->left(), answers));
  }
  return f;
}

}  // namespace cqproof
