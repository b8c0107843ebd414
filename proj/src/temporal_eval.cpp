#include "cqproof/temporal.hpp"

#include <algorithm>

#include "cqproof/chase.hpp"

namespace cqproof {

void TemporalABox::add(Atom a, Interval at) {
  if (!a.ground()) throw InputError("temporal facts must be ground: " + a.str());
  for (const auto& t : a.args)
    if (!t.is_constant()) throw InputError("temporal facts may only use constants");
  facts.push_back({std::move(a), at});
}

int64_t TemporalABox::temporal_magnitude() const {
  int64_t total = 0;
  for (const auto& f : facts) total += f.at.finite() ? f.at.length() : 1;
  return total;
}

namespace {

std::vector<TimePoint> ruler_boundaries(const TemporalABox& tabox) {
  // Segment starts: every fact's lo and the point after its hi.
  std::vector<TimePoint> cuts;
  for (const auto& f : tabox.facts) {
    if (f.at.lo.finite()) cuts.push_back(f.at.lo);
    if (f.at.hi.finite()) cuts.push_back(f.at.hi + 1);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

std::vector<Interval> compute_rulers(const TemporalABox& tabox, const Interval& window) {
  if (!window.finite()) throw InputError("compute_rulers: window must be finite");
  std::vector<TimePoint> cuts = ruler_boundaries(tabox);
  std::vector<int64_t> starts{window.lo.value};
  for (const auto& c : cuts)
    if (window.lo < c && c <= window.hi) starts.push_back(c.value);
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  std::vector<Interval> out;
  for (size_t i = 0; i < starts.size(); ++i) {
    int64_t hi = i + 1 < starts.size() ? starts[i + 1] - 1 : window.hi.value;
    out.push_back(Interval::closed(starts[i], hi));
  }
  return out;
}

std::vector<Interval> compute_rulers_unbounded(const TemporalABox& tabox) {
  std::vector<TimePoint> cuts = ruler_boundaries(tabox);
  std::vector<Interval> out;
  TimePoint lo = TimePoint::neg_inf();
  for (const auto& c : cuts) {
    out.push_back(Interval(lo, c - 1));
    lo = c;
  }
  out.push_back(Interval(lo, TimePoint::pos_inf()));
  return out;
}

std::vector<Atom> slice_at(const TemporalABox& tabox, const Interval& ruler) {
  std::vector<Atom> out;
  for (const auto& f : tabox.facts) {
    if (f.at.contains(ruler)) {
      if (std::find(out.begin(), out.end(), f.atom) == out.end()) out.push_back(f.atom);
    }
  }
  return out;
}

namespace {

// Truth bits over [lo, lo + size) per formula node.
struct EvalContext {
  const KnowledgeBase* kb;
  const TemporalABox* tabox;
  int64_t lo = 0;
  size_t size = 0;

  bool in_range(int64_t t) const { return t >= lo && t < lo + static_cast<int64_t>(size); }
};

std::vector<bool> eval_bits(const EvalContext& ctx, const Mtcq::Ptr& f);

std::vector<bool> leaf_bits(const EvalContext& ctx, const CQ& cq) {
  // One atemporal chase per ruler; all points of a ruler share the verdict.
  std::vector<bool> bits(ctx.size, false);
  Interval window = Interval::closed(ctx.lo, ctx.lo + static_cast<int64_t>(ctx.size) - 1);
  for (const auto& ruler : compute_rulers(*ctx.tabox, window)) {
    KnowledgeBase slice;
    slice.tbox = ctx.kb->tbox;
    for (const auto& a : slice_at(*ctx.tabox, ruler)) slice.add_assertion(a);
    bool holds = false;
    if (!slice.abox.empty()) {
      auto chased = chase(slice, slice.skolemized_tbox(),
                          ChaseConfig{default_depth_bound(slice, cq), 100000});
      holds = !match(cq.atoms, chased.facts).empty();
    }
    if (!holds) continue;
    for (int64_t t = ruler.lo.value; t <= ruler.hi.value; ++t)
      if (ctx.in_range(t)) bits[t - ctx.lo] = true;
  }
  return bits;
}

std::vector<bool> eval_bits(const EvalContext& ctx, const Mtcq::Ptr& f) {
  auto at = [&](const std::vector<bool>& bits, int64_t t) -> bool {
    return ctx.in_range(t) && bits[t - ctx.lo];
  };
  std::vector<bool> out(ctx.size, false);
  switch (f->op()) {
    case Mtcq::Op::CqLeaf:
      return leaf_bits(ctx, f->cq());
    case Mtcq::Op::Top:
      return std::vector<bool>(ctx.size, true);
    case Mtcq::Op::And: {
      auto l = eval_bits(ctx, f->left()), r = eval_bits(ctx, f->right());
      for (size_t i = 0; i < ctx.size; ++i) out[i] = l[i] && r[i];
      return out;
    }
    case Mtcq::Op::Or: {
      auto l = eval_bits(ctx, f->left()), r = eval_bits(ctx, f->right());
      for (size_t i = 0; i < ctx.size; ++i) out[i] = l[i] || r[i];
      return out;
    }
    case Mtcq::Op::BoxPlus:
    case Mtcq::Op::Next: {
      auto sub = eval_bits(ctx, f->left());
      int64_t r1 = f->window().lo.value, r2 = f->window().hi.value;
      for (size_t i = 0; i < ctx.size; ++i) {
        int64_t t = ctx.lo + static_cast<int64_t>(i);
        bool all = true;
        for (int64_t k = r1; k <= r2 && all; ++k) all = at(sub, t + k);
        out[i] = all;
      }
      return out;
    }
    case Mtcq::Op::BoxMinus:
    case Mtcq::Op::Prev: {
      auto sub = eval_bits(ctx, f->left());
      int64_t r1 = f->window().lo.value, r2 = f->window().hi.value;
      for (size_t i = 0; i < ctx.size; ++i) {
        int64_t t = ctx.lo + static_cast<int64_t>(i);
        bool all = true;
        for (int64_t k = r1; k <= r2 && all; ++k) all = at(sub, t - k);
        out[i] = all;
      }
      return out;
    }
    case Mtcq::Op::Until: {
      auto l = eval_bits(ctx, f->left()), r = eval_bits(ctx, f->right());
      int64_t r1 = f->window().lo.value, r2 = f->window().hi.value;
      for (size_t i = 0; i < ctx.size; ++i) {
        int64_t t = ctx.lo + static_cast<int64_t>(i);
        for (int64_t k = r1; k <= r2; ++k) {
          if (!at(r, t + k)) continue;
          bool fill = true;
          for (int64_t j = 0; j < k && fill; ++j) fill = at(l, t + j);
          if (fill) {
            out[i] = true;
            break;
          }
        }
      }
      return out;
    }
    case Mtcq::Op::Since: {
      auto l = eval_bits(ctx, f->left()), r = eval_bits(ctx, f->right());
      int64_t r1 = f->window().lo.value, r2 = f->window().hi.value;
      for (size_t i = 0; i < ctx.size; ++i) {
        int64_t t = ctx.lo + static_cast<int64_t>(i);
        for (int64_t k = r1; k <= r2; ++k) {
          if (!at(r, t - k)) continue;
          bool fill = true;
          for (int64_t j = 0; j < k && fill; ++j) fill = at(l, t - j);
          if (fill) {
            out[i] = true;
            break;
          }
        }
      }
      return out;
    }
  }
  return out;
}

}  // namespace

std::vector<Interval> eval_mtcq(const KnowledgeBase& kb, const TemporalABox& tabox,
                                const Mtcq::Ptr& query, const std::vector<Term>& answers,
                                const Interval& window) {
  if (!window.finite()) throw InputError("eval_mtcq: window must be finite");
  Mtcq::Ptr bound = bind_answers(query, answers);
  EvalContext ctx;
  ctx.kb = &kb;
  ctx.tabox = &tabox;
  ctx.lo = window.lo.value - bound->past_reach();
  ctx.size = static_cast<size_t>(window.hi.value + bound->future_reach() - ctx.lo + 1);
  auto bits = eval_bits(ctx, bound);

  std::vector<Interval> out;
  std::optional<int64_t> start;
  for (int64_t t = window.lo.value; t <= window.hi.value + 1; ++t) {
    bool b = t <= window.hi.value && bits[t - ctx.lo];
    if (b && !start) start = t;
    if (!b && start) {
      out.push_back(Interval::closed(*start, t - 1));
      start.reset();
    }
  }
  return out;
}

Mtcq::Ptr expand_next_form(const Mtcq::Ptr& f) {
  switch (f->op()) {
    case Mtcq::Op::CqLeaf:
    case Mtcq::Op::Top:
      return f;
    case Mtcq::Op::And:
      return Mtcq::conj(expand_next_form(f->left()), expand_next_form(f->right()));
    case Mtcq::Op::Or:
      return Mtcq::disj(expand_next_form(f->left()), expand_next_form(f->right()));
    case Mtcq::Op::Next:
      return Mtcq::next(expand_next_form(f->left()));
    case Mtcq::Op::Prev:
      return Mtcq::prev(expand_next_form(f->left()));
    case Mtcq::Op::BoxPlus: {
      if (!f->window().finite()) throw InputError("expand_next_form: infinite window");
      int64_t r1 = f->window().lo.value, r2 = f->window().hi.value;
      Mtcq::Ptr sub = expand_next_form(f->left());
      if (r1 > 0) return Mtcq::next(expand_next_form(
          Mtcq::box_plus(Interval::closed(r1 - 1, r2 - 1), sub)));
      if (r2 > 0)
        return Mtcq::conj(sub, Mtcq::next(expand_next_form(
                                   Mtcq::box_plus(Interval::closed(0, r2 - 1), sub))));
      return sub;
    }
    case Mtcq::Op::BoxMinus: {
      int64_t r1 = f->window().lo.value, r2 = f->window().hi.value;
      Mtcq::Ptr sub = expand_next_form(f->left());
      if (r1 > 0) return Mtcq::prev(expand_next_form(
          Mtcq::box_minus(Interval::closed(r1 - 1, r2 - 1), sub)));
      if (r2 > 0)
        return Mtcq::conj(sub, Mtcq::prev(expand_next_form(
                                   Mtcq::box_minus(Interval::closed(0, r2 - 1), sub))));
      return sub;
    }
    case Mtcq::Op::Until: {
      int64_t r1 = f->window().lo.value, r2 = f->window().hi.value;
      Mtcq::Ptr l = expand_next_form(f->left()), r = expand_next_form(f->right());
      if (r1 > 0)
        return Mtcq::conj(l, Mtcq::next(expand_next_form(
                                 Mtcq::until(Interval::closed(r1 - 1, r2 - 1), l, r))));
      if (r2 > 0)
        return Mtcq::disj(r, Mtcq::conj(l, Mtcq::next(expand_next_form(Mtcq::until(
                                               Interval::closed(0, r2 - 1), l, r)))));
      return r;
    }
    case Mtcq::Op::Since: {
      int64_t r1 = f->window().lo.value, r2 = f->window().hi.value;
      Mtcq::Ptr l = expand_next_form(f->left()), r = expand_next_form(f->right());
      if (r1 > 0)
        return Mtcq::conj(l, Mtcq::prev(expand_next_form(
                                 Mtcq::since(Interval::closed(r1 - 1, r2 - 1), l, r))));
      if (r2 > 0)
        return Mtcq::disj(r, Mtcq::conj(l, Mtcq::prev(expand_next_form(Mtcq::since(
                                               Interval::closed(0, r2 - 1), l, r)))));
      return r;
    }
  }
  return f;
}

}  // namespace cqproof
