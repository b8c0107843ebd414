#include "cqproof/temporal_schemas.hpp"

#include <algorithm>

#include "cqproof/chase.hpp"
#include "cqproof/sk_schemas.hpp"

namespace cqproof {

namespace {

std::optional<Interval> box_plus_interval(const Interval& at, const Interval& w) {
  TimePoint lo = at.lo - w.lo.value;
  TimePoint hi = at.hi - w.hi.value;
  if (!(lo <= hi)) return std::nullopt;
  return Interval(lo, hi);
}

std::optional<Interval> box_minus_interval(const Interval& at, const Interval& w) {
  TimePoint lo = at.lo + w.hi.value;
  TimePoint hi = at.hi + w.lo.value;
  if (!(lo <= hi)) return std::nullopt;
  return Interval(lo, hi);
}

// All points where the right premise holds immediately after a left-premise
// point, pulled back through the metric window and clipped to the left
// premise's interval.
std::optional<Interval> until_interval(const Interval& left, const Interval& right,
                                       const Interval& w) {
  auto nu = intersect(left.shifted(1), right);
  if (!nu) return std::nullopt;
  auto pulled = interval_minus(*nu, w);
  if (!pulled) return std::nullopt;
  return intersect(*pulled, left);
}

std::optional<Interval> since_interval(const Interval& left, const Interval& right,
                                       const Interval& w) {
  auto nu = intersect(left.shifted(-1), right);
  if (!nu) return std::nullopt;
  auto pushed = interval_plus(*nu, w);
  if (!pushed) return std::nullopt;
  return intersect(*pushed, left);
}

Interval coalesced(const std::vector<AnnotatedFormula>& premises) {
  std::vector<Interval> ivs;
  for (const auto& p : premises) ivs.push_back(p.at);
  std::sort(ivs.begin(), ivs.end());
  Interval acc = ivs.front();
  for (size_t i = 1; i < ivs.size(); ++i) {
    auto u = union_if_contiguous(acc, ivs[i]);
    if (!u) throw InputError("coalescing: the union is not a single interval");
    acc = *u;
  }
  return acc;
}

}  // namespace

AnnotatedFormula infer_temporal(TemporalKind kind, const std::vector<AnnotatedFormula>& premises,
                                const TemporalParams& params) {
  auto need = [&](size_t n) {
    if (premises.size() != n)
      throw InputError("temporal inference: wrong number of premises");
  };
  switch (kind) {
    case TemporalKind::Tmp: {
      if (premises.empty()) throw InputError("temporal modus ponens: no premises");
      if (!params.sk_rule || !params.pi)
        throw InputError("temporal modus ponens: rule and match required");
      Interval at = premises[0].at;
      std::vector<Atom> atoms;
      for (const auto& p : premises) {
        if (!(p.at == at))
          throw InputError("temporal modus ponens: premises must share one interval");
        if (p.formula->op() != Mtcq::Op::CqLeaf || p.formula->cq().atoms.size() != 1)
          throw InputError("temporal modus ponens: premises must be single atoms");
        atoms.push_back(p.formula->cq().atoms[0]);
      }
      auto heads = infer_mps(atoms, *params.sk_rule, *params.pi);
      if (heads.empty()) throw InputError("temporal modus ponens: empty head");
      return {Mtcq::leaf(CQ({}, {heads.front()})), at};
    }
    case TemporalKind::CsT: {
      if (premises.empty()) throw InputError("temporal conjunction: no premises");
      Interval at = premises[0].at;
      std::vector<Atom> atoms;
      for (const auto& p : premises) {
        if (!(p.at == at)) throw InputError("temporal conjunction: intervals differ");
        atoms.push_back(p.formula->cq().atoms.at(0));
      }
      return {Mtcq::leaf(infer_cs(atoms)), at};
    }
    case TemporalKind::EsT: {
      need(1);
      if (!params.abstract_to) throw InputError("temporal abstraction: target required");
      auto sigma = find_es_substitution(premises[0].formula->cq(), *params.abstract_to);
      if (!sigma) throw InputError("temporal abstraction: no positional substitution");
      return {Mtcq::leaf(*params.abstract_to), premises[0].at};
    }
    case TemporalKind::Conj: {
      need(2);
      if (!(premises[0].at == premises[1].at))
        throw InputError("conjunction: premises must share one interval");
      return {Mtcq::conj(premises[0].formula, premises[1].formula), premises[0].at};
    }
    case TemporalKind::Disj: {
      need(1);
      if (!params.other) throw InputError("disjunction: missing disjunct");
      Mtcq::Ptr f = params.premise_is_right
                        ? Mtcq::disj(params.other, premises[0].formula)
                        : Mtcq::disj(premises[0].formula, params.other);
      return {f, premises[0].at};
    }
    case TemporalKind::Coal: {
      if (premises.size() < 2) throw InputError("coalescing: needs at least two premises");
      for (size_t i = 1; i < premises.size(); ++i)
        if (!premises[i].formula->equal_upto_renaming(*premises[0].formula))
          throw InputError("coalescing: premises must be identical up to renaming");
      return {premises[0].formula, coalesced(premises)};
    }
    case TemporalKind::Sep: {
      need(1);
      if (!params.target) throw InputError("separation: target interval required");
      if (!premises[0].at.contains(*params.target))
        throw InputError("separation: target is not a subinterval");
      return {premises[0].formula, *params.target};
    }
    case TemporalKind::BoxPlus:
    case TemporalKind::BoxMinus: {
      need(1);
      if (!params.window) throw InputError("box: metric window required");
      auto at = kind == TemporalKind::BoxPlus ? box_plus_interval(premises[0].at, *params.window)
                                              : box_minus_interval(premises[0].at, *params.window);
      if (!at) throw InputError("box: the produced interval is empty");
      Mtcq::Ptr f = kind == TemporalKind::BoxPlus
                        ? Mtcq::box_plus(*params.window, premises[0].formula)
                        : Mtcq::box_minus(*params.window, premises[0].formula);
      return {f, *at};
    }
    case TemporalKind::Until:
    case TemporalKind::Since: {
      if (!params.window) throw InputError("until/since: metric window required");
      const Interval& w = *params.window;
      bool future = kind == TemporalKind::Until;
      if (w.lo.value == 0 && premises.size() == 1) {
        // The lower-bound-zero case: the right side holding now suffices.
        if (!params.other) throw InputError("until/since: missing left formula");
        Mtcq::Ptr f = future ? Mtcq::until(w, params.other, premises[0].formula)
                             : Mtcq::since(w, params.other, premises[0].formula);
        return {f, premises[0].at};
      }
      need(2);
      Interval effective = w.lo.value > 0 ? w : Interval::closed(1, w.hi.value);
      if (w.hi.value < 1 && w.lo.value == 0)
        throw InputError("until/since: use the single-premise form for [0,0]");
      auto at = future ? until_interval(premises[0].at, premises[1].at, effective)
                       : since_interval(premises[0].at, premises[1].at, effective);
      if (!at) throw InputError("until/since: the produced interval is empty");
      Mtcq::Ptr f = future ? Mtcq::until(w, premises[0].formula, premises[1].formula)
                           : Mtcq::since(w, premises[0].formula, premises[1].formula);
      return {f, *at};
    }
  }
  throw InputError("unknown temporal inference");
}

TemporalChecker::TemporalChecker(KnowledgeBase kb, TemporalABox tabox)
    : kb_(std::move(kb)), tabox_(std::move(tabox)) {}

std::optional<std::string> TemporalChecker::admissible(const std::vector<Sentence>& premises,
                                                       const Sentence& conclusion) const {
  const AnnotatedFormula* concl = as_annotated(conclusion);
  if (!concl) return std::nullopt;

  std::vector<AnnotatedFormula> annotated;
  std::vector<const Sentence*> rules;
  for (const auto& p : premises) {
    if (const auto* a = as_annotated(p))
      annotated.push_back(*a);
    else
      rules.push_back(&p);
  }

  // Temporal modus ponens: atom premises at one interval plus a global rule.
  if (rules.size() == 1 && concl->formula->op() == Mtcq::Op::CqLeaf) {
    auto idx = tbox_index_of(kb_, *rules[0]);
    if (idx && concl->formula->cq().atoms.size() == 1 &&
        concl->formula->cq().ground()) {
      bool same = std::all_of(annotated.begin(), annotated.end(), [&](const AnnotatedFormula& a) {
        return a.at == concl->at && a.formula->op() == Mtcq::Op::CqLeaf &&
               a.formula->cq().atoms.size() == 1 && a.formula->cq().ground();
      });
      if (same && !annotated.empty()) {
        SkolemRule rule = skolemize(tbox_rule(kb_.tbox[*idx]), std::to_string(*idx));
        std::vector<Atom> atoms;
        for (const auto& a : annotated) atoms.push_back(a.formula->cq().atoms[0]);
        std::set<Atom> premise_set(atoms.begin(), atoms.end());
        const Atom& target = concl->formula->cq().atoms[0];
        for (const auto& pi : match(rule.body, atoms)) {
          std::set<Atom> image;
          for (const auto& b : rule.body) image.insert(substitute(pi, b));
          if (image != premise_set) continue;
          for (const auto& h : rule.head)
            if (substitute(pi, h) == target) return "TMP";
        }
      }
    }
  }
  if (!rules.empty()) return std::nullopt;

  // Ground conjunction at one interval.
  if (concl->formula->op() == Mtcq::Op::CqLeaf && annotated.size() >= 1 &&
      concl->formula->cq().ground()) {
    const auto& catoms = concl->formula->cq().atoms;
    if (catoms.size() == annotated.size()) {
      bool all = true;
      for (size_t i = 0; i < annotated.size() && all; ++i) {
        all = annotated[i].at == concl->at &&
              annotated[i].formula->op() == Mtcq::Op::CqLeaf &&
              annotated[i].formula->cq().atoms.size() == 1 &&
              annotated[i].formula->cq().atoms[0] == catoms[i];
      }
      if (all && annotated.size() >= 2) return "Cs";
    }
  }

  // Positional abstraction at one interval.
  if (annotated.size() == 1 && concl->formula->op() == Mtcq::Op::CqLeaf &&
      annotated[0].formula->op() == Mtcq::Op::CqLeaf && annotated[0].at == concl->at &&
      annotated[0].formula->cq().ground() && !concl->formula->cq().ground()) {
    if (find_es_substitution(annotated[0].formula->cq(), concl->formula->cq())) return "Es";
  }

  // Formula-level conjunction.
  if (annotated.size() == 2 && concl->formula->op() == Mtcq::Op::And &&
      annotated[0].at == concl->at && annotated[1].at == concl->at &&
      concl->formula->left()->equal_upto_renaming(*annotated[0].formula) &&
      concl->formula->right()->equal_upto_renaming(*annotated[1].formula))
    return "CONJ";

  // Disjunct introduction.
  if (annotated.size() == 1 && concl->formula->op() == Mtcq::Op::Or &&
      annotated[0].at == concl->at &&
      (concl->formula->left()->equal_upto_renaming(*annotated[0].formula) ||
       concl->formula->right()->equal_upto_renaming(*annotated[0].formula)))
    return "DISJ";

  // Coalescing.
  if (annotated.size() >= 2) {
    bool same = std::all_of(annotated.begin(), annotated.end(), [&](const AnnotatedFormula& a) {
      return a.formula->equal_upto_renaming(*concl->formula);
    });
    if (same) {
      try {
        if (coalesced(annotated) == concl->at) return "COAL";
      } catch (const InputError&) {
      }
    }
  }

  // Separation.
  if (annotated.size() == 1 && annotated[0].formula->equal_upto_renaming(*concl->formula) &&
      annotated[0].at.contains(concl->at))
    return "SEP";

  // Metric operators.
  if (annotated.size() == 1 &&
      (concl->formula->op() == Mtcq::Op::BoxPlus || concl->formula->op() == Mtcq::Op::BoxMinus)) {
    if (concl->formula->left()->equal_upto_renaming(*annotated[0].formula)) {
      auto at = concl->formula->op() == Mtcq::Op::BoxPlus
                    ? box_plus_interval(annotated[0].at, concl->formula->window())
                    : box_minus_interval(annotated[0].at, concl->formula->window());
      if (at && *at == concl->at)
        return concl->formula->op() == Mtcq::Op::BoxPlus ? "BOX+" : "BOX-";
    }
  }
  if (concl->formula->op() == Mtcq::Op::Until || concl->formula->op() == Mtcq::Op::Since) {
    bool future = concl->formula->op() == Mtcq::Op::Until;
    const Interval& w = concl->formula->window();
    if (annotated.size() == 1 && w.lo.value == 0 &&
        concl->formula->right()->equal_upto_renaming(*annotated[0].formula) &&
        annotated[0].at == concl->at)
      return future ? "U" : "S";
    if (annotated.size() == 2 && w.hi.value >= 1 &&
        concl->formula->left()->equal_upto_renaming(*annotated[0].formula) &&
        concl->formula->right()->equal_upto_renaming(*annotated[1].formula)) {
      Interval effective = w.lo.value > 0 ? w : Interval::closed(1, w.hi.value);
      auto at = future ? until_interval(annotated[0].at, annotated[1].at, effective)
                       : since_interval(annotated[0].at, annotated[1].at, effective);
      if (at && *at == concl->at) return future ? "U" : "S";
    }
  }
  return std::nullopt;
}

bool TemporalChecker::grounded(const Sentence& leaf) const {
  if (std::holds_alternative<DLLiteAxiom>(leaf) || std::holds_alternative<ExistentialRule>(leaf))
    return tbox_index_of(kb_, leaf).has_value();
  const AnnotatedFormula* a = as_annotated(leaf);
  if (!a || a->formula->op() != Mtcq::Op::CqLeaf) return false;
  const CQ& cq = a->formula->cq();
  if (cq.atoms.size() != 1 || !cq.ground()) return false;
  return std::any_of(tabox_.facts.begin(), tabox_.facts.end(), [&](const TemporalFact& f) {
    return f.atom == cq.atoms[0] && f.at == a->at;
  });
}

std::shared_ptr<TemporalChecker> temporal_schema_checker(const KnowledgeBase& kb,
                                                         const TemporalABox& tabox) {
  return std::make_shared<TemporalChecker>(kb, tabox);
}

}  // namespace cqproof
