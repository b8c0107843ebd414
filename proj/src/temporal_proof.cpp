#include "cqproof/temporal_proof.hpp"

#include <algorithm>
#include <functional>

namespace cqproof {

namespace {

struct Piece {
  Interval at;
  VertexId vertex;
};

struct ProverState {
  const TemporalGoal* goal;
  std::vector<Interval> rulers;  // left to right, covering the timeline
  ProofGraph graph;
  // One leaf (plus separation) per (fact index, ruler) actually used.
  std::map<std::pair<size_t, std::string>, VertexId> fact_at_ruler;
};

// Sorts, merges and coalesces pieces into maximal intervals, emitting COAL
// edges for merged runs.
std::vector<Piece> coalesce_pieces(ProverState& st, const Mtcq::Ptr& formula,
                                   std::vector<Piece> pieces) {
  if (pieces.empty()) return pieces;
  std::sort(pieces.begin(), pieces.end(),
            [](const Piece& a, const Piece& b) { return a.at < b.at; });
  // Drop pieces already covered by another piece.
  std::vector<Piece> kept;
  for (const auto& p : pieces) {
    bool covered = std::any_of(pieces.begin(), pieces.end(), [&](const Piece& q) {
      return !(q.at == p.at) && q.at.contains(p.at);
    });
    if (!covered && !std::any_of(kept.begin(), kept.end(),
                                 [&](const Piece& q) { return q.at == p.at; }))
      kept.push_back(p);
  }
  std::vector<Piece> out;
  size_t i = 0;
  while (i < kept.size()) {
    size_t j = i;
    Interval acc = kept[i].at;
    std::vector<VertexId> members{kept[i].vertex};
    while (j + 1 < kept.size()) {
      auto u = union_if_contiguous(acc, kept[j + 1].at);
      if (!u) break;
      acc = *u;
      members.push_back(kept[j + 1].vertex);
      ++j;
    }
    if (members.size() == 1) {
      out.push_back(kept[i]);
    } else {
      VertexId v = st.graph.add_vertex(Sentence(AnnotatedFormula{formula, acc}));
      st.graph.add_edge(members, v, "COAL");
      out.push_back({acc, v});
    }
    i = j + 1;
  }
  return out;
}

// Shrinks a piece to a subinterval, adding one separation step if needed.
VertexId separated(ProverState& st, const Mtcq::Ptr& formula, const Piece& piece,
                   const Interval& target) {
  if (piece.at == target) return piece.vertex;
  VertexId v = st.graph.add_vertex(Sentence(AnnotatedFormula{formula, target}));
  st.graph.add_edge({piece.vertex}, v, "SEP");
  return v;
}

// Atemporal proof of a CQ leaf over one ruler's slice, temporalized: rule
// applications become temporal modus ponens at the ruler's interval, ABox
// leaves become temporal facts separated onto the ruler.
std::optional<VertexId> prove_leaf_at_ruler(ProverState& st, const CQ& leaf,
                                            const Interval& ruler) {
  const TemporalGoal& goal = *st.goal;
  KnowledgeBase slice;
  slice.tbox = goal.kb.tbox;
  std::vector<size_t> fact_index_of;  // per slice.abox entry, the tabox fact
  for (size_t fi = 0; fi < goal.tabox.facts.size(); ++fi) {
    const auto& f = goal.tabox.facts[fi];
    if (!f.at.contains(ruler)) continue;
    if (std::find(slice.abox.begin(), slice.abox.end(), f.atom) != slice.abox.end()) continue;
    slice.add_assertion(f.atom);
    fact_index_of.push_back(fi);
  }
  if (slice.abox.empty()) return std::nullopt;

  SearchGoal sg;
  sg.kb = slice;
  sg.query = leaf;
  sg.answer = {};
  sg.deriver = Deriver::Sk;
  sg.measure = Measure::TreeSize;
  sg.depth_bound = goal.depth_bound;
  sg.fact_cap = goal.fact_cap;
  SearchResult atemporal;
  try {
    atemporal = min_tree_size(sg);
  } catch (const PreconditionError&) {
    return std::nullopt;
  }

  // Copy the proof into the temporal graph, annotating every CQ vertex with
  // the ruler's interval.
  std::map<VertexId, VertexId> remap;
  const ProofGraph& g = atemporal.proof.graph;
  for (VertexId v : g.topological_order()) {
    const Sentence& label = g.label(v);
    if (const CQ* cq = as_cq(label)) {
      if (g.incoming(v).empty()) {
        // An ABox leaf: ground it in its temporal fact, separated if needed.
        const Atom& atom = cq->atoms[0];
        size_t fi = goal.tabox.facts.size();
        for (size_t k = 0; k < goal.tabox.facts.size(); ++k) {
          const auto& f = goal.tabox.facts[k];
          if (f.atom == atom && f.at.contains(ruler)) {
            fi = k;
            break;
          }
        }
        if (fi == goal.tabox.facts.size())
          throw InputError("temporal proof: slice atom lost its fact");
        auto key = std::make_pair(fi, ruler.str());
        auto it = st.fact_at_ruler.find(key);
        if (it == st.fact_at_ruler.end()) {
          const auto& f = goal.tabox.facts[fi];
          VertexId leaf_v =
              st.graph.add_vertex(Sentence(AnnotatedFormula{Mtcq::leaf(CQ({}, {f.atom})), f.at}));
          VertexId here = leaf_v;
          if (!(f.at == ruler)) {
            here = st.graph.add_vertex(
                Sentence(AnnotatedFormula{Mtcq::leaf(CQ({}, {f.atom})), ruler}));
            st.graph.add_edge({leaf_v}, here, "SEP");
          }
          it = st.fact_at_ruler.emplace(key, here).first;
        }
        remap.emplace(v, it->second);
      } else {
        VertexId nv = st.graph.add_vertex(Sentence(AnnotatedFormula{Mtcq::leaf(*cq), ruler}));
        remap.emplace(v, nv);
      }
    } else {
      // Global TBox axioms stay atemporal.
      remap.emplace(v, st.graph.add_vertex(label));
    }
  }
  for (const auto& e : g.edges()) {
    if (g.incoming(e.target).empty()) continue;
    std::vector<VertexId> sources;
    for (VertexId s : e.sources) sources.push_back(remap.at(s));
    std::string rule = e.rule == "MPs" ? "TMP" : e.rule;
    if (!g.incoming(e.target).empty() && remap.count(e.target))
      st.graph.add_edge(std::move(sources), remap.at(e.target), rule);
  }
  return remap.at(atemporal.proof.sink);
}

std::vector<Piece> derive(ProverState& st, const Mtcq::Ptr& f);

std::vector<Piece> derive_leaf(ProverState& st, const Mtcq::Ptr& f) {
  std::vector<Piece> pieces;
  for (const auto& ruler : st.rulers) {
    auto v = prove_leaf_at_ruler(st, f->cq(), ruler);
    if (v) pieces.push_back({ruler, *v});
  }
  return coalesce_pieces(st, f, std::move(pieces));
}

std::vector<Piece> derive(ProverState& st, const Mtcq::Ptr& f) {
  switch (f->op()) {
    case Mtcq::Op::CqLeaf:
      return derive_leaf(st, f);
    case Mtcq::Op::Top:
      throw InputError("temporal proof: TOP is trivially valid and is not proved");
    case Mtcq::Op::And: {
      auto ls = derive(st, f->left());
      auto rs = derive(st, f->right());
      std::vector<Piece> pieces;
      for (const auto& l : ls) {
        for (const auto& r : rs) {
          auto common = intersect(l.at, r.at);
          if (!common) continue;
          VertexId lv = separated(st, f->left(), l, *common);
          VertexId rv = separated(st, f->right(), r, *common);
          VertexId v = st.graph.add_vertex(Sentence(AnnotatedFormula{f, *common}));
          st.graph.add_edge({lv, rv}, v, "CONJ");
          pieces.push_back({*common, v});
        }
      }
      return coalesce_pieces(st, f, std::move(pieces));
    }
    case Mtcq::Op::Or: {
      std::vector<Piece> pieces;
      for (int side = 0; side < 2; ++side) {
        for (const auto& p : derive(st, side == 0 ? f->left() : f->right())) {
          VertexId v = st.graph.add_vertex(Sentence(AnnotatedFormula{f, p.at}));
          st.graph.add_edge({p.vertex}, v, "DISJ");
          pieces.push_back({p.at, v});
        }
      }
      return coalesce_pieces(st, f, std::move(pieces));
    }
    case Mtcq::Op::BoxPlus:
    case Mtcq::Op::BoxMinus: {
      bool future = f->op() == Mtcq::Op::BoxPlus;
      std::vector<Piece> pieces;
      for (const auto& p : derive(st, f->left())) {
        TimePoint lo = future ? p.at.lo - f->window().lo.value : p.at.lo + f->window().hi.value;
        TimePoint hi = future ? p.at.hi - f->window().hi.value : p.at.hi + f->window().lo.value;
        if (!(lo <= hi)) continue;
        VertexId v = st.graph.add_vertex(Sentence(AnnotatedFormula{f, Interval(lo, hi)}));
        st.graph.add_edge({p.vertex}, v, future ? "BOX+" : "BOX-");
        pieces.push_back({Interval(lo, hi), v});
      }
      return coalesce_pieces(st, f, std::move(pieces));
    }
    case Mtcq::Op::Until:
    case Mtcq::Op::Since: {
      bool future = f->op() == Mtcq::Op::Until;
      const Interval& w = f->window();
      auto ls = derive(st, f->left());
      auto rs = derive(st, f->right());
      std::vector<Piece> pieces;
      if (w.lo.value == 0) {
        for (const auto& r : rs) {
          VertexId v = st.graph.add_vertex(Sentence(AnnotatedFormula{f, r.at}));
          st.graph.add_edge({r.vertex}, v, future ? "U" : "S");
          pieces.push_back({r.at, v});
        }
      }
      if (w.hi.value >= 1) {
        Interval effective = w.lo.value > 0 ? w : Interval::closed(1, w.hi.value);
        for (const auto& l : ls) {
          for (const auto& r : rs) {
            auto nu = intersect(l.at.shifted(future ? 1 : -1), r.at);
            if (!nu) continue;
            auto pulled = future ? interval_minus(*nu, effective) : interval_plus(*nu, effective);
            if (!pulled) continue;
            auto at = intersect(*pulled, l.at);
            if (!at) continue;
            VertexId v = st.graph.add_vertex(Sentence(AnnotatedFormula{f, *at}));
            st.graph.add_edge({l.vertex, r.vertex}, v, future ? "U" : "S");
            pieces.push_back({*at, v});
          }
        }
      }
      return coalesce_pieces(st, f, std::move(pieces));
    }
    case Mtcq::Op::Next:
    case Mtcq::Op::Prev:
      throw InputError("temporal proof: punctual next/previous appears only in expanded forms");
  }
  return {};
}

Proof prune_from(const ProofGraph& g, VertexId sink) {
  std::vector<bool> keep(g.vertex_count(), false);
  std::vector<VertexId> stack{sink};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    if (keep[v]) continue;
    keep[v] = true;
    for (int ei : g.incoming(v))
      for (VertexId s : g.edges()[ei].sources) stack.push_back(s);
  }
  Proof out;
  std::map<VertexId, VertexId> remap;
  for (VertexId v = 0; v < g.vertex_count(); ++v)
    if (keep[v]) remap.emplace(v, out.graph.add_vertex(g.label(v)));
  for (const auto& e : g.edges()) {
    if (!keep[e.target] || !remap.count(e.target)) continue;
    bool all = std::all_of(e.sources.begin(), e.sources.end(),
                           [&](VertexId s) { return keep[s]; });
    if (!all) continue;
    std::vector<VertexId> src;
    for (VertexId s : e.sources) src.push_back(remap.at(s));
    out.graph.add_edge(std::move(src), remap.at(e.target), e.rule);
  }
  out.sink = remap.at(sink);
  return out;
}

ProverState make_state(const TemporalGoal& goal, const Mtcq::Ptr& bound) {
  ProverState st;
  st.goal = &goal;
  st.rulers = compute_rulers_unbounded(goal.tabox);
  if (goal.at.finite()) {
    // Only rulers within the query's temporal reach of the target can
    // contribute to a proof; the others are dropped (never clipped).
    int64_t reach = bound->future_reach() + bound->past_reach() + 1;
    Interval window = Interval::closed(goal.at.lo.value - reach, goal.at.hi.value + reach);
    std::vector<Interval> kept;
    for (const auto& r : st.rulers)
      if (intersect(r, window)) kept.push_back(r);
    st.rulers = std::move(kept);
  }
  return st;
}

}  // namespace

std::vector<Interval> temporal_certain_intervals(const TemporalGoal& goal) {
  Mtcq::Ptr bound = bind_answers(goal.query, goal.answer);
  if (bound->contains_top())
    throw InputError("temporal proof: TOP is trivially valid and is not proved");
  ProverState st = make_state(goal, bound);
  std::vector<Interval> out;
  for (const auto& p : derive(st, bound)) out.push_back(p.at);
  std::sort(out.begin(), out.end());
  return out;
}

TemporalProofResult temporal_min_proof(const TemporalGoal& goal) {
  Mtcq::Ptr bound = bind_answers(goal.query, goal.answer);
  if (bound->contains_top())
    throw InputError("temporal proof: TOP is trivially valid and is not proved");
  ProverState st = make_state(goal, bound);
  auto pieces = derive(st, bound);

  TemporalProofResult result;
  for (const auto& p : pieces) result.derived_intervals.push_back(p.at);
  std::sort(result.derived_intervals.begin(), result.derived_intervals.end());

  const Piece* covering = nullptr;
  for (const auto& p : pieces)
    if (p.at.contains(goal.at)) covering = &p;
  if (!covering)
    throw PreconditionError("the temporal entailment prerequisite does not hold at " +
                            goal.at.str());
  VertexId sink = separated(st, bound, *covering, goal.at);
  result.proof = prune_from(st.graph, sink);
  result.tree_size_value = tree_size(result.proof);
  return result;
}

uint64_t temporal_proof_bound(const TemporalGoal& goal) {
  Mtcq::Ptr bound = bind_answers(goal.query, goal.answer);
  // Count formula nodes and the largest CQ leaf.
  std::function<uint64_t(const Mtcq::Ptr&)> nodes = [&](const Mtcq::Ptr& f) -> uint64_t {
    uint64_t n = 1;
    if (f->left()) n += nodes(f->left());
    if (f->right()) n += nodes(f->right());
    return n;
  };
  std::function<uint64_t(const Mtcq::Ptr&)> leaf_atoms = [&](const Mtcq::Ptr& f) -> uint64_t {
    if (f->op() == Mtcq::Op::CqLeaf) return f->cq().atoms.size();
    uint64_t n = 0;
    if (f->left()) n = std::max(n, leaf_atoms(f->left()));
    if (f->right()) n = std::max(n, leaf_atoms(f->right()));
    return n;
  };
  uint64_t rulers = compute_rulers_unbounded(goal.tabox).size();
  if (goal.at.finite()) {
    int64_t reach = bound->future_reach() + bound->past_reach() + 1;
    rulers = std::min<uint64_t>(rulers, static_cast<uint64_t>(goal.at.length() + 2 * reach + 2));
  }
  KnowledgeBase canonical_kb;
  canonical_kb.tbox = goal.kb.tbox;
  int depth =
      goal.depth_bound ? *goal.depth_bound
                       : static_cast<int>((goal.kb.tbox.size() + 1) * std::max<uint64_t>(1, leaf_atoms(bound)));
  uint64_t per_leaf = 2 + leaf_atoms(bound) * (2 * static_cast<uint64_t>(depth) + 3) +
                      goal.tabox.facts.size() + 2;
  return nodes(bound) * (rulers + 2) * (rulers + 2) * (per_leaf + 6);
}

}  // namespace cqproof
