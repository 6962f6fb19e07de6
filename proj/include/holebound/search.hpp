// search.hpp -- hole-bounded reachability.
//
// A run factors into well-nested blocks, holes (maximal trains of pending
// pushes on one stack, each with trailing well-nested padding), and the pops
// that later consume those pushes. The search works on summaries of run
// prefixes: a list of currently open holes, each recorded as its stack plus
// entry/exit endpoints (timed: endpoint states plus the time spent inside),
// and the current state. Three moves grow a summary:
//
//   seed     start at anything well-nested-reachable from the initial state
//   add hole open a new hole whose segment endpoints are known composable
//            atomic segments (a pending push plus well-nested padding)
//   pop      fire a pop consuming the last atomic segment of the rightmost
//            open hole of that stack (splitting off or closing the hole),
//            then glue a well-nested continuation onto the pop target
//
// A summary with no open holes sitting in a final state witnesses
// acceptance. Deepening K = 0, 1, ... finds the minimal number of
// simultaneously open holes. Every explored summary keeps its parent and
// the move that built it, so a concrete run can be reassembled afterwards.

#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <memory>
#include <unordered_set>
#include <variant>
#include <vector>

#include "closure.hpp"
#include "model.hpp"
#include "semantics.hpp"

namespace holebound {

// ---------------------------------------------------------------------------
// Untimed summaries
// ---------------------------------------------------------------------------

struct HoleTriple {
  StackId stack = -1;
  StateId entry = -1;
  StateId exit = -1;
  friend bool operator==(const HoleTriple&, const HoleTriple&) = default;
};

struct UList {
  std::vector<HoleTriple> holes;
  StateId last = -1;
  friend bool operator==(const UList&, const UList&) = default;
};

struct UListHash {
  size_t operator()(const UList& l) const {
    size_t h = std::hash<int>()(l.last);
    for (const HoleTriple& t : l.holes) {
      detail::hash_mix(h, std::hash<int>()(t.stack));
      detail::hash_mix(h, std::hash<int>()(t.entry));
      detail::hash_mix(h, std::hash<int>()(t.exit));
    }
    return h;
  }
};

/// An atomic segment of stack `stack`: one pending push at `src` followed by
/// well-nested padding ending at `exit`. `pushTrans` is the canonical
/// (lowest-id) push transition realizing it.
struct Atomic {
  StateId src = -1;
  SymId sym = -1;
  StateId exit = -1;
  int pushTrans = -1;
};

struct StackSegments {
  std::vector<Atomic> atomics;
  std::vector<std::vector<int>> byExit;  // exit location -> indices into atomics
  BoolRel hs;                            // strict closure of atomic endpoints
};

struct SearchContext {
  const Model* m = nullptr;
  BoolRel wr;
  std::vector<StackSegments> stacks;
  std::vector<std::vector<int>> popsBySrc;  // location -> pop transition ids
};

/// Builds, per stack, the atomic segments (push + absorbed well-nested
/// padding) and the strict transitive closure of their endpoint pairs.
inline SearchContext compute_ahs_hs(const Model& m, BoolRel wr) {
  SearchContext ctx;
  ctx.m = &m;
  ctx.wr = std::move(wr);
  ctx.stacks.resize(static_cast<size_t>(m.numStacks));
  ctx.popsBySrc.resize(static_cast<size_t>(m.locCount()));
  for (const Transition& t : m.trans)
    if (t.kind == OpKind::Pop) ctx.popsBySrc[static_cast<size_t>(t.src)].push_back(t.id);

  for (StackId s = 0; s < m.numStacks; ++s) {
    StackSegments& seg = ctx.stacks[static_cast<size_t>(s)];
    seg.byExit.resize(static_cast<size_t>(m.locCount()));
    BoolRel edges(m.locCount());
    auto seen = [&](StateId src, SymId sym, StateId exit) {
      for (const Atomic& a : seg.atomics)
        if (a.src == src && a.sym == sym && a.exit == exit) return true;
      return false;
    };
    for (const Transition& p : m.trans) {
      if (p.kind != OpKind::Push || p.stack != s) continue;
      for (StateId w = 0; w < m.locCount(); ++w) {
        if (!ctx.wr.get(p.dst, w) || seen(p.src, p.sym, w)) continue;
        seg.byExit[static_cast<size_t>(w)].push_back(static_cast<int>(seg.atomics.size()));
        seg.atomics.push_back({p.src, p.sym, w, p.id});
        edges.set(p.src, w);
      }
    }
    seg.hs = transitive_closure(std::move(edges), false);
  }
  return ctx;
}

// Moves recorded in the exploration tree.
struct SeedOp {
  StateId w;
};
struct HoleOp {
  HoleTriple hole;
};
struct PopOp {
  int holeIdx = -1;        // index of the targeted hole in the parent summary
  HoleTriple parentHole;
  StateId splitMid = -1;   // entry of the consumed atomic; == hole entry when closing
  bool closed = false;
  int atomicIdx = -1;      // consumed atomic, index into StackSegments::atomics
  int popTrans = -1;
  StateId wrTarget = -1;   // state after the glued well-nested continuation
};
using Op = std::variant<SeedOp, HoleOp, PopOp>;

struct Node {
  UList list;
  int parent = -1;
  Op op;
};

/// All summaries reachable from `l` by opening one more hole (subject to the
/// cap) at the current state.
inline std::vector<std::pair<UList, HoleOp>> extend_with_hole(const SearchContext& ctx,
                                                              const UList& l,
                                                              int maxHoles) {
  std::vector<std::pair<UList, HoleOp>> out;
  if (static_cast<int>(l.holes.size()) >= maxHoles) return out;
  for (StackId s = 0; s < ctx.m->numStacks; ++s) {
    const BoolRel& hs = ctx.stacks[static_cast<size_t>(s)].hs;
    for (StateId exit = 0; exit < ctx.m->locCount(); ++exit) {
      if (!hs.get(l.last, exit)) continue;
      UList child = l;
      HoleTriple h{s, l.last, exit};
      child.holes.push_back(h);
      child.last = exit;
      out.emplace_back(std::move(child), HoleOp{h});
    }
  }
  return out;
}

/// All summaries reachable from `l` by firing one pop. The pop must consume
/// the last atomic segment of the rightmost open hole of its stack: either
/// the hole splits (keeping its entry, with a shorter endpoint pair still in
/// the closure) or it had exactly one atomic left and closes. Afterwards a
/// well-nested continuation is glued onto the pop target.
inline std::vector<std::pair<UList, PopOp>> extend_with_pop(const SearchContext& ctx,
                                                            const UList& l) {
  std::vector<std::pair<UList, PopOp>> out;
  const Model& m = *ctx.m;
  for (StackId s = 0; s < m.numStacks; ++s) {
    int holeIdx = -1;
    for (int i = static_cast<int>(l.holes.size()) - 1; i >= 0; --i)
      if (l.holes[static_cast<size_t>(i)].stack == s) {
        holeIdx = i;
        break;
      }
    if (holeIdx < 0) continue;
    const HoleTriple hole = l.holes[static_cast<size_t>(holeIdx)];
    const StackSegments& seg = ctx.stacks[static_cast<size_t>(s)];
    for (int popId : ctx.popsBySrc[static_cast<size_t>(l.last)]) {
      const Transition& q = m.trans[static_cast<size_t>(popId)];
      if (q.stack != s) continue;
      for (int aIdx : seg.byExit[static_cast<size_t>(hole.exit)]) {
        const Atomic& a = seg.atomics[static_cast<size_t>(aIdx)];
        if (a.sym != q.sym) continue;
        auto emit = [&](bool closed) {
          UList child = l;
          if (closed)
            child.holes.erase(child.holes.begin() + holeIdx);
          else
            child.holes[static_cast<size_t>(holeIdx)].exit = a.src;
          for (StateId w = 0; w < m.locCount(); ++w) {
            if (!ctx.wr.get(q.dst, w)) continue;
            UList c = child;
            c.last = w;
            out.emplace_back(std::move(c),
                             PopOp{holeIdx, hole, a.src, closed, aIdx, popId, w});
          }
        };
        if (seg.hs.get(hole.entry, a.src)) emit(false);
        if (a.src == hole.entry) emit(true);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Timed summaries
// ---------------------------------------------------------------------------

struct TimedHole {
  StackId stack = -1;
  int entryTs = -1;
  int exitTs = -1;
  int dur = 0;  // clamped time spent inside the hole
  friend bool operator==(const TimedHole&, const TimedHole&) = default;
};

/// Timed summary. gaps has holes.size()+1 entries: gaps[i] is the clamped
/// time between hole i-1 (or the seed) and hole i; gaps.back() is the time
/// since the last hole. The time inside the seed's well-nested prefix is
/// not tracked: nothing dated before the first hole entry is ever popped.
struct TList {
  std::vector<TimedHole> holes;
  std::vector<int> gaps = {0};
  int last = -1;  // timed-state index
  friend bool operator==(const TList&, const TList&) = default;
};

struct TListHash {
  size_t operator()(const TList& l) const {
    size_t h = std::hash<int>()(l.last);
    for (const TimedHole& t : l.holes) {
      detail::hash_mix(h, std::hash<int>()(t.stack));
      detail::hash_mix(h, std::hash<int>()(t.entryTs));
      detail::hash_mix(h, std::hash<int>()(t.exitTs));
      detail::hash_mix(h, std::hash<int>()(t.dur));
    }
    for (int g : l.gaps) detail::hash_mix(h, std::hash<int>()(g));
    return h;
  }
};

struct TAtomic {
  int srcTs = -1;
  SymId sym = -1;
  int exitTs = -1;
  int dur = 0;
  int pushTrans = -1;
};

struct TStackSegments {
  std::vector<TAtomic> atomics;
  std::vector<std::vector<int>> byExit;  // exit timed state -> atomic indices
  TimedRel hst;                          // strict closure with durations
};

struct TimedSearchContext {
  const Model* m = nullptr;
  TimedStateSpace sp;
  TimedRel wrt;
  std::vector<TStackSegments> stacks;
  std::vector<std::vector<int>> popsByLoc;
};

inline TimedSearchContext compute_ahs_hs_timed(const Model& m, TimedStateSpace sp,
                                               TimedRel wrt) {
  TimedSearchContext ctx;
  ctx.m = &m;
  ctx.sp = std::move(sp);
  ctx.wrt = std::move(wrt);
  ctx.stacks.resize(static_cast<size_t>(m.numStacks));
  ctx.popsByLoc.resize(static_cast<size_t>(m.locCount()));
  for (const Transition& t : m.trans)
    if (t.kind == OpKind::Pop) ctx.popsByLoc[static_cast<size_t>(t.src)].push_back(t.id);

  const TimedStateSpace& spc = ctx.sp;
  for (StackId s = 0; s < m.numStacks; ++s) {
    TStackSegments& seg = ctx.stacks[static_cast<size_t>(s)];
    seg.byExit.resize(static_cast<size_t>(spc.count));
    TimedRel edges(spc.count, spc.durCap);
    std::unordered_set<std::int64_t> seen;
    for (const Transition& p : m.trans) {
      if (p.kind != OpKind::Push || p.stack != s) continue;
      for (int idx = 0; idx < spc.count; ++idx) {
        TimedState ts = spc.decode(idx);
        if (ts.loc != p.src || !guard_satisfied(p.guard, ts.vals)) continue;
        std::vector<std::int64_t> vals = ts.vals;
        TimedStateSpace::applyResets(p, vals);
        int bodyStart = spc.index(p.dst, vals);
        for (int exit = 0; exit < spc.count; ++exit) {
          DurMask mask = ctx.wrt.get(bodyStart, exit);
          if (!mask) continue;
          for (int t = 0; t <= spc.durCap; ++t) {
            if (!(mask & dur_bit(t))) continue;
            std::int64_t key = ((static_cast<std::int64_t>(idx) * spc.count + exit) *
                                    (spc.durCap + 1) +
                                t) *
                                   static_cast<std::int64_t>(m.symNames.size() + 1) +
                               p.sym;
            if (!seen.insert(key).second) continue;
            seg.byExit[static_cast<size_t>(exit)].push_back(
                static_cast<int>(seg.atomics.size()));
            seg.atomics.push_back({idx, p.sym, exit, t, p.id});
            edges.add(idx, exit, dur_bit(t));
          }
        }
      }
    }
    seg.hst = std::move(edges);
    timed_closure_in_place(seg.hst);
  }
  return ctx;
}

struct TSeedOp {
  int wTs;
};
struct THoleOp {
  TimedHole hole;
};
struct TPopOp {
  int holeIdx = -1;
  TimedHole parentHole;
  int splitMidTs = -1;
  bool closed = false;
  int t1 = 0;  // duration left in the hole after the split
  int atomicIdx = -1;
  int popTrans = -1;
  int t4 = 0;  // duration of the glued well-nested continuation
  int wrTargetTs = -1;
};
using TOp = std::variant<TSeedOp, THoleOp, TPopOp>;

struct TimedNode {
  TList list;
  int parent = -1;
  TOp op;
};

inline std::vector<std::pair<TList, THoleOp>> extend_with_hole_timed(
    const TimedSearchContext& ctx, const TList& l, int maxHoles) {
  std::vector<std::pair<TList, THoleOp>> out;
  if (static_cast<int>(l.holes.size()) >= maxHoles) return out;
  for (StackId s = 0; s < ctx.m->numStacks; ++s) {
    const TimedRel& hst = ctx.stacks[static_cast<size_t>(s)].hst;
    for (int exit = 0; exit < ctx.sp.count; ++exit) {
      DurMask mask = hst.get(l.last, exit);
      if (!mask) continue;
      for (int d = 0; d <= ctx.sp.durCap; ++d) {
        if (!(mask & dur_bit(d))) continue;
        TList child = l;
        TimedHole h{s, l.last, exit, d};
        child.holes.push_back(h);
        child.gaps.push_back(0);
        child.last = exit;
        out.emplace_back(std::move(child), THoleOp{h});
      }
    }
  }
  return out;
}

inline std::vector<std::pair<TList, TPopOp>> extend_with_pop_timed(
    const TimedSearchContext& ctx, const TList& l) {
  std::vector<std::pair<TList, TPopOp>> out;
  const Model& m = *ctx.m;
  const TimedStateSpace& sp = ctx.sp;
  TimedState lastTs = sp.decode(l.last);
  for (StackId s = 0; s < m.numStacks; ++s) {
    int holeIdx = -1;
    for (int i = static_cast<int>(l.holes.size()) - 1; i >= 0; --i)
      if (l.holes[static_cast<size_t>(i)].stack == s) {
        holeIdx = i;
        break;
      }
    if (holeIdx < 0) continue;
    const TimedHole hole = l.holes[static_cast<size_t>(holeIdx)];
    const TStackSegments& seg = ctx.stacks[static_cast<size_t>(s)];

    // Clamped time since the targeted hole's exit: the gaps and hole
    // durations strictly to its right.
    std::int64_t t3 = 0;
    for (size_t j = static_cast<size_t>(holeIdx) + 1; j < l.holes.size(); ++j)
      t3 = sat_add(t3, l.holes[j].dur, sp.durCap);
    for (size_t j = static_cast<size_t>(holeIdx) + 1; j < l.gaps.size(); ++j)
      t3 = sat_add(t3, l.gaps[j], sp.durCap);

    for (int popId : ctx.popsByLoc[static_cast<size_t>(lastTs.loc)]) {
      const Transition& q = m.trans[static_cast<size_t>(popId)];
      if (q.stack != s || !guard_satisfied(q.guard, lastTs.vals)) continue;
      std::vector<std::int64_t> popVals = lastTs.vals;
      TimedStateSpace::applyResets(q, popVals);
      int popTargetTs = sp.index(q.dst, popVals);

      for (int aIdx : seg.byExit[static_cast<size_t>(hole.exitTs)]) {
        const TAtomic& a = seg.atomics[static_cast<size_t>(aIdx)];
        if (a.sym != q.sym) continue;
        int t2 = a.dur;
        // Age of the popped symbol: time inside the consumed atomic plus
        // everything after the hole.
        if (!duration_matches_age(
                static_cast<int>(sat_add(t2, t3, sp.durCap)), q.age, sp.durCap))
          continue;

        auto glue = [&](TList child, bool closed, int t1) {
          for (int w = 0; w < sp.count; ++w) {
            DurMask mask = ctx.wrt.get(popTargetTs, w);
            if (!mask) continue;
            for (int t4 = 0; t4 <= sp.durCap; ++t4) {
              if (!(mask & dur_bit(t4))) continue;
              TList c = child;
              c.last = w;
              c.gaps.back() = static_cast<int>(sat_add(c.gaps.back(), t4, sp.durCap));
              out.emplace_back(std::move(c), TPopOp{holeIdx, hole, a.srcTs, closed, t1,
                                                    aIdx, popId, t4, w});
            }
          }
        };

        // Split: the hole keeps its entry and ends where the atomic began.
        DurMask headMask = seg.hst.get(hole.entryTs, a.srcTs);
        if (headMask) {
          for (int t1 = 0; t1 <= sp.durCap; ++t1) {
            if (!(headMask & dur_bit(t1))) continue;
            bool durOk = hole.dur < sp.durCap
                             ? t1 + t2 == hole.dur
                             : sat_add(t1, t2, sp.durCap) == sp.durCap;
            if (!durOk) continue;
            TList child = l;
            child.holes[static_cast<size_t>(holeIdx)].exitTs = a.srcTs;
            child.holes[static_cast<size_t>(holeIdx)].dur = t1;
            child.gaps[static_cast<size_t>(holeIdx) + 1] = static_cast<int>(
                sat_add(t2, child.gaps[static_cast<size_t>(holeIdx) + 1], sp.durCap));
            glue(std::move(child), false, t1);
          }
        }
        // Close: the hole was exactly this one atomic.
        if (a.srcTs == hole.entryTs && a.dur == hole.dur) {
          TList child = l;
          std::int64_t merged =
              sat_add(sat_add(child.gaps[static_cast<size_t>(holeIdx)], hole.dur,
                              sp.durCap),
                      child.gaps[static_cast<size_t>(holeIdx) + 1], sp.durCap);
          child.holes.erase(child.holes.begin() + holeIdx);
          child.gaps.erase(child.gaps.begin() + holeIdx);
          child.gaps[static_cast<size_t>(holeIdx)] = static_cast<int>(merged);
          glue(std::move(child), true, 0);
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The deepening driver
// ---------------------------------------------------------------------------

struct StageStats {
  int k = 0;
  long lists = 0;
  long wrSize = 0;
  std::string outcome;  // "reachable" | "empty" | "budget"
};

enum class SearchOutcome { Reachable, Empty, Budget };

struct SearchOptions {
  long budget = -1;              // < 0: min(|S|^(2K+3) * n^(K+1), 1e7)
  bool acceptOpenHoles = false;  // accept at a final state even with open holes
  bool requireProgress = false;  // do not accept bare seed summaries
};

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::Empty;
  int holeBound = -1;  // minimal K when Reachable
  int maxHoles = 0;
  bool timed = false;
  std::vector<StageStats> stats;
  long dedupPeak = 0;  // largest per-stage summary count

  std::shared_ptr<SearchContext> ctx;
  std::vector<Node> tree;
  int acceptingNode = -1;

  std::shared_ptr<TimedSearchContext> tctx;
  std::vector<TimedNode> ttree;
  int acceptingTNode = -1;
};

inline long default_budget(long stateCount, int numStacks, int maxHoles) {
  long double b = std::pow(static_cast<long double>(stateCount),
                           static_cast<long double>(2 * maxHoles + 3)) *
                  std::pow(static_cast<long double>(numStacks),
                           static_cast<long double>(maxHoles + 1));
  if (b > 1e7L) return 10000000L;
  return static_cast<long>(b);
}

namespace detail {

template <typename ListT, typename NodeT, typename HashT, typename SeedF,
          typename ExtendF, typename AcceptF>
inline bool run_stage(int k, long budget, std::vector<NodeT>& nodes, int& acceptingIdx,
                      long& listCount, SeedF&& seed, ExtendF&& extend,
                      AcceptF&& accepts, bool& budgetHit) {
  std::unordered_set<ListT, HashT> seen;
  std::deque<int> queue;
  acceptingIdx = -1;
  listCount = 0;
  budgetHit = false;
  bool found = false;

  auto tryInsert = [&](NodeT node) {
    if (found || budgetHit) return;
    if (!seen.insert(node.list).second) return;
    if (listCount >= budget) {
      budgetHit = true;
      return;
    }
    ++listCount;
    nodes.push_back(std::move(node));
    int idx = static_cast<int>(nodes.size()) - 1;
    queue.push_back(idx);
    if (accepts(nodes[static_cast<size_t>(idx)])) {
      acceptingIdx = idx;
      found = true;
    }
  };

  seed(tryInsert);
  while (!found && !budgetHit && !queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    ListT list = nodes[static_cast<size_t>(idx)].list;  // copy: nodes may grow
    extend(list, idx, k, tryInsert);
  }
  return found;
}

}  // namespace detail

/// Decides whether some accepting run opens at most maxHoles holes at any
/// point, deepening K = 0..maxHoles and returning the minimal K on success.
/// The exploration tree of the successful stage is kept for witness
/// reassembly. Per stage, explored summary counts and the closure size are
/// recorded; if a stage exceeds the budget the result is Budget.
inline SearchResult check_reachable(const Model& m, int maxHoles,
                                    SearchOptions opts = {}) {
  SearchResult res;
  res.maxHoles = maxHoles;
  res.timed = m.timed;

  auto acceptLast = [&](StateId loc, bool holesEmpty, bool isSeed) {
    if (opts.requireProgress && isSeed) return false;
    if (!opts.acceptOpenHoles && !holesEmpty) return false;
    return m.isFinal(loc);
  };

  if (!m.timed) {
    res.ctx = std::make_shared<SearchContext>(compute_ahs_hs(m, compute_wr(m)));
    const SearchContext& ctx = *res.ctx;
    long budget = opts.budget >= 0
                      ? opts.budget
                      : default_budget(m.locCount(), m.numStacks, maxHoles);
    for (int k = 0; k <= maxHoles; ++k) {
      res.tree.clear();
      long listCount = 0;
      bool budgetHit = false;
      bool found = detail::run_stage<UList, Node, UListHash>(
          k, budget, res.tree, res.acceptingNode, listCount,
          [&](auto& insert) {
            for (StateId w = 0; w < m.locCount(); ++w)
              if (ctx.wr.get(m.initial, w)) insert(Node{UList{{}, w}, -1, SeedOp{w}});
          },
          [&](const UList& list, int idx, int cap, auto& insert) {
            for (auto& [child, op] : extend_with_hole(ctx, list, cap))
              insert(Node{std::move(child), idx, op});
            for (auto& [child, op] : extend_with_pop(ctx, list))
              insert(Node{std::move(child), idx, op});
          },
          [&](const Node& n) {
            return acceptLast(n.list.last, n.list.holes.empty(),
                              std::holds_alternative<SeedOp>(n.op));
          },
          budgetHit);
      res.dedupPeak = std::max(res.dedupPeak, listCount);
      res.stats.push_back({k, listCount, ctx.wr.count(),
                           found ? "reachable" : budgetHit ? "budget" : "empty"});
      if (found) {
        res.outcome = SearchOutcome::Reachable;
        res.holeBound = k;
        return res;
      }
      if (budgetHit) {
        res.outcome = SearchOutcome::Budget;
        return res;
      }
    }
    res.outcome = SearchOutcome::Empty;
    return res;
  }

  TimedStateSpace sp = enumerate_states(m);
  TimedRel wrt = compute_wrt(m, sp);
  res.tctx = std::make_shared<TimedSearchContext>(
      compute_ahs_hs_timed(m, std::move(sp), std::move(wrt)));
  const TimedSearchContext& ctx = *res.tctx;
  long budget = opts.budget >= 0
                    ? opts.budget
                    : default_budget(ctx.sp.count, m.numStacks, maxHoles);
  for (int k = 0; k <= maxHoles; ++k) {
    res.ttree.clear();
    long listCount = 0;
    bool budgetHit = false;
    bool found = detail::run_stage<TList, TimedNode, TListHash>(
        k, budget, res.ttree, res.acceptingTNode, listCount,
        [&](auto& insert) {
          int init = ctx.sp.initialIndex();
          for (int w = 0; w < ctx.sp.count; ++w)
            if (ctx.wrt.get(init, w)) insert(TimedNode{TList{{}, {0}, w}, -1, TSeedOp{w}});
        },
        [&](const TList& list, int idx, int cap, auto& insert) {
          for (auto& [child, op] : extend_with_hole_timed(ctx, list, cap))
            insert(TimedNode{std::move(child), idx, op});
          for (auto& [child, op] : extend_with_pop_timed(ctx, list))
            insert(TimedNode{std::move(child), idx, op});
        },
        [&](const TimedNode& n) {
          return acceptLast(ctx.sp.decode(n.list.last).loc, n.list.holes.empty(),
                            std::holds_alternative<TSeedOp>(n.op));
        },
        budgetHit);
    res.dedupPeak = std::max(res.dedupPeak, listCount);
    res.stats.push_back({k, listCount, ctx.wrt.entryCount(),
                         found ? "reachable" : budgetHit ? "budget" : "empty"});
    if (found) {
      res.outcome = SearchOutcome::Reachable;
      res.holeBound = k;
      return res;
    }
    if (budgetHit) {
      res.outcome = SearchOutcome::Budget;
      return res;
    }
  }
  res.outcome = SearchOutcome::Empty;
  return res;
}

// ---------------------------------------------------------------------------
// Repeated reachability (untimed): can the target be visited infinitely
// often? Three notions, from most to least restrictive:
//   1  the whole run is a well-nested reach of the target followed by
//      nonempty well-nested loops at it
//   2  an accepting-style reach (empty stacks at the target, hole-bounded)
//      followed by nonempty well-nested loops
//   3  reach with arbitrary leftover stack contents, then progress-making
//      loops that may also leave pushes pending forever
// ---------------------------------------------------------------------------

inline bool repeated_reachability(const Model& m, StateId target, int mode,
                                  int maxHoles = 2) {
  if (m.timed)
    throw std::invalid_argument("repeated_reachability supports untimed models only");
  if (target < 0 || target >= m.locCount())
    throw std::invalid_argument("target is not a declared location");
  if (mode < 1 || mode > 3) throw std::invalid_argument("mode must be 1, 2 or 3");

  BoolRel wr = compute_wr(m);
  BoolRel wrne = compute_wr_nonempty(m, wr);
  bool loopWn = wrne.get(target, target);

  if (mode == 1) return wr.get(m.initial, target) && loopWn;

  if (mode == 2) {
    if (!loopWn) return false;
    Model reach = m;
    reach.finals = {target};
    SearchResult r = check_reachable(reach, maxHoles);
    if (r.outcome == SearchOutcome::Budget)
      throw std::runtime_error("repeated_reachability: search budget exceeded");
    return r.outcome == SearchOutcome::Reachable;
  }

  Model reach = m;
  reach.finals = {target};
  SearchOptions open;
  open.acceptOpenHoles = true;
  SearchResult r1 = check_reachable(reach, maxHoles, open);
  if (r1.outcome == SearchOutcome::Budget)
    throw std::runtime_error("repeated_reachability: search budget exceeded");
  if (r1.outcome != SearchOutcome::Reachable) return false;
  if (loopWn) return true;
  Model loop = reach;
  loop.initial = target;
  SearchOptions progress = open;
  progress.requireProgress = true;
  SearchResult r2 = check_reachable(loop, maxHoles, progress);
  if (r2.outcome == SearchOutcome::Budget)
    throw std::runtime_error("repeated_reachability: search budget exceeded");
  return r2.outcome == SearchOutcome::Reachable;
}

}  // namespace holebound
