// closure.hpp -- well-nested reachability.
//
// A run fragment is well-nested when it starts and ends with all stacks
// empty relative to its start: every push made inside it is popped inside
// it, and it never pops anything pushed before it. The untimed relation WR
// over control locations is computed as a least fixpoint: nop edges, then
// alternating transitive-closure and "wrap" passes, where a wrap edge
// (s, s') exists for a push at s whose matching pop at some location v
// reaches s' and whose body (push target to v) is already in the relation.
//
// The timed variant works over (location, clamped clock valuation) states.
// Each clock is clamped at its largest guard constant plus one; entry
// durations are clamped at the largest finite age constant plus one and kept
// as bitsets, composed with saturating addition. A clamped (saturated)
// duration is compatible with an age interval only if the interval is
// unbounded above - for finite upper bounds the clamp may hide a violation.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "model.hpp"

namespace holebound {

// ---------------------------------------------------------------------------
// Plain boolean relations over locations
// ---------------------------------------------------------------------------

struct BoolRel {
  int n = 0;
  std::vector<char> bits;
  BoolRel() = default;
  explicit BoolRel(int n_) : n(n_), bits(static_cast<size_t>(n_) * n_, 0) {}
  bool get(int i, int j) const {
    return bits[static_cast<size_t>(i) * n + static_cast<size_t>(j)] != 0;
  }
  void set(int i, int j, bool v = true) {
    bits[static_cast<size_t>(i) * n + static_cast<size_t>(j)] = v ? 1 : 0;
  }
  long count() const {
    long c = 0;
    for (char b : bits) c += b != 0;
    return c;
  }
  friend bool operator==(const BoolRel&, const BoolRel&) = default;
};

/// Warshall closure. With reflexive=true the diagonal is seeded first
/// (paths of length >= 0); otherwise the result relates i to j exactly when
/// a path of length >= 1 exists.
inline BoolRel transitive_closure(BoolRel r, bool reflexive) {
  if (reflexive)
    for (int i = 0; i < r.n; ++i) r.set(i, i);
  for (int k = 0; k < r.n; ++k)
    for (int i = 0; i < r.n; ++i) {
      if (!r.get(i, k)) continue;
      for (int j = 0; j < r.n; ++j)
        if (r.get(k, j)) r.set(i, j);
    }
  return r;
}

inline std::vector<std::pair<int, int>> rel_pairs(const BoolRel& r) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j)
      if (r.get(i, j)) out.emplace_back(i, j);
  return out;
}

/// Well-nested reachability over control locations (untimed models; for
/// timed models this ignores guards and is not meaningful - use
/// compute_wrt).
inline BoolRel compute_wr(const Model& m) {
  BoolRel r(m.locCount());
  for (const Transition& t : m.trans)
    if (t.kind == OpKind::Nop) r.set(t.src, t.dst);
  r = transitive_closure(std::move(r), true);
  for (;;) {
    bool changed = false;
    for (const Transition& p : m.trans) {
      if (p.kind != OpKind::Push) continue;
      for (const Transition& q : m.trans) {
        if (q.kind != OpKind::Pop || q.stack != p.stack || q.sym != p.sym) continue;
        if (r.get(p.dst, q.src) && !r.get(p.src, q.dst)) {
          r.set(p.src, q.dst);
          changed = true;
        }
      }
    }
    if (!changed) break;
    r = transitive_closure(std::move(r), true);
  }
  return r;
}

/// Variant requiring at least one transition: the strict transitive closure
/// of nop edges and single-wrap edges (whose bodies use the full relation).
/// (s,s) here means a nonempty well-nested loop at s.
inline BoolRel compute_wr_nonempty(const Model& m, const BoolRel& wr) {
  BoolRel e(m.locCount());
  for (const Transition& t : m.trans)
    if (t.kind == OpKind::Nop) e.set(t.src, t.dst);
  for (const Transition& p : m.trans) {
    if (p.kind != OpKind::Push) continue;
    for (const Transition& q : m.trans)
      if (q.kind == OpKind::Pop && q.stack == p.stack && q.sym == p.sym &&
          wr.get(p.dst, q.src))
        e.set(p.src, q.dst);
  }
  return transitive_closure(std::move(e), false);
}

// ---------------------------------------------------------------------------
// Timed state space
// ---------------------------------------------------------------------------

class StateSpaceTooLarge : public std::runtime_error {
 public:
  explicit StateSpaceTooLarge(const std::string& msg) : std::runtime_error(msg) {}
};

struct TimedState {
  StateId loc = 0;
  std::vector<std::int64_t> vals;  // clamped clock values
  friend bool operator==(const TimedState&, const TimedState&) = default;
};

/// Dense enumeration of (location, clamped clock valuation) pairs. Clock c
/// takes values 0 .. cmaxClock[c]+1, the top value standing for "anything
/// larger". Entry durations range over 0 .. durCap with durCap =
/// cmaxStack+1, the top value again standing for "anything larger".
class TimedStateSpace {
 public:
  const Model* model = nullptr;
  std::vector<std::int64_t> clockTop;  // per clock: cmaxClock[c] + 1
  int durCap = 0;
  int count = 0;

  int index(StateId loc, const std::vector<std::int64_t>& vals) const {
    long idx = loc;
    for (size_t c = 0; c < clockTop.size(); ++c)
      idx = idx * (clockTop[c] + 1) + vals[c];
    return static_cast<int>(idx);
  }

  TimedState decode(int idx) const {
    TimedState ts;
    ts.vals.resize(clockTop.size());
    long v = idx;
    for (size_t c = clockTop.size(); c-- > 0;) {
      ts.vals[c] = v % (clockTop[c] + 1);
      v /= (clockTop[c] + 1);
    }
    ts.loc = static_cast<StateId>(v);
    return ts;
  }

  int initialIndex() const {
    return index(model->initial,
                 std::vector<std::int64_t>(clockTop.size(), 0));
  }

  std::vector<std::int64_t> clamp(const std::vector<std::int64_t>& exact) const {
    std::vector<std::int64_t> out(exact.size());
    for (size_t c = 0; c < exact.size(); ++c)
      out[c] = std::min(exact[c], clockTop[c]);
    return out;
  }

  void elapse1(std::vector<std::int64_t>& vals) const {
    for (size_t c = 0; c < vals.size(); ++c)
      vals[c] = std::min(vals[c] + 1, clockTop[c]);
  }

  static void applyResets(const Transition& t, std::vector<std::int64_t>& vals) {
    for (ClockId c : t.resets) vals[static_cast<size_t>(c)] = 0;
  }
};

inline TimedStateSpace enumerate_states(const Model& m, long cap = 10000000) {
  TimedStateSpace sp;
  sp.model = &m;
  sp.clockTop.resize(static_cast<size_t>(m.numClocks));
  long count = m.locCount();
  for (int c = 0; c < m.numClocks; ++c) {
    sp.clockTop[static_cast<size_t>(c)] = m.cmaxClock[static_cast<size_t>(c)] + 1;
    count *= sp.clockTop[static_cast<size_t>(c)] + 1;
    if (count > cap)
      throw StateSpaceTooLarge("timed state space exceeds " + std::to_string(cap) +
                               " states");
  }
  if (count > cap)
    throw StateSpaceTooLarge("timed state space exceeds " + std::to_string(cap) +
                             " states");
  if (m.cmaxStack + 1 > 62)
    throw StateSpaceTooLarge("entry-duration constants above 61 are not supported");
  sp.durCap = static_cast<int>(m.cmaxStack + 1);
  sp.count = static_cast<int>(count);
  return sp;
}

// ---------------------------------------------------------------------------
// Duration bitsets
// ---------------------------------------------------------------------------

using DurMask = std::uint64_t;

inline DurMask dur_bit(int t) { return DurMask{1} << t; }

inline std::int64_t sat_add(std::int64_t a, std::int64_t b, int durCap) {
  return std::min<std::int64_t>(a + b, durCap);
}

/// All sums a+b for a in A, b in B, saturating at durCap.
inline DurMask mask_compose(DurMask a, DurMask b, int durCap) {
  if (!a || !b) return 0;
  DurMask full = (DurMask{1} << (durCap + 1)) - 1;
  DurMask out = 0;
  for (int i = 0; i <= durCap; ++i) {
    if (!(a & dur_bit(i))) continue;
    out |= (b << i) & full;
    if (i > 0 && (b >> (durCap - i + 1)) != 0) out |= dur_bit(durCap);
  }
  return out;
}

/// Union of all k-fold self-compositions, k >= 0 (so bit 0 is always set).
inline DurMask mask_star(DurMask a, int durCap) {
  DurMask acc = dur_bit(0);
  for (;;) {
    DurMask next = acc | mask_compose(acc, a, durCap);
    if (next == acc) return acc;
    acc = next;
  }
}

/// Whether a clamped duration value is compatible with an age interval:
/// exact durations are tested directly, the saturated top value only
/// matches intervals with no finite upper bound.
inline bool duration_matches_age(int t, const AgeInterval& age, int durCap) {
  if (t < durCap) return age.contains(t);
  return age.unbounded() && age.lo <= durCap;
}

// ---------------------------------------------------------------------------
// Timed relations: per ordered state pair, a set of entry durations
// ---------------------------------------------------------------------------

struct TimedRel {
  int n = 0;
  int durCap = 0;
  std::vector<DurMask> m;
  TimedRel() = default;
  TimedRel(int n_, int durCap_)
      : n(n_), durCap(durCap_), m(static_cast<size_t>(n_) * n_, 0) {}
  DurMask get(int i, int j) const {
    return m[static_cast<size_t>(i) * n + static_cast<size_t>(j)];
  }
  bool add(int i, int j, DurMask mask) {
    DurMask& slot = m[static_cast<size_t>(i) * n + static_cast<size_t>(j)];
    DurMask next = slot | mask;
    if (next == slot) return false;
    slot = next;
    return true;
  }
  long entryCount() const {
    long c = 0;
    for (DurMask v : m) c += __builtin_popcountll(v);
    return c;
  }
};

/// Kleene closure over the (union, saturating-sum) semiring of duration
/// sets: after this, get(i,j) holds every duration of every composite path.
inline void timed_closure_in_place(TimedRel& r) {
  for (int k = 0; k < r.n; ++k) {
    DurMask loop = mask_star(r.get(k, k), r.durCap);
    for (int i = 0; i < r.n; ++i) {
      DurMask a = mask_compose(r.get(i, k), loop, r.durCap);
      if (!a) continue;
      for (int j = 0; j < r.n; ++j) {
        DurMask b = r.get(k, j);
        if (b) r.add(i, j, mask_compose(a, b, r.durCap));
      }
    }
  }
}

/// All clamped elapse facts (s, t, s') for t = 1..durCap: letting t units
/// pass from s yields s' (clock values clamped per clock).
inline std::vector<std::tuple<int, std::int64_t, int>> time_elapse_closure(
    const Model& m, const TimedStateSpace& sp) {
  std::vector<std::tuple<int, std::int64_t, int>> out;
  for (int idx = 0; idx < sp.count; ++idx) {
    TimedState ts = sp.decode(idx);
    std::vector<std::int64_t> vals = ts.vals;
    for (int t = 1; t <= sp.durCap; ++t) {
      sp.elapse1(vals);
      out.emplace_back(idx, t, sp.index(ts.loc, vals));
    }
  }
  (void)m;
  return out;
}

/// Timed well-nested reachability with entry durations. Seeds: zero-length
/// identities, single-unit elapses, and guarded nops (instantaneous, with
/// resets). Then alternate Kleene closure with wrap passes: a push enabled
/// at s wraps a body fact (push target after resets) ->_t (pop source) into
/// an edge s ->_t (pop target after resets) when both guards hold and t is
/// compatible with the pop's age interval.
inline TimedRel compute_wrt(const Model& m, const TimedStateSpace& sp,
                            long maxStates = 5000) {
  if (sp.count > maxStates)
    throw StateSpaceTooLarge(
        "timed well-nested relation needs " + std::to_string(sp.count) +
        " states, more than the supported " + std::to_string(maxStates));
  TimedRel r(sp.count, sp.durCap);
  for (int idx = 0; idx < sp.count; ++idx) {
    r.add(idx, idx, dur_bit(0));
    TimedState ts = sp.decode(idx);
    std::vector<std::int64_t> vals = ts.vals;
    sp.elapse1(vals);
    r.add(idx, sp.index(ts.loc, vals), dur_bit(1));
  }
  for (const Transition& t : m.trans) {
    if (t.kind != OpKind::Nop) continue;
    for (int idx = 0; idx < sp.count; ++idx) {
      TimedState ts = sp.decode(idx);
      if (ts.loc != t.src || !guard_satisfied(t.guard, ts.vals)) continue;
      std::vector<std::int64_t> vals = ts.vals;
      TimedStateSpace::applyResets(t, vals);
      r.add(idx, sp.index(t.dst, vals), dur_bit(0));
    }
  }

  for (;;) {
    timed_closure_in_place(r);
    bool changed = false;
    for (const Transition& p : m.trans) {
      if (p.kind != OpKind::Push) continue;
      for (int idx = 0; idx < sp.count; ++idx) {
        TimedState ts = sp.decode(idx);
        if (ts.loc != p.src || !guard_satisfied(p.guard, ts.vals)) continue;
        std::vector<std::int64_t> entryVals = ts.vals;
        TimedStateSpace::applyResets(p, entryVals);
        int bodyStart = sp.index(p.dst, entryVals);
        for (int bodyEnd = 0; bodyEnd < sp.count; ++bodyEnd) {
          DurMask body = r.get(bodyStart, bodyEnd);
          if (!body) continue;
          TimedState end = sp.decode(bodyEnd);
          for (const Transition& q : m.trans) {
            if (q.kind != OpKind::Pop || q.stack != p.stack || q.sym != p.sym ||
                q.src != end.loc || !guard_satisfied(q.guard, end.vals))
              continue;
            std::vector<std::int64_t> outVals = end.vals;
            TimedStateSpace::applyResets(q, outVals);
            int outIdx = sp.index(q.dst, outVals);
            for (int t = 0; t <= sp.durCap; ++t)
              if ((body & dur_bit(t)) && duration_matches_age(t, q.age, sp.durCap))
                changed |= r.add(idx, outIdx, dur_bit(t));
          }
        }
      }
    }
    if (!changed) break;
  }
  return r;
}

}  // namespace holebound
