// semantics.hpp -- concrete run semantics: configurations, single-step
// execution, replay of recorded runs, witness file I/O, a bounded exhaustive
// reference search, and the hole analysis of a concrete accepting run.
//
// Configurations are exact (no clamping): stacks hold (symbol, age) pairs,
// clocks and ages grow without bound as time elapses. All elapse amounts are
// integral; with closed guards and closed age intervals this loses no
// behaviors.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "model.hpp"

namespace holebound {

struct StackEntry {
  SymId sym = -1;
  std::int64_t age = 0;
  friend bool operator==(const StackEntry&, const StackEntry&) = default;
};

struct Configuration {
  StateId loc = 0;
  std::vector<std::vector<StackEntry>> stacks;  // back() is the top
  std::vector<std::int64_t> clocks;
  std::int64_t elapsedTotal = 0;
  friend bool operator==(const Configuration&, const Configuration&) = default;

  bool stacksEmpty() const {
    for (const auto& s : stacks)
      if (!s.empty()) return false;
    return true;
  }
};

inline Configuration initial_configuration(const Model& m) {
  Configuration c;
  c.loc = m.initial;
  c.stacks.resize(static_cast<size_t>(m.numStacks));
  c.clocks.assign(static_cast<size_t>(m.numClocks), 0);
  return c;
}

namespace detail {
inline void hash_mix(size_t& h, size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}
}  // namespace detail

struct ConfigurationHash {
  size_t operator()(const Configuration& c) const {
    size_t h = std::hash<int>()(c.loc);
    detail::hash_mix(h, std::hash<std::int64_t>()(c.elapsedTotal));
    for (const auto& st : c.stacks) {
      detail::hash_mix(h, st.size());
      for (const StackEntry& e : st) {
        detail::hash_mix(h, std::hash<int>()(e.sym));
        detail::hash_mix(h, std::hash<std::int64_t>()(e.age));
      }
    }
    for (std::int64_t v : c.clocks) detail::hash_mix(h, std::hash<std::int64_t>()(v));
    return h;
  }
};

/// One step of a recorded run: either let t time units pass or fire a
/// transition by id.
struct RunStep {
  bool elapse = false;
  std::int64_t t = 0;  // elapse amount
  int trans = -1;      // transition id
  static RunStep Elapse(std::int64_t t) { return {true, t, -1}; }
  static RunStep Fire(int id) { return {false, 0, id}; }
  friend bool operator==(const RunStep&, const RunStep&) = default;
};

struct Witness {
  int holes = 0;
  std::vector<RunStep> steps;
  friend bool operator==(const Witness&, const Witness&) = default;
};

inline std::int64_t total_elapse(const std::vector<RunStep>& steps) {
  std::int64_t sum = 0;
  for (const RunStep& s : steps)
    if (s.elapse) sum += s.t;
  return sum;
}

// ---------------------------------------------------------------------------
// Single-step execution and replay
// ---------------------------------------------------------------------------

struct StepResult {
  bool ok = false;
  std::string reason;  // set when !ok
  Configuration next;
};

inline StepResult step(const Model& m, const Configuration& cfg, const RunStep& s) {
  StepResult r;
  if (s.elapse) {
    if (!m.timed) {
      r.reason = "time cannot elapse in an untimed model";
      return r;
    }
    if (s.t < 1) {
      r.reason = "elapse amount must be at least 1";
      return r;
    }
    r.next = cfg;
    for (auto& v : r.next.clocks) v += s.t;
    for (auto& st : r.next.stacks)
      for (StackEntry& e : st) e.age += s.t;
    r.next.elapsedTotal += s.t;
    r.ok = true;
    return r;
  }
  if (s.trans < 0 || s.trans >= static_cast<int>(m.trans.size())) {
    r.reason = "no transition with id " + std::to_string(s.trans);
    return r;
  }
  const Transition& t = m.trans[static_cast<size_t>(s.trans)];
  if (t.src != cfg.loc) {
    r.reason = "transition " + std::to_string(t.id) + " starts in '" +
               m.locNames[static_cast<size_t>(t.src)] + "' but the run is in '" +
               m.locNames[static_cast<size_t>(cfg.loc)] + "'";
    return r;
  }
  if (!guard_satisfied(t.guard, cfg.clocks)) {
    r.reason = "guard of transition " + std::to_string(t.id) + " is not satisfied";
    return r;
  }
  r.next = cfg;
  if (t.kind == OpKind::Push) {
    r.next.stacks[static_cast<size_t>(t.stack)].push_back({t.sym, 0});
  } else if (t.kind == OpKind::Pop) {
    auto& st = r.next.stacks[static_cast<size_t>(t.stack)];
    if (st.empty()) {
      r.reason = "transition " + std::to_string(t.id) + " pops from empty stack " +
                 std::to_string(t.stack + 1);
      return r;
    }
    if (st.back().sym != t.sym) {
      r.reason = "transition " + std::to_string(t.id) + " pops '" +
                 m.symNames[static_cast<size_t>(t.sym)] + "' but the top of stack " +
                 std::to_string(t.stack + 1) + " is '" +
                 m.symNames[static_cast<size_t>(st.back().sym)] + "'";
      return r;
    }
    if (!t.age.contains(st.back().age)) {
      r.reason = "transition " + std::to_string(t.id) + " requires age in [" +
                 std::to_string(t.age.lo) + "," +
                 (t.age.unbounded() ? std::string("inf") : std::to_string(t.age.hi)) +
                 "] but the top of stack " + std::to_string(t.stack + 1) + " has age " +
                 std::to_string(st.back().age);
      return r;
    }
    st.pop_back();
  }
  for (ClockId c : t.resets) r.next.clocks[static_cast<size_t>(c)] = 0;
  r.next.loc = t.dst;
  r.ok = true;
  return r;
}

struct ReplayResult {
  bool accepting = false;
  int failStep = -1;  // index of the step that was disabled, or -1
  std::string reason;
  Configuration last;
};

inline ReplayResult replay(const Model& m, const std::vector<RunStep>& steps) {
  ReplayResult r;
  Configuration cfg = initial_configuration(m);
  for (size_t i = 0; i < steps.size(); ++i) {
    StepResult s = step(m, cfg, steps[i]);
    if (!s.ok) {
      r.failStep = static_cast<int>(i);
      r.reason = s.reason;
      r.last = cfg;
      return r;
    }
    cfg = std::move(s.next);
  }
  r.last = cfg;
  if (!m.isFinal(cfg.loc)) {
    r.reason = "run ends in non-final location '" +
               m.locNames[static_cast<size_t>(cfg.loc)] + "'";
  } else if (!cfg.stacksEmpty()) {
    r.reason = "run ends with a nonempty stack";
  } else {
    r.accepting = true;
  }
  return r;
}

inline ReplayResult replay(const Model& m, const Witness& w) { return replay(m, w.steps); }

// ---------------------------------------------------------------------------
// Witness file format
//
//   witness holes=<k>
//   fire <id>
//   elapse <t>
//
// '#' starts a comment; zero-amount elapse lines are dropped.
// ---------------------------------------------------------------------------

inline std::string write_witness(const Model& m, const Witness& w, bool withLabels = false) {
  std::ostringstream out;
  out << "witness holes=" << w.holes << "\n";
  for (const RunStep& s : w.steps) {
    if (s.elapse) {
      if (s.t == 0) continue;
      out << "elapse " << s.t << "\n";
    } else {
      out << "fire " << s.trans;
      if (withLabels && s.trans >= 0 && s.trans < static_cast<int>(m.trans.size())) {
        const std::string& lbl = m.trans[static_cast<size_t>(s.trans)].label;
        if (!lbl.empty()) out << "  # " << lbl;
      }
      out << "\n";
    }
  }
  return out.str();
}

inline Witness read_witness(const std::string& text) {
  Witness w;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  bool sawHeader = false;
  while (std::getline(in, line)) {
    ++lineNo;
    std::vector<detail::Token> toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    if (!sawHeader) {
      if (toks[0].text != "witness" || toks.size() < 2 ||
          toks[1].text.rfind("holes=", 0) != 0)
        throw ParseError(lineNo, toks[0].col, "expected 'witness holes=<k>' header");
      std::string k = toks[1].text.substr(6);
      w.holes = static_cast<int>(detail::parse_nat({k, toks[1].col}, lineNo, "hole count"));
      sawHeader = true;
      continue;
    }
    if (toks[0].text == "fire") {
      if (toks.size() < 2)
        throw ParseError(lineNo, toks[0].col, "'fire' needs a transition id");
      w.steps.push_back(RunStep::Fire(
          static_cast<int>(detail::parse_nat(toks[1], lineNo, "transition id"))));
    } else if (toks[0].text == "elapse") {
      if (toks.size() < 2) throw ParseError(lineNo, toks[0].col, "'elapse' needs an amount");
      std::int64_t t = detail::parse_nat(toks[1], lineNo, "elapse amount");
      if (t > 0) w.steps.push_back(RunStep::Elapse(t));
    } else {
      throw ParseError(lineNo, toks[0].col, "expected 'fire' or 'elapse'");
    }
  }
  if (!sawHeader) throw ParseError(lineNo + 1, 1, "missing 'witness holes=<k>' header");
  return w;
}

// ---------------------------------------------------------------------------
// Bounded exhaustive reference search
//
// Breadth-first over exact configurations, counting fired transitions
// against maxSteps. Between two fired transitions at most one elapse step is
// generated, with amount 1..maxElapse (a canonical form: adjacent elapses
// merge, so this drops no behavior expressible within the bounds).
// `exhaustive` is true only if the frontier emptied without any bound
// cutting a branch; only then do negative answers extend beyond the bounds.
// ---------------------------------------------------------------------------

struct OracleLimits {
  int maxSteps = 12;
  std::int64_t maxElapse = 8;       // per elapse step
  std::int64_t maxTotalElapse = -1; // < 0: unlimited
  long nodeCap = 200000;
};

enum class OracleOutcome { Reachable, Unreachable, Budget };

struct OracleResult {
  OracleOutcome outcome = OracleOutcome::Unreachable;
  Witness witness;  // set when Reachable; holes = hole bound of the found run
  bool exhaustive = false;
  long nodes = 0;
};

int hole_bound_of_run(const Model& m, const std::vector<RunStep>& steps);

inline OracleResult oracle_reachable(const Model& m, const OracleLimits& lim = {}) {
  struct Node {
    Configuration cfg;
    int parent;
    RunStep via;
    bool lastWasElapse;
    int discrete;
  };
  OracleResult res;
  std::vector<Node> nodes;
  std::deque<int> queue;
  struct Key {
    Configuration cfg;
    bool lastWasElapse;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      size_t h = ConfigurationHash()(k.cfg);
      detail::hash_mix(h, k.lastWasElapse ? 1 : 2);
      return h;
    }
  };
  std::unordered_set<Key, KeyHash> visited;
  bool pruned = false;

  auto tryEnqueue = [&](Configuration cfg, int parent, RunStep via, bool lastElapse,
                        int discrete) -> bool {
    Key key{cfg, lastElapse};
    if (visited.count(key)) return false;
    if (static_cast<long>(nodes.size()) >= lim.nodeCap) {
      pruned = true;
      res.outcome = OracleOutcome::Budget;
      return false;
    }
    visited.insert(std::move(key));
    nodes.push_back({std::move(cfg), parent, via, lastElapse, discrete});
    queue.push_back(static_cast<int>(nodes.size()) - 1);
    return true;
  };

  tryEnqueue(initial_configuration(m), -1, RunStep::Fire(-1), false, 0);

  while (!queue.empty()) {
    int idx = queue.front();
    queue.pop_front();
    Configuration cfg = nodes[static_cast<size_t>(idx)].cfg;  // copy: nodes may grow
    bool lastElapse = nodes[static_cast<size_t>(idx)].lastWasElapse;
    int discrete = nodes[static_cast<size_t>(idx)].discrete;

    if (m.isFinal(cfg.loc) && cfg.stacksEmpty()) {
      std::vector<RunStep> steps;
      for (int cur = idx; nodes[static_cast<size_t>(cur)].parent >= 0;
           cur = nodes[static_cast<size_t>(cur)].parent)
        steps.push_back(nodes[static_cast<size_t>(cur)].via);
      std::reverse(steps.begin(), steps.end());
      res.outcome = OracleOutcome::Reachable;
      res.witness.steps = std::move(steps);
      res.witness.holes = hole_bound_of_run(m, res.witness.steps);
      res.nodes = static_cast<long>(nodes.size());
      res.exhaustive = false;
      return res;
    }

    if (m.timed && !lastElapse) {
      for (std::int64_t t = 1; t <= lim.maxElapse; ++t) {
        if (lim.maxTotalElapse >= 0 && cfg.elapsedTotal + t > lim.maxTotalElapse) {
          // Larger amounts only overshoot further; stop without marking a
          // cut, the total-elapse bound is part of the question asked.
          break;
        }
        StepResult s = step(m, cfg, RunStep::Elapse(t));
        if (s.ok) tryEnqueue(std::move(s.next), idx, RunStep::Elapse(t), true, discrete);
      }
      if (lim.maxTotalElapse < 0 ||
          cfg.elapsedTotal + lim.maxElapse < lim.maxTotalElapse)
        pruned = true;  // amounts > maxElapse were never tried
    }
    for (const Transition& t : m.trans) {
      if (t.src != cfg.loc) continue;
      StepResult s = step(m, cfg, RunStep::Fire(t.id));
      if (!s.ok) continue;
      if (discrete >= lim.maxSteps) {
        pruned = true;
        continue;
      }
      tryEnqueue(std::move(s.next), idx, RunStep::Fire(t.id), false, discrete + 1);
    }
    if (res.outcome == OracleOutcome::Budget) break;
  }

  res.nodes = static_cast<long>(nodes.size());
  if (res.outcome != OracleOutcome::Budget) {
    res.outcome = OracleOutcome::Unreachable;
    res.exhaustive = !pruned;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Reference well-nested endpoint relation (untimed models)
//
// (s1, s2) is in the relation iff some run from s1 to s2 starts and ends
// with all stacks empty and never pops a symbol pushed before s1. Runs of a
// single merged stack capture exactly this: a pop must match the top of the
// merged stack, regardless of which stack it uses.
// ---------------------------------------------------------------------------

struct WnPairsResult {
  std::vector<std::pair<StateId, StateId>> pairs;  // sorted, deduplicated
  bool complete = false;
};

inline WnPairsResult oracle_wellnested_pairs(const Model& m, int maxDepth = 24,
                                             long nodeCap = 200000) {
  if (m.timed)
    throw std::invalid_argument("oracle_wellnested_pairs supports untimed models only");
  struct Node {
    StateId loc;
    std::vector<std::pair<StackId, SymId>> stack;
    int depth;
    bool operator==(const Node&) const = default;
  };
  struct NodeHash {
    size_t operator()(const Node& n) const {
      size_t h = std::hash<int>()(n.loc);
      for (auto& [st, sy] : n.stack) {
        detail::hash_mix(h, std::hash<int>()(st));
        detail::hash_mix(h, std::hash<int>()(sy));
      }
      return h;
    }
  };

  WnPairsResult res;
  res.complete = true;
  std::unordered_set<std::int64_t> found;  // s1 * |S| + s2
  long nodesTotal = 0;
  for (StateId s1 = 0; s1 < m.locCount(); ++s1) {
    // Keyed without depth: the first (shallowest) visit subsumes later ones.
    std::unordered_set<Node, NodeHash> visited;
    std::deque<Node> queue;
    auto push = [&](Node n) {
      Node probe = n;
      probe.depth = 0;
      if (visited.count(probe)) return;
      if (nodesTotal >= nodeCap) {
        res.complete = false;
        return;
      }
      ++nodesTotal;
      visited.insert(probe);
      queue.push_back(std::move(n));
    };
    push({s1, {}, 0});
    while (!queue.empty()) {
      Node n = std::move(queue.front());
      queue.pop_front();
      if (n.stack.empty())
        found.insert(static_cast<std::int64_t>(s1) * m.locCount() + n.loc);
      if (n.depth >= maxDepth) {
        // Only a genuine cut if something was still enabled here.
        for (const Transition& t : m.trans)
          if (t.src == n.loc &&
              (t.kind != OpKind::Pop ||
               (!n.stack.empty() && n.stack.back() == std::pair{t.stack, t.sym})))
            res.complete = false;
        continue;
      }
      for (const Transition& t : m.trans) {
        if (t.src != n.loc) continue;
        Node c = n;
        c.loc = t.dst;
        c.depth = n.depth + 1;
        if (t.kind == OpKind::Push) {
          c.stack.emplace_back(t.stack, t.sym);
        } else if (t.kind == OpKind::Pop) {
          if (n.stack.empty() || n.stack.back() != std::pair{t.stack, t.sym}) continue;
          c.stack.pop_back();
        }
        push(std::move(c));
      }
    }
  }
  for (std::int64_t key : found)
    res.pairs.emplace_back(static_cast<StateId>(key / m.locCount()),
                           static_cast<StateId>(key % m.locCount()));
  std::sort(res.pairs.begin(), res.pairs.end());
  return res;
}

// ---------------------------------------------------------------------------
// Hole analysis of a concrete accepting run
//
// Factor the fired transitions greedily left to right: a maximal well-nested
// block; otherwise a hole of stack s, i.e. a maximal sequence
// (push_s ws)+ of pending pushes with trailing well-nested padding;
// otherwise a single pop. A hole is open from just after its first push
// until its last matching pop. The result is the largest number of holes
// simultaneously open anywhere along the run.
// ---------------------------------------------------------------------------

inline int hole_bound_of_run(const Model& m, const std::vector<RunStep>& steps) {
  ReplayResult rr = replay(m, steps);
  if (!rr.accepting)
    throw std::invalid_argument("hole_bound_of_run requires an accepting run: " + rr.reason);

  std::vector<const Transition*> fires;
  for (const RunStep& s : steps)
    if (!s.elapse) fires.push_back(&m.trans[static_cast<size_t>(s.trans)]);
  int n = static_cast<int>(fires.size());

  // LIFO matching per stack; acceptance guarantees every push is matched.
  std::vector<int> match(static_cast<size_t>(n), -1);
  {
    std::vector<std::vector<int>> pending(static_cast<size_t>(m.numStacks));
    for (int i = 0; i < n; ++i) {
      if (fires[static_cast<size_t>(i)]->kind == OpKind::Push)
        pending[static_cast<size_t>(fires[static_cast<size_t>(i)]->stack)].push_back(i);
      else if (fires[static_cast<size_t>(i)]->kind == OpKind::Pop) {
        auto& p = pending[static_cast<size_t>(fires[static_cast<size_t>(i)]->stack)];
        int partner = p.back();
        p.pop_back();
        match[static_cast<size_t>(partner)] = i;
        match[static_cast<size_t>(i)] = partner;
      }
    }
  }

  // Largest j >= i-1 such that fires[i..j] is well-nested and closed
  // (merged stack empty at the end); i-1 when no such j exists.
  auto wsExtent = [&](int i) {
    int lastClosed = i - 1;
    std::vector<StackId> merged;
    for (int j = i; j < n; ++j) {
      const Transition* t = fires[static_cast<size_t>(j)];
      if (t->kind == OpKind::Push) {
        merged.push_back(t->stack);
      } else if (t->kind == OpKind::Pop) {
        if (merged.empty() || merged.back() != t->stack) break;
        merged.pop_back();
      }
      if (merged.empty()) lastClosed = j;
    }
    return lastClosed;
  };

  struct Hole {
    int first;
    int lastPop;
  };
  std::vector<Hole> holes;
  int i = 0;
  while (i < n) {
    int j = wsExtent(i);
    if (j >= i) {
      i = j + 1;
      continue;
    }
    const Transition* t = fires[static_cast<size_t>(i)];
    if (t->kind == OpKind::Push) {
      // A pending push. Because the preceding well-nested block was maximal,
      // no closed block can start here, so every same-stack push reached by
      // the loop below is pending as well.
      StackId s = t->stack;
      int first = i;
      int lastPop = -1;
      while (i < n && fires[static_cast<size_t>(i)]->kind == OpKind::Push &&
             fires[static_cast<size_t>(i)]->stack == s) {
        lastPop = std::max(lastPop, match[static_cast<size_t>(i)]);
        ++i;
        int k = wsExtent(i);
        if (k >= i) i = k + 1;
      }
      holes.push_back({first, lastPop});
    } else {
      ++i;  // a pop closing some earlier hole
    }
  }

  int best = 0;
  for (int x = 0; x <= n; ++x) {
    int open = 0;
    for (const Hole& h : holes)
      if (h.first < x && x <= h.lastPop) ++open;
    best = std::max(best, open);
  }
  return best;
}

}  // namespace holebound
