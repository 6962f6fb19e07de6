// Shared helpers for the test suite: a tiny chain-model builder and seeded
// random model generators used by the property tests.

#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <holebound/model.hpp>

namespace testutil {

using namespace holebound;

/// Builds a linear automaton m0 -> m1 -> ... -> mN whose i-th edge performs
/// ops[i]. Encoding: "n" = nop, "p<stack><sym>" = push, "q<stack><sym>" = pop
/// (stack is 0-based here, e.g. "p0A", "q1B"). Initial m0, final mN.
inline Model chain_model(const std::vector<std::string>& ops, int numStacks = 2) {
  Model m;
  m.numStacks = numStacks;
  for (size_t i = 0; i <= ops.size(); ++i) m.internLoc("m" + std::to_string(i));
  for (size_t i = 0; i < ops.size(); ++i) {
    const std::string& op = ops[i];
    std::string src = "m" + std::to_string(i), dst = "m" + std::to_string(i + 1);
    if (op == "n") {
      m.addNop(src, dst);
    } else if (op.size() == 3 && (op[0] == 'p' || op[0] == 'q')) {
      StackId stack = op[1] - '0';
      std::string sym(1, op[2]);
      if (op[0] == 'p')
        m.addPush(src, dst, stack, sym);
      else
        m.addPop(src, dst, stack, sym);
    } else {
      throw std::invalid_argument("bad chain op '" + op + "'");
    }
  }
  m.initial = 0;
  m.finals = {static_cast<StateId>(ops.size())};
  m.finalize();
  return m;
}

/// The 20-step interleaving example used across the suite: three factors of
/// pending pushes (stack 1, stack 2, stack 1 again) whose pops cross so that
/// three of them are open at once. Its unique accepting run is fires 0..19
/// and has hole bound 3.
inline Model three_hole_chain() {
  return chain_model({"n", "p0A", "p0A", "n", "p0A", "n", "p1B", "p1B", "n", "q0A",
                      "q0A", "n", "p0A", "p0A", "q1B", "q0A", "q1B", "q0A", "q0A",
                      "n"});
}

/// Random untimed model: up to 5 locations, up to 8 transitions, 2 stacks,
/// symbols A/B. Shapes are unconstrained, so most instances are empty and a
/// few have small accepting runs — good oracle fodder.
inline Model random_untimed_model(std::mt19937& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  Model m;
  m.numStacks = 2;
  int locs = 1 + pick(5);
  for (int i = 0; i < locs; ++i) m.internLoc("s" + std::to_string(i));
  int ntrans = pick(9);
  for (int i = 0; i < ntrans; ++i) {
    std::string src = "s" + std::to_string(pick(locs));
    std::string dst = "s" + std::to_string(pick(locs));
    int kind = pick(5);
    StackId stack = pick(2);
    std::string sym = pick(2) ? "A" : "B";
    if (kind == 0)
      m.addNop(src, dst);
    else if (kind <= 2)
      m.addPush(src, dst, stack, sym);
    else
      m.addPop(src, dst, stack, sym);
  }
  m.initial = 0;
  for (int i = 0; i < locs; ++i)
    if (pick(3) == 0) m.finals.push_back(i);
  if (m.finals.empty() && pick(2) == 0) m.finals.push_back(pick(locs));
  m.finalize();
  return m;
}

/// Random timed model: up to 4 locations, 1 clock with constants <= 3,
/// 2 stacks, optional guards, resets and age windows.
inline Model random_timed_model(std::mt19937& rng) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  Model m;
  m.timed = true;
  m.numStacks = 2;
  m.numClocks = 1;
  int locs = 1 + pick(4);
  for (int i = 0; i < locs; ++i) m.internLoc("s" + std::to_string(i));
  int ntrans = pick(7);
  for (int i = 0; i < ntrans; ++i) {
    std::string src = "s" + std::to_string(pick(locs));
    std::string dst = "s" + std::to_string(pick(locs));
    int kind = pick(5);
    StackId stack = pick(2);
    std::string sym = pick(2) ? "A" : "B";
    Transition* t;
    if (kind == 0)
      t = &m.addNop(src, dst);
    else if (kind <= 2)
      t = &m.addPush(src, dst, stack, sym);
    else
      t = &m.addPop(src, dst, stack, sym);
    if (pick(2) == 0) t->guard.push_back({0, pick(2) == 0, pick(4)});
    if (pick(5) < 2) t->resets.push_back(0);
    if (t->kind == OpKind::Pop && pick(2) == 0) {
      std::int64_t lo = pick(3);
      if (pick(5) == 0)
        t->age = {lo, kInfinity};
      else
        t->age = {lo, lo + pick(static_cast<int>(4 - lo))};
    }
  }
  m.initial = 0;
  for (int i = 0; i < locs; ++i)
    if (pick(3) == 0) m.finals.push_back(i);
  if (m.finals.empty() && pick(2) == 0) m.finals.push_back(pick(locs));
  m.finalize();
  return m;
}

}  // namespace testutil
