// benchmarks.hpp -- generated model families used as fixtures and demos.
//
// All models are produced programmatically so that parameterized families
// stay structurally consistent. Each generator documents its language and
// the hole bound of its accepting runs.

#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"

namespace holebound {

/// Two counters phased through two stacks: words a^n b^m c^n d^m (n, m >= 1)
/// where the a/c matching uses stack 1 and b/d stack 2, plus one bootstrap
/// x/y pair per stack so the control can loop. Accepting runs interleave the
/// two stacks' open pushes, so their hole bound is 2.
inline Model make_lbh() {
  Model m;
  m.numStacks = 2;
  for (int i = 0; i <= 6; ++i) m.internLoc("q" + std::to_string(i));
  m.addPush("q0", "q0", 0, "X").label = "a";
  m.addPush("q0", "q1", 1, "Y").label = "b";
  m.addPush("q1", "q1", 1, "Y").label = "b";
  m.addPush("q1", "q2", 0, "A").label = "a";
  m.addPush("q2", "q2", 0, "A").label = "a";
  m.addPop("q2", "q3", 0, "A").label = "c";
  m.addPop("q3", "q3", 0, "A").label = "c";
  m.addPop("q3", "q4", 0, "X").label = "c";
  m.addPush("q4", "q5", 1, "B").label = "b";
  m.addPush("q5", "q5", 1, "B").label = "b";
  m.addPop("q5", "q6", 1, "B").label = "d";
  m.addPop("q6", "q6", 1, "B").label = "d";
  m.addPop("q6", "q1", 1, "Y").label = "d";
  m.initial = m.locId("q0");
  m.finals = {m.locId("q1")};
  m.finalize();
  return m;
}

/// Crossing pattern a^y b^z c^y d^z on two stacks; every accepting run keeps
/// both stacks' holes open at once (hole bound 2). The timed variant adds
/// two clocks and age windows that pin the push and pop phases to an
/// 8-unit frame.
inline Model make_lcrit(bool timed) {
  Model m;
  m.timed = timed;
  m.numStacks = 2;
  m.numClocks = timed ? 2 : 0;
  for (int i = 0; i <= 5; ++i) m.internLoc("p" + std::to_string(i));

  Guard pushGuard, exitGuard;
  std::vector<ClockId> pushReset;
  AgeInterval popA, popB;
  if (timed) {
    pushGuard = {{0, true, 4}};                           // x1 <= 4
    pushReset = {1};                                      // reset x2
    exitGuard = {{0, false, 8}, {0, true, 8}, {1, true, 8}};
    popA = {2, 8};
    popB = {0, 6};
  }

  m.addPush("p0", "p1", 0, "A").label = "a";
  m.addPush("p1", "p1", 0, "A").label = "a";
  for (const char* loc : {"p1", "p2"}) {
    Transition& t = m.addPush(loc, "p2", 1, "B");
    t.label = "b";
    t.guard = pushGuard;
    t.resets = pushReset;
  }
  {
    Transition& t = m.addPop("p2", "p3", 0, "A");
    t.label = "c";
    t.age = popA;
  }
  m.addPop("p3", "p3", 0, "A").label = "c";
  {
    Transition& t = m.addPop("p3", "p4", 1, "B");
    t.label = "d";
    t.age = popB;
  }
  m.addPop("p4", "p4", 1, "B").label = "d";
  {
    Transition& t = m.addPop("p4", "p5", 1, "B");
    t.label = "d";
    t.guard = exitGuard;
  }
  {
    Transition& t = m.addPop("p3", "p5", 1, "B");
    t.label = "d";
    t.age = popB;
    t.guard = exitGuard;
  }
  m.initial = m.locId("p0");
  m.finals = {m.locId("p5")};
  m.finalize();
  return m;
}

/// Producer/consumer with batch sizes M and N: stack 1 receives batches of
/// M items, stack 2 batches of N, and consumption strictly alternates one
/// item from each. Emptying both stacks forces LCM(M, N) items per stack;
/// the shortest accepting run has 4*LCM(M, N) transitions and hole bound 2.
/// The default layout can restart production mid-consumption; the compact
/// layout drops the restart edges and one location.
inline Model make_prodcons(int M, int N, bool compact) {
  if (M < 1 || N < 1) throw std::invalid_argument("prodcons needs M, N >= 1");
  Model m;
  m.numStacks = 2;
  m.internLoc("h");
  std::vector<std::string> a{"h"}, b{"h"};
  for (int i = 1; i < M; ++i) a.push_back("a" + std::to_string(i));
  for (int i = 1; i < N; ++i) b.push_back("b" + std::to_string(i));
  for (size_t i = 1; i < a.size(); ++i) m.internLoc(a[i]);
  for (size_t i = 1; i < b.size(); ++i) m.internLoc(b[i]);
  m.internLoc("c1");
  m.internLoc("c2");
  if (!compact) m.internLoc("c3");

  for (int i = 0; i < M; ++i)
    m.addPush(a[static_cast<size_t>(i)], a[static_cast<size_t>((i + 1) % M)], 0, "A")
        .label = "a";
  for (int i = 0; i < N; ++i)
    m.addPush(b[static_cast<size_t>(i)], b[static_cast<size_t>((i + 1) % N)], 1, "B")
        .label = "b";
  m.addPop("h", "c1", 0, "A").label = "c";
  m.addPop("c1", "c2", 1, "B").label = "d";
  if (compact) {
    m.addPop("c2", "c1", 0, "A").label = "c";
  } else {
    m.addPop("c2", "c3", 0, "A").label = "c";
    m.addPop("c3", "c2", 1, "B").label = "d";
    m.addPush("c2", a[M > 1 ? 1 : 0], 0, "A").label = "a";
    m.addPush("c2", b[N > 1 ? 1 : 0], 1, "B").label = "b";
  }
  m.initial = m.locId("h");
  m.finals = {m.locId("c2")};
  m.finalize();
  return m;
}

/// A two-door maze: corridor rounds load stack 1 with P's and stack 2 with
/// Q's, the door room drains them alternately, and the exit opens only in a
/// late time window. Untimed, the side passage 1 -> 8 -> 9 accepts
/// immediately (hole bound 0). Timed, clock x (reset on every transition)
/// rules out waiting anywhere but inside corridor rounds, clock y forces at
/// least two loaded rounds per corridor plus a late exit, and the pop age
/// windows push the total elapse to at least 5; the hole bound becomes 2.
inline Model make_maze(bool timed) {
  Model m;
  m.timed = timed;
  m.numStacks = 2;
  m.numClocks = timed ? 2 : 0;
  for (int i = 1; i <= 9; ++i) m.internLoc(std::to_string(i));

  // x = clock 0 (step-local time), y = clock 1 (window timer).
  auto tight = [&](std::int64_t xMax) {
    return timed ? Guard{{0, true, xMax}} : Guard{};
  };
  auto window = [&]() {
    return timed ? Guard{{0, true, 0}, {1, false, 2}, {1, true, 3}} : Guard{};
  };
  std::vector<ClockId> rx, rxy;
  if (timed) {
    rx = {0};
    rxy = {0, 1};
  }
  auto edge = [&](Transition& t, const char* label, Guard g,
                  const std::vector<ClockId>& resets) -> Transition& {
    t.label = label;
    t.guard = std::move(g);
    t.resets = resets;
    return t;
  };

  edge(m.addNop("1", "8"), "w", tight(0), rx);
  edge(m.addNop("8", "2"), "w", tight(0), rxy);
  edge(m.addPush("2", "3", 0, "P"), "p", tight(0), rx);
  edge(m.addNop("3", "2"), "w", tight(1), rx);
  edge(m.addNop("2", "4"), "w", window(), rxy);
  edge(m.addPush("4", "5", 1, "Q"), "q", tight(0), rx);
  edge(m.addNop("5", "4"), "w", tight(1), rx);
  edge(m.addNop("4", "6"), "w", window(), rx);
  edge(m.addPop("6", "7", 0, "P"), "p", tight(1), rx).age = timed
      ? AgeInterval{4, 6} : AgeInterval{};
  edge(m.addPop("7", "6", 1, "Q"), "q", tight(0), rx).age = timed
      ? AgeInterval{1, 4} : AgeInterval{};
  edge(m.addNop("6", "8"), "w", tight(1), rx);
  edge(m.addNop("8", "9"), "w", window(), rx);
  m.initial = m.locId("1");
  m.finals = {m.locId("9")};
  m.finalize();
  return m;
}

/// Strictly alternating producer: words (ab)^n c^n d^n. The alternation
/// chops every stack-1 push away from its neighbors, so an accepting run
/// with n rounds keeps 2n holes open at once: the language is nonempty (the
/// bounded oracle finds (ab)^R c^R d^R) yet the search stays EMPTY for
/// every K < 2R.
inline Model make_lprime_phase(int R) {
  if (R < 1) throw std::invalid_argument("lprime-phase needs R >= 1");
  Model m;
  m.numStacks = 2;
  auto u = [](int i) { return "u" + std::to_string(i); };
  auto v = [](int i) { return "v" + std::to_string(i); };
  for (int i = 0; i <= R; ++i) {
    m.internLoc(u(i));
    m.internLoc(v(i));
  }
  m.internLoc("P1");
  m.internLoc("P2");
  for (int i = 0; i < R; ++i) {
    m.addPush(u(i), v(i), 0, "A").label = "a";
    m.addPush(v(i), u(i + 1), 1, "B").label = "b";
  }
  m.addPush(u(R), v(R), 0, "A").label = "a";
  m.addPush(v(R), u(R), 1, "B").label = "b";
  m.addPop(u(R), "P1", 0, "A").label = "c";
  m.addPop("P1", "P1", 0, "A").label = "c";
  m.addPop("P1", "P2", 1, "B").label = "d";
  m.addPop("P2", "P2", 1, "B").label = "d";
  m.initial = m.locId("u0");
  m.finals = {m.locId("P2")};
  m.finalize();
  return m;
}

/// Builds a benchmark model from its textual name, e.g. "lbh", "maze-timed",
/// "prodcons(3,2)", "prodcons(24,7,compact)", "lprime-phase(4)".
inline Model make_benchmark(const std::string& spec) {
  auto parseArgs = [](const std::string& s, size_t open) {
    std::vector<std::string> args;
    if (open == std::string::npos) return args;
    if (s.back() != ')')
      throw std::invalid_argument("malformed benchmark parameters in '" + s + "'");
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    std::string cur;
    for (char c : inner) {
      if (c == ',') {
        args.push_back(cur);
        cur.clear();
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        cur.push_back(c);
      }
    }
    args.push_back(cur);
    return args;
  };
  size_t open = spec.find('(');
  std::string name = spec.substr(0, open);
  std::vector<std::string> args = parseArgs(spec, open);
  auto intArg = [&](size_t i) {
    try {
      return std::stoi(args.at(i));
    } catch (const std::exception&) {
      throw std::invalid_argument("benchmark '" + name + "' needs numeric parameters");
    }
  };

  if (name == "lbh") return make_lbh();
  if (name == "lcrit") return make_lcrit(false);
  if (name == "lcrit-timed") return make_lcrit(true);
  if (name == "maze") return make_maze(false);
  if (name == "maze-timed") return make_maze(true);
  if (name == "prodcons") {
    if (args.size() < 2 || args.size() > 3 ||
        (args.size() == 3 && args[2] != "compact"))
      throw std::invalid_argument("usage: prodcons(M,N) or prodcons(M,N,compact)");
    return make_prodcons(intArg(0), intArg(1), args.size() == 3);
  }
  if (name == "lprime-phase") {
    if (args.empty()) return make_lprime_phase(3);
    if (args.size() != 1) throw std::invalid_argument("usage: lprime-phase(R)");
    return make_lprime_phase(intArg(0));
  }
  throw std::invalid_argument("unknown benchmark '" + spec + "'");
}

/// The benchmark names understood by make_benchmark, in display order.
inline std::vector<std::string> benchmark_names() {
  return {"lbh",  "lcrit",      "lcrit-timed",           "prodcons(M,N[,compact])",
          "maze", "maze-timed", "lprime-phase[(R)]"};
}

}  // namespace holebound
