// model.hpp -- core types for multi-stack pushdown systems with optional
// clocks and aged stack symbols, plus the text format (parse / serialize)
// and structural validation.
//
// A model is a finite-control automaton over a fixed number of stacks.
// Every transition carries exactly one stack operation: nop, push, or pop.
// Timed models additionally carry closed clock guards (conjunctions of
// x<=c / x>=c atoms), clock resets, and closed age intervals on pops that
// constrain how long the popped symbol has been sitting on its stack.
// A run is accepting when it ends in a final location with all stacks empty.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace holebound {

using StateId = int;
using StackId = int;  // 0-based in the API, rendered 1-based in the text format
using ClockId = int;  // 0-based in the API, rendered as x1, x2, ...
using SymId = int;

inline constexpr std::int64_t kInfinity = std::numeric_limits<std::int64_t>::max();

/// One conjunct of a clock guard: x <= bound (upper) or x >= bound (lower).
struct GuardAtom {
  ClockId clock = 0;
  bool upper = true;
  std::int64_t bound = 0;
  friend bool operator==(const GuardAtom&, const GuardAtom&) = default;
};

/// Conjunction of atoms; the empty guard is true.
using Guard = std::vector<GuardAtom>;

inline bool guard_satisfied(const Guard& g, const std::vector<std::int64_t>& clocks) {
  for (const GuardAtom& a : g) {
    std::int64_t v = clocks.at(static_cast<size_t>(a.clock));
    if (a.upper ? (v > a.bound) : (v < a.bound)) return false;
  }
  return true;
}

/// Closed interval [lo, hi]; hi == kInfinity means unbounded above.
struct AgeInterval {
  std::int64_t lo = 0;
  std::int64_t hi = kInfinity;
  bool contains(std::int64_t v) const { return v >= lo && v <= hi; }
  bool unbounded() const { return hi == kInfinity; }
  friend bool operator==(const AgeInterval&, const AgeInterval&) = default;
};

enum class OpKind { Nop, Push, Pop };

struct Transition {
  int id = -1;  // dense index into Model::trans, assigned by finalize()
  StateId src = -1;
  StateId dst = -1;
  OpKind kind = OpKind::Nop;
  StackId stack = -1;           // pushes/pops only
  SymId sym = -1;               // pushes/pops only
  AgeInterval age;              // pops only; [0, inf) when unconstrained
  Guard guard;                  // timed models only
  std::vector<ClockId> resets;  // timed models only; kept sorted
  std::string label;            // optional, informational only
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Diagnostic {
  bool error = true;  // false = warning
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  int line;
  int col;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ", col " + std::to_string(c) +
                           ": " + msg),
        line(l),
        col(c) {}
};

struct Model {
  bool timed = false;
  int numStacks = 0;
  int numClocks = 0;
  std::vector<std::string> locNames;
  std::vector<std::string> symNames;
  StateId initial = 0;
  std::vector<StateId> finals;  // declaration order, no duplicates
  std::vector<Transition> trans;

  // Derived by finalize(): the largest guard constant per clock, and the
  // largest finite age-interval endpoint over all pops.
  std::vector<std::int64_t> cmaxClock;
  std::int64_t cmaxStack = 0;

  int locCount() const { return static_cast<int>(locNames.size()); }

  StateId locId(const std::string& name) const {
    for (size_t i = 0; i < locNames.size(); ++i)
      if (locNames[i] == name) return static_cast<StateId>(i);
    return -1;
  }

  SymId symId(const std::string& name) const {
    for (size_t i = 0; i < symNames.size(); ++i)
      if (symNames[i] == name) return static_cast<SymId>(i);
    return -1;
  }

  StateId internLoc(const std::string& name) {
    StateId id = locId(name);
    if (id >= 0) return id;
    locNames.push_back(name);
    return static_cast<StateId>(locNames.size() - 1);
  }

  SymId internSym(const std::string& name) {
    SymId id = symId(name);
    if (id >= 0) return id;
    symNames.push_back(name);
    return static_cast<SymId>(symNames.size() - 1);
  }

  bool isFinal(StateId s) const {
    return std::find(finals.begin(), finals.end(), s) != finals.end();
  }

  // ---- programmatic construction helpers (names; stacks are 0-based) ----

  Transition& addNop(const std::string& src, const std::string& dst) {
    Transition t;
    t.src = internLoc(src);
    t.dst = internLoc(dst);
    t.kind = OpKind::Nop;
    trans.push_back(std::move(t));
    return trans.back();
  }

  Transition& addPush(const std::string& src, const std::string& dst, StackId stack,
                      const std::string& sym) {
    Transition t;
    t.src = internLoc(src);
    t.dst = internLoc(dst);
    t.kind = OpKind::Push;
    t.stack = stack;
    t.sym = internSym(sym);
    trans.push_back(std::move(t));
    return trans.back();
  }

  Transition& addPop(const std::string& src, const std::string& dst, StackId stack,
                     const std::string& sym) {
    Transition t;
    t.src = internLoc(src);
    t.dst = internLoc(dst);
    t.kind = OpKind::Pop;
    t.stack = stack;
    t.sym = internSym(sym);
    trans.push_back(std::move(t));
    return trans.back();
  }

  /// Assigns dense transition ids, sorts reset lists and recomputes the
  /// derived constants. Call after programmatic construction; parse_model
  /// calls it for you.
  void finalize() {
    cmaxClock.assign(static_cast<size_t>(numClocks), 0);
    cmaxStack = 0;
    for (size_t i = 0; i < trans.size(); ++i) {
      Transition& t = trans[i];
      t.id = static_cast<int>(i);
      std::sort(t.resets.begin(), t.resets.end());
      t.resets.erase(std::unique(t.resets.begin(), t.resets.end()), t.resets.end());
      for (const GuardAtom& a : t.guard)
        if (a.clock >= 0 && a.clock < numClocks)
          cmaxClock[static_cast<size_t>(a.clock)] =
              std::max(cmaxClock[static_cast<size_t>(a.clock)], a.bound);
      if (t.kind == OpKind::Pop) {
        if (t.age.lo > 0) cmaxStack = std::max(cmaxStack, t.age.lo);
        if (!t.age.unbounded()) cmaxStack = std::max(cmaxStack, t.age.hi);
      }
    }
  }

  friend bool operator==(const Model&, const Model&) = default;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

struct Token {
  std::string text;
  int col;  // 1-based start column
};

inline std::vector<Token> tokenize_line(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;  // comment to end of line
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start + 1)});
  }
  return out;
}

inline std::int64_t parse_nat(const Token& tok, int lineNo, const char* what) {
  if (tok.text.empty() || !std::all_of(tok.text.begin(), tok.text.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    throw ParseError(lineNo, tok.col,
                     std::string("expected a nonnegative integer for ") + what +
                         ", got '" + tok.text + "'");
  return std::stoll(tok.text);
}

/// Parses one guard atom of the form x<i><=<c> or x<i>>=<c>.
inline GuardAtom parse_guard_atom(const std::string& atom, int lineNo, int col,
                                  int numClocks) {
  size_t op = atom.find("<=");
  bool upper = true;
  if (op == std::string::npos) {
    op = atom.find(">=");
    upper = false;
  }
  if (op == std::string::npos)
    throw ParseError(lineNo, col, "guard atom '" + atom + "' must use <= or >=");
  std::string lhs = atom.substr(0, op);
  std::string rhs = atom.substr(op + 2);
  if (lhs.size() < 2 || lhs[0] != 'x' ||
      !std::all_of(lhs.begin() + 1, lhs.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    throw ParseError(lineNo, col, "guard atom '" + atom + "' must compare a clock x<i>");
  if (rhs.empty() || !std::all_of(rhs.begin(), rhs.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    throw ParseError(lineNo, col, "guard atom '" + atom + "' needs a nonnegative bound");
  int clock = std::stoi(lhs.substr(1));
  if (clock < 1 || clock > numClocks)
    throw ParseError(lineNo, col,
                     "clock x" + std::to_string(clock) + " out of range (model has " +
                         std::to_string(numClocks) + " clocks)");
  return GuardAtom{clock - 1, upper, std::stoll(rhs)};
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// Parses the text format. Throws ParseError with line/column on malformed
/// input. Guard disjunctions written with '|' are split into one transition
/// per disjunct; transition ids are dense in declaration (post-split) order.
inline Model parse_model(const std::string& text) {
  using detail::Token;
  Model m;
  bool sawModel = false, sawStacks = false, sawLocations = false, sawInitial = false,
       sawFinal = false;

  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::vector<Token> toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0].text;
    auto need = [&](size_t n, const char* what) {
      if (toks.size() < n)
        throw ParseError(lineNo, static_cast<int>(line.size()) + 1,
                         std::string("expected ") + what);
    };
    if (!sawModel && kw != "model")
      throw ParseError(lineNo, toks[0].col, "the first statement must be 'model'");

    if (kw == "model") {
      if (sawModel) throw ParseError(lineNo, toks[0].col, "duplicate 'model' statement");
      need(2, "'model mpda' or 'model tmpda'");
      if (toks[1].text == "mpda")
        m.timed = false;
      else if (toks[1].text == "tmpda")
        m.timed = true;
      else
        throw ParseError(lineNo, toks[1].col,
                         "model kind must be 'mpda' or 'tmpda', got '" + toks[1].text + "'");
      sawModel = true;
    } else if (kw == "stacks") {
      need(2, "a stack count");
      m.numStacks = static_cast<int>(detail::parse_nat(toks[1], lineNo, "stack count"));
      if (m.numStacks < 1)
        throw ParseError(lineNo, toks[1].col, "a model needs at least one stack");
      sawStacks = true;
    } else if (kw == "clocks") {
      need(2, "a clock count");
      if (!m.timed)
        throw ParseError(lineNo, toks[0].col, "'clocks' is only valid in a tmpda model");
      m.numClocks = static_cast<int>(detail::parse_nat(toks[1], lineNo, "clock count"));
    } else if (kw == "locations") {
      need(2, "at least one location name");
      for (size_t i = 1; i < toks.size(); ++i) {
        if (m.locId(toks[i].text) >= 0)
          throw ParseError(lineNo, toks[i].col,
                           "duplicate location name '" + toks[i].text + "'");
        m.internLoc(toks[i].text);
      }
      sawLocations = true;
    } else if (kw == "initial") {
      need(2, "an initial location name");
      if (!sawLocations)
        throw ParseError(lineNo, toks[0].col, "'initial' must come after 'locations'");
      StateId id = m.locId(toks[1].text);
      if (id < 0)
        throw ParseError(lineNo, toks[1].col, "unknown location '" + toks[1].text + "'");
      m.initial = id;
      sawInitial = true;
    } else if (kw == "final") {
      if (!sawLocations)
        throw ParseError(lineNo, toks[0].col, "'final' must come after 'locations'");
      for (size_t i = 1; i < toks.size(); ++i) {
        StateId id = m.locId(toks[i].text);
        if (id < 0)
          throw ParseError(lineNo, toks[i].col, "unknown location '" + toks[i].text + "'");
        if (!m.isFinal(id)) m.finals.push_back(id);
      }
      sawFinal = true;
    } else if (kw == "trans") {
      if (!sawLocations)
        throw ParseError(lineNo, toks[0].col, "'trans' must come after 'locations'");
      if (!sawStacks)
        throw ParseError(lineNo, toks[0].col, "'trans' must come after 'stacks'");
      need(4, "'trans <src> <dst> <op> ...'");
      Transition t;
      t.src = m.locId(toks[1].text);
      if (t.src < 0)
        throw ParseError(lineNo, toks[1].col, "unknown location '" + toks[1].text + "'");
      t.dst = m.locId(toks[2].text);
      if (t.dst < 0)
        throw ParseError(lineNo, toks[2].col, "unknown location '" + toks[2].text + "'");
      size_t i = 3;
      const std::string& op = toks[i].text;
      if (op == "nop") {
        t.kind = OpKind::Nop;
        ++i;
      } else if (op == "push" || op == "pop") {
        t.kind = op == "push" ? OpKind::Push : OpKind::Pop;
        if (toks.size() < i + 3)
          throw ParseError(lineNo, toks[i].col,
                           "'" + op + "' needs a stack index and a symbol");
        std::int64_t stack = detail::parse_nat(toks[i + 1], lineNo, "stack index");
        if (stack < 1 || stack > m.numStacks)
          throw ParseError(lineNo, toks[i + 1].col,
                           "stack index " + std::to_string(stack) + " out of range (1.." +
                               std::to_string(m.numStacks) + ")");
        t.stack = static_cast<StackId>(stack - 1);
        t.sym = m.internSym(toks[i + 2].text);
        i += 3;
      } else {
        throw ParseError(lineNo, toks[i].col,
                         "unknown operation '" + op + "' (expected nop, push or pop)");
      }

      std::string guardText;
      int guardCol = 0;
      while (i < toks.size()) {
        const std::string& clause = toks[i].text;
        if (clause == "age") {
          if (!m.timed)
            throw ParseError(lineNo, toks[i].col, "'age' is only valid in a tmpda model");
          if (t.kind != OpKind::Pop)
            throw ParseError(lineNo, toks[i].col, "'age' is only valid on pop transitions");
          if (toks.size() < i + 3)
            throw ParseError(lineNo, toks[i].col, "'age' needs '<lo> <hi|inf>'");
          t.age.lo = detail::parse_nat(toks[i + 1], lineNo, "age lower bound");
          if (toks[i + 2].text == "inf")
            t.age.hi = kInfinity;
          else
            t.age.hi = detail::parse_nat(toks[i + 2], lineNo, "age upper bound");
          if (!t.age.unbounded() && t.age.hi < t.age.lo)
            throw ParseError(lineNo, toks[i + 1].col, "empty age interval");
          i += 3;
        } else if (clause == "label") {
          if (toks.size() < i + 2)
            throw ParseError(lineNo, toks[i].col, "'label' needs a value");
          t.label = toks[i + 1].text;
          i += 2;
        } else if (clause == "guard") {
          if (!m.timed)
            throw ParseError(lineNo, toks[i].col, "'guard' is only valid in a tmpda model");
          if (toks.size() < i + 2)
            throw ParseError(lineNo, toks[i].col, "'guard' needs a constraint");
          guardText = toks[i + 1].text;
          guardCol = toks[i + 1].col;
          i += 2;
        } else if (clause == "reset") {
          if (!m.timed)
            throw ParseError(lineNo, toks[i].col, "'reset' is only valid in a tmpda model");
          if (toks.size() < i + 2)
            throw ParseError(lineNo, toks[i].col, "'reset' needs a clock list");
          for (std::string part : detail::split_on(toks[i + 1].text, ',')) {
            if (!part.empty() && part[0] == 'x') part = part.substr(1);
            if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) {
                  return std::isdigit(static_cast<unsigned char>(c));
                }))
              throw ParseError(lineNo, toks[i + 1].col,
                               "bad reset list '" + toks[i + 1].text + "'");
            int clock = std::stoi(part);
            if (clock < 1 || clock > m.numClocks)
              throw ParseError(lineNo, toks[i + 1].col,
                               "clock x" + std::to_string(clock) + " out of range");
            t.resets.push_back(clock - 1);
          }
          i += 2;
        } else {
          throw ParseError(lineNo, toks[i].col, "unknown clause '" + clause + "'");
        }
      }

      if (guardText.empty()) {
        m.trans.push_back(t);
      } else {
        // A '|' separates alternative conjunctions; each becomes its own
        // transition so the rest of the library only ever sees conjunctions.
        for (const std::string& alt : detail::split_on(guardText, '|')) {
          Transition copy = t;
          for (const std::string& atom : detail::split_on(alt, '&')) {
            if (atom.empty())
              throw ParseError(lineNo, guardCol, "empty guard atom in '" + guardText + "'");
            copy.guard.push_back(
                detail::parse_guard_atom(atom, lineNo, guardCol, m.numClocks));
          }
          m.trans.push_back(copy);
        }
      }
    } else {
      throw ParseError(lineNo, toks[0].col, "unknown statement '" + kw + "'");
    }
  }

  if (!sawModel) throw ParseError(lineNo + 1, 1, "missing 'model' statement");
  if (!sawStacks) throw ParseError(lineNo + 1, 1, "missing 'stacks' statement");
  if (!sawLocations) throw ParseError(lineNo + 1, 1, "missing 'locations' statement");
  if (!sawInitial) throw ParseError(lineNo + 1, 1, "missing 'initial' statement");
  if (!sawFinal) throw ParseError(lineNo + 1, 1, "missing 'final' statement");
  m.finalize();
  return m;
}

// ---------------------------------------------------------------------------
// Serialization (canonical: declaration order, single spaces, defaults
// omitted). parse_model(serialize_model(m)) == m for any finalized model.
// ---------------------------------------------------------------------------

inline std::string serialize_model(const Model& m) {
  std::ostringstream out;
  out << "model " << (m.timed ? "tmpda" : "mpda") << "\n";
  out << "stacks " << m.numStacks << "\n";
  if (m.timed) out << "clocks " << m.numClocks << "\n";
  out << "locations";
  for (const std::string& n : m.locNames) out << ' ' << n;
  out << "\n";
  out << "initial " << m.locNames.at(static_cast<size_t>(m.initial)) << "\n";
  out << "final";
  for (StateId f : m.finals) out << ' ' << m.locNames.at(static_cast<size_t>(f));
  out << "\n";
  for (const Transition& t : m.trans) {
    out << "trans " << m.locNames.at(static_cast<size_t>(t.src)) << ' '
        << m.locNames.at(static_cast<size_t>(t.dst));
    switch (t.kind) {
      case OpKind::Nop:
        out << " nop";
        break;
      case OpKind::Push:
        out << " push " << (t.stack + 1) << ' ' << m.symNames.at(static_cast<size_t>(t.sym));
        break;
      case OpKind::Pop:
        out << " pop " << (t.stack + 1) << ' ' << m.symNames.at(static_cast<size_t>(t.sym));
        if (m.timed && !(t.age.lo == 0 && t.age.unbounded())) {
          out << " age " << t.age.lo << ' ';
          if (t.age.unbounded())
            out << "inf";
          else
            out << t.age.hi;
        }
        break;
    }
    if (!t.label.empty()) out << " label " << t.label;
    if (!t.guard.empty()) {
      out << " guard ";
      for (size_t i = 0; i < t.guard.size(); ++i) {
        const GuardAtom& a = t.guard[i];
        if (i) out << '&';
        out << 'x' << (a.clock + 1) << (a.upper ? "<=" : ">=") << a.bound;
      }
    }
    if (!t.resets.empty()) {
      out << " reset ";
      for (size_t i = 0; i < t.resets.size(); ++i) {
        if (i) out << ',';
        out << 'x' << (t.resets[i] + 1);
      }
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline std::vector<Diagnostic> validate_model(const Model& m) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string msg) { out.push_back({true, std::move(msg)}); };
  auto warn = [&](std::string msg) { out.push_back({false, std::move(msg)}); };

  if (m.numStacks < 1) error("a model needs at least one stack");
  if (!m.timed && m.numClocks != 0) error("an untimed model cannot declare clocks");
  if (m.locNames.empty()) error("a model needs at least one location");
  if (m.initial < 0 || m.initial >= m.locCount()) error("initial location out of range");
  for (StateId f : m.finals)
    if (f < 0 || f >= m.locCount()) error("final location out of range");
  if (m.finals.empty()) warn("no final locations: the accepted language is empty");

  for (const Transition& t : m.trans) {
    std::string where = "transition " + std::to_string(t.id);
    if (t.src < 0 || t.src >= m.locCount()) error(where + ": source location out of range");
    if (t.dst < 0 || t.dst >= m.locCount()) error(where + ": target location out of range");
    if (t.kind == OpKind::Nop) {
      if (t.stack != -1 || t.sym != -1) error(where + ": nop must not carry a stack symbol");
    } else {
      if (t.stack < 0 || t.stack >= m.numStacks)
        error(where + ": stack index out of range");
      if (t.sym < 0 || t.sym >= static_cast<int>(m.symNames.size()))
        error(where + ": stack symbol out of range");
    }
    if (t.kind != OpKind::Pop && !(t.age == AgeInterval{}))
      error(where + ": age interval on a non-pop transition");
    if (t.age.lo < 0) error(where + ": negative age bound");
    if (!t.age.unbounded() && t.age.hi < t.age.lo) error(where + ": empty age interval");
    if (!m.timed) {
      if (!t.guard.empty()) error(where + ": guard on an untimed model");
      if (!t.resets.empty()) error(where + ": reset on an untimed model");
      if (t.kind == OpKind::Pop && !(t.age == AgeInterval{}))
        error(where + ": age interval on an untimed model");
    }
    for (const GuardAtom& a : t.guard) {
      if (a.clock < 0 || a.clock >= m.numClocks) error(where + ": guard clock out of range");
      if (a.bound < 0) error(where + ": negative guard bound");
    }
    for (ClockId c : t.resets)
      if (c < 0 || c >= m.numClocks) error(where + ": reset clock out of range");
  }

  // Syntactic reachability over the transition graph (ignoring stack and
  // clock constraints): purely informational.
  if (m.initial >= 0 && m.initial < m.locCount()) {
    std::vector<char> seen(static_cast<size_t>(m.locCount()), 0);
    std::queue<StateId> q;
    seen[static_cast<size_t>(m.initial)] = 1;
    q.push(m.initial);
    while (!q.empty()) {
      StateId s = q.front();
      q.pop();
      for (const Transition& t : m.trans)
        if (t.src == s && t.dst >= 0 && t.dst < m.locCount() &&
            !seen[static_cast<size_t>(t.dst)]) {
          seen[static_cast<size_t>(t.dst)] = 1;
          q.push(t.dst);
        }
    }
    for (StateId s = 0; s < m.locCount(); ++s)
      if (!seen[static_cast<size_t>(s)])
        warn("location '" + m.locNames[static_cast<size_t>(s)] +
             "' is unreachable in the transition graph");
  }
  return out;
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  return std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.error; });
}

}  // namespace holebound
