// cli.hpp -- subcommand implementations behind the holebound binary.
//
// Each cmd_* function does the work of one subcommand against explicit
// streams and returns the process exit code, so the whole surface is
// testable without spawning processes. Exit codes: 0 = nonempty/success,
// 1 = empty/rejected, 2 = usage or input error, 3 = budget exceeded.

#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "benchmarks.hpp"
#include "closure.hpp"
#include "model.hpp"
#include "search.hpp"
#include "semantics.hpp"
#include "witness_gen.hpp"

namespace holebound::cli {

inline constexpr int kExitNonempty = 0;
inline constexpr int kExitEmpty = 1;
inline constexpr int kExitError = 2;
inline constexpr int kExitBudget = 3;

inline std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

/// Parses and validates a model file; diagnostics go to err. Returns
/// nothing if the model is unusable.
inline std::optional<Model> load_model(const std::string& path, std::ostream& err) {
  auto text = read_file(path);
  if (!text) {
    err << "error: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  Model m;
  try {
    m = parse_model(*text);
  } catch (const ParseError& e) {
    err << path << ": " << e.what() << "\n";
    return std::nullopt;
  }
  std::vector<Diagnostic> diags = validate_model(m);
  for (const Diagnostic& d : diags)
    err << path << ": " << (d.error ? "error: " : "warning: ") << d.message << "\n";
  if (has_errors(diags)) return std::nullopt;
  return m;
}

/// Drops clocks, guards, resets and age intervals, leaving the underlying
/// untimed control structure.
inline Model strip_timing(const Model& m) {
  Model u = m;
  u.timed = false;
  u.numClocks = 0;
  for (Transition& t : u.trans) {
    t.guard.clear();
    t.resets.clear();
    t.age = AgeInterval{};
  }
  u.finalize();
  return u;
}

struct CheckRequest {
  std::string modelPath;
  int maxHoles = 2;
  bool allowLargeK = false;
  bool forceUntimed = false;
  std::string witnessPath;  // empty = none, "-" = stdout
  std::string statsPath;
  long nodeCap = -1;  // < 0: default budget
};

inline int cmd_check(const CheckRequest& req, std::ostream& out, std::ostream& err) {
  auto loaded = load_model(req.modelPath, err);
  if (!loaded) return kExitError;
  Model m = req.forceUntimed ? strip_timing(*loaded) : std::move(*loaded);

  if (req.maxHoles < 0) {
    err << "error: --max-holes must be nonnegative\n";
    return kExitError;
  }
  if (req.maxHoles > 16 && !req.allowLargeK) {
    err << "error: --max-holes " << req.maxHoles
        << " exceeds 16; pass --allow-large-k if you really mean it\n";
    return kExitError;
  }

  SearchOptions opts;
  opts.budget = req.nodeCap;
  SearchResult res;
  try {
    res = check_reachable(m, req.maxHoles, opts);
  } catch (const StateSpaceTooLarge& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  if (!req.statsPath.empty()) {
    std::ostringstream lines;
    for (const StageStats& s : res.stats) {
      nlohmann::json j;
      j["k"] = s.k;
      j["lists"] = s.lists;
      j["wr_size"] = s.wrSize;
      j["outcome"] = s.outcome;
      lines << j.dump() << "\n";
    }
    nlohmann::json summary;
    summary["result"] = res.outcome == SearchOutcome::Reachable ? "nonempty"
                        : res.outcome == SearchOutcome::Empty   ? "empty"
                                                                : "budget";
    if (res.outcome == SearchOutcome::Reachable) summary["holes"] = res.holeBound;
    summary["max_holes"] = res.maxHoles;
    summary["dedup_peak"] = res.dedupPeak;
    lines << summary.dump() << "\n";
    if (!write_file(req.statsPath, lines.str())) {
      err << "error: cannot write stats to '" << req.statsPath << "'\n";
      return kExitError;
    }
  }

  switch (res.outcome) {
    case SearchOutcome::Reachable: {
      Witness w = assemble_witness(m, res);
      out << "RESULT: NONEMPTY holes=" << res.holeBound << "\n";
      if (req.witnessPath == "-") {
        out << write_witness(m, w, /*withLabels=*/true);
      } else if (!req.witnessPath.empty()) {
        if (!write_file(req.witnessPath, write_witness(m, w, /*withLabels=*/true))) {
          err << "error: cannot write witness to '" << req.witnessPath << "'\n";
          return kExitError;
        }
      }
      return kExitNonempty;
    }
    case SearchOutcome::Empty:
      out << "RESULT: EMPTY up_to_holes=" << req.maxHoles << "\n";
      return kExitEmpty;
    case SearchOutcome::Budget:
      out << "RESULT: BUDGET up_to_holes=" << req.maxHoles << "\n";
      return kExitBudget;
  }
  return kExitError;  // unreachable
}

inline int cmd_generate(const std::string& spec, const std::string& outPath,
                        std::ostream& out, std::ostream& err) {
  Model m;
  try {
    m = make_benchmark(spec);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    err << "known benchmarks:";
    for (const std::string& n : benchmark_names()) err << ' ' << n;
    err << "\n";
    return kExitError;
  }
  std::string text = serialize_model(m);
  if (outPath.empty() || outPath == "-") {
    out << text;
  } else if (!write_file(outPath, text)) {
    err << "error: cannot write '" << outPath << "'\n";
    return kExitError;
  }
  return kExitNonempty;
}

/// Dumps the well-nested endpoint relation, one `src -> dst` line per pair
/// (timed: `src -> dst [t=..]`, projected to locations), sorted.
inline int cmd_wr(const std::string& modelPath, std::ostream& out, std::ostream& err) {
  auto loaded = load_model(modelPath, err);
  if (!loaded) return kExitError;
  const Model& m = *loaded;

  std::vector<std::string> lines;
  if (!m.timed) {
    BoolRel wr = compute_wr(m);
    for (StateId a = 0; a < m.locCount(); ++a)
      for (StateId b = 0; b < m.locCount(); ++b)
        if (wr.get(a, b))
          lines.push_back(m.locNames[static_cast<size_t>(a)] + " -> " +
                          m.locNames[static_cast<size_t>(b)]);
  } else {
    TimedStateSpace sp;
    TimedRel wrt;
    try {
      sp = enumerate_states(m);
      wrt = compute_wrt(m, sp);
    } catch (const StateSpaceTooLarge& e) {
      err << "error: " << e.what() << "\n";
      return kExitError;
    }
    for (int a = 0; a < sp.count; ++a)
      for (int b = 0; b < sp.count; ++b) {
        DurMask mask = wrt.get(a, b);
        if (!mask) continue;
        for (int t = 0; t <= sp.durCap; ++t)
          if (mask & dur_bit(t))
            lines.push_back(m.locNames[static_cast<size_t>(sp.decode(a).loc)] + " -> " +
                            m.locNames[static_cast<size_t>(sp.decode(b).loc)] +
                            " [t=" + std::to_string(t) + "]");
      }
  }
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  for (const std::string& l : lines) out << l << "\n";
  return kExitNonempty;
}

struct OracleRequest {
  std::string modelPath;
  int depth = 12;
  std::int64_t maxElapse = 8;
  std::int64_t maxTotalElapse = -1;
  long nodeCap = 200000;
  std::string witnessPath;
};

inline int cmd_oracle(const OracleRequest& req, std::ostream& out, std::ostream& err) {
  auto loaded = load_model(req.modelPath, err);
  if (!loaded) return kExitError;
  const Model& m = *loaded;

  OracleLimits lim;
  lim.maxSteps = req.depth;
  lim.maxElapse = req.maxElapse;
  lim.maxTotalElapse = req.maxTotalElapse;
  lim.nodeCap = req.nodeCap;
  OracleResult res = oracle_reachable(m, lim);

  switch (res.outcome) {
    case OracleOutcome::Reachable: {
      int fires = 0;
      for (const RunStep& s : res.witness.steps)
        if (!s.elapse) ++fires;
      out << "ORACLE: REACHABLE steps=" << fires << " holes=" << res.witness.holes;
      if (m.timed) out << " elapse=" << total_elapse(res.witness.steps);
      out << "\n";
      out << write_witness(m, res.witness, /*withLabels=*/true);
      if (!req.witnessPath.empty() && req.witnessPath != "-" &&
          !write_file(req.witnessPath, write_witness(m, res.witness, true))) {
        err << "error: cannot write witness to '" << req.witnessPath << "'\n";
        return kExitError;
      }
      return kExitNonempty;
    }
    case OracleOutcome::Unreachable:
      out << "ORACLE: EMPTY depth=" << req.depth
          << " exhaustive=" << (res.exhaustive ? "true" : "false") << "\n";
      return kExitEmpty;
    case OracleOutcome::Budget:
      out << "ORACLE: BUDGET nodes=" << res.nodes << "\n";
      return kExitBudget;
  }
  return kExitError;  // unreachable
}

inline int cmd_replay(const std::string& modelPath, const std::string& witnessPath,
                      std::ostream& out, std::ostream& err) {
  auto loaded = load_model(modelPath, err);
  if (!loaded) return kExitError;
  const Model& m = *loaded;

  auto wtext = read_file(witnessPath);
  if (!wtext) {
    err << "error: cannot read '" << witnessPath << "'\n";
    return kExitError;
  }
  Witness w;
  try {
    w = read_witness(*wtext);
  } catch (const ParseError& e) {
    err << witnessPath << ": " << e.what() << "\n";
    return kExitError;
  }
  for (const RunStep& s : w.steps)
    if (!s.elapse && (s.trans < 0 || s.trans >= static_cast<int>(m.trans.size()))) {
      err << "error: witness references transition " << s.trans
          << " outside the model\n";
      return kExitError;
    }

  ReplayResult r = replay(m, w);
  if (!r.accepting) {
    out << "REPLAY: REJECTED";
    if (r.failStep >= 0) out << " step=" << r.failStep;
    if (!r.reason.empty()) out << " reason=\"" << r.reason << "\"";
    out << "\n";
    return kExitEmpty;
  }
  int holes = hole_bound_of_run(m, w.steps);
  out << "REPLAY: ACCEPTING holes=" << holes;
  if (m.timed) out << " elapse=" << total_elapse(w.steps);
  out << "\n";
  if (holes > w.holes)
    err << "warning: witness header claims holes=" << w.holes
        << " but the run needs " << holes << "\n";
  return kExitNonempty;
}

}  // namespace holebound::cli
