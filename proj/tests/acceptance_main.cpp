// Acceptance gate: exercises the shipped behavior end to end, one verdict
// line per criterion. Criteria 1 and 2 drive the command-line binary (path
// given as argv[1]); the rest use the library directly. Exits nonzero if
// any criterion fails.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <holebound/benchmarks.hpp>
#include <holebound/closure.hpp>
#include <holebound/search.hpp>
#include <holebound/semantics.hpp>
#include <holebound/witness_gen.hpp>

#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace holebound;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;
fs::path g_tmp;
std::ostringstream g_detail;  // printed on failure only

struct CliRun {
  int exitCode = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  CliRun r;
  std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    g_detail << "popen failed for: " << cmd << "\n";
    return r;
  }
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int status = pclose(pipe);
  if (WIFEXITED(status)) r.exitCode = WEXITSTATUS(status);
  return r;
}

std::string model_file(const std::string& spec) {
  std::string name = spec;
  for (char& c : name)
    if (!isalnum(static_cast<unsigned char>(c))) c = '_';
  fs::path p = g_tmp / (name + ".mpda");
  std::ofstream(p) << serialize_model(make_benchmark(spec));
  return p.string();
}

// first line of the output starting with "RESULT:"
std::string result_line(const std::string& out) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("RESULT:", 0) == 0) return line;
  return "";
}

bool criterion_cli_bounds() {
  const std::vector<std::pair<std::string, int>> cases = {
      {"lbh", 2},          {"lcrit", 2},      {"prodcons(3,2)", 2},
      {"prodcons(24,7)", 2}, {"lcrit-timed", 2}, {"maze-timed", 2},
      {"maze", 0}};
  bool ok = true;
  for (auto& [spec, holes] : cases) {
    auto t0 = Clock::now();
    CliRun r = run_cli("check '" + model_file(spec) + "' --max-holes 2");
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::string expect = "RESULT: NONEMPTY holes=" + std::to_string(holes);
    if (r.exitCode != 0 || result_line(r.out) != expect || secs >= 60.0) {
      g_detail << spec << ": exit=" << r.exitCode << " line='" << result_line(r.out)
               << "' secs=" << secs << " (want exit 0, '" << expect << "', <60s)\n";
      ok = false;
    }
  }
  return ok;
}

bool criterion_cli_one_hole_empty() {
  bool ok = true;
  for (const char* spec :
       {"lbh", "lcrit", "prodcons(3,2)", "lcrit-timed", "maze-timed"}) {
    CliRun r = run_cli("check '" + model_file(spec) + "' --max-holes 1");
    if (r.exitCode != 1 || result_line(r.out) != "RESULT: EMPTY up_to_holes=1") {
      g_detail << spec << ": exit=" << r.exitCode << " line='" << result_line(r.out)
               << "' (want exit 1, EMPTY up to 1 hole)\n";
      ok = false;
    }
  }
  return ok;
}

bool criterion_prodcons_witness() {
  Model m = make_benchmark("prodcons(3,2)");
  SearchResult r = check_reachable(m, 2);
  if (r.outcome != SearchOutcome::Reachable) {
    g_detail << "prodcons(3,2) not reachable at two holes\n";
    return false;
  }
  Witness w = assemble_witness(m, r);
  if (w.steps.size() != 24) {
    g_detail << "witness has " << w.steps.size() << " steps, want 24\n";
    return false;
  }
  ReplayResult rep = replay(m, w);
  if (!rep.accepting) {
    g_detail << "witness rejected: " << rep.reason << "\n";
    return false;
  }
  return true;
}

bool criterion_maze_elapse() {
  Model m = make_benchmark("maze-timed");
  SearchResult r = check_reachable(m, 2);
  if (r.outcome != SearchOutcome::Reachable) {
    g_detail << "timed maze not reachable at two holes\n";
    return false;
  }
  Witness w = assemble_witness(m, r);
  ReplayResult rep = replay(m, w);
  if (!rep.accepting || total_elapse(w.steps) != 5) {
    g_detail << "witness elapse " << total_elapse(w.steps)
             << " accepting=" << rep.accepting << " (want accepting, elapse 5)\n";
    return false;
  }
  OracleLimits lim;
  lim.maxSteps = 28;
  lim.maxElapse = 4;
  lim.maxTotalElapse = 4;
  OracleResult fast = oracle_reachable(m, lim);
  if (fast.outcome != OracleOutcome::Unreachable) {
    g_detail << "a run with total elapse <= 4 exists or the bound was cut\n";
    return false;
  }
  return true;
}

struct FuzzOutcome {
  int disagreements = 0;
  int witnessesChecked = 0;
  int witnessesBad = 0;
  int monotonicityBad = 0;
  int collapseBad = 0;
  int budgetBad = 0;
};

void fuzz_one(const Model& m, FuzzOutcome& f) {
  OracleLimits lim;
  lim.maxSteps = m.timed ? 8 : 10;
  lim.maxElapse = 4;
  lim.nodeCap = 50000;
  OracleResult ora = oracle_reachable(m, lim);

  std::vector<SearchResult> byK;
  for (int k = 0; k <= 3; ++k) byK.push_back(check_reachable(m, k));

  for (int k = 0; k + 1 <= 3; ++k) {
    const SearchResult& lo = byK[static_cast<size_t>(k)];
    const SearchResult& hi = byK[static_cast<size_t>(k) + 1];
    if (lo.outcome == SearchOutcome::Reachable &&
        (hi.outcome != SearchOutcome::Reachable || hi.holeBound != lo.holeBound))
      ++f.monotonicityBad;
  }
  if (byK[0].outcome != byK[1].outcome) ++f.collapseBad;

  // the structural cap counts timed states for timed models
  long states = m.timed ? enumerate_states(m).count : m.locCount();
  long double cap = 1;
  for (int e = 0; e < 2 * 2 + 3; ++e) cap *= states;
  for (int e = 0; e < 2 + 1; ++e) cap *= m.numStacks;
  long budget = cap > 1e7L ? 10000000L : static_cast<long>(cap);
  if (byK[2].dedupPeak > budget) ++f.budgetBad;

  if (byK[3].outcome == SearchOutcome::Reachable) {
    ++f.witnessesChecked;
    Witness w = assemble_witness(m, byK[3]);
    if (!replay(m, w).accepting || hole_bound_of_run(m, w.steps) > byK[3].holeBound)
      ++f.witnessesBad;
    if (ora.outcome == OracleOutcome::Unreachable && ora.exhaustive) ++f.disagreements;
  }
  if (ora.outcome == OracleOutcome::Reachable && ora.witness.holes <= 3) {
    const SearchResult& rs = byK[static_cast<size_t>(ora.witness.holes)];
    if (rs.outcome != SearchOutcome::Reachable || rs.holeBound > ora.witness.holes)
      ++f.disagreements;
  }
}

FuzzOutcome g_fuzz;
bool g_fuzzDone = false;

void ensure_fuzz() {
  if (g_fuzzDone) return;
  std::mt19937 u(1001);
  for (int i = 0; i < 200; ++i) fuzz_one(testutil::random_untimed_model(u), g_fuzz);
  std::mt19937 t(2002);
  for (int i = 0; i < 100; ++i) fuzz_one(testutil::random_timed_model(t), g_fuzz);
  g_fuzzDone = true;
}

bool criterion_oracle_agreement() {
  ensure_fuzz();
  if (g_fuzz.disagreements != 0) {
    g_detail << g_fuzz.disagreements << " disagreement(s) on 300 random models\n";
    return false;
  }
  return true;
}

bool criterion_witness_validity() {
  ensure_fuzz();
  // also count the bundled models, whose witnesses are checked elsewhere
  if (g_fuzz.witnessesChecked < 20) {
    g_detail << "only " << g_fuzz.witnessesChecked << " witnesses exercised\n";
    return false;
  }
  if (g_fuzz.witnessesBad != 0) {
    g_detail << g_fuzz.witnessesBad << " of " << g_fuzz.witnessesChecked
             << " witnesses invalid\n";
    return false;
  }
  return true;
}

bool criterion_structural_laws() {
  ensure_fuzz();
  bool ok = true;
  if (g_fuzz.monotonicityBad != 0) {
    g_detail << g_fuzz.monotonicityBad << " monotonicity violation(s)\n";
    ok = false;
  }
  if (g_fuzz.collapseBad != 0) {
    g_detail << g_fuzz.collapseBad << " one-hole collapse violation(s)\n";
    ok = false;
  }
  if (g_fuzz.budgetBad != 0) {
    g_detail << g_fuzz.budgetBad << " budget violation(s)\n";
    ok = false;
  }
  Model empty = make_benchmark("lcrit");
  empty.finals.clear();
  SearchResult r = check_reachable(empty, 3);
  for (size_t i = 0; i + 1 < r.stats.size(); ++i)
    if (r.stats[i].lists > r.stats[i + 1].lists) {
      g_detail << "per-stage exploration shrank between stages " << i << " and "
               << i + 1 << "\n";
      ok = false;
    }
  return ok;
}

bool criterion_wellnested_reference() {
  std::mt19937 rng(3003);
  int complete = 0;
  for (int i = 0; i < 150; ++i) {
    Model m = testutil::random_untimed_model(rng);
    auto got = rel_pairs(compute_wr(m));
    WnPairsResult ref = oracle_wellnested_pairs(m, 14, 20000);
    std::set<std::pair<int, int>> gotSet(got.begin(), got.end());
    std::set<std::pair<int, int>> refSet(ref.pairs.begin(), ref.pairs.end());
    if (ref.complete) {
      if (gotSet != refSet) {
        g_detail << "pair sets differ on random model " << i << "\n";
        return false;
      }
      ++complete;
    } else {
      for (auto& p : refSet)
        if (!gotSet.count(p)) {
          g_detail << "reference found an unrecorded pair on model " << i << "\n";
          return false;
        }
    }
  }
  if (complete < 50) {
    g_detail << "only " << complete << " fully explored models\n";
    return false;
  }
  return true;
}

int check(const char* what, bool (*fn)()) {
  g_detail.str("");
  bool ok = false;
  try {
    ok = fn();
  } catch (const std::exception& e) {
    g_detail << "exception: " << e.what() << "\n";
  }
  std::cout << (ok ? "PASS" : "FAIL") << ": " << what << "\n";
  if (!ok) std::cerr << g_detail.str();
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance_tests <path-to-cli-binary>\n";
    return 2;
  }
  g_cli = argv[1];
  g_tmp = fs::temp_directory_path() /
          ("holebound-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(g_tmp);

  int failures = 0;
  failures += check("bundled models report their hole bounds through the CLI",
                    criterion_cli_bounds);
  failures += check("crossing models are EMPTY when only one hole is allowed",
                    criterion_cli_one_hole_empty);
  failures += check("prodcons(3,2) yields a replayable 24-transition witness",
                    criterion_prodcons_witness);
  failures += check("the timed maze needs exactly 5 time units",
                    criterion_maze_elapse);
  failures += check("search and bounded reference agree on 300 random models",
                    criterion_oracle_agreement);
  failures += check("every found run replays within its reported hole bound",
                    criterion_witness_validity);
  failures += check("deepening is monotone, one hole collapses, budgets hold",
                    criterion_structural_laws);
  failures += check("recorded well-nested endpoints match the reference",
                    criterion_wellnested_reference);

  std::error_code ec;
  fs::remove_all(g_tmp, ec);
  return failures == 0 ? 0 : 1;
}
