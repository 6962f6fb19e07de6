#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include <holebound/benchmarks.hpp>
#include <holebound/closure.hpp>
#include <holebound/search.hpp>
#include <holebound/semantics.hpp>
#include <holebound/witness_gen.hpp>

#include "test_util.hpp"

using namespace holebound;

namespace {

OracleLimits fuzz_limits(bool timed) {
  OracleLimits lim;
  lim.maxSteps = timed ? 8 : 10;
  // Random timed models keep constants <= 3, so waits beyond 4 are
  // indistinguishable from 4 and the oracle loses nothing by capping.
  lim.maxElapse = 4;
  lim.nodeCap = 50000;
  return lim;
}

struct FuzzTally {
  int models = 0;
  int oracleReachable = 0;
  int searchReachable = 0;
  int agreed = 0;
};

// Cross-checks one model; returns false on any disagreement.
bool examine(const Model& m, FuzzTally& tally) {
  ++tally.models;
  OracleResult ora = oracle_reachable(m, fuzz_limits(m.timed));

  std::vector<SearchResult> byK;
  for (int k = 0; k <= 3; ++k) byK.push_back(check_reachable(m, k));

  // iterative deepening is monotone and keeps the minimal bound
  for (int k = 0; k + 1 <= 3; ++k) {
    if (byK[static_cast<size_t>(k)].outcome != SearchOutcome::Reachable) continue;
    const SearchResult& lo = byK[static_cast<size_t>(k)];
    const SearchResult& hi = byK[static_cast<size_t>(k) + 1];
    if (hi.outcome != SearchOutcome::Reachable || hi.holeBound != lo.holeBound) {
      UNSCOPED_INFO("monotonicity broken between K=" << k << " and K=" << k + 1);
      return false;
    }
  }

  // a single hole never helps: if it is usable it closes into no hole at all
  if (byK[1].outcome != SearchOutcome::Budget &&
      byK[0].outcome != SearchOutcome::Budget &&
      byK[1].outcome != byK[0].outcome) {
    UNSCOPED_INFO("one-hole outcome differs from zero-hole outcome");
    return false;
  }

  // every found summary must be realizable as an accepting run
  const SearchResult& r2 = byK[3];
  if (r2.outcome == SearchOutcome::Reachable) {
    ++tally.searchReachable;
    Witness w = assemble_witness(m, r2);
    ReplayResult rep = replay(m, w);
    if (!rep.accepting) {
      UNSCOPED_INFO("witness does not replay: " << rep.reason);
      return false;
    }
    if (hole_bound_of_run(m, w.steps) > r2.holeBound) {
      UNSCOPED_INFO("witness exceeds the reported hole bound");
      return false;
    }
    if (ora.outcome == OracleOutcome::Unreachable && ora.exhaustive) {
      UNSCOPED_INFO("search found a run inside an exhaustively empty space");
      return false;
    }
  }

  // runs the bounded oracle can see must be found at a matching hole budget
  if (ora.outcome == OracleOutcome::Reachable) {
    ++tally.oracleReachable;
    int h = ora.witness.holes;
    if (h <= 3) {
      const SearchResult& rs = byK[static_cast<size_t>(h)];
      if (rs.outcome != SearchOutcome::Reachable) {
        UNSCOPED_INFO("oracle found a run with " << h
                                                 << " holes but the search is empty");
        return false;
      }
      if (rs.holeBound > h) {
        UNSCOPED_INFO("search bound " << rs.holeBound << " above oracle bound " << h);
        return false;
      }
    }
  }

  ++tally.agreed;
  return true;
}

}  // namespace

TEST_CASE("bounded oracle and summary search agree on random untimed models") {
  std::mt19937 rng(12345);
  FuzzTally tally;
  for (int i = 0; i < 200; ++i) {
    Model m = testutil::random_untimed_model(rng);
    CAPTURE(i, serialize_model(m));
    REQUIRE(examine(m, tally));
  }
  CHECK(tally.models == 200);
  CHECK(tally.agreed == 200);
  CHECK(tally.oracleReachable > 10);  // the family is not vacuously empty
  CHECK(tally.searchReachable >= tally.oracleReachable / 2);
}

TEST_CASE("bounded oracle and summary search agree on random timed models") {
  std::mt19937 rng(999);
  FuzzTally tally;
  for (int i = 0; i < 100; ++i) {
    Model m = testutil::random_timed_model(rng);
    CAPTURE(i, serialize_model(m));
    REQUIRE(examine(m, tally));
  }
  CHECK(tally.models == 100);
  CHECK(tally.agreed == 100);
  CHECK(tally.oracleReachable > 5);
}

TEST_CASE("recorded well-nested pairs equal the reference relation") {
  std::mt19937 rng(4242);
  int complete = 0;
  for (int i = 0; i < 150; ++i) {
    Model m = testutil::random_untimed_model(rng);
    CAPTURE(i, serialize_model(m));
    BoolRel wr = compute_wr(m);
    WnPairsResult ref = oracle_wellnested_pairs(m, 14, 20000);
    auto got = rel_pairs(wr);
    std::set<std::pair<int, int>> gotSet(got.begin(), got.end());
    std::set<std::pair<int, int>> refSet(ref.pairs.begin(), ref.pairs.end());
    if (ref.complete) {
      REQUIRE(gotSet == refSet);
      ++complete;
    } else {
      // even a truncated exploration may only find recorded pairs
      for (auto& p : refSet) REQUIRE(gotSet.count(p) == 1);
    }
  }
  CHECK(complete > 50);
}

TEST_CASE("per-stage work grows monotonically on an empty instance") {
  Model m = make_benchmark("lcrit");
  m.finals.clear();
  SearchResult r = check_reachable(m, 3);
  REQUIRE(r.outcome == SearchOutcome::Empty);
  REQUIRE(r.stats.size() == 4);
  for (size_t i = 0; i + 1 < r.stats.size(); ++i)
    CHECK(r.stats[i].lists <= r.stats[i + 1].lists);
  CHECK(r.stats.back().lists == r.dedupPeak);
}

TEST_CASE("exploration respects the structural budget") {
  std::mt19937 rng(77);
  for (int i = 0; i < 50; ++i) {
    Model m = testutil::random_untimed_model(rng);
    const int K = 2;
    SearchResult r = check_reachable(m, K);
    long double cap = 1;
    for (int e = 0; e < 2 * K + 3; ++e) cap *= m.locCount();
    for (int e = 0; e < K + 1; ++e) cap *= m.numStacks;
    long budget = cap > 1e7L ? 10000000L : static_cast<long>(cap);
    CAPTURE(i, m.locCount(), budget);
    CHECK(r.dedupPeak <= budget);
  }
}
