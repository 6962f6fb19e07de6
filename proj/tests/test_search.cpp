#include <catch2/catch_amalgamated.hpp>

#include <holebound/benchmarks.hpp>
#include <holebound/search.hpp>

#include "test_util.hpp"

using namespace holebound;

namespace {

void expect_reachable(const std::string& spec, int maxHoles, int holeBound) {
  CAPTURE(spec, maxHoles);
  Model m = make_benchmark(spec);
  SearchResult r = check_reachable(m, maxHoles);
  REQUIRE(r.outcome == SearchOutcome::Reachable);
  CHECK(r.holeBound == holeBound);
  CHECK(r.timed == m.timed);
  if (m.timed) {
    CHECK(r.acceptingTNode >= 0);
    CHECK(r.tctx != nullptr);
  } else {
    CHECK(r.acceptingNode >= 0);
    CHECK(r.ctx != nullptr);
  }
}

void expect_empty(const std::string& spec, int maxHoles) {
  CAPTURE(spec, maxHoles);
  Model m = make_benchmark(spec);
  SearchResult r = check_reachable(m, maxHoles);
  CHECK(r.outcome == SearchOutcome::Empty);
  CHECK(r.holeBound == -1);
}

}  // namespace

TEST_CASE("hole bounds of the bundled models") {
  expect_reachable("lbh", 2, 2);
  expect_reachable("lcrit", 2, 2);
  expect_reachable("lcrit-timed", 2, 2);
  expect_reachable("prodcons(3,2)", 2, 2);
  expect_reachable("prodcons(24,7,compact)", 2, 2);
  expect_reachable("maze", 2, 0);  // without clocks the shortcut is open
  expect_reachable("maze-timed", 2, 2);
}

TEST_CASE("one hole is not enough for the crossing models") {
  expect_empty("lbh", 1);
  expect_empty("lcrit", 1);
  expect_empty("lcrit-timed", 1);
  expect_empty("prodcons(3,2)", 1);
  expect_empty("maze-timed", 1);
}

TEST_CASE("the phase model stays empty even with four holes") {
  expect_empty("lprime-phase(3)", 4);
}

TEST_CASE("the three-hole chain needs exactly three holes") {
  Model m = testutil::three_hole_chain();
  SearchResult r3 = check_reachable(m, 3);
  REQUIRE(r3.outcome == SearchOutcome::Reachable);
  CHECK(r3.holeBound == 3);
  CHECK(check_reachable(m, 2).outcome == SearchOutcome::Empty);
}

TEST_CASE("stage statistics trace the iterative deepening") {
  Model m = make_benchmark("lbh");
  SearchResult r = check_reachable(m, 2);
  REQUIRE(r.stats.size() == 3);
  for (size_t i = 0; i < r.stats.size(); ++i) {
    CHECK(r.stats[i].k == static_cast<int>(i));
    CHECK(r.stats[i].wrSize == 11);
    if (i + 1 < r.stats.size()) {
      CHECK(r.stats[i].outcome == "empty");
      CHECK(r.stats[i].lists <= r.stats[i + 1].lists);
    } else {
      CHECK(r.stats[i].outcome == "reachable");
    }
  }
  long peak = 0;
  for (const StageStats& s : r.stats) peak = std::max(peak, s.lists);
  CHECK(r.dedupPeak == peak);
}

TEST_CASE("timed stage statistics report the timed relation size") {
  Model m = make_benchmark("maze-timed");
  SearchResult r = check_reachable(m, 2);
  REQUIRE(r.outcome == SearchOutcome::Reachable);
  REQUIRE(r.stats.size() == 3);
  CHECK(r.stats[0].lists == 15);
  CHECK(r.stats[1].lists == 67);
  CHECK(r.stats[2].lists == 1388);
  CHECK(r.stats[2].wrSize == 1980);
  CHECK(r.dedupPeak == 1388);
}

TEST_CASE("an explicit budget cuts the search off") {
  Model m = make_benchmark("prodcons(3,2)");
  SearchOptions opts;
  opts.budget = 5;
  SearchResult r = check_reachable(m, 2, opts);
  CHECK(r.outcome == SearchOutcome::Budget);
  CHECK(r.holeBound == -1);
  REQUIRE_FALSE(r.stats.empty());
  CHECK(r.stats.back().outcome == "budget");
}

TEST_CASE("the default budget admits the bundled models") {
  // |S|^(2K+3) * n^(K+1) for lbh at K=2 is 7^7 * 2^3, far above what the
  // search actually explores.
  Model m = make_benchmark("lbh");
  SearchResult r = check_reachable(m, 2);
  CHECK(r.dedupPeak < 6588344);
}

TEST_CASE("repeated visits distinguish the three acceptance modes") {
  SECTION("a push-only loop shows up only when holes may stay open") {
    Model m;
    m.numStacks = 1;
    m.internLoc("s");
    m.internLoc("t");
    m.addNop("s", "t");
    m.addPush("t", "t", 0, "A");
    m.initial = 0;
    m.finals = {1};
    m.finalize();
    StateId t = m.locId("t");
    CHECK_FALSE(repeated_reachability(m, t, 1));
    CHECK_FALSE(repeated_reachability(m, t, 2));
    CHECK(repeated_reachability(m, t, 3));
  }
  SECTION("a nop self-loop satisfies all modes") {
    Model m;
    m.numStacks = 1;
    m.internLoc("u");
    m.addNop("u", "u");
    m.initial = 0;
    m.finals = {0};
    m.finalize();
    CHECK(repeated_reachability(m, 0, 1));
    CHECK(repeated_reachability(m, 0, 2));
    CHECK(repeated_reachability(m, 0, 3));
  }
  SECTION("a well-nested pump satisfies the stricter modes") {
    // s -> t, then t loops via push;pop
    Model m = testutil::chain_model({"n"});
    StateId t = 1;
    Transition& push = m.addPush("m1", "m1", 0, "A");
    (void)push;
    m.addPop("m1", "m1", 0, "A");
    m.finalize();
    CHECK(repeated_reachability(m, t, 1));
    CHECK(repeated_reachability(m, t, 2));
    CHECK(repeated_reachability(m, t, 3));
  }
  SECTION("unreachable targets fail every mode") {
    Model m = testutil::chain_model({"n"});
    Model iso = m;
    iso.internLoc("island");
    iso.addNop("island", "island");
    iso.finalize();
    StateId isl = iso.locId("island");
    CHECK_FALSE(repeated_reachability(iso, isl, 1));
    CHECK_FALSE(repeated_reachability(iso, isl, 2));
    CHECK_FALSE(repeated_reachability(iso, isl, 3));
  }
  SECTION("argument validation") {
    Model timed = make_benchmark("lcrit-timed");
    CHECK_THROWS_AS(repeated_reachability(timed, 0, 1), std::invalid_argument);
    Model m = testutil::chain_model({"n"});
    CHECK_THROWS_AS(repeated_reachability(m, 99, 1), std::invalid_argument);
    CHECK_THROWS_AS(repeated_reachability(m, 0, 7), std::invalid_argument);
  }
}

TEST_CASE("higher hole budgets keep the answer and the bound") {
  Model m = make_benchmark("lbh");
  for (int k = 2; k <= 4; ++k) {
    SearchResult r = check_reachable(m, k);
    REQUIRE(r.outcome == SearchOutcome::Reachable);
    CHECK(r.holeBound == 2);
  }
}
