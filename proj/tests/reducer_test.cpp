/*
 * Copyright 2026 sqlxdiff project.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <gtest/gtest.h>

#include <random>

#include "sqlxd/errors.hpp"
#include "sqlxd/parse.hpp"
#include "sqlxd/reducer.hpp"
#include "sqlxd/render.hpp"
#include "sqlxd/walk.hpp"

namespace sqlxd {
namespace {

const Dialect kTs = Dialect::questdb();

TEST(Ddmin, SingleTriggerMatchesBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::set<std::size_t> trigger;
    const std::size_t k = 1 + rng() % n;
    while (trigger.size() < k) trigger.insert(rng() % n);
    DdminStats stats;
    const auto got = ddmin_indices(
        n,
        [&](const std::vector<std::size_t>& s) {
          return std::includes(s.begin(), s.end(), trigger.begin(), trigger.end());
        },
        100000, &stats);
    EXPECT_EQ(std::set<std::size_t>(got.begin(), got.end()), trigger);
    EXPECT_TRUE(stats.minimal);
  }
}

TEST(Ddmin, ResultIsOneMinimal) {
  // Holds when the subset sums to at least 10; non-monotone in general.
  const std::vector<int> w = {3, 1, 4, 1, 5, 9, 2, 6};
  auto holds = [&](const std::vector<int>& s) { return std::accumulate(s.begin(), s.end(), 0) >= 10; };
  const auto r = ddmin<int>(w, holds);
  ASSERT_TRUE(holds(r));
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto c = r;
    c.erase(c.begin() + static_cast<long>(i));
    EXPECT_FALSE(holds(c));
  }
}

TEST(Ddmin, EmptyWhenPredicateHoldsOnNothing) {
  EXPECT_TRUE(ddmin_indices(5, [](const auto&) { return true; }, 100).empty());
}

TEST(Ddmin, FlakyPredicateDetected) {
  int calls = 0;
  EXPECT_THROW(ddmin_indices(4, [&](const auto&) { return (calls++ % 2) == 0; }, 100), FlakyPredicate);
}

TEST(Ddmin, BudgetStopsEarly) {
  DdminStats stats;
  std::set<std::size_t> trigger = {1, 5, 9};
  const auto r = ddmin_indices(
      12,
      [&](const std::vector<std::size_t>& s) {
        return std::includes(s.begin(), s.end(), trigger.begin(), trigger.end());
      },
      3, &stats);
  EXPECT_FALSE(stats.minimal);
  EXPECT_LE(stats.invocations, 3u + 1);  // plus the closing re-check
  EXPECT_TRUE(std::includes(r.begin(), r.end(), trigger.begin(), trigger.end()));
}

TEST(Ddmin, MemoizesRepeatedSubsets) {
  std::size_t calls = 0;
  DdminStats stats;
  ddmin_indices(
      8,
      [&](const std::vector<std::size_t>& s) {
        ++calls;
        return std::find(s.begin(), s.end(), 3) != s.end();
      },
      1000, &stats);
  EXPECT_EQ(stats.invocations, calls);
}

bool has_text(const TestCase& c, const std::string& needle) {
  return render_case(c, kTs).find(needle) != std::string::npos;
}

TEST(Reduce, DropsSurplusSetOpBranch) {
  const TestCase c = parse_case("(SELECT 1 UNION ALL SELECT 1) EXCEPT (SELECT 0) UNION ALL SELECT 5;", kTs);
  // Discrepancy persists as long as the EXCEPT over a duplicated branch survives.
  auto pred = [](const TestCase& t) {
    const auto q = render(t.query, kTs);
    return q.find("EXCEPT") != std::string::npos && q.find("UNION ALL SELECT 1") != std::string::npos;
  };
  const auto r = reduce_case(c, pred);
  EXPECT_FALSE(r.flaky);
  EXPECT_TRUE(pred(r.reduced));
  EXPECT_FALSE(has_text(r.reduced, "SELECT 5"));
  EXPECT_LT(case_size(r.reduced), case_size(c));
}

TEST(Reduce, DropsRowsTablesAndConjuncts) {
  const TestCase c = parse_case(
      "CREATE TABLE test (c0 INT, c1 INT);"
      "CREATE TABLE other (z INT);"
      "INSERT INTO test VALUES (NULL, 1), (2, 3), (4, 5);"
      "INSERT INTO other VALUES (7);"
      "SELECT c0, c1 FROM test WHERE c1 > 0 AND c0 IS NULL ORDER BY c1 LIMIT 5;",
      kTs);
  auto pred = [](const TestCase& t) {
    const auto s = render_case(t, kTs);
    return s.find("NULL, 1") != std::string::npos && s.find("c0 IS NULL") != std::string::npos;
  };
  const auto r = reduce_case(c, pred);
  EXPECT_TRUE(r.minimal);
  const auto out = render_case(r.reduced, kTs);
  EXPECT_EQ(out.find("other"), std::string::npos) << out;
  EXPECT_EQ(out.find("(2, 3)"), std::string::npos) << out;
  EXPECT_EQ(out.find("ORDER BY"), std::string::npos) << out;
  EXPECT_EQ(out.find("LIMIT"), std::string::npos) << out;
  EXPECT_EQ(out.find("c1 > 0"), std::string::npos) << out;
}

TEST(Reduce, AlreadyMinimalCaseUnchanged) {
  const TestCase c = parse_case(
      "CREATE TABLE test (c0 INT); INSERT INTO test VALUES (NULL); SELECT (c0 IN (0, NULL)) FROM test;", kTs);
  const auto r = reduce_case(c, [&](const TestCase& t) { return t == c; });
  EXPECT_EQ(r.reduced, c);
  EXPECT_FALSE(r.flaky);
  for (const auto& s : r.trace) EXPECT_EQ(s.before, s.after) << s.phase;
}

TEST(Reduce, FlakyPredicateReturnsOriginal) {
  const TestCase c = parse_case("SELECT 1 UNION ALL SELECT 2;", kTs);
  int calls = 0;
  const auto r = reduce_case(c, [&](const TestCase&) { return (calls++ % 2) == 0; });
  EXPECT_TRUE(r.flaky);
  EXPECT_EQ(r.reduced, c);
}

TEST(Reduce, FlattensSubquery) {
  const TestCase c = parse_case(
      "CREATE TABLE t (a INT); SELECT s.k0 FROM (SELECT a AS k0 FROM t WHERE a > 1) AS s WHERE s.k0 < 9;", kTs);
  auto pred = [](const TestCase& t) { return has_text(t, "FROM t") && has_text(t, "> 1"); };
  const auto r = reduce_case(c, pred);
  EXPECT_TRUE(pred(r.reduced));
  EXPECT_LE(case_size(r.reduced), case_size(c));
}

TEST(Reduce, CaseRoundTrip) {
  const std::string script = "CREATE TABLE t (a INT);\nINSERT INTO t VALUES (1);\nSELECT a FROM t;\n";
  EXPECT_EQ(render_case(parse_case(script, kTs), kTs), script);
}

}  // namespace
}  // namespace sqlxd
