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

#include <map>
#include <set>

#include "sqlxd/plan.hpp"
#include "support.hpp"

namespace sqlxd {
namespace {

TEST(Plan, CostsAndLiteralsDoNotMatter) {
  const auto a = plan_fingerprint(
      "Aggregate  (cost=25.88..25.89 rows=1 width=8)\n  ->  Seq Scan on test  (cost=0.00..24.12 rows=703 width=38)\n"
      "        Filter: ((c_0)::text > 'Z'::text)");
  const auto b = plan_fingerprint(
      "Aggregate  (cost=1.01..1.02 rows=1 width=8)\n  ->  Seq Scan on other  (cost=0.00..1.01 rows=1 width=32)\n"
      "        Filter: (c_0 > 'A')");
  EXPECT_EQ(a.normalized, "Aggregate\n  Seq Scan");
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.degraded);
}

TEST(Plan, StructureMatters) {
  const auto seq = plan_fingerprint("Seq Scan on t  (cost=0.00..1.00 rows=1 width=4)");
  const auto idx = plan_fingerprint("Index Scan using t_pkey on t  (cost=0.00..1.00 rows=1 width=4)");
  EXPECT_NE(seq.digest(), idx.digest());
  // Same operators, different tree: the second scan under Hash or beside it.
  const auto nested = plan_fingerprint(
      "Hash Join  (cost=1..9 rows=1 width=4)\n  ->  Seq Scan on a  (cost=0..1 rows=1 width=4)\n"
      "  ->  Hash  (cost=1..2 rows=1 width=4)\n        ->  Seq Scan on b  (cost=0..1 rows=1 width=4)");
  const auto flat = plan_fingerprint(
      "Hash Join  (cost=1..9 rows=1 width=4)\n  ->  Seq Scan on a  (cost=0..1 rows=1 width=4)\n"
      "  ->  Hash  (cost=1..2 rows=1 width=4)\n  ->  Seq Scan on b  (cost=0..1 rows=1 width=4)");
  EXPECT_NE(nested.normalized, flat.normalized);
}

TEST(Plan, IndentOnlyFormat) {
  const auto fp = plan_fingerprint("SelectedRecord\n    Async Filter workers: 2\n      filter: c0>5\n"
                                   "        DataFrame\n            Row forward scan\n            Frame forward scan on: t");
  EXPECT_EQ(fp.normalized, "SelectedRecord\n  Async Filter\n    DataFrame\n      Row forward scan\n      Frame forward scan");
}

TEST(Plan, DegradedWhenNothingRecognised) {
  const auto fp = plan_fingerprint("   12  34\n  ...  ");
  EXPECT_TRUE(fp.degraded);
  EXPECT_EQ(fp.normalized, "12 34 ...");
}

TEST(Plan, CorpusIdempotentAndGrouped) {
  std::map<std::string, std::set<std::string>> groups;
  for (const auto& r : testing::read_jsonl(testing::data_path("plans/corpus.jsonl"))) {
    const auto fp = plan_fingerprint(r.at("plan").get<std::string>());
    EXPECT_EQ(plan_fingerprint(fp.normalized), fp);
    groups[r.at("group").get<std::string>()].insert(fp.digest());
  }
  std::set<std::string> distinct;
  for (const auto& [g, fps] : groups) {
    EXPECT_EQ(fps.size(), 1u) << g;
    distinct.insert(fps.begin(), fps.end());
  }
  EXPECT_EQ(distinct.size(), groups.size());
}

TEST(Plan, DigestIsSixteenHex) {
  const auto d = plan_fingerprint("Result  (cost=0.00..0.01 rows=1 width=4)").digest();
  EXPECT_EQ(d.size(), 16u);
  EXPECT_EQ(d.find_first_not_of("0123456789abcdef"), std::string::npos);
}

}  // namespace
}  // namespace sqlxd
