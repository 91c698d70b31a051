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

#include "sqlxd/errors.hpp"
#include "sqlxd/mapping.hpp"
#include "sqlxd/parse.hpp"
#include "sqlxd/render.hpp"
#include "sqlxd/walk.hpp"
#include "sqlxd/workload_gen.hpp"
#include "support.hpp"

namespace sqlxd {
namespace {

const Dialect kTs = Dialect::questdb();

std::vector<std::string> sample(std::uint64_t seed, std::size_t n, const Dialect& d = kTs) {
  GenConfig gc;
  gc.seed = seed;
  Generator g(gc, d);
  const auto pool = ClausePool::everything(generator_clauses());
  const auto schema = g.gen_schema(&pool);
  std::vector<std::string> out;
  for (const auto& t : schema.tables) out.push_back(render(Statement(t.ddl()), d));
  for (const auto& s : g.gen_data(schema)) out.push_back(render(s, d));
  for (std::size_t i = 0; i < n; ++i) out.push_back(render(g.gen_query(schema, pool), d));
  return out;
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    (void)c;
  }
  EXPECT_NE(Rng(42).next(), Rng(43).next());
}

TEST(Rng, BoundedDrawsStayInRange) {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    const auto v = r.range(-3, 3);
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 3);
    EXPECT_LT(r.below(5), 5u);
  }
}

TEST(Generator, Deterministic) { EXPECT_EQ(sample(11, 300), sample(11, 300)); }

TEST(Generator, SeedsDiverge) { EXPECT_NE(sample(11, 50), sample(12, 50)); }

TEST(Generator, QueriesRoundTrip) {
  for (const auto* d : {&kTs}) {
    for (const auto& sql : sample(3, 2000, *d)) {
      ASSERT_EQ(render(parse(sql, *d), *d), sql);
    }
  }
}

TEST(Generator, StreamingTargetRoundTrips) {
  const Dialect rw = Dialect::risingwave();
  std::size_t windows = 0;
  for (const auto& sql : sample(5, 2000, rw)) {
    const auto s = parse(sql, rw);
    ASSERT_EQ(render(s, rw), sql);
    const auto used = clauses_used(s);
    windows += used.count("tumble") + used.count("hop");
  }
  EXPECT_GT(windows, 0u);
}

TEST(Generator, SchemaRespectsLimits) {
  GenConfig gc;
  gc.seed = 9;
  gc.max_columns = 4;
  gc.table_count = 5;
  Generator g(gc, kTs);
  const auto schema = g.gen_schema();
  ASSERT_EQ(schema.tables.size(), 5u);
  for (const auto& t : schema.tables) {
    EXPECT_GE(t.columns.size(), 1u);
    EXPECT_LE(t.columns.size(), 4u);
    EXPECT_EQ(t.columns.back().name, "ts");
    EXPECT_EQ(t.designated_timestamp, std::optional<std::string>("ts"));
  }
}

TEST(Generator, NullFractionAndOrderedTimestamps) {
  GenConfig gc;
  gc.seed = 17;
  gc.null_probability = 0.2;
  gc.min_rows = gc.max_rows = 400;
  Generator g(gc, kTs);
  const auto schema = g.gen_schema();
  const auto data = g.gen_data(schema);
  std::size_t cells = 0, nulls = 0;
  for (std::size_t ti = 0; ti < data.size(); ++ti) {
    const auto& ins = data[ti].as<Insert>();
    const auto& table = schema.tables[ti];
    EXPECT_EQ(ins.rows.size(), 400u);
    std::optional<std::int64_t> prev;
    for (const auto& row : ins.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        const auto& col = table.columns[c];
        if (col.name == "ts") {
          const auto ts = std::get<Timestamp>(row[c].value).micros;
          if (prev) EXPECT_GT(ts, *prev);
          prev = ts;
          continue;
        }
        if (col.type.kind == TypeKind::Boolean) continue;
        ++cells;
        nulls += is_null(row[c].value);
      }
    }
  }
  ASSERT_GT(cells, 1000u);
  const double frac = static_cast<double>(nulls) / static_cast<double>(cells);
  EXPECT_NEAR(frac, 0.2, 0.03);
}

TEST(Generator, HonoursPool) {
  GenConfig gc;
  gc.seed = 4;
  Generator g(gc, kTs);
  ClausePool pool;
  pool.shared = {"select", "where", "comparison", "count", "create-table", "insert"};
  const auto schema = g.gen_schema(&pool);
  for (int i = 0; i < 500; ++i) {
    for (const auto& c : clauses_used(g.gen_query(schema, pool))) EXPECT_TRUE(pool.contains(c)) << c;
  }
}

TEST(Generator, EveryQueryMaps) {
  GenConfig gc;
  gc.seed = 21;
  Generator g(gc, kTs);
  const auto pool = ClausePool::everything(generator_clauses());
  const auto schema = g.gen_schema(&pool);
  for (int i = 0; i < 1000; ++i) {
    const auto q = g.gen_query(schema, pool);
    EXPECT_NO_THROW(apply_mappings(q, RuleSet::standard(), MappingContext{schema})) << render(q, kTs);
  }
}

TEST(GenConfig, JsonRoundTrip) {
  GenConfig gc;
  gc.seed = 77;
  gc.toggles["dateadd"] = true;
  gc.table_prefix = "x";
  const auto back = GenConfig::from_json(gc.to_json());
  EXPECT_EQ(back.to_json(), gc.to_json());
  EXPECT_TRUE(back.enabled("dateadd"));
  EXPECT_FALSE(GenConfig{}.enabled("dateadd"));
}

TEST(GenConfig, RejectsUnknownToggleAndBadRange) {
  GenConfig gc;
  gc.toggles["no-such-clause"] = true;
  EXPECT_THROW(gc.validate(), ConfigError);
  EXPECT_THROW(GenConfig::from_json({{"row-range", {1}}}), ConfigError);
}

TEST(Corpus, ManifestWritten) {
  const auto dir = testing::scratch_dir("corpus");
  GenConfig gc;
  Generator g(gc, kTs);
  const auto schema = g.gen_schema();
  std::vector<Statement> stmts = g.gen_data(schema);
  dump_corpus(dir + "/c.sql", stmts, kTs, gc);
  const auto manifest = nlohmann::json::parse(testing::slurp(dir + "/c.sql.manifest.json"));
  EXPECT_EQ(manifest.at("count").get<std::size_t>(), stmts.size());
  EXPECT_EQ(manifest.at("seed").get<std::uint64_t>(), gc.seed);
}

}  // namespace
}  // namespace sqlxd
