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
// PgWireExecutor against a scripted in-process server.

#include <gtest/gtest.h>

#include "fake_pg_server.hpp"
#include "sqlxd/errors.hpp"
#include "sqlxd/exec.hpp"

namespace sqlxd {
namespace {

using namespace std::chrono_literals;
using testing::Auth;
using testing::FakeServer;
using testing::Reply;

PgEndpoint endpoint(int port, std::string password = "secret") {
  PgEndpoint e;
  e.id = "fake";
  e.port = port;
  e.user = "tester";
  e.password = std::move(password);
  e.timeout = 500ms;
  return e;
}

Reply typed_rows() {
  Reply r;
  r.columns = {{"i", 23}, {"b", 16}, {"f", 701}, {"s", 25}, {"t", 1114}, {"n", 20}};
  r.rows = {{"1", "t", "1.5", "abc", "2024-01-01 10:00:00", std::nullopt}};
  return r;
}

void check_query(FakeServer& srv, PgWireExecutor& ex) {
  srv.on("SELECT everything", typed_rows());
  const auto o = ex.execute("SELECT everything");
  ASSERT_FALSE(o.is_error()) << o.error;
  ASSERT_EQ(o.rows.size(), 1u);
  const auto& row = o.rows[0];
  EXPECT_EQ(row[0], Value{std::int64_t{1}});
  EXPECT_EQ(row[1], Value{true});
  EXPECT_EQ(row[2], Value{1.5});
  EXPECT_EQ(row[3], Value{std::string("abc")});
  EXPECT_TRUE(std::holds_alternative<Timestamp>(row[4]));
  EXPECT_TRUE(is_null(row[5]));
  EXPECT_EQ(o.column_types[5].kind, TypeKind::BigInteger);
}

TEST(PgWire, Trust) {
  FakeServer srv(Auth::Trust);
  PgWireExecutor ex(endpoint(srv.port()), Dialect::postgresql());
  check_query(srv, ex);
}

TEST(PgWire, Cleartext) {
  FakeServer srv(Auth::Cleartext);
  PgWireExecutor ex(endpoint(srv.port()), Dialect::postgresql());
  check_query(srv, ex);
}

TEST(PgWire, Md5) {
  FakeServer srv(Auth::Md5);
  PgWireExecutor ex(endpoint(srv.port()), Dialect::postgresql());
  check_query(srv, ex);
}

TEST(PgWire, Scram) {
  FakeServer srv(Auth::Scram);
  PgWireExecutor ex(endpoint(srv.port()), Dialect::postgresql());
  check_query(srv, ex);
}

TEST(PgWire, WrongPasswordIsConnectionFailure) {
  FakeServer srv(Auth::Scram);
  PgWireExecutor ex(endpoint(srv.port(), "wrong"), Dialect::postgresql());
  EXPECT_THROW(ex.execute("SELECT 1"), ConnectionLost);
}

TEST(PgWire, ServerErrorBecomesOutcome) {
  FakeServer srv(Auth::Trust);
  Reply r;
  r.error = "Index 2 out of bounds for length 2";
  srv.on("SELECT boom", r);
  PgWireExecutor ex(endpoint(srv.port()), Dialect::postgresql());
  const auto o = ex.execute("SELECT boom");
  ASSERT_TRUE(o.is_error());
  EXPECT_EQ(o.error, "XX000: Index 2 out of bounds for length 2");
  // The session stays usable.
  check_query(srv, ex);
  EXPECT_EQ(srv.connections(), 1);
}

TEST(PgWire, TimeoutReconnects) {
  FakeServer srv(Auth::Trust);
  Reply slow;
  slow.delay = 900ms;
  srv.on("SELECT slow", slow);
  PgWireExecutor ex(endpoint(srv.port()), Dialect::postgresql());
  const auto o = ex.execute("SELECT slow");
  ASSERT_TRUE(o.is_error());
  EXPECT_EQ(o.error, "TIMEOUT");
  check_query(srv, ex);
  EXPECT_EQ(srv.connections(), 2);
}

TEST(PgWire, ResetDropsCreatedTables) {
  FakeServer srv(Auth::Trust);
  PgWireExecutor ex(endpoint(srv.port()), Dialect::postgresql());
  ex.execute("CREATE TABLE a (x INT)");
  ex.execute("CREATE TABLE b (x INT)");
  ex.reset();
  const auto seen = srv.seen();
  ASSERT_GE(seen.size(), 4u);
  EXPECT_EQ(seen[seen.size() - 2], "DROP TABLE IF EXISTS b");
  EXPECT_EQ(seen.back(), "DROP TABLE IF EXISTS a");
}

TEST(PgWire, ExplainJoinsPlanLines) {
  FakeServer srv(Auth::Trust);
  Reply plan;
  plan.columns = {{"QUERY PLAN", 25}};
  plan.rows = {{"Aggregate  (cost=1.00..1.01 rows=1 width=8)"}, {"  ->  Seq Scan on t  (cost=0.00..1.00 rows=1 width=0)"}};
  srv.on("EXPLAIN SELECT count(*) FROM t", plan);
  PgWireExecutor ex(endpoint(srv.port()), Dialect::postgresql());
  const auto p = ex.explain("SELECT count(*) FROM t");
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, "Aggregate  (cost=1.00..1.01 rows=1 width=8)\n  ->  Seq Scan on t  (cost=0.00..1.00 rows=1 width=0)");
}

TEST(PgWire, UnreachableEndpoint) {
  int port;
  {
    FakeServer srv(Auth::Trust);
    port = srv.port();
  }
  PgWireExecutor ex(endpoint(port), Dialect::postgresql());
  EXPECT_THROW(ex.execute("SELECT 1"), ConnectionLost);
}

}  // namespace
}  // namespace sqlxd
