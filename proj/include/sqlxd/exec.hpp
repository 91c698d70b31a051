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
#pragma once

// Executor abstraction over live endpoints and recorded fixtures.

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sqlxd/ast.hpp"
#include "sqlxd/dialect.hpp"

namespace sqlxd {

enum class OutcomeStatus { Rows, Error };

struct ExecOutcome {
  OutcomeStatus status = OutcomeStatus::Rows;
  std::vector<std::vector<Value>> rows;
  std::vector<DataType> column_types;
  std::string error;
  std::chrono::microseconds latency{0};
  std::optional<std::string> plan;

  static ExecOutcome ok(std::vector<std::vector<Value>> rows = {}, std::vector<DataType> types = {});
  static ExecOutcome failure(std::string text);

  bool is_error() const { return status == OutcomeStatus::Error; }
  bool operator==(const ExecOutcome&) const = default;
};

/// Fixture wire format: {"status", "rows"|"error", "types", "plan", "latency_us"}.
nlohmann::json to_json(const ExecOutcome& o);
ExecOutcome outcome_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Value& v);
Value value_from_json(const nlohmann::json& j, std::optional<TypeKind> hint = std::nullopt);
/// Renders rows as "[(1), (NULL)]".
std::string format_rows(const std::vector<std::vector<Value>>& rows);
std::string format_value(const Value& v);

/// Canonical text used for digests: parse-and-render under a dialect that
/// admits every construct, so formatting and keyword case collapse. Text
/// outside the grammar falls back to whitespace-normalized input.
std::string canonical_sql(std::string_view sql);
std::string sha256_hex(std::string_view data);
/// SHA-256 of canonical_sql(sql).
std::string sql_digest(std::string_view sql);

/// Tracks the statements that shaped a session since its last reset.
/// Fixture keys for a statement chain the session state with the statement's
/// canonical text; with an empty session the key is exactly sql_digest(sql).
class SessionDigest {
 public:
  void reset() { state_.clear(); }
  std::string key_for(std::string_view sql) const;
  /// Folds a state-changing statement (DDL, INSERT) into the session.
  void absorb(std::string_view sql) { state_ = key_for(sql); }
  const std::string& state() const { return state_; }

 private:
  std::string state_;
};

/// True for statements that change session state instead of reading it.
bool is_setup_statement(std::string_view sql);

class Executor {
 public:
  virtual ~Executor() = default;
  virtual const std::string& endpoint() const = 0;
  virtual const Dialect& dialect() const = 0;
  virtual ExecOutcome execute(const std::string& sql) = 0;
  /// Raw plan text, or nullopt when the endpoint offers none.
  virtual std::optional<std::string> explain(const std::string& sql) = 0;
  /// Drops every table created through this executor since the last reset.
  virtual void reset() = 0;
};

class FixtureStore {
 public:
  struct Key {
    std::string endpoint;
    std::string digest;
    auto operator<=>(const Key&) const = default;
  };
  struct Entry {
    std::string sql;
    ExecOutcome outcome;
  };

  /// Reads line-delimited records. A record may carry "sql-digest"; failing
  /// that, the digest is derived from "sql" and the optional "setup" list.
  static FixtureStore load(const std::string& path);
  void load_into(const std::string& path);
  void save(const std::string& path) const;

  void put(const std::string& endpoint, const std::string& digest, Entry entry);
  const Entry* find(const std::string& endpoint, const std::string& digest) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<Key, Entry>& entries() const { return entries_; }

 private:
  std::map<Key, Entry> entries_;
};

/// Serves recorded outcomes. Setup statements without a record are taken as
/// successful; queries without one raise FixtureMissing.
class ReplayExecutor : public Executor {
 public:
  ReplayExecutor(std::string endpoint, Dialect dialect, std::shared_ptr<const FixtureStore> store);

  const std::string& endpoint() const override { return endpoint_; }
  const Dialect& dialect() const override { return dialect_; }
  ExecOutcome execute(const std::string& sql) override;
  std::optional<std::string> explain(const std::string& sql) override;
  void reset() override { session_.reset(); }

 private:
  std::string endpoint_;
  Dialect dialect_;
  std::shared_ptr<const FixtureStore> store_;
  SessionDigest session_;
};

/// Forwards to a live executor and writes every outcome and plan into a
/// fixture store so the run can later be replayed offline.
class RecordingExecutor : public Executor {
 public:
  RecordingExecutor(std::unique_ptr<Executor> inner, std::shared_ptr<FixtureStore> sink);

  const std::string& endpoint() const override { return inner_->endpoint(); }
  const Dialect& dialect() const override { return inner_->dialect(); }
  ExecOutcome execute(const std::string& sql) override;
  std::optional<std::string> explain(const std::string& sql) override;
  void reset() override;

 private:
  std::unique_ptr<Executor> inner_;
  std::shared_ptr<FixtureStore> sink_;
  SessionDigest session_;
};

struct PgEndpoint {
  std::string id;
  std::string host = "127.0.0.1";
  int port = 5432;
  std::string user = "postgres";
  std::string password;
  std::string database = "postgres";
  std::chrono::milliseconds timeout{30000};
};

/// PostgreSQL frontend/backend protocol v3 over TCP using simple queries.
/// Speaks to PostgreSQL itself and to systems that reuse its wire protocol.
/// Authentication: trust, cleartext, MD5 and SCRAM-SHA-256.
class PgWireExecutor : public Executor {
 public:
  PgWireExecutor(PgEndpoint endpoint, Dialect dialect);
  ~PgWireExecutor() override;
  PgWireExecutor(const PgWireExecutor&) = delete;
  PgWireExecutor& operator=(const PgWireExecutor&) = delete;

  const std::string& endpoint() const override { return cfg_.id; }
  const Dialect& dialect() const override { return dialect_; }
  /// A statement still running after the timeout yields error "TIMEOUT" and
  /// the connection is re-established.
  ExecOutcome execute(const std::string& sql) override;
  std::optional<std::string> explain(const std::string& sql) override;
  void reset() override;

 private:
  struct Conn;
  void connect();
  ExecOutcome run(const std::string& sql);

  PgEndpoint cfg_;
  Dialect dialect_;
  std::unique_ptr<Conn> conn_;
  std::vector<std::string> created_;
};

}  // namespace sqlxd
