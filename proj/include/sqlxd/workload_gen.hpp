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

// Seeded generation of schemas, row data and queries drawn from the
// effective clause pool.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqlxd/ast.hpp"
#include "sqlxd/clause_registry.hpp"
#include "sqlxd/dialect.hpp"
#include "sqlxd/schema.hpp"

namespace sqlxd {

struct GenConfig {
  std::uint64_t seed = 1;
  int table_count = 3;
  int max_columns = 8;
  int min_rows = 50;
  int max_rows = 500;
  double null_probability = 0.05;
  /// Per-clause switches; clauses not listed use default_enabled().
  std::map<std::string, bool> toggles;
  int max_subquery_depth = 2;
  int max_setop_branches = 3;
  /// Table names are prefix + index, so concurrent runs do not collide.
  std::string table_prefix = "t";

  bool enabled(const std::string& clause) const;
  /// Everything except dateadd, whose cast-through-integer rewrite the
  /// reference rejects for timestamp columns.
  static bool default_enabled(const std::string& clause);

  void validate() const;
  nlohmann::json to_json() const;
  static GenConfig from_json(const nlohmann::json& j);
};

/// SplitMix64-seeded mt19937_64 with hand-rolled bounded draws; the standard
/// distributions are implementation-defined, which would break corpus
/// reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  std::int64_t range(std::int64_t lo, std::int64_t hi);  // inclusive
  bool chance(double p);
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 engine_;
};

/// Clause ids the generator may emit.
const std::set<std::string>& generator_clauses();
/// False when the clause needs a construct the dialect lacks (tumble on QuestDB).
bool dialect_permits(const Dialect& d, const std::string& clause);

class Generator {
 public:
  Generator(GenConfig cfg, Dialect target);

  /// table_count tables of 1..max_columns columns. Each holds exactly one
  /// timestamp column "ts", designated when the target is time-series and
  /// the pool allows it.
  SchemaSpec gen_schema(const ClausePool* pool = nullptr);
  /// One INSERT per table. Rows arrive in increasing "ts" order.
  std::vector<Statement> gen_data(const SchemaSpec& schema);
  Statement gen_query(const SchemaSpec& schema, const ClausePool& pool);

  const GenConfig& config() const { return cfg_; }
  const Dialect& dialect() const { return dialect_; }

 private:
  struct State;
  GenConfig cfg_;
  Dialect dialect_;
  Rng rng_;
};

SchemaSpec gen_schema(const GenConfig& cfg, const Dialect& dialect, const ClausePool* pool = nullptr);
std::vector<Statement> gen_data(const SchemaSpec& schema, const GenConfig& cfg, const Dialect& dialect);

/// Writes one rendered statement per line plus "<path>.manifest.json"
/// holding {seed, config, count, dialect}.
void dump_corpus(const std::string& path, const std::vector<Statement>& stmts, const Dialect& dialect,
                 const GenConfig& cfg);

}  // namespace sqlxd
