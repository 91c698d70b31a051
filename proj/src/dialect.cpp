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
#include "sqlxd/dialect.hpp"

#include "sqlxd/errors.hpp"

namespace sqlxd {

const char* to_string(Construct c) {
  switch (c) {
    case Construct::SampleBy: return "sample-by";
    case Construct::LatestOn: return "latest-on";
    case Construct::Tumble: return "tumble";
    case Construct::Hop: return "hop";
    case Construct::Symbol: return "symbol";
    case Construct::TimestampIn: return "timestamp-in";
    case Construct::CountDistinct: return "count-distinct";
    case Construct::DateAdd: return "dateadd";
    case Construct::DateDiff: return "datediff";
    case Construct::DesignatedTimestamp: return "designated-timestamp";
  }
  return "?";
}

Dialect::Dialect(DialectKind kind, std::string name, std::map<TypeKind, std::string> type_names,
                 std::set<Construct> constructs)
    : kind_(kind), name_(std::move(name)), type_names_(std::move(type_names)), constructs_(std::move(constructs)) {}

Dialect Dialect::postgresql() {
  return Dialect(DialectKind::Reference, "postgresql",
                 {{TypeKind::Integer, "INT"},
                  {TypeKind::BigInteger, "BIGINT"},
                  {TypeKind::SmallInteger, "SMALLINT"},
                  {TypeKind::Float, "DOUBLE PRECISION"},
                  {TypeKind::Boolean, "BOOLEAN"},
                  {TypeKind::String, "TEXT"},
                  {TypeKind::Timestamp, "TIMESTAMP"}},
                 {});
}

Dialect Dialect::questdb() {
  return Dialect(DialectKind::TimeSeries, "questdb",
                 {{TypeKind::Integer, "INT"},
                  {TypeKind::BigInteger, "LONG"},
                  {TypeKind::SmallInteger, "SHORT"},
                  {TypeKind::Float, "DOUBLE"},
                  {TypeKind::Boolean, "BOOLEAN"},
                  {TypeKind::String, "STRING"},
                  {TypeKind::Symbol, "SYMBOL"},
                  {TypeKind::Timestamp, "TIMESTAMP"}},
                 {Construct::SampleBy, Construct::LatestOn, Construct::Symbol, Construct::TimestampIn,
                  Construct::CountDistinct, Construct::DateAdd, Construct::DateDiff,
                  Construct::DesignatedTimestamp});
}

Dialect Dialect::risingwave() {
  return Dialect(DialectKind::Streaming, "risingwave",
                 {{TypeKind::Integer, "INT"},
                  {TypeKind::BigInteger, "BIGINT"},
                  {TypeKind::SmallInteger, "SMALLINT"},
                  {TypeKind::Float, "DOUBLE PRECISION"},
                  {TypeKind::Boolean, "BOOLEAN"},
                  {TypeKind::String, "VARCHAR"},
                  {TypeKind::Timestamp, "TIMESTAMP"}},
                 {Construct::Tumble, Construct::Hop});
}

Dialect Dialect::canonical() {
  return Dialect(DialectKind::Reference, "canonical",
                 {{TypeKind::Integer, "INT"},
                  {TypeKind::BigInteger, "BIGINT"},
                  {TypeKind::SmallInteger, "SMALLINT"},
                  {TypeKind::Float, "DOUBLE"},
                  {TypeKind::Boolean, "BOOLEAN"},
                  {TypeKind::String, "STRING"},
                  {TypeKind::Symbol, "SYMBOL"},
                  {TypeKind::Timestamp, "TIMESTAMP"}},
                 {Construct::SampleBy, Construct::LatestOn, Construct::Tumble, Construct::Hop, Construct::Symbol,
                  Construct::TimestampIn, Construct::CountDistinct, Construct::DateAdd, Construct::DateDiff,
                  Construct::DesignatedTimestamp});
}

Dialect Dialect::by_name(std::string_view name) {
  if (name == "postgresql" || name == "postgres" || name == "reference") return postgresql();
  if (name == "questdb" || name == "time-series") return questdb();
  if (name == "risingwave" || name == "streaming") return risingwave();
  throw ConfigError("unknown dialect '" + std::string(name) + "'");
}

void Dialect::require(Construct c) const {
  if (!supports(c)) throw UnsupportedConstruct(name_, to_string(c));
}

const std::string& Dialect::type_keyword(TypeKind kind) const {
  auto it = type_names_.find(kind);
  if (it == type_names_.end()) throw UnsupportedConstruct(name_, to_string(kind));
  return it->second;
}

}  // namespace sqlxd
