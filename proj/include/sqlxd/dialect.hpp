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

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "sqlxd/ast.hpp"

namespace sqlxd {

enum class DialectKind { Reference, TimeSeries, Streaming };

/// Constructs that exist only in some emerging-system dialect.
enum class Construct {
  SampleBy,
  LatestOn,
  Tumble,
  Hop,
  Symbol,
  TimestampIn,
  CountDistinct,
  DateAdd,
  DateDiff,
  DesignatedTimestamp,
};

const char* to_string(Construct c);

class Dialect {
 public:
  Dialect(DialectKind kind, std::string name, std::map<TypeKind, std::string> type_names,
          std::set<Construct> constructs);

  static Dialect postgresql();
  static Dialect questdb();
  static Dialect risingwave();
  /// Admits every construct; used only to canonicalize text for digests.
  static Dialect canonical();
  /// Accepts the system names above and the kind names
  /// "reference", "time-series", "streaming".
  static Dialect by_name(std::string_view name);

  DialectKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

  bool supports(Construct c) const { return constructs_.count(c) != 0; }
  /// Throws UnsupportedConstruct when the dialect lacks c.
  void require(Construct c) const;
  /// Throws UnsupportedConstruct when the type has no rendering here.
  const std::string& type_keyword(TypeKind kind) const;

  bool operator==(const Dialect& o) const { return name_ == o.name_; }

 private:
  DialectKind kind_;
  std::string name_;
  std::map<TypeKind, std::string> type_names_;
  std::set<Construct> constructs_;
};

}  // namespace sqlxd
