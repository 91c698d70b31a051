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

#include <optional>
#include <string>
#include <vector>

#include "sqlxd/ast.hpp"

namespace sqlxd {

struct TableSpec {
  std::string name;
  std::vector<ColumnDef> columns;
  /// Set for time-series targets; names a non-null timestamp column.
  std::optional<std::string> designated_timestamp;

  const ColumnDef* column(const std::string& col) const;
  CreateTable ddl() const { return {name, columns, designated_timestamp}; }
  bool operator==(const TableSpec&) const = default;
};

struct SchemaSpec {
  std::vector<TableSpec> tables;

  const TableSpec* find(const std::string& name) const;
  /// Collects every CREATE TABLE in a script; other statements are ignored.
  static SchemaSpec from_statements(const std::vector<Statement>& stmts);
  bool operator==(const SchemaSpec&) const = default;
};

}  // namespace sqlxd
