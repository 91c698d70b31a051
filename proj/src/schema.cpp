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
#include "sqlxd/schema.hpp"

namespace sqlxd {

const ColumnDef* TableSpec::column(const std::string& col) const {
  for (const auto& c : columns) {
    if (c.name == col) return &c;
  }
  return nullptr;
}

const TableSpec* SchemaSpec::find(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

SchemaSpec SchemaSpec::from_statements(const std::vector<Statement>& stmts) {
  SchemaSpec out;
  for (const auto& s : stmts) {
    if (!s.is<CreateTable>()) continue;
    const auto& c = s.as<CreateTable>();
    out.tables.push_back({c.name, c.columns, c.designated_timestamp});
  }
  return out;
}

}  // namespace sqlxd
