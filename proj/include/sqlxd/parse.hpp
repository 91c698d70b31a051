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

#include <string_view>
#include <vector>

#include "sqlxd/ast.hpp"
#include "sqlxd/dialect.hpp"

namespace sqlxd {

/// Parses one statement of the harness grammar; a trailing ';' is allowed.
/// The grammar is the union of all dialects, so the dialect is informational.
/// Throws SyntaxError carrying the byte offset of the offending token.
Statement parse(std::string_view sql, const Dialect& dialect);

/// ';'-separated statements; '--' comments are skipped.
std::vector<Statement> parse_script(std::string_view sql, const Dialect& dialect);

Expr parse_expr(std::string_view sql, const Dialect& dialect);

}  // namespace sqlxd
