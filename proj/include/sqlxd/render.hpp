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

#include <string>
#include <vector>

#include "sqlxd/ast.hpp"
#include "sqlxd/dialect.hpp"

namespace sqlxd {

// Canonical text rendering. Keywords are uppercase, function names lowercase,
// identifiers verbatim, tokens single-space separated. Compound expressions
// in operand position are parenthesized so the text parses back to the same
// tree. Throws UnsupportedConstruct for dialect-only nodes the dialect lacks.

std::string render(const Statement& stmt, const Dialect& dialect);
std::string render(const Query& query, const Dialect& dialect);
std::string render(const Expr& expr, const Dialect& dialect);
std::string render_literal(const Literal& lit);
std::string render_type(const DataType& type, const Dialect& dialect);

/// One statement per line, each terminated by ';'.
std::string render_script(const std::vector<Statement>& stmts, const Dialect& dialect);

}  // namespace sqlxd
