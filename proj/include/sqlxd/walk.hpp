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

// Generic traversal over the syntax tree: read-only visits, bottom-up
// rewrites and the clause inventory used for pool-closure checks.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqlxd/ast.hpp"

namespace sqlxd {

/// Calls fn on every expression reachable from q, including those inside
/// subqueries, set-operation branches and join conditions. Pre-order.
void for_each_expr(const Query& q, const std::function<void(const Expr&)>& fn);
void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn);

/// Calls fn on q and every nested query (set branches, subqueries).
void for_each_query(const Query& q, const std::function<void(const Query&)>& fn);

/// Hooks for a bottom-up rewrite. Each returns nullopt to keep the node.
/// Children are rewritten before their parent is offered to the hook.
struct Rewriter {
  std::function<std::optional<Expr>(const Expr&)> expr;
  std::function<std::optional<FromItem>(const FromItem&)> from;
  std::function<std::optional<Query>(const Query&)> query;
  std::function<std::optional<CreateTable>(const CreateTable&)> table;
};

Expr rewrite(const Expr& e, const Rewriter& rw);
Query rewrite(const Query& q, const Rewriter& rw);
Statement rewrite(const Statement& s, const Rewriter& rw);

/// Clause identifiers a statement exercises, in the vocabulary of the clause
/// registry ("where", "union", "count-distinct", "sample-by", ...).
std::set<std::string> clauses_used(const Statement& s);

/// Base tables named anywhere in the statement.
std::set<std::string> tables_referenced(const Statement& s);

bool contains_null_literal(const Expr& e);
inline bool is_null_literal(const Expr& e) { return e.is<Literal>() && is_null(e.as<Literal>().value); }

}  // namespace sqlxd
