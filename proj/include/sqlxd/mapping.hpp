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

// Clause mappings: AST rewrites that turn target-dialect statements into
// reference-dialect statements with the same meaning.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqlxd/ast.hpp"
#include "sqlxd/dialect.hpp"
#include "sqlxd/schema.hpp"

namespace sqlxd {

/// Catalog facts some rules need (designated timestamps for SAMPLE BY).
struct MappingContext {
  SchemaSpec schema;
};

/// One clause mapping. Exactly the hooks relevant to the construct are set;
/// a hook returns nullopt when its node does not match and throws
/// UnmappableConstruct when it matches a variant it cannot translate.
struct MappingRule {
  std::string id;      // m01 ...
  std::string clause;  // clause-registry id this rule makes mappable
  std::string summary;
  std::function<std::optional<Expr>(const Expr&, const MappingContext&)> expr;
  std::function<std::optional<FromItem>(const FromItem&, const MappingContext&)> from;
  std::function<std::optional<Query>(const Query&, const MappingContext&)> query;
  std::function<std::optional<CreateTable>(const CreateTable&, const MappingContext&)> table;
};

class RuleSet {
 public:
  /// m01-m12 in registration order.
  static const RuleSet& standard();

  void add(MappingRule rule) { rules_.push_back(std::move(rule)); }
  const std::vector<MappingRule>& rules() const { return rules_; }
  const MappingRule* find(const std::string& id) const;
  /// Clause ids covered by at least one rule.
  std::set<std::string> clauses() const;
  RuleSet without(const std::set<std::string>& ids) const;

 private:
  std::vector<MappingRule> rules_;
};

struct MappedQuery {
  Statement original = Query{};
  Statement mapped = Query{};
  std::vector<std::string> applied;  // rule ids in firing order
};

/// Rewrites bottom-up, trying rules in registration order at each node,
/// and repeats whole-tree passes until none fires. Throws
/// UnmappableConstruct if the result still holds a construct the reference
/// dialect cannot render.
MappedQuery apply_mappings(const Statement& stmt, const RuleSet& rules, const MappingContext& ctx = {},
                           const Dialect& reference = Dialect::postgresql());

/// Table DDL for the reference side: symbol columns become VARCHAR(128) and
/// the designated timestamp is dropped. Column order is preserved.
Statement map_ddl(const Statement& create_table, const RuleSet& rules = RuleSet::standard());

/// Reserved prefix for every alias a rewrite introduces.
inline constexpr const char* kAliasPrefix = "__sqlxd_";

}  // namespace sqlxd
