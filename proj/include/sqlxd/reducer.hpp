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

// Delta debugging over unit lists, and phased reduction of whole cases.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sqlxd/ast.hpp"
#include "sqlxd/dialect.hpp"
#include "sqlxd/mapping.hpp"

namespace sqlxd {

struct DdminStats {
  std::size_t invocations = 0;  // predicate calls actually made
  bool minimal = true;          // false when the budget ran out
};

/// Keeps the smallest subset of indices 0..n-1 it can find for which test
/// holds. Results are memoized, so invocations counts distinct subsets.
/// Throws FlakyPredicate if test disagrees with itself on the full set or
/// stops holding on the result. The two opening calls count against budget;
/// the closing re-check does not.
std::vector<std::size_t> ddmin_indices(std::size_t n, const std::function<bool(const std::vector<std::size_t>&)>& test,
                                       std::size_t budget, DdminStats* stats = nullptr);

template <class T>
std::vector<T> ddmin(const std::vector<T>& units, const std::function<bool(const std::vector<T>&)>& pred,
                     std::size_t budget = 10000, DdminStats* stats = nullptr) {
  auto pick = [&](const std::vector<std::size_t>& idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(units[i]);
    return out;
  };
  return pick(ddmin_indices(units.size(), [&](const std::vector<std::size_t>& idx) { return pred(pick(idx)); },
                            budget, stats));
}

/// Setup (CREATE TABLE, INSERT) plus one query, all in the target dialect.
struct TestCase {
  std::vector<Statement> setup;
  Statement query = Query{};

  bool operator==(const TestCase&) const = default;
};

std::string render_case(const TestCase& c, const Dialect& dialect);
/// Reference-side script: mapped DDL, inserts as-is, mapped query.
std::string render_mapped_case(const TestCase& c, const RuleSet& rules);
TestCase parse_case(const std::string& script, const Dialect& dialect);
std::size_t case_size(const TestCase& c);  // statements + insert rows + AST nodes

struct ReductionStep {
  std::string phase;
  std::size_t before = 0;
  std::size_t after = 0;
};

struct ReducedCase {
  TestCase reduced;
  std::vector<ReductionStep> trace;
  bool minimal = true;
  bool flaky = false;
  std::size_t invocations = 0;
};

struct ReduceOptions {
  Dialect dialect = Dialect::questdb();
  const RuleSet* rules = &RuleSet::standard();
  std::size_t budget = 2000;
};

using CasePredicate = std::function<bool(const TestCase&)>;

/// Phases: insert rows, tables, projections, clauses (WHERE conjuncts,
/// HAVING, ORDER BY, LIMIT, DISTINCT, set-operation branches, join sides),
/// then subquery flattening. Every candidate must render, parse back to
/// itself and map before the predicate sees it. A flaky predicate returns
/// the input unchanged with flaky set.
ReducedCase reduce_case(const TestCase& c, const CasePredicate& pred, const ReduceOptions& opts = {});

}  // namespace sqlxd
