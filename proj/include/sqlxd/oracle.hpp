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

// Result comparison, error classification and a scalar evaluator that can
// run the same expression under either NULL model.

#include <map>
#include <regex>
#include <string>
#include <vector>

#include "sqlxd/ast.hpp"
#include "sqlxd/exec.hpp"

namespace sqlxd {

/// Rows reduced to canonical scalars: integral floats become integers, other
/// floats keep 9 significant digits, timestamps become epoch microseconds.
/// Unordered results are sorted so equality is multiset equality.
struct NormalizedResult {
  std::vector<std::vector<Value>> rows;
  bool ordered = false;

  bool operator==(const NormalizedResult&) const = default;
};

Value canonical_scalar(const Value& v);
NormalizedResult normalize(const ExecOutcome& outcome, bool has_order_by);
NormalizedResult normalize(const NormalizedResult& r);

enum class VerdictKind { Equal, LogicDiscrepancy, InternalError, ExpectedError, BothErrorConsistent };
const char* to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Equal;
  /// Target rows against a reference error: usually a missing or wrong
  /// mapping, so it goes to manual review instead of the bug list.
  bool review = false;
  /// Keyword that made an error internal, or "inconsistent-abort".
  std::string error_class;
  std::string detail;
};

enum class ErrorClass { Expected, Internal };

class ErrorClassifier {
 public:
  ErrorClassifier();

  void add_unexpected(const std::string& pattern);
  void add_expected(const std::string& pattern);

  /// Internal when any unexpected keyword matches, even if an expected
  /// pattern matches too.
  ErrorClass classify(const std::string& text) const;
  /// The first unexpected pattern that matches, or empty.
  std::string unexpected_match(const std::string& text) const;
  bool matches_expected(const std::string& text) const;

 private:
  struct Pattern {
    std::string source;
    std::regex re;
  };
  std::vector<Pattern> unexpected_;
  std::vector<Pattern> expected_;
};

Verdict compare(const ExecOutcome& target, const ExecOutcome& reference, bool has_order_by,
                const ErrorClassifier& classifier);

enum class NullModel { ValueNull, ThreeValued };

/// Scalar evaluator over literals, column refs, comparisons, IN lists,
/// BETWEEN, IS NULL, CASE WHEN, AND/OR/NOT. Under ValueNull, NULL is an
/// ordinary value that sorts below all others and BETWEEN accepts reversed
/// bounds, which is how the time-series target behaves. Throws
/// UnsupportedExpr for anything else.
Value eval_expr(const Expr& e, const std::map<std::string, Value>& binding, NullModel model);

}  // namespace sqlxd
