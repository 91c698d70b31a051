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
#include "sqlxd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "sqlxd/errors.hpp"

namespace sqlxd {

// -- normalization -------------------------------------------------------------

Value canonical_scalar(const Value& v) {
  if (const auto* ts = std::get_if<Timestamp>(&v)) return ts->micros;
  const auto* d = std::get_if<double>(&v);
  if (!d) return v;
  if (std::isnan(*d)) return std::string("NaN");
  if (std::isinf(*d)) return *d;
  if (std::fabs(*d) < 1e-12) return std::int64_t{0};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", *d);
  const double rounded = std::strtod(buf, nullptr);
  if (std::fabs(rounded) < 9007199254740992.0 && std::trunc(rounded) == rounded) {
    return static_cast<std::int64_t>(rounded);
  }
  return rounded;
}

NormalizedResult normalize(const ExecOutcome& outcome, bool has_order_by) {
  NormalizedResult r;
  r.ordered = has_order_by;
  r.rows.reserve(outcome.rows.size());
  for (const auto& row : outcome.rows) {
    std::vector<Value> out;
    out.reserve(row.size());
    for (const auto& v : row) out.push_back(canonical_scalar(v));
    r.rows.push_back(std::move(out));
  }
  if (!r.ordered) std::sort(r.rows.begin(), r.rows.end());
  return r;
}

NormalizedResult normalize(const NormalizedResult& r) {
  return normalize(ExecOutcome::ok(r.rows), r.ordered);
}

// -- verdicts ------------------------------------------------------------------

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Equal: return "equal";
    case VerdictKind::LogicDiscrepancy: return "logic-discrepancy";
    case VerdictKind::InternalError: return "internal-error";
    case VerdictKind::ExpectedError: return "expected-error";
    case VerdictKind::BothErrorConsistent: return "both-error-consistent";
  }
  return "?";
}

ErrorClassifier::ErrorClassifier() {
  for (const char* p : {"NullPointerException", "OutOfBound", "core dumped", "Index .* out of bounds",
                        "segmentation fault", "TIMEOUT"}) {
    add_unexpected(p);
  }
  for (const char* p : {"feature not supported", "not implemented"}) add_expected(p);
}

void ErrorClassifier::add_unexpected(const std::string& pattern) {
  unexpected_.push_back({pattern, std::regex(pattern, std::regex::ECMAScript | std::regex::icase)});
}

void ErrorClassifier::add_expected(const std::string& pattern) {
  expected_.push_back({pattern, std::regex(pattern, std::regex::ECMAScript | std::regex::icase)});
}

std::string ErrorClassifier::unexpected_match(const std::string& text) const {
  for (const auto& p : unexpected_) {
    if (std::regex_search(text, p.re)) return p.source;
  }
  return {};
}

bool ErrorClassifier::matches_expected(const std::string& text) const {
  return std::any_of(expected_.begin(), expected_.end(),
                     [&](const Pattern& p) { return std::regex_search(text, p.re); });
}

ErrorClass ErrorClassifier::classify(const std::string& text) const {
  return unexpected_match(text).empty() ? ErrorClass::Expected : ErrorClass::Internal;
}

Verdict compare(const ExecOutcome& target, const ExecOutcome& reference, bool has_order_by,
                const ErrorClassifier& classifier) {
  Verdict v;
  if (!target.is_error() && !reference.is_error()) {
    if (normalize(target, has_order_by) == normalize(reference, has_order_by)) return v;
    v.kind = VerdictKind::LogicDiscrepancy;
    v.detail = "target " + format_rows(target.rows) + " vs reference " + format_rows(reference.rows);
    return v;
  }
  const std::string target_kw = target.is_error() ? classifier.unexpected_match(target.error) : "";
  const std::string reference_kw = reference.is_error() ? classifier.unexpected_match(reference.error) : "";
  if (target.is_error() && reference.is_error()) {
    v.detail = "target error \"" + target.error + "\" vs reference error \"" + reference.error + "\"";
    if (!target_kw.empty() || !reference_kw.empty()) {
      v.kind = VerdictKind::InternalError;
      v.error_class = target_kw.empty() ? reference_kw : target_kw;
    } else {
      v.kind = VerdictKind::BothErrorConsistent;
    }
    return v;
  }
  if (target.is_error()) {
    v.detail = "target error \"" + target.error + "\" vs reference " + format_rows(reference.rows);
    if (target_kw.empty() && classifier.matches_expected(target.error)) {
      v.kind = VerdictKind::ExpectedError;
      return v;
    }
    v.kind = VerdictKind::InternalError;
    v.error_class = target_kw.empty() ? "inconsistent-abort" : target_kw;
    return v;
  }
  v.detail = "target " + format_rows(target.rows) + " vs reference error \"" + reference.error + "\"";
  if (!reference_kw.empty()) {
    v.kind = VerdictKind::InternalError;
    v.error_class = reference_kw;
    return v;
  }
  v.kind = VerdictKind::LogicDiscrepancy;
  v.review = true;
  return v;
}

// -- mini-evaluator ------------------------------------------------------------

namespace {

using Truth = std::optional<bool>;

Value from_truth(Truth t) { return t ? Value(*t) : Value(std::monostate{}); }

Truth to_truth(const Value& v) {
  if (is_null(v)) return std::nullopt;
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  throw UnsupportedExpr("boolean operator applied to a non-boolean value");
}

// Three-way comparison of two non-NULL scalars.
int order(const Value& a, const Value& b) {
  auto num = [](const Value& v) -> std::optional<double> {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::nullopt;
  };
  if (auto x = num(a), y = num(b); x && y) return (*x > *y) - (*x < *y);
  if (a.index() != b.index()) throw UnsupportedExpr("comparison between incompatible scalars");
  return a < b ? -1 : (a == b ? 0 : 1);
}

// NULL as the smallest ordinary value.
int value_null_order(const Value& a, const Value& b) {
  if (is_null(a) || is_null(b)) return static_cast<int>(!is_null(a)) - static_cast<int>(!is_null(b));
  return order(a, b);
}

bool holds(CmpOp op, int c) {
  switch (op) {
    case CmpOp::Eq: return c == 0;
    case CmpOp::Ne: return c != 0;
    case CmpOp::Lt: return c < 0;
    case CmpOp::Le: return c <= 0;
    case CmpOp::Gt: return c > 0;
    case CmpOp::Ge: return c >= 0;
    case CmpOp::NotDistinct: return c == 0;
  }
  return false;
}

Truth and3(Truth a, Truth b) {
  if (a == false || b == false) return false;
  if (!a || !b) return std::nullopt;
  return true;
}

Truth or3(Truth a, Truth b) {
  if (a == true || b == true) return true;
  if (!a || !b) return std::nullopt;
  return false;
}

class Evaluator {
 public:
  Evaluator(const std::map<std::string, Value>& binding, NullModel model) : binding_(binding), model_(model) {}

  Value eval(const Expr& e) const {
    if (const auto* l = std::get_if<Literal>(&e.node)) return l->value;
    if (const auto* c = std::get_if<ColumnRef>(&e.node)) {
      auto it = binding_.find(c->name);
      if (it == binding_.end()) throw UnsupportedExpr("unbound column " + c->name);
      return it->second;
    }
    if (const auto* c = std::get_if<Comparison>(&e.node)) return from_truth(compare(c->op, eval(*c->lhs), eval(*c->rhs)));
    if (const auto* in = std::get_if<InList>(&e.node)) return from_truth(in_list(*in));
    if (const auto* b = std::get_if<Between>(&e.node)) return from_truth(between(*b));
    if (const auto* n = std::get_if<IsNull>(&e.node)) return is_null(eval(*n->operand)) != n->negated;
    if (const auto* c = std::get_if<CaseWhen>(&e.node)) {
      for (const auto& br : c->branches) {
        if (to_truth(eval(br.when)) == true) return eval(br.then);
      }
      return c->otherwise ? eval(**c->otherwise) : Value(std::monostate{});
    }
    if (const auto* l = std::get_if<Logical>(&e.node)) {
      const Truth a = to_truth(eval(*l->lhs));
      const Truth b = to_truth(eval(*l->rhs));
      return from_truth(l->op == BoolOp::And ? and3(a, b) : or3(a, b));
    }
    if (const auto* n = std::get_if<Not>(&e.node)) {
      const Truth a = to_truth(eval(*n->operand));
      return from_truth(a ? Truth(!*a) : std::nullopt);
    }
    throw UnsupportedExpr("expression outside the evaluator subset");
  }

 private:
  Truth compare(CmpOp op, const Value& a, const Value& b) const {
    if (model_ == NullModel::ValueNull || op == CmpOp::NotDistinct) {
      if (op == CmpOp::NotDistinct && (is_null(a) || is_null(b))) return is_null(a) && is_null(b);
      return holds(op, value_null_order(a, b));
    }
    if (is_null(a) || is_null(b)) return std::nullopt;
    return holds(op, order(a, b));
  }

  Truth in_list(const InList& in) const {
    const Value x = eval(*in.operand);
    Truth acc = false;
    for (const auto& item : in.items) acc = or3(acc, compare(CmpOp::Eq, x, eval(item)));
    return acc;
  }

  Truth between(const Between& b) const {
    const Value x = eval(*b.operand);
    const Value lo = eval(*b.low);
    const Value hi = eval(*b.high);
    auto range = [&](const Value& l, const Value& h) {
      return and3(compare(CmpOp::Ge, x, l), compare(CmpOp::Le, x, h));
    };
    if (model_ == NullModel::ValueNull) {
      const bool swap = value_null_order(lo, hi) > 0;
      return range(swap ? hi : lo, swap ? lo : hi);
    }
    if (b.symmetric) return or3(range(lo, hi), range(hi, lo));
    return range(lo, hi);
  }

  const std::map<std::string, Value>& binding_;
  NullModel model_;
};

}  // namespace

Value eval_expr(const Expr& e, const std::map<std::string, Value>& binding, NullModel model) {
  return Evaluator(binding, model).eval(e);
}

}  // namespace sqlxd
