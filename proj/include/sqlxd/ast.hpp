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

// Typed SQL syntax tree for the subset the harness generates, maps and
// reloads. Every node is a value: copies are deep, equality is structural.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sqlxd {

/// Owning, deep-copying pointer used to break recursion in the tree.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }
  T& get() { return *ptr_; }
  const T& get() const { return *ptr_; }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

// ---------------------------------------------------------------------------
// Types and values

enum class TypeKind { Integer, BigInteger, SmallInteger, Float, Boolean, String, Symbol, Timestamp };

struct DataType {
  TypeKind kind = TypeKind::Integer;
  /// Only meaningful for String; renders as VARCHAR(n).
  std::optional<int> length;

  bool operator==(const DataType&) const = default;
};

bool is_numeric(TypeKind kind);
bool is_textual(TypeKind kind);
/// Two types may meet in a comparison without an implicit cast surprise.
bool comparable(TypeKind a, TypeKind b);
const char* to_string(TypeKind kind);
/// Inverse of to_string(TypeKind).
std::optional<TypeKind> type_kind_from_string(std::string_view name);

struct Timestamp {
  std::int64_t micros = 0;  // since 1970-01-01T00:00:00, no zone

  auto operator<=>(const Timestamp&) const = default;
};

/// ISO-8601 with microseconds, e.g. 2023-01-01T00:00:00.000000.
std::string format_timestamp(Timestamp ts);
/// Accepts the canonical form above; returns nullopt for anything else.
std::optional<Timestamp> parse_canonical_timestamp(std::string_view text);
/// Lenient reader for values coming back from servers: date, "date time",
/// 'T' separator, optional fraction and trailing zone offset.
std::optional<Timestamp> parse_timestamp_lenient(std::string_view text);
Timestamp make_timestamp(int year, int month, int day, int hour = 0, int minute = 0, int second = 0,
                         int micro = 0);

using Value = std::variant<std::monostate, bool, std::int64_t, double, std::string, Timestamp>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

struct Literal {
  DataType type;
  Value value;

  /// NULL literals compare equal whatever type they were meant to carry:
  /// "NULL" renders identically in every dialect so the type cannot survive
  /// a render/parse round trip.
  friend bool operator==(const Literal& a, const Literal& b) {
    if (is_null(a.value) && is_null(b.value)) return true;
    return a.type == b.type && a.value == b.value;
  }

  static Literal null(TypeKind kind = TypeKind::Integer) { return {{kind, {}}, std::monostate{}}; }
  /// Picks Integer or BigInteger by magnitude, mirroring what the parser infers.
  static Literal integer(std::int64_t v);
  static Literal floating(double v) { return {{TypeKind::Float, {}}, v}; }
  static Literal boolean(bool v) { return {{TypeKind::Boolean, {}}, v}; }
  static Literal string(std::string v) { return {{TypeKind::String, {}}, std::move(v)}; }
  static Literal timestamp(Timestamp v) { return {{TypeKind::Timestamp, {}}, v}; }
};

enum class TimeUnit { Second, Minute, Hour, Day, Month, Year };

/// INTERVAL '2 days'
struct IntervalLit {
  std::int64_t count = 1;
  TimeUnit unit = TimeUnit::Day;

  bool operator==(const IntervalLit&) const = default;
};

// ---------------------------------------------------------------------------
// Expressions

struct Expr;
struct Query;

struct ColumnRef {
  std::string qualifier;  // empty when unqualified
  std::string name;

  bool operator==(const ColumnRef&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge, NotDistinct };

struct Comparison {
  CmpOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;

  bool operator==(const Comparison&) const = default;
};

struct InList {
  Box<Expr> operand;
  std::vector<Expr> items;

  bool operator==(const InList&) const = default;
};

struct Between {
  Box<Expr> operand;
  Box<Expr> low;
  Box<Expr> high;
  bool symmetric = false;

  bool operator==(const Between&) const = default;
};

struct IsNull {
  Box<Expr> operand;
  bool negated = false;

  bool operator==(const IsNull&) const = default;
};

struct WhenThen;

struct CaseWhen {
  std::vector<WhenThen> branches;
  std::optional<Box<Expr>> otherwise;

  bool operator==(const CaseWhen&) const = default;
};

enum class Fn { Count, CountDistinct, Avg, Sum, Max, Min, Abs, Now, DateAdd, DateDiff, DateTrunc };

const char* function_name(Fn fn);
bool is_aggregate(Fn fn);

struct FunctionCall {
  Fn fn;
  std::vector<Expr> args;
  bool star = false;      // count(*)
  bool distinct = false;  // count(DISTINCT x)

  bool operator==(const FunctionCall&) const = default;
};

struct Cast {
  Box<Expr> operand;
  DataType type;

  bool operator==(const Cast&) const = default;
};

enum class DatePart { Year, Month, Day, Hour, Minute, Second };

struct Extract {
  DatePart part;
  Box<Expr> operand;

  bool operator==(const Extract&) const = default;
};

struct OrderItem;

struct WindowCall {
  FunctionCall call;
  std::vector<Expr> partition_by;
  std::vector<OrderItem> order_by;

  bool operator==(const WindowCall&) const = default;
};

enum class ArithOp { Add, Sub, Mul, Div };

struct Arith {
  ArithOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;

  bool operator==(const Arith&) const = default;
};

enum class BoolOp { And, Or };

struct Logical {
  BoolOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;

  bool operator==(const Logical&) const = default;
};

struct Not {
  Box<Expr> operand;

  bool operator==(const Not&) const = default;
};

struct ScalarSubquery {
  Box<Query> query;

  bool operator==(const ScalarSubquery&) const = default;
};

/// Time-series range test: ts IN '2023-01;-3d'.
struct TimestampIn {
  Box<Expr> operand;
  std::string interval;

  bool operator==(const TimestampIn&) const = default;
};

struct Expr {
  using Node = std::variant<ColumnRef, Literal, IntervalLit, Comparison, InList, Between, IsNull, CaseWhen,
                            FunctionCall, Cast, Extract, WindowCall, Arith, Logical, Not, ScalarSubquery,
                            TimestampIn>;
  Node node;

  template <class T>
  Expr(T n) : node(std::move(n)) {}  // NOLINT(google-explicit-constructor)

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(node);
  }
  template <class T>
  T& as() {
    return std::get<T>(node);
  }

  bool operator==(const Expr&) const = default;
};

struct WhenThen {
  Expr when;
  Expr then;

  bool operator==(const WhenThen&) const = default;
};

struct OrderItem {
  Expr expr;
  bool descending = false;

  bool operator==(const OrderItem&) const = default;
};

// ---------------------------------------------------------------------------
// Queries

struct SelectItem {
  std::optional<Expr> expr;  // nullopt means '*' (or 'qualifier.*')
  std::string star_qualifier;
  std::string alias;

  bool is_star() const { return !expr.has_value(); }
  bool operator==(const SelectItem&) const = default;
};

struct FromItem;

struct TableRef {
  std::string name;
  std::string alias;

  bool operator==(const TableRef&) const = default;
};

struct SubqueryRef {
  Box<Query> query;
  std::string alias;

  bool operator==(const SubqueryRef&) const = default;
};

enum class WindowKind { Tumble, Hop };

/// tumble(t, col, size) / hop(t, col, slide, size)
struct WindowTable {
  WindowKind kind;
  std::string table;
  std::string time_column;
  std::optional<IntervalLit> slide;  // hop only
  IntervalLit size;
  std::string alias;

  bool operator==(const WindowTable&) const = default;
};

enum class JoinKind { Inner, Left, Cross };

struct Join {
  JoinKind kind;
  Box<FromItem> left;
  Box<FromItem> right;
  std::optional<Expr> on;

  bool operator==(const Join&) const = default;
};

struct FromItem {
  using Node = std::variant<TableRef, SubqueryRef, WindowTable, Join>;
  Node node;

  template <class T>
  FromItem(T n) : node(std::move(n)) {}  // NOLINT(google-explicit-constructor)

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(node);
  }
  template <class T>
  T& as() {
    return std::get<T>(node);
  }

  bool operator==(const FromItem&) const = default;
};

enum class FillMode { None, Null, Prev, Linear };

/// SAMPLE BY 1h [FILL(...)]
struct SampleBy {
  std::int64_t count = 1;
  TimeUnit unit = TimeUnit::Hour;
  std::optional<FillMode> fill;

  bool operator==(const SampleBy&) const = default;
};

/// LATEST ON ts PARTITION BY k
struct LatestOn {
  std::string timestamp_column;
  std::vector<std::string> partition_by;

  bool operator==(const LatestOn&) const = default;
};

struct SelectCore {
  bool distinct = false;
  std::vector<SelectItem> items;
  std::optional<FromItem> from;
  std::optional<Expr> where;
  std::vector<Expr> group_by;
  std::optional<Expr> having;
  std::optional<SampleBy> sample_by;
  std::optional<LatestOn> latest_on;

  bool operator==(const SelectCore&) const = default;
};

enum class SetOpKind { Union, UnionAll, Except, Intersect };

struct SetOperation {
  SetOpKind op;
  Box<Query> lhs;
  Box<Query> rhs;

  bool operator==(const SetOperation&) const = default;
};

struct Query {
  std::variant<SelectCore, SetOperation> body;
  std::vector<OrderItem> order_by;
  std::optional<std::int64_t> limit;

  bool is_set_operation() const { return std::holds_alternative<SetOperation>(body); }
  const SelectCore& core() const { return std::get<SelectCore>(body); }
  SelectCore& core() { return std::get<SelectCore>(body); }

  bool operator==(const Query&) const = default;
};

// ---------------------------------------------------------------------------
// Statements

struct ColumnDef {
  std::string name;
  DataType type;

  bool operator==(const ColumnDef&) const = default;
};

struct CreateTable {
  std::string name;
  std::vector<ColumnDef> columns;
  /// Time-series designated timestamp column; rendered as TIMESTAMP(col).
  std::optional<std::string> designated_timestamp;

  bool operator==(const CreateTable&) const = default;
};

struct Insert {
  std::string table;
  std::vector<std::vector<Literal>> rows;

  bool operator==(const Insert&) const = default;
};

struct Statement {
  using Node = std::variant<CreateTable, Insert, Query>;
  Node node;

  template <class T>
  Statement(T n) : node(std::move(n)) {}  // NOLINT(google-explicit-constructor)

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(node);
  }
  template <class T>
  T& as() {
    return std::get<T>(node);
  }

  bool operator==(const Statement&) const = default;
};

/// Column count the query projects, following set operations to the left
/// branch. Stars count as zero because their width needs a catalog.
std::size_t projection_arity(const Query& q);

// ---------------------------------------------------------------------------
// Terse constructors used by rewrite rules and tests.

namespace build {

inline Expr col(std::string name) { return ColumnRef{"", std::move(name)}; }
inline Expr col(std::string qualifier, std::string name) {
  return ColumnRef{std::move(qualifier), std::move(name)};
}
inline Expr lit(std::int64_t v) { return Literal::integer(v); }
inline Expr lit(int v) { return Literal::integer(v); }
inline Expr lit(double v) { return Literal::floating(v); }
inline Expr lit(bool v) { return Literal::boolean(v); }
inline Expr lit(const char* v) { return Literal::string(v); }
inline Expr lit(std::string v) { return Literal::string(std::move(v)); }
inline Expr null(TypeKind kind = TypeKind::Integer) { return Literal::null(kind); }
inline Expr cmp(CmpOp op, Expr a, Expr b) { return Comparison{op, std::move(a), std::move(b)}; }
inline Expr in_list(Expr operand, std::vector<Expr> items) {
  return InList{std::move(operand), std::move(items)};
}
inline Expr between(Expr operand, Expr lo, Expr hi, bool symmetric = false) {
  return Between{std::move(operand), std::move(lo), std::move(hi), symmetric};
}
inline Expr is_null(Expr operand, bool negated = false) { return IsNull{std::move(operand), negated}; }
inline Expr and_(Expr a, Expr b) { return Logical{BoolOp::And, std::move(a), std::move(b)}; }
inline Expr or_(Expr a, Expr b) { return Logical{BoolOp::Or, std::move(a), std::move(b)}; }
inline Expr not_(Expr a) { return Not{std::move(a)}; }
inline Expr arith(ArithOp op, Expr a, Expr b) { return Arith{op, std::move(a), std::move(b)}; }
inline Expr call(Fn fn, std::vector<Expr> args = {}) { return FunctionCall{fn, std::move(args), false, false}; }
inline Expr count_star() { return FunctionCall{Fn::Count, {}, true, false}; }
inline Expr cast(Expr e, DataType t) { return Cast{std::move(e), t}; }
inline Expr extract(DatePart part, Expr e) { return Extract{part, std::move(e)}; }
inline Expr interval(std::int64_t count, TimeUnit unit) { return IntervalLit{count, unit}; }
inline Expr case_when(Expr when, Expr then, std::optional<Expr> otherwise) {
  CaseWhen c;
  c.branches.push_back(WhenThen{std::move(when), std::move(then)});
  if (otherwise) c.otherwise = Box<Expr>(std::move(*otherwise));
  return c;
}

inline SelectItem item(Expr e, std::string alias = "") { return SelectItem{std::move(e), "", std::move(alias)}; }
inline SelectItem star(std::string qualifier = "") { return SelectItem{std::nullopt, std::move(qualifier), ""}; }
inline FromItem table(std::string name, std::string alias = "") { return TableRef{std::move(name), std::move(alias)}; }

inline Query select(std::vector<SelectItem> items, std::optional<FromItem> from = std::nullopt,
                    std::optional<Expr> where = std::nullopt) {
  SelectCore core;
  core.items = std::move(items);
  core.from = std::move(from);
  core.where = std::move(where);
  return Query{std::move(core), {}, std::nullopt};
}

inline Query set_op(SetOpKind op, Query lhs, Query rhs) {
  return Query{SetOperation{op, std::move(lhs), std::move(rhs)}, {}, std::nullopt};
}

}  // namespace build

}  // namespace sqlxd
