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
#include "sqlxd/workload_gen.hpp"

#include <fstream>
#include <limits>

#include "sqlxd/errors.hpp"
#include "sqlxd/render.hpp"

namespace sqlxd {

using namespace build;
using nlohmann::json;

// -- config --------------------------------------------------------------------

bool GenConfig::default_enabled(const std::string& clause) { return clause != "dateadd"; }

bool GenConfig::enabled(const std::string& clause) const {
  auto it = toggles.find(clause);
  return it == toggles.end() ? default_enabled(clause) : it->second;
}

void GenConfig::validate() const {
  if (table_count < 1) throw ConfigError("table-count must be at least 1");
  if (max_columns < 1) throw ConfigError("max-columns must be at least 1");
  if (min_rows < 0 || max_rows < min_rows) throw ConfigError("row-range must satisfy 0 <= min <= max");
  if (null_probability < 0.0 || null_probability > 1.0) throw ConfigError("null-probability must be in [0, 1]");
  if (max_subquery_depth < 0) throw ConfigError("max-subquery-depth must be non-negative");
  if (max_setop_branches < 2) throw ConfigError("max-setop-branches must be at least 2");
  for (const auto& [id, on] : toggles) {
    if (!generator_clauses().count(id)) throw ConfigError("unknown clause toggle '" + id + "'");
  }
}

json GenConfig::to_json() const {
  return {{"seed", seed},
          {"table-count", table_count},
          {"max-columns", max_columns},
          {"row-range", {min_rows, max_rows}},
          {"null-probability", null_probability},
          {"toggles", toggles},
          {"max-subquery-depth", max_subquery_depth},
          {"max-setop-branches", max_setop_branches},
          {"table-prefix", table_prefix}};
}

GenConfig GenConfig::from_json(const json& j) {
  GenConfig c;
  c.seed = j.value("seed", c.seed);
  c.table_count = j.value("table-count", c.table_count);
  c.max_columns = j.value("max-columns", c.max_columns);
  if (j.contains("row-range")) {
    const auto& r = j.at("row-range");
    if (!r.is_array() || r.size() != 2) throw ConfigError("row-range must be [min, max]");
    c.min_rows = r[0].get<int>();
    c.max_rows = r[1].get<int>();
  }
  c.null_probability = j.value("null-probability", c.null_probability);
  c.toggles = j.value("toggles", c.toggles);
  c.max_subquery_depth = j.value("max-subquery-depth", c.max_subquery_depth);
  c.max_setop_branches = j.value("max-setop-branches", c.max_setop_branches);
  c.table_prefix = j.value("table-prefix", c.table_prefix);
  c.validate();
  return c;
}

// -- rng -------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw Error("Rng::below(0)");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

bool Rng::chance(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
}

// -- generator ---------------------------------------------------------------------

const std::set<std::string>& generator_clauses() {
  static const std::set<std::string> ids = {
      "select",   "distinct",     "where",         "group-by",        "having",    "order-by",  "limit",
      "union",    "union-all",    "except",        "intersect",       "join",      "left-join", "cross-join",
      "subquery", "scalar-subquery", "window",     "case-when",       "in-list",   "comparison", "null-comparison",
      "between",  "is-null",      "count",         "count-distinct",  "avg",       "sum",       "max",
      "min",      "abs",          "dateadd",       "datediff",        "extract",   "arithmetic", "and",
      "or",       "not",          "timestamp-in",  "sample-by",       "latest-on", "tumble",    "hop",
      "symbol",   "designated-timestamp", "create-table", "insert"};
  return ids;
}

namespace {

std::optional<Construct> construct_of(const std::string& id) {
  static const std::map<std::string, Construct> m = {
      {"sample-by", Construct::SampleBy},         {"latest-on", Construct::LatestOn},
      {"tumble", Construct::Tumble},              {"hop", Construct::Hop},
      {"symbol", Construct::Symbol},              {"timestamp-in", Construct::TimestampIn},
      {"count-distinct", Construct::CountDistinct}, {"dateadd", Construct::DateAdd},
      {"datediff", Construct::DateDiff},          {"designated-timestamp", Construct::DesignatedTimestamp}};
  auto it = m.find(id);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

bool dialect_allows(const Dialect& d, const std::string& id) {
  auto c = construct_of(id);
  return !c || d.supports(*c);
}

constexpr const char* kTs = "ts";

bool nullable(const ColumnDef& c, const TableSpec& t) {
  return c.type.kind != TypeKind::Boolean && c.name != kTs && !(t.designated_timestamp && *t.designated_timestamp == c.name);
}

Literal literal_for(TypeKind kind, Rng& rng) {
  switch (kind) {
    case TypeKind::Integer:
    case TypeKind::SmallInteger: {
      static const std::vector<std::int64_t> pool = {0, 1, -1, 2, 2147483647, -2147483647};
      return Literal::integer(rng.chance(0.5) ? rng.pick(pool) : rng.range(-100, 100));
    }
    case TypeKind::BigInteger: {
      static const std::vector<std::int64_t> pool = {0, 1, -1, 9223372036854775807LL, -9223372036854775807LL,
                                                     4294967296LL};
      return Literal::integer(rng.chance(0.5) ? rng.pick(pool) : rng.range(-100000, 100000));
    }
    case TypeKind::Float: {
      static const std::vector<double> pool = {0.0, 1.0, -1.0, 0.5, -0.5, 1e9};
      return Literal::floating(rng.chance(0.5) ? rng.pick(pool) : static_cast<double>(rng.range(-400, 400)) / 4.0);
    }
    case TypeKind::Boolean: return Literal::boolean(rng.chance(0.5));
    case TypeKind::String:
    case TypeKind::Symbol: {
      static const std::vector<std::string> pool = {"", "a", "A", "Z", "abc", "x y"};
      if (rng.chance(0.6)) return Literal::string(rng.pick(pool));
      std::string s;
      for (std::int64_t i = 0, n = rng.range(1, 3); i < n; ++i) s += static_cast<char>('a' + rng.below(6));
      return Literal::string(s);
    }
    case TypeKind::Timestamp: {
      if (rng.chance(0.1)) return Literal::timestamp(make_timestamp(1970, 1, 1, 0, 0, static_cast<int>(rng.below(2))));
      const auto secs = rng.range(0, 86399);
      return Literal::timestamp(Timestamp{make_timestamp(2000, 1, 1).micros + secs * 1000000});
    }
  }
  return Literal::null(kind);
}

bool orderable(TypeKind k) { return k != TypeKind::Boolean; }
bool numeric(TypeKind k) { return is_numeric(k); }

struct ScopeCol {
  std::string qualifier;
  std::string name;
  DataType type;

  Expr ref() const { return col(qualifier, name); }
};
using Scope = std::vector<ScopeCol>;

Scope scope_of(const TableSpec& t, const std::string& qualifier) {
  Scope s;
  for (const auto& c : t.columns) s.push_back({qualifier, c.name, c.type});
  return s;
}

}  // namespace

bool dialect_permits(const Dialect& d, const std::string& clause) { return dialect_allows(d, clause); }

struct Generator::State {
  const Generator& g;
  const SchemaSpec& schema;
  Rng& rng;
  std::set<std::string> allowed;
  int aliases = 0;

  State(const Generator& gen, const SchemaSpec& s, const ClausePool& pool, Rng& r) : g(gen), schema(s), rng(r) {
    for (const auto& id : generator_clauses()) {
      if (pool.contains(id) && gen.cfg_.enabled(id) && dialect_allows(gen.dialect_, id)) allowed.insert(id);
    }
  }

  bool allow(const char* id) const { return allowed.count(id) > 0; }
  std::string fresh(const char* stem) { return std::string(stem) + std::to_string(aliases++); }
  const TableSpec& any_table() { return schema.tables[rng.below(schema.tables.size())]; }

  std::vector<ScopeCol> where_type(const Scope& s, bool (*pred)(TypeKind)) {
    std::vector<ScopeCol> out;
    for (const auto& c : s) {
      if (pred(c.type.kind)) out.push_back(c);
    }
    return out;
  }

  Expr literal(TypeKind kind, bool may_null) {
    if (may_null && allow("null-comparison") && rng.chance(0.15)) return Literal::null(kind);
    return literal_for(kind, rng);
  }

  // -- predicates --

  Expr scalar_subquery_for(const ScopeCol& c, int depth) {
    // (SELECT max(x) FROM t) with x comparable to c
    for (int attempt = 0; attempt < 4; ++attempt) {
      const TableSpec& t = any_table();
      std::vector<const ColumnDef*> cands;
      for (const auto& col : t.columns) {
        if (comparable(col.type.kind, c.type.kind) && orderable(col.type.kind)) cands.push_back(&col);
      }
      if (cands.empty()) continue;
      const ColumnDef* x = cands[rng.below(cands.size())];
      Query q = select({item(call(rng.chance(0.5) ? Fn::Max : Fn::Min, {build::col(x->name)}))}, table(t.name));
      if (allow("where") && depth + 1 < g.cfg_.max_subquery_depth && rng.chance(0.3)) {
        q.core().where = predicate(scope_of(t, ""), depth + 1, 1);
      }
      return ScalarSubquery{std::move(q)};
    }
    return literal(c.type.kind, false);
  }

  std::optional<Expr> base_predicate(const Scope& scope, int depth) {
    std::vector<int> kinds;
    if (allow("comparison")) kinds.insert(kinds.end(), {0, 0, 0});
    if (allow("in-list")) kinds.insert(kinds.end(), {1, 1});
    if (allow("between")) kinds.push_back(2);
    if (allow("is-null")) kinds.push_back(3);
    if (allow("timestamp-in")) kinds.push_back(4);
    if (kinds.empty() || scope.empty()) return std::nullopt;
    const ScopeCol c = rng.pick(scope);
    switch (rng.pick(kinds)) {
      case 0: {
        if (c.type.kind == TypeKind::Boolean) {
          return cmp(rng.chance(0.5) ? CmpOp::Eq : CmpOp::Ne, c.ref(), literal(c.type.kind, true));
        }
        static const std::vector<CmpOp> ops = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
        const CmpOp op = rng.pick(ops);
        std::vector<ScopeCol> peers;
        for (const auto& o : scope) {
          if (comparable(o.type.kind, c.type.kind) && orderable(o.type.kind) && !(o.name == c.name && o.qualifier == c.qualifier)) peers.push_back(o);
        }
        const auto roll = rng.below(10);
        if (roll < 2 && !peers.empty()) return cmp(op, c.ref(), rng.pick(peers).ref());
        if (roll == 2 && allow("scalar-subquery") && allow("max") && allow("min") &&
            depth < g.cfg_.max_subquery_depth) {
          return cmp(op, c.ref(), scalar_subquery_for(c, depth));
        }
        return cmp(op, c.ref(), literal(c.type.kind, true));
      }
      case 1: {
        std::vector<Expr> items;
        for (std::int64_t i = 0, n = rng.range(1, 3); i < n; ++i) items.push_back(literal(c.type.kind, true));
        return in_list(c.ref(), std::move(items));
      }
      case 2: {
        if (!orderable(c.type.kind)) return is_null_or_cmp(c);
        return between(c.ref(), literal(c.type.kind, false), literal(c.type.kind, false));
      }
      case 3: return is_null(c.ref(), rng.chance(0.5));
      default: {
        auto ts = timestamp_col(scope);
        if (!ts) return is_null_or_cmp(c);
        static const std::vector<std::string> intervals = {"2000", "2000-01", "2000-01-01", "2000-01-02", "1999-12",
                                                           "2000-01;-3d"};
        return TimestampIn{ts->ref(), rng.pick(intervals)};
      }
    }
  }

  Expr is_null_or_cmp(const ScopeCol& c) {
    if (allow("is-null")) return is_null(c.ref(), rng.chance(0.5));
    return cmp(CmpOp::Eq, c.ref(), literal(c.type.kind, false));
  }

  std::optional<ScopeCol> timestamp_col(const Scope& scope) {
    auto ts = where_type(scope, [](TypeKind k) { return k == TypeKind::Timestamp; });
    if (ts.empty()) return std::nullopt;
    return rng.pick(ts);
  }

  std::optional<Expr> predicate(const Scope& scope, int depth, int nesting) {
    if (nesting > 0) {
      std::vector<int> kinds = {0, 0};
      if (allow("and")) kinds.push_back(1);
      if (allow("or")) kinds.push_back(2);
      if (allow("not")) kinds.push_back(3);
      const int kind = rng.pick(kinds);
      switch (kind) {
        case 1:
        case 2: {
          auto a = predicate(scope, depth, nesting - 1);
          auto b = predicate(scope, depth, nesting - 1);
          if (!a || !b) return a ? a : b;
          return Logical{kind == 1 ? BoolOp::And : BoolOp::Or, std::move(*a), std::move(*b)};
        }
        case 3: {
          auto a = predicate(scope, depth, nesting - 1);
          if (!a) return std::nullopt;
          return not_(std::move(*a));
        }
        default: break;
      }
    }
    return base_predicate(scope, depth);
  }

  // -- scalar projections --

  std::pair<Expr, DataType> scalar(const Scope& scope, int depth) {
    const ScopeCol c = rng.pick(scope);
    std::vector<int> kinds = {0, 0, 0};
    const bool num = numeric(c.type.kind);
    if (num && allow("arithmetic")) kinds.push_back(1);
    if (num && allow("abs")) kinds.push_back(2);
    if (allow("case-when")) kinds.push_back(3);
    auto ts = timestamp_col(scope);
    if (ts && allow("extract")) kinds.push_back(4);
    if (ts && allow("dateadd")) kinds.push_back(5);
    if (ts && allow("datediff")) kinds.push_back(6);
    kinds.push_back(7);
    switch (rng.pick(kinds)) {
      case 1: {
        static const std::vector<ArithOp> ops = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul};
        const TypeKind k = c.type.kind == TypeKind::Float ? TypeKind::Float : TypeKind::Integer;
        Expr rhs = k == TypeKind::Float ? Expr(Literal::floating(static_cast<double>(rng.range(-8, 8)) / 2.0))
                                        : Expr(Literal::integer(rng.range(-3, 3)));
        return {arith(rng.pick(ops), c.ref(), std::move(rhs)), c.type};
      }
      case 2: return {call(Fn::Abs, {c.ref()}), c.type};
      case 3: {
        auto cond = predicate(scope, depth, 1);
        if (!cond) break;
        return {case_when(std::move(*cond), c.ref(), Expr(literal(c.type.kind, false))), c.type};
      }
      case 4: {
        static const std::vector<DatePart> parts = {DatePart::Year, DatePart::Month, DatePart::Day, DatePart::Hour,
                                                    DatePart::Minute, DatePart::Second};
        return {extract(rng.pick(parts), ts->ref()), {TypeKind::Integer, {}}};
      }
      case 5: {
        static const std::vector<std::string> units = {"s", "m", "h", "d"};
        return {call(Fn::DateAdd, {lit(rng.pick(units)), lit(rng.range(-5, 5)), ts->ref()}),
                {TypeKind::Timestamp, {}}};
      }
      case 6:
        return {call(Fn::DateDiff, {lit("y"), ts->ref(), Expr(literal_for(TypeKind::Timestamp, rng))}),
                {TypeKind::Integer, {}}};
      case 7: {
        auto p = predicate(scope, depth, 1);
        if (!p) break;
        return {std::move(*p), {TypeKind::Boolean, {}}};
      }
      default: break;
    }
    return {c.ref(), c.type};
  }

  // -- FROM --

  std::pair<FromItem, Scope> from_clause(int depth) {
    std::vector<int> kinds = {0, 0, 0};
    const bool any_join = allow("join") || allow("left-join") || allow("cross-join");
    if (any_join) kinds.push_back(1);
    if (allow("subquery") && depth < g.cfg_.max_subquery_depth) kinds.push_back(2);
    switch (rng.pick(kinds)) {
      case 1: {
        const std::string la = fresh("j"), ra = fresh("j");
        const TableSpec& lt = any_table();
        const TableSpec& rt = any_table();
        Scope ls = scope_of(lt, la), rs = scope_of(rt, ra);
        std::vector<JoinKind> joins;
        if (allow("join") && allow("comparison")) joins.push_back(JoinKind::Inner);
        if (allow("left-join") && allow("comparison")) joins.push_back(JoinKind::Left);
        if (allow("cross-join")) joins.push_back(JoinKind::Cross);
        if (joins.empty()) break;
        Join j{rng.pick(joins), FromItem(TableRef{lt.name, la}), FromItem(TableRef{rt.name, ra}), std::nullopt};
        if (j.kind != JoinKind::Cross) {
          std::vector<std::pair<ScopeCol, ScopeCol>> pairs;
          for (const auto& a : ls) {
            for (const auto& b : rs) {
              if (comparable(a.type.kind, b.type.kind) && orderable(a.type.kind)) pairs.emplace_back(a, b);
            }
          }
          const auto& [a, b] = pairs[rng.below(pairs.size())];  // ts pairs always exist
          static const std::vector<CmpOp> ops = {CmpOp::Eq, CmpOp::Eq, CmpOp::Lt, CmpOp::Ge};
          j.on = cmp(rng.pick(ops), a.ref(), b.ref());
        }
        Scope both = ls;
        both.insert(both.end(), rs.begin(), rs.end());
        return {FromItem(std::move(j)), both};
      }
      case 2: {
        auto [inner_from, inner_scope] = from_clause(depth + 1);
        SelectCore core;
        core.from = std::move(inner_from);
        const std::string alias = fresh("s");
        Scope outer;
        const auto n = rng.range(1, static_cast<std::int64_t>(std::min<std::size_t>(inner_scope.size(), 4)));
        std::set<std::size_t> chosen;
        // Keep the timestamp visible so time predicates still apply outside.
        for (std::size_t i = 0; i < inner_scope.size(); ++i) {
          if (inner_scope[i].type.kind == TypeKind::Timestamp) {
            chosen.insert(i);
            break;
          }
        }
        while (static_cast<std::int64_t>(chosen.size()) < n) chosen.insert(rng.below(inner_scope.size()));
        for (std::size_t i : chosen) {
          const std::string name = "k" + std::to_string(outer.size());
          core.items.push_back(item(inner_scope[i].ref(), name));
          outer.push_back({alias, name, inner_scope[i].type});
        }
        if (allow("where") && rng.chance(0.5)) core.where = predicate(inner_scope, depth + 1, 1);
        if (allow("distinct") && rng.chance(0.15)) core.distinct = true;
        return {FromItem(SubqueryRef{Query{std::move(core), {}, std::nullopt}, alias}), outer};
      }
      default: break;
    }
    const TableSpec& t = any_table();
    return {table(t.name), scope_of(t, "")};
  }

  // -- queries --

  std::vector<Fn> aggregates() const {
    std::vector<Fn> out;
    for (auto [fn, id] : {std::pair{Fn::Count, "count"}, {Fn::Sum, "sum"}, {Fn::Avg, "avg"}, {Fn::Max, "max"},
                          {Fn::Min, "min"}, {Fn::CountDistinct, "count-distinct"}}) {
      if (allow(id)) out.push_back(fn);
    }
    return out;
  }

  std::optional<Expr> aggregate_over(Fn fn, const Scope& scope) {
    if (fn == Fn::Count) {
      if (rng.chance(0.5)) return count_star();
      return call(Fn::Count, {rng.pick(scope).ref()});
    }
    std::vector<ScopeCol> cands;
    for (const auto& c : scope) {
      const TypeKind k = c.type.kind;
      const bool ok = fn == Fn::Sum || fn == Fn::Avg ? numeric(k)
                      : fn == Fn::CountDistinct      ? k != TypeKind::Float && k != TypeKind::Boolean
                                                     : orderable(k);
      if (ok) cands.push_back(c);
    }
    if (cands.empty()) return std::nullopt;
    return call(fn, {rng.pick(cands).ref()});
  }

  Query plain_select(int depth) {
    auto [from, scope] = from_clause(depth);
    SelectCore core;
    core.from = std::move(from);
    const auto aggs = aggregates();
    std::vector<Expr> order_keys;
    const auto mode = rng.below(20);
    if (!aggs.empty() && mode < 7) {
      if (allow("group-by") && rng.chance(0.6)) {
        for (std::int64_t i = 0, n = rng.range(1, 2); i < n; ++i) {
          Expr key = rng.pick(scope).ref();
          if (std::find(core.group_by.begin(), core.group_by.end(), key) != core.group_by.end()) continue;
          core.group_by.push_back(key);
          core.items.push_back(item(key));
          order_keys.push_back(key);
        }
      }
      for (std::int64_t i = 0, n = rng.range(1, 2); i < n; ++i) {
        if (auto a = aggregate_over(rng.pick(aggs), scope)) {
          core.items.push_back(item(*a));
          order_keys.push_back(*a);
        }
      }
      if (core.items.empty()) {
        core.items.push_back(item(scope.front().ref()));
        core.group_by.clear();
        order_keys = {scope.front().ref()};
      }
      if (!core.group_by.empty() && allow("having") && allow("count") && allow("comparison") && rng.chance(0.3)) {
        core.having = cmp(CmpOp::Gt, count_star(), lit(rng.range(0, 3)));
      }
    } else if (allow("window") && mode < 10) {
      const ScopeCol key = rng.pick(scope);
      core.items.push_back(item(key.ref()));
      order_keys.push_back(key.ref());
      std::vector<Fn> fns;
      for (Fn fn : aggs) {
        if (fn != Fn::CountDistinct) fns.push_back(fn);
      }
      if (!fns.empty()) {
        if (auto a = aggregate_over(rng.pick(fns), scope)) {
          WindowCall w{a->as<FunctionCall>(), {rng.pick(scope).ref()}, {}};
          if (auto ts = timestamp_col(scope)) w.order_by.push_back(OrderItem{ts->ref(), false});
          core.items.push_back(item(w));
          order_keys.push_back(w);
        }
      }
    } else if (mode == 19 && !std::holds_alternative<Join>(core.from->node)) {
      core.items.push_back(star());
    } else {
      for (std::int64_t i = 0, n = rng.range(1, 3); i < n; ++i) {
        auto [e, type] = scalar(scope, depth);
        order_keys.push_back(e);
        core.items.push_back(item(std::move(e)));
      }
    }
    if (allow("where") && rng.chance(0.6)) core.where = predicate(scope, depth, 2);
    if (allow("distinct") && core.group_by.empty() && rng.chance(0.15)) core.distinct = true;
    Query q{std::move(core), {}, std::nullopt};
    if (allow("order-by") && !order_keys.empty() && rng.chance(0.2)) {
      for (auto& k : order_keys) q.order_by.push_back(OrderItem{std::move(k), rng.chance(0.3)});
      if (allow("limit") && rng.chance(0.5)) q.limit = rng.range(1, 10);
    }
    return q;
  }

  Query setop_branch(const std::vector<TypeKind>& types) {
    const TableSpec& t = any_table();
    std::vector<SelectItem> items;
    for (TypeKind k : types) {
      std::vector<const ColumnDef*> cands;
      for (const auto& c : t.columns) {
        if (c.type.kind == k) cands.push_back(&c);
      }
      if (cands.empty() || rng.chance(0.1)) {
        items.push_back(item(Expr(literal_for(k, rng))));
      } else {
        items.push_back(item(col(cands[rng.below(cands.size())]->name)));
      }
    }
    Query q = select(std::move(items), table(t.name));
    if (allow("where") && rng.chance(0.5)) q.core().where = predicate(scope_of(t, ""), 0, 1);
    return q;
  }

  std::optional<Query> set_operation() {
    std::vector<SetOpKind> ops;
    if (allow("union")) ops.push_back(SetOpKind::Union);
    if (allow("union-all")) ops.push_back(SetOpKind::UnionAll);
    if (allow("except")) ops.push_back(SetOpKind::Except);
    if (allow("intersect")) ops.push_back(SetOpKind::Intersect);
    if (ops.empty()) return std::nullopt;
    std::vector<TypeKind> types;
    const TableSpec& first = any_table();
    for (std::int64_t i = 0, n = rng.range(1, 2); i < n; ++i) {
      types.push_back(first.columns[rng.below(first.columns.size())].type.kind);
    }
    Query q = setop_branch(types);
    for (std::int64_t i = 1, n = rng.range(2, g.cfg_.max_setop_branches); i < n; ++i) {
      q = set_op(rng.pick(ops), std::move(q), setop_branch(types));
    }
    return q;
  }

  const TableSpec* designated_table() {
    std::vector<const TableSpec*> out;
    for (const auto& t : schema.tables) {
      if (t.designated_timestamp) out.push_back(&t);
    }
    if (out.empty()) return nullptr;
    return out[rng.below(out.size())];
  }

  std::optional<Query> sample_by() {
    const TableSpec* t = designated_table();
    const auto aggs = aggregates();
    if (!t || aggs.empty()) return std::nullopt;
    SelectCore core;
    const Scope scope = scope_of(*t, "");
    for (std::int64_t i = 0, n = rng.range(1, 2); i < n; ++i) {
      if (auto a = aggregate_over(rng.pick(aggs), scope)) core.items.push_back(item(*a));
    }
    if (core.items.empty()) return std::nullopt;
    core.from = table(t->name);
    if (allow("where") && rng.chance(0.4)) core.where = predicate(scope, 0, 1);
    core.sample_by = SampleBy{1, rng.chance(0.5) ? TimeUnit::Hour : TimeUnit::Day, std::nullopt};
    return Query{std::move(core), {}, std::nullopt};
  }

  std::optional<Query> latest_on() {
    const TableSpec* t = designated_table();
    if (!t) return std::nullopt;
    std::vector<std::string> keys;
    for (const auto& c : t->columns) {
      if (c.type.kind != TypeKind::Float && c.type.kind != TypeKind::Timestamp) keys.push_back(c.name);
    }
    SelectCore core;
    core.items.push_back(star());
    core.from = table(t->name);
    core.latest_on = LatestOn{*t->designated_timestamp, {}};
    if (!keys.empty()) core.latest_on->partition_by.push_back(rng.pick(keys));
    return Query{std::move(core), {}, std::nullopt};
  }

  std::optional<Query> time_window(WindowKind kind) {
    const TableSpec& t = any_table();
    auto ts = timestamp_col(scope_of(t, ""));
    if (!ts) return std::nullopt;
    const TimeUnit unit = rng.chance(0.7) ? TimeUnit::Hour : TimeUnit::Minute;
    WindowTable w{kind, t.name, ts->name, std::nullopt, IntervalLit{1, unit}, ""};
    if (kind == WindowKind::Hop) {
      w.slide = IntervalLit{1, unit};
      w.size = IntervalLit{rng.range(2, 3), unit};
    }
    SelectCore core;
    core.items.push_back(star());
    core.from = FromItem(std::move(w));
    return Query{std::move(core), {}, std::nullopt};
  }

  Query top() {
    std::vector<int> shapes = {0, 0, 0, 0, 0, 0};
    if (allow("sample-by")) shapes.push_back(1);
    if (allow("latest-on")) shapes.push_back(2);
    if (allow("tumble")) shapes.push_back(3);
    if (allow("hop")) shapes.push_back(4);
    if (allow("union") || allow("union-all") || allow("except") || allow("intersect")) shapes.push_back(5);
    std::optional<Query> q;
    switch (rng.pick(shapes)) {
      case 1: q = sample_by(); break;
      case 2: q = latest_on(); break;
      case 3: q = time_window(WindowKind::Tumble); break;
      case 4: q = time_window(WindowKind::Hop); break;
      case 5: q = set_operation(); break;
      default: break;
    }
    return q ? std::move(*q) : plain_select(0);
  }
};

Generator::Generator(GenConfig cfg, Dialect target)
    : cfg_(std::move(cfg)), dialect_(std::move(target)), rng_(cfg_.seed) {
  cfg_.validate();
}

SchemaSpec Generator::gen_schema(const ClausePool* pool) {
  auto allowed = [&](const std::string& id) {
    return cfg_.enabled(id) && dialect_allows(dialect_, id) && (!pool || pool->contains(id));
  };
  std::vector<TypeKind> kinds = {TypeKind::Integer, TypeKind::BigInteger, TypeKind::Float, TypeKind::Boolean,
                                 TypeKind::String};
  if (allowed("symbol")) kinds.push_back(TypeKind::Symbol);
  const bool designate = dialect_.kind() == DialectKind::TimeSeries && allowed("designated-timestamp");
  SchemaSpec schema;
  for (int i = 0; i < cfg_.table_count; ++i) {
    TableSpec t;
    t.name = cfg_.table_prefix + std::to_string(i);
    const auto ncols = rng_.range(1, cfg_.max_columns);
    for (std::int64_t c = 0; c + 1 < ncols; ++c) {
      t.columns.push_back({"c" + std::to_string(c), {rng_.pick(kinds), {}}});
    }
    t.columns.push_back({kTs, {TypeKind::Timestamp, {}}});
    if (designate) t.designated_timestamp = kTs;
    schema.tables.push_back(std::move(t));
  }
  return schema;
}

std::vector<Statement> Generator::gen_data(const SchemaSpec& schema) {
  std::vector<Statement> out;
  for (const auto& t : schema.tables) {
    Insert ins{t.name, {}};
    const auto n = rng_.range(cfg_.min_rows, cfg_.max_rows);
    std::int64_t ts = make_timestamp(2000, 1, 1).micros;
    for (std::int64_t r = 0; r < n; ++r) {
      ts += rng_.range(1, 120) * 1000000;
      std::vector<Literal> row;
      for (const auto& c : t.columns) {
        if (c.name == kTs) {
          row.push_back(Literal::timestamp(Timestamp{ts}));
        } else if (nullable(c, t) && rng_.chance(cfg_.null_probability)) {
          row.push_back(Literal::null(c.type.kind));
        } else {
          row.push_back(literal_for(c.type.kind, rng_));
        }
      }
      ins.rows.push_back(std::move(row));
    }
    if (!ins.rows.empty()) out.emplace_back(std::move(ins));
  }
  return out;
}

Statement Generator::gen_query(const SchemaSpec& schema, const ClausePool& pool) {
  if (schema.tables.empty()) throw ConfigError("cannot generate queries over an empty schema");
  State st(*this, schema, pool, rng_);
  if (!st.allow("select")) throw ConfigError("the clause pool does not contain 'select'");
  return st.top();
}

SchemaSpec gen_schema(const GenConfig& cfg, const Dialect& dialect, const ClausePool* pool) {
  return Generator(cfg, dialect).gen_schema(pool);
}

std::vector<Statement> gen_data(const SchemaSpec& schema, const GenConfig& cfg, const Dialect& dialect) {
  return Generator(cfg, dialect).gen_data(schema);
}

void dump_corpus(const std::string& path, const std::vector<Statement>& stmts, const Dialect& dialect,
                 const GenConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write corpus " + path);
  for (const auto& s : stmts) out << render(s, dialect) << '\n';
  std::ofstream manifest(path + ".manifest.json", std::ios::binary);
  manifest << json{{"seed", cfg.seed}, {"config", cfg.to_json()}, {"count", stmts.size()}, {"dialect", dialect.name()}}
                  .dump(2)
           << '\n';
}

}  // namespace sqlxd
