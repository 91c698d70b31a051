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
#include "sqlxd/mapping.hpp"

#include <charconv>
#include <chrono>
#include <regex>

#include "sqlxd/errors.hpp"
#include "sqlxd/render.hpp"
#include "sqlxd/walk.hpp"

namespace sqlxd {
namespace {

using namespace build;

std::string alias(const std::string& stem) { return std::string(kAliasPrefix) + stem; }

const char* unit_word(TimeUnit u) {
  switch (u) {
    case TimeUnit::Second: return "second";
    case TimeUnit::Minute: return "minute";
    case TimeUnit::Hour: return "hour";
    case TimeUnit::Day: return "day";
    case TimeUnit::Month: return "month";
    case TimeUnit::Year: return "year";
  }
  return "?";
}

std::optional<int> compare_literals(const Literal& a, const Literal& b) {
  if (is_null(a.value) || is_null(b.value)) return std::nullopt;
  auto num = [](const Value& v) -> std::optional<double> {
    if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::nullopt;
  };
  if (auto x = num(a.value), y = num(b.value); x && y) return (*x > *y) - (*x < *y);
  if (a.value.index() != b.value.index()) return std::nullopt;
  if (a.value < b.value) return -1;
  return a.value == b.value ? 0 : 1;
}

// -- m01 SAMPLE BY ----------------------------------------------------------

std::optional<Query> sample_by(const Query& q, const MappingContext& ctx) {
  if (q.is_set_operation() || !q.core().sample_by) return std::nullopt;
  const SelectCore& c = q.core();
  const SampleBy& sb = *c.sample_by;
  if (sb.count != 1 || (sb.unit != TimeUnit::Hour && sb.unit != TimeUnit::Day)) {
    throw UnmappableConstruct("sample-by", "only 1h and 1d buckets have an extract-based rewrite");
  }
  if (sb.fill && *sb.fill != FillMode::None) throw UnmappableConstruct("sample-by", "FILL modes are not mapped");
  if (!c.from || !c.from->is<TableRef>()) throw UnmappableConstruct("sample-by", "needs a single base table");
  if (!c.group_by.empty() || c.having || c.distinct) {
    throw UnmappableConstruct("sample-by", "GROUP BY, HAVING or DISTINCT alongside SAMPLE BY");
  }
  const auto& table = c.from->as<TableRef>();
  const TableSpec* spec = ctx.schema.find(table.name);
  if (!spec || !spec->designated_timestamp) {
    throw UnmappableConstruct("sample-by", "no designated timestamp known for " + table.name);
  }
  Expr ts = table.alias.empty() ? col(*spec->designated_timestamp) : col(table.alias, *spec->designated_timestamp);

  SelectCore inner;
  SelectCore outer;
  for (std::size_t i = 0; i < c.items.size(); ++i) {
    const auto& item = c.items[i];
    if (item.is_star() || !item.expr->is<FunctionCall>() || !is_aggregate(item.expr->as<FunctionCall>().fn)) {
      throw UnmappableConstruct("sample-by", "only aggregate projections are mapped");
    }
    const std::string name = alias("a" + std::to_string(i));
    inner.items.push_back(build::item(*item.expr, name));
    outer.items.push_back(build::item(col(name), item.alias));
  }
  const std::string bucket = alias("bucket");
  inner.items.push_back(build::item(extract(sb.unit == TimeUnit::Hour ? DatePart::Hour : DatePart::Day, ts), bucket));
  inner.from = c.from;
  inner.where = c.where;
  inner.group_by.push_back(col(bucket));
  outer.from = SubqueryRef{Query{std::move(inner), {}, std::nullopt}, alias("sample")};

  Query out{std::move(outer), {}, q.limit};
  for (const auto& o : q.order_by) {
    bool found = false;
    for (std::size_t i = 0; i < c.items.size() && !found; ++i) {
      if (*c.items[i].expr == o.expr) {
        out.order_by.push_back({col(alias("a" + std::to_string(i))), o.descending});
        found = true;
      }
    }
    if (!found) throw UnmappableConstruct("sample-by", "ORDER BY must repeat a projection");
  }
  return out;
}

// -- m02 NULL guard ---------------------------------------------------------

CmpOp flip(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
  }
}

// Value-null result of "x op NULL" once x is known not to be NULL. The
// target orders NULL below every value.
bool against_null(CmpOp op) { return op == CmpOp::Ne || op == CmpOp::Gt || op == CmpOp::Ge; }

std::optional<Expr> null_guard(const Expr& e, const MappingContext&) {
  if (const auto* in = std::get_if<InList>(&e.node)) {
    std::vector<Expr> kept;
    for (const auto& item : in->items) {
      if (!is_null_literal(item)) kept.push_back(item);
    }
    if (kept.size() == in->items.size()) return std::nullopt;
    Expr otherwise = kept.empty() ? lit(false) : in_list(*in->operand, std::move(kept));
    return case_when(is_null(*in->operand), null(), std::move(otherwise));
  }
  if (const auto* c = std::get_if<Comparison>(&e.node)) {
    if (c->op == CmpOp::NotDistinct) return std::nullopt;
    const bool left = is_null_literal(*c->lhs);
    if (!left && !is_null_literal(*c->rhs)) return std::nullopt;
    const Expr& x = left ? *c->rhs : *c->lhs;
    const CmpOp op = left ? flip(c->op) : c->op;
    return case_when(is_null(x), null(), lit(against_null(op)));
  }
  return std::nullopt;
}

// -- m03 / m04 date arithmetic ----------------------------------------------

std::string unit_arg(const FunctionCall& f, const char* construct) {
  if (f.args.size() != 3 || !f.args[0].is<Literal>()) throw UnmappableConstruct(construct, "expects (unit, x, y)");
  const auto* s = std::get_if<std::string>(&f.args[0].as<Literal>().value);
  if (!s) throw UnmappableConstruct(construct, "unit must be a string literal");
  return *s;
}

std::optional<Expr> dateadd(const Expr& e, const MappingContext&) {
  const auto* f = std::get_if<FunctionCall>(&e.node);
  if (!f || f->fn != Fn::DateAdd) return std::nullopt;
  const std::string unit = unit_arg(*f, "dateadd");
  std::int64_t seconds = 0;
  if (unit == "s") seconds = 1;
  if (unit == "m") seconds = 60;
  if (unit == "h") seconds = 3600;
  if (unit == "d") seconds = 86400;
  if (unit == "w") seconds = 7 * 86400;
  if (seconds == 0) throw UnmappableConstruct("dateadd", "unit '" + unit + "' has no fixed length");
  const auto* n = f->args[1].is<Literal>() ? std::get_if<std::int64_t>(&f->args[1].as<Literal>().value) : nullptr;
  if (!n) throw UnmappableConstruct("dateadd", "amount must be an integer literal");
  Expr as_int = cast(f->args[2], {TypeKind::Integer, {}});
  return cast(arith(ArithOp::Add, std::move(as_int), lit(*n * seconds)), {TypeKind::Timestamp, {}});
}

std::optional<Expr> datediff(const Expr& e, const MappingContext&) {
  const auto* f = std::get_if<FunctionCall>(&e.node);
  if (!f || f->fn != Fn::DateDiff) return std::nullopt;
  const std::string unit = unit_arg(*f, "datediff");
  if (unit != "y") throw UnmappableConstruct("datediff", "only the 'y' unit is mapped");
  Expr diff = arith(ArithOp::Sub, extract(DatePart::Year, f->args[1]), extract(DatePart::Year, f->args[2]));
  return call(Fn::Abs, {std::move(diff)});
}

// -- m05 LATEST ON ----------------------------------------------------------

std::optional<Query> latest_on(const Query& q, const MappingContext&) {
  if (q.is_set_operation() || !q.core().latest_on) return std::nullopt;
  const SelectCore& c = q.core();
  const LatestOn& lo = *c.latest_on;
  if (lo.partition_by.size() > 1) throw UnmappableConstruct("latest-on", "more than one partition key");
  if (!c.from || !c.from->is<TableRef>()) throw UnmappableConstruct("latest-on", "needs a single base table");
  if (c.where) throw UnmappableConstruct("latest-on", "WHERE alongside LATEST ON");
  const auto& table = c.from->as<TableRef>();
  const std::string l = alias("l");
  const std::string r = alias("r");
  const std::string& ts = lo.timestamp_column;

  WindowCall latest{FunctionCall{Fn::Max, {col(ts)}, false, false}, {}, {}};
  SelectCore right;
  right.distinct = true;
  right.items.push_back(item(latest, ts));
  right.from = build::table(table.name);
  Expr on = cmp(CmpOp::Eq, col(l, ts), col(r, ts));
  if (!lo.partition_by.empty()) {
    const std::string& key = lo.partition_by.front();
    right.items.front().expr->as<WindowCall>().partition_by.push_back(col(key));
    right.items.push_back(item(col(key)));
    on = and_(std::move(on), cmp(CmpOp::NotDistinct, col(l, key), col(r, key)));
  }
  SelectCore middle;
  middle.distinct = true;
  middle.items.push_back(star(l));
  middle.from = Join{JoinKind::Inner, build::table(table.name, l),
                     FromItem(SubqueryRef{Query{std::move(right), {}, std::nullopt}, r}), std::move(on)};

  const std::string outer_alias = table.alias.empty() ? alias("latest_on") : table.alias;
  SelectCore outer = c;
  outer.latest_on.reset();
  outer.from = SubqueryRef{Query{std::move(middle), {}, std::nullopt}, outer_alias};
  Query out{std::move(outer), q.order_by, q.limit};
  if (table.alias.empty()) {
    Rewriter requalify;
    requalify.expr = [&](const Expr& x) -> std::optional<Expr> {
      const auto* ref = std::get_if<ColumnRef>(&x.node);
      if (!ref || ref->qualifier != table.name) return std::nullopt;
      return col(outer_alias, ref->name);
    };
    auto& oc = out.core();
    for (auto& it : oc.items) {
      if (it.expr) it.expr = rewrite(*it.expr, requalify);
      if (it.is_star() && it.star_qualifier == table.name) it.star_qualifier = outer_alias;
    }
    for (auto& g : oc.group_by) g = rewrite(g, requalify);
    if (oc.having) oc.having = rewrite(*oc.having, requalify);
    for (auto& o : out.order_by) o.expr = rewrite(o.expr, requalify);
  }
  return out;
}

// -- m06 count_distinct -----------------------------------------------------

std::optional<Expr> count_distinct(const Expr& e, const MappingContext&) {
  if (const auto* w = std::get_if<WindowCall>(&e.node); w && w->call.fn == Fn::CountDistinct) {
    throw UnmappableConstruct("count-distinct", "DISTINCT is not allowed in reference window aggregates");
  }
  const auto* f = std::get_if<FunctionCall>(&e.node);
  if (!f || f->fn != Fn::CountDistinct) return std::nullopt;
  if (f->args.size() != 1) throw UnmappableConstruct("count-distinct", "expects one argument");
  return FunctionCall{Fn::Count, f->args, false, true};
}

// -- m07 SYMBOL -------------------------------------------------------------

const DataType kSymbolText{TypeKind::String, 128};

std::optional<Expr> symbol_cast(const Expr& e, const MappingContext&) {
  const auto* c = std::get_if<Cast>(&e.node);
  if (!c || c->type.kind != TypeKind::Symbol) return std::nullopt;
  return cast(*c->operand, kSymbolText);
}

std::optional<CreateTable> symbol_column(const CreateTable& t, const MappingContext&) {
  bool any = false;
  CreateTable out = t;
  for (auto& column : out.columns) {
    if (column.type.kind == TypeKind::Symbol) {
      column.type = kSymbolText;
      any = true;
    }
  }
  return any ? std::optional<CreateTable>(std::move(out)) : std::nullopt;
}

// -- m08 BETWEEN ------------------------------------------------------------

std::optional<Expr> between_symmetric(const Expr& e, const MappingContext&) {
  const auto* b = std::get_if<Between>(&e.node);
  if (!b || b->symmetric) return std::nullopt;
  if (b->low->is<Literal>() && b->high->is<Literal>()) {
    auto order = compare_literals(b->low->as<Literal>(), b->high->as<Literal>());
    if (order && *order <= 0) return std::nullopt;  // already an ordered range
  }
  return between(*b->operand, *b->low, *b->high, true);
}

// -- m09 / m10 time windows -------------------------------------------------

void require_unit(const IntervalLit& iv, const char* construct) {
  if (iv.unit == TimeUnit::Month || iv.unit == TimeUnit::Year) {
    throw UnmappableConstruct(construct, "calendar-length windows are not mapped");
  }
}

Expr trunc(TimeUnit unit, Expr e) { return call(Fn::DateTrunc, {lit(unit_word(unit)), std::move(e)}); }

std::optional<FromItem> tumble(const FromItem& f, const MappingContext&) {
  const auto* w = std::get_if<WindowTable>(&f.node);
  if (!w || w->kind != WindowKind::Tumble) return std::nullopt;
  require_unit(w->size, "tumble");
  if (w->size.count != 1) throw UnmappableConstruct("tumble", "only single-unit window sizes align with date_trunc");
  const std::string start = "window_start";
  const std::string end = "window_end";
  SelectCore core;
  core.items.push_back(star());
  core.items.push_back(item(trunc(w->size.unit, col(w->time_column)), start));
  core.items.push_back(
      item(trunc(w->size.unit, arith(ArithOp::Add, col(w->time_column), IntervalLit{w->size})), end));
  core.from = build::table(w->table);
  Query q{std::move(core), {{col(start), false}, {col(end), false}}, std::nullopt};
  return SubqueryRef{std::move(q), w->alias.empty() ? alias("tumble") : w->alias};
}

std::optional<FromItem> hop(const FromItem& f, const MappingContext&) {
  const auto* w = std::get_if<WindowTable>(&f.node);
  if (!w || w->kind != WindowKind::Hop) return std::nullopt;
  const IntervalLit slide = w->slide.value_or(w->size);
  require_unit(slide, "hop");
  if (slide.count != 1 || w->size.unit != slide.unit || w->size.count < 1 || w->size.count > 64) {
    throw UnmappableConstruct("hop", "needs a single-unit slide and a size in the same unit");
  }
  // A row belongs to size/slide windows; branch i holds the window that
  // started i slides before the row's own bucket.
  std::optional<Query> chain;
  for (std::int64_t i = 0; i < w->size.count; ++i) {
    Expr shifted = i == 0 ? col(w->time_column)
                          : arith(ArithOp::Sub, col(w->time_column), IntervalLit{i, slide.unit});
    Expr start = trunc(slide.unit, shifted);
    SelectCore core;
    core.items.push_back(star());
    core.items.push_back(item(start, "window_start"));
    core.items.push_back(item(arith(ArithOp::Add, start, IntervalLit{w->size}), "window_end"));
    core.from = build::table(w->table);
    Query branch{std::move(core), {}, std::nullopt};
    chain = chain ? set_op(SetOpKind::UnionAll, std::move(*chain), std::move(branch)) : std::move(branch);
  }
  chain->order_by = {{col("window_start"), false}, {col("window_end"), false}};
  return SubqueryRef{std::move(*chain), w->alias.empty() ? alias("hop") : w->alias};
}

// -- m11 timestamp IN -------------------------------------------------------

std::optional<Expr> timestamp_in(const Expr& e, const MappingContext&) {
  const auto* t = std::get_if<TimestampIn>(&e.node);
  if (!t) return std::nullopt;
  static const std::regex kShape(R"(^(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?(?:;([+-]?)(\d+)([smhd]))?$)");
  std::smatch m;
  if (!std::regex_match(t->interval, m, kShape)) {
    throw UnmappableConstruct("timestamp-in", "unsupported interval '" + t->interval + "'");
  }
  using namespace std::chrono;
  const int y = std::stoi(m[1]);
  const unsigned mo = m[2].matched ? static_cast<unsigned>(std::stoi(m[2])) : 1;
  const unsigned d = m[3].matched ? static_cast<unsigned>(std::stoi(m[3])) : 1;
  const year_month_day first{year{y}, month{mo}, day{d}};
  if (!first.ok()) throw UnmappableConstruct("timestamp-in", "invalid date in '" + t->interval + "'");
  sys_days end_day;
  if (m[3].matched) {
    end_day = sys_days{first} + days{1};
  } else if (m[2].matched) {
    end_day = sys_days{first + months{1}};
  } else {
    end_day = sys_days{first + years{1}};
  }
  const auto begin = duration_cast<microseconds>(sys_days{first}.time_since_epoch());
  auto end = duration_cast<microseconds>(end_day.time_since_epoch());
  if (m[4].matched && m[5].matched && m[5].length() > 0) {
    const std::int64_t n = std::stoll(m[5]);
    const char u = m[6].str()[0];
    const std::int64_t unit_s = u == 's' ? 1 : u == 'm' ? 60 : u == 'h' ? 3600 : 86400;
    const microseconds shift = seconds{n * unit_s};
    end = m[4].str() == "-" ? end - shift : end + shift;
  }
  // Closed upper bound one second short of the exclusive end.
  end -= seconds{1};
  return between(*t->operand, Literal::timestamp({begin.count()}), Literal::timestamp({end.count()}));
}

// -- m12 designated timestamp -----------------------------------------------

std::optional<CreateTable> designated_timestamp(const CreateTable& t, const MappingContext&) {
  if (!t.designated_timestamp) return std::nullopt;
  CreateTable out = t;
  out.designated_timestamp.reset();
  return out;
}

RuleSet make_standard() {
  RuleSet rs;
  rs.add({"m01", "sample-by", "SAMPLE BY -> grouped subquery over EXTRACT", {}, {}, sample_by, {}});
  rs.add({"m02", "null-comparison", "NULL-bearing IN/comparison -> CASE WHEN guard", null_guard, {}, {}, {}});
  rs.add({"m03", "dateadd", "dateadd -> cast arithmetic", dateadd, {}, {}, {}});
  rs.add({"m04", "datediff", "datediff('y') -> abs(extract - extract)", datediff, {}, {}, {}});
  rs.add({"m05", "latest-on", "LATEST ON -> join against max() OVER (PARTITION BY)", {}, {}, latest_on, {}});
  rs.add({"m06", "count-distinct", "count_distinct(x) -> count(DISTINCT x)", count_distinct, {}, {}, {}});
  rs.add({"m07", "symbol", "SYMBOL -> VARCHAR(128)", symbol_cast, {}, {}, symbol_column});
  rs.add({"m08", "between", "BETWEEN -> BETWEEN SYMMETRIC", between_symmetric, {}, {}, {}});
  rs.add({"m09", "tumble", "tumble() -> subquery with date_trunc window bounds", {}, tumble, {}, {}});
  rs.add({"m10", "hop", "hop() -> UNION ALL of shifted date_trunc windows", {}, hop, {}, {}});
  rs.add({"m11", "timestamp-in", "ts IN 'interval' -> BETWEEN range", timestamp_in, {}, {}, {}});
  rs.add({"m12", "designated-timestamp", "drop TIMESTAMP(col) from DDL", {}, {}, {}, designated_timestamp});
  return rs;
}

struct Engine {
  const RuleSet& rules;
  const MappingContext& ctx;
  std::vector<std::string>* applied;

  template <class Node, class Hook>
  std::optional<Node> first(const Node& n, Hook hook) const {
    for (const auto& rule : rules.rules()) {
      const auto& fn = rule.*hook;
      if (!fn) continue;
      if (auto out = fn(n, ctx)) {
        applied->push_back(rule.id);
        return out;
      }
    }
    return std::nullopt;
  }

  Statement pass(const Statement& s) const {
    Rewriter rw;
    rw.expr = [&](const Expr& e) { return first(e, &MappingRule::expr); };
    rw.from = [&](const FromItem& f) { return first(f, &MappingRule::from); };
    rw.query = [&](const Query& q) { return first(q, &MappingRule::query); };
    rw.table = [&](const CreateTable& t) { return first(t, &MappingRule::table); };
    return rewrite(s, rw);
  }
};

std::size_t size_of(const Statement& s) {
  std::size_t n = 1;
  if (const auto* q = std::get_if<Query>(&s.node)) for_each_expr(*q, [&](const Expr&) { ++n; });
  if (const auto* c = std::get_if<CreateTable>(&s.node)) n += c->columns.size();
  return n;
}

}  // namespace

const RuleSet& RuleSet::standard() {
  static const RuleSet rs = make_standard();
  return rs;
}

const MappingRule* RuleSet::find(const std::string& id) const {
  for (const auto& r : rules_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::set<std::string> RuleSet::clauses() const {
  std::set<std::string> out;
  for (const auto& r : rules_) out.insert(r.clause);
  return out;
}

RuleSet RuleSet::without(const std::set<std::string>& ids) const {
  RuleSet out;
  for (const auto& r : rules_) {
    if (!ids.count(r.id)) out.add(r);
  }
  return out;
}

MappedQuery apply_mappings(const Statement& stmt, const RuleSet& rules, const MappingContext& ctx,
                           const Dialect& reference) {
  MappedQuery out{stmt, stmt, {}};
  Engine engine{rules, ctx, &out.applied};
  // Every firing removes its construct, so N nodes and R rules bound the
  // number of productive passes; the +2 covers the final quiet pass.
  const std::size_t limit = size_of(stmt) * std::max<std::size_t>(rules.rules().size(), 1) + 2;
  for (std::size_t pass = 0;; ++pass) {
    if (pass > limit) throw Error("clause mapping did not reach a fixed point");
    const std::size_t before = out.applied.size();
    out.mapped = engine.pass(out.mapped);
    if (out.applied.size() == before) break;
  }
  try {
    (void)render(out.mapped, reference);
  } catch (const UnsupportedConstruct& e) {
    throw UnmappableConstruct(e.construct(), "no rule rewrites it for " + reference.name());
  }
  return out;
}

Statement map_ddl(const Statement& create_table, const RuleSet& rules) {
  if (!create_table.is<CreateTable>()) throw Error("map_ddl expects CREATE TABLE");
  return apply_mappings(create_table, rules).mapped;
}

}  // namespace sqlxd
