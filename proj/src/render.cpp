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
#include "sqlxd/render.hpp"

#include <charconv>
#include <string_view>

#include "sqlxd/errors.hpp"

namespace sqlxd {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string render_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string out(buf, res.ptr);
  if (out.find_first_of(".eEn") == std::string::npos) out += ".0";
  return out;
}

std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

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

char unit_letter(TimeUnit u) {
  switch (u) {
    case TimeUnit::Second: return 's';
    case TimeUnit::Minute: return 'm';
    case TimeUnit::Hour: return 'h';
    case TimeUnit::Day: return 'd';
    case TimeUnit::Month: return 'M';
    case TimeUnit::Year: return 'y';
  }
  return '?';
}

const char* part_word(DatePart p) {
  switch (p) {
    case DatePart::Year: return "YEAR";
    case DatePart::Month: return "MONTH";
    case DatePart::Day: return "DAY";
    case DatePart::Hour: return "HOUR";
    case DatePart::Minute: return "MINUTE";
    case DatePart::Second: return "SECOND";
  }
  return "?";
}

const char* cmp_word(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "<>";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::NotDistinct: return "IS NOT DISTINCT FROM";
  }
  return "?";
}

const char* arith_word(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "?";
}

const char* setop_word(SetOpKind op) {
  switch (op) {
    case SetOpKind::Union: return "UNION";
    case SetOpKind::UnionAll: return "UNION ALL";
    case SetOpKind::Except: return "EXCEPT";
    case SetOpKind::Intersect: return "INTERSECT";
  }
  return "?";
}

const char* fill_word(FillMode m) {
  switch (m) {
    case FillMode::None: return "NONE";
    case FillMode::Null: return "NULL";
    case FillMode::Prev: return "PREV";
    case FillMode::Linear: return "LINEAR";
  }
  return "?";
}

bool is_atomic(const Expr& e) {
  return e.is<ColumnRef>() || e.is<Literal>() || e.is<IntervalLit>() || e.is<FunctionCall>() || e.is<Cast>() ||
         e.is<Extract>() || e.is<WindowCall>() || e.is<ScalarSubquery>();
}

class Renderer {
 public:
  explicit Renderer(const Dialect& d) : d_(d) {}

  std::string statement(const Statement& s) {
    return std::visit(overloaded{[&](const CreateTable& c) { return create(c); },
                                 [&](const Insert& i) { return insert(i); },
                                 [&](const Query& q) { return query(q); }},
                      s.node);
  }

  std::string type(const DataType& t) {
    if (t.kind == TypeKind::String && t.length) return "VARCHAR(" + std::to_string(*t.length) + ")";
    if (t.kind == TypeKind::Symbol) d_.require(Construct::Symbol);
    return d_.type_keyword(t.kind);
  }

  std::string create(const CreateTable& c) {
    std::string out = "CREATE TABLE " + c.name + " (";
    for (std::size_t i = 0; i < c.columns.size(); ++i) {
      if (i) out += ", ";
      out += c.columns[i].name + " " + type(c.columns[i].type);
    }
    out += ")";
    if (c.designated_timestamp) {
      d_.require(Construct::DesignatedTimestamp);
      out += " TIMESTAMP(" + *c.designated_timestamp + ")";
    }
    return out;
  }

  std::string insert(const Insert& ins) {
    std::string out = "INSERT INTO " + ins.table + " VALUES ";
    for (std::size_t r = 0; r < ins.rows.size(); ++r) {
      if (r) out += ", ";
      out += "(";
      for (std::size_t i = 0; i < ins.rows[r].size(); ++i) {
        if (i) out += ", ";
        out += render_literal(ins.rows[r][i]);
      }
      out += ")";
    }
    return out;
  }

  std::string query(const Query& q) {
    std::string out = std::visit(overloaded{[&](const SelectCore& c) { return core(c); },
                                            [&](const SetOperation& s) { return set_operation(s); }},
                                 q.body);
    if (!q.order_by.empty()) out += " ORDER BY " + order_list(q.order_by);
    if (q.limit) out += " LIMIT " + std::to_string(*q.limit);
    return out;
  }

  std::string set_branch(const Query& q) {
    const bool wrap = q.is_set_operation() || !q.order_by.empty() || q.limit.has_value();
    return wrap ? "(" + query(q) + ")" : query(q);
  }

  std::string set_operation(const SetOperation& s) {
    return set_branch(*s.lhs) + " " + setop_word(s.op) + " " + set_branch(*s.rhs);
  }

  std::string core(const SelectCore& c) {
    std::string out = "SELECT ";
    if (c.distinct) out += "DISTINCT ";
    for (std::size_t i = 0; i < c.items.size(); ++i) {
      if (i) out += ", ";
      out += select_item(c.items[i]);
    }
    if (c.from) out += " FROM " + from(*c.from);
    if (c.where) out += " WHERE " + expr(*c.where);
    if (c.latest_on) {
      d_.require(Construct::LatestOn);
      out += " LATEST ON " + c.latest_on->timestamp_column;
      if (!c.latest_on->partition_by.empty()) {
        out += " PARTITION BY ";
        for (std::size_t i = 0; i < c.latest_on->partition_by.size(); ++i) {
          if (i) out += ", ";
          out += c.latest_on->partition_by[i];
        }
      }
    }
    if (!c.group_by.empty()) {
      out += " GROUP BY ";
      for (std::size_t i = 0; i < c.group_by.size(); ++i) {
        if (i) out += ", ";
        out += operand(c.group_by[i]);
      }
    }
    if (c.having) out += " HAVING " + expr(*c.having);
    if (c.sample_by) {
      d_.require(Construct::SampleBy);
      out += " SAMPLE BY " + std::to_string(c.sample_by->count) + unit_letter(c.sample_by->unit);
      if (c.sample_by->fill) out += std::string(" FILL(") + fill_word(*c.sample_by->fill) + ")";
    }
    return out;
  }

  std::string select_item(const SelectItem& item) {
    if (item.is_star()) return item.star_qualifier.empty() ? "*" : item.star_qualifier + ".*";
    std::string out = operand(*item.expr);
    if (!item.alias.empty()) out += " AS " + item.alias;
    return out;
  }

  std::string from(const FromItem& f) {
    return std::visit(
        overloaded{[&](const TableRef& t) { return t.alias.empty() ? t.name : t.name + " AS " + t.alias; },
                   [&](const SubqueryRef& s) {
                     std::string out = "(" + query(*s.query) + ")";
                     if (!s.alias.empty()) out += " AS " + s.alias;
                     return out;
                   },
                   [&](const WindowTable& w) { return window_table(w); },
                   [&](const Join& j) { return join(j); }},
        f.node);
  }

  std::string window_table(const WindowTable& w) {
    std::string out;
    if (w.kind == WindowKind::Tumble) {
      d_.require(Construct::Tumble);
      out = "tumble(" + w.table + ", " + w.time_column + ", " + interval(w.size) + ")";
    } else {
      d_.require(Construct::Hop);
      out = "hop(" + w.table + ", " + w.time_column + ", " + interval(w.slide.value_or(w.size)) + ", " +
            interval(w.size) + ")";
    }
    if (!w.alias.empty()) out += " AS " + w.alias;
    return out;
  }

  std::string join(const Join& j) {
    std::string out = from(*j.left);
    switch (j.kind) {
      case JoinKind::Inner: out += " JOIN "; break;
      case JoinKind::Left: out += " LEFT JOIN "; break;
      case JoinKind::Cross: out += " CROSS JOIN "; break;
    }
    if (j.right->is<Join>()) {
      out += "(" + from(*j.right) + ")";
    } else {
      out += from(*j.right);
    }
    if (j.on) out += " ON " + expr(*j.on);
    return out;
  }

  std::string order_list(const std::vector<OrderItem>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ", ";
      out += operand(items[i].expr);
      if (items[i].descending) out += " DESC";
    }
    return out;
  }

  static std::string interval(const IntervalLit& iv) {
    std::string out = "INTERVAL '" + std::to_string(iv.count) + " " + unit_word(iv.unit);
    if (iv.count != 1) out += "s";
    return out + "'";
  }

  std::string operand(const Expr& e) { return is_atomic(e) ? expr(e) : "(" + expr(e) + ")"; }

  std::string args(const std::vector<Expr>& list) {
    std::string out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) out += ", ";
      out += expr(list[i]);
    }
    return out;
  }

  std::string call(const FunctionCall& f) {
    switch (f.fn) {
      case Fn::CountDistinct: d_.require(Construct::CountDistinct); break;
      case Fn::DateAdd: d_.require(Construct::DateAdd); break;
      case Fn::DateDiff: d_.require(Construct::DateDiff); break;
      default: break;
    }
    std::string out = std::string(function_name(f.fn)) + "(";
    if (f.star) {
      out += "*";
    } else {
      if (f.distinct) out += "DISTINCT ";
      out += args(f.args);
    }
    return out + ")";
  }

  std::string expr(const Expr& e) {
    return std::visit(
        overloaded{
            [&](const ColumnRef& c) { return c.qualifier.empty() ? c.name : c.qualifier + "." + c.name; },
            [&](const Literal& l) { return render_literal(l); },
            [&](const IntervalLit& iv) { return interval(iv); },
            [&](const Comparison& c) { return operand(*c.lhs) + " " + cmp_word(c.op) + " " + operand(*c.rhs); },
            [&](const InList& in) {
              std::string out = operand(*in.operand) + " IN (";
              for (std::size_t i = 0; i < in.items.size(); ++i) {
                if (i) out += ", ";
                out += expr(in.items[i]);
              }
              return out + ")";
            },
            [&](const Between& b) {
              return operand(*b.operand) + (b.symmetric ? " BETWEEN SYMMETRIC " : " BETWEEN ") + operand(*b.low) +
                     " AND " + operand(*b.high);
            },
            [&](const IsNull& n) { return operand(*n.operand) + (n.negated ? " IS NOT NULL" : " IS NULL"); },
            [&](const CaseWhen& c) {
              std::string out = "CASE";
              for (const auto& br : c.branches) out += " WHEN " + expr(br.when) + " THEN " + expr(br.then);
              if (c.otherwise) out += " ELSE " + expr(**c.otherwise);
              return out + " END";
            },
            [&](const FunctionCall& f) { return call(f); },
            [&](const Cast& c) { return "CAST(" + operand(*c.operand) + " AS " + type(c.type) + ")"; },
            [&](const Extract& x) { return std::string("EXTRACT(") + part_word(x.part) + " FROM " + operand(*x.operand) + ")"; },
            [&](const WindowCall& w) {
              std::string out = call(w.call) + " OVER (";
              std::string inner;
              if (!w.partition_by.empty()) {
                inner += "PARTITION BY ";
                for (std::size_t i = 0; i < w.partition_by.size(); ++i) {
                  if (i) inner += ", ";
                  inner += operand(w.partition_by[i]);
                }
              }
              if (!w.order_by.empty()) {
                if (!inner.empty()) inner += " ";
                inner += "ORDER BY " + order_list(w.order_by);
              }
              return out + inner + ")";
            },
            [&](const Arith& a) { return operand(*a.lhs) + " " + arith_word(a.op) + " " + operand(*a.rhs); },
            [&](const Logical& l) {
              return operand(*l.lhs) + (l.op == BoolOp::And ? " AND " : " OR ") + operand(*l.rhs);
            },
            [&](const Not& n) { return "NOT " + operand(*n.operand); },
            [&](const ScalarSubquery& s) { return "(" + query(*s.query) + ")"; },
            [&](const TimestampIn& t) {
              d_.require(Construct::TimestampIn);
              return operand(*t.operand) + " IN " + quote(t.interval);
            },
        },
        e.node);
  }

 private:
  const Dialect& d_;
};

}  // namespace

std::string render_literal(const Literal& lit) {
  return std::visit(overloaded{[](std::monostate) -> std::string { return "NULL"; },
                               [](bool b) -> std::string { return b ? "TRUE" : "FALSE"; },
                               [](std::int64_t i) { return std::to_string(i); },
                               [](double d) { return render_double(d); },
                               [](const std::string& s) { return quote(s); },
                               [](Timestamp ts) { return quote(format_timestamp(ts)); }},
                    lit.value);
}

std::string render(const Statement& stmt, const Dialect& dialect) { return Renderer(dialect).statement(stmt); }
std::string render(const Query& query, const Dialect& dialect) { return Renderer(dialect).query(query); }
std::string render(const Expr& expr, const Dialect& dialect) { return Renderer(dialect).expr(expr); }
std::string render_type(const DataType& type, const Dialect& dialect) { return Renderer(dialect).type(type); }

std::string render_script(const std::vector<Statement>& stmts, const Dialect& dialect) {
  std::string out;
  for (const auto& s : stmts) out += render(s, dialect) + ";\n";
  return out;
}

}  // namespace sqlxd
