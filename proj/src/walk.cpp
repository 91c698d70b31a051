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
#include "sqlxd/walk.hpp"

namespace sqlxd {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void visit_from(const FromItem& f, const std::function<void(const Expr&)>& fn);
void for_each_child(const Expr& e, const std::function<void(const Expr&)>& fn);

void visit_query(const Query& q, const std::function<void(const Expr&)>& fn) {
  if (const auto* s = std::get_if<SetOperation>(&q.body)) {
    visit_query(*s->lhs, fn);
    visit_query(*s->rhs, fn);
  } else {
    const auto& c = q.core();
    for (const auto& item : c.items) {
      if (item.expr) for_each_expr(*item.expr, fn);
    }
    if (c.from) visit_from(*c.from, fn);
    if (c.where) for_each_expr(*c.where, fn);
    for (const auto& g : c.group_by) for_each_expr(g, fn);
    if (c.having) for_each_expr(*c.having, fn);
  }
  for (const auto& o : q.order_by) for_each_expr(o.expr, fn);
}

void visit_from(const FromItem& f, const std::function<void(const Expr&)>& fn) {
  if (const auto* s = std::get_if<SubqueryRef>(&f.node)) {
    visit_query(*s->query, fn);
  } else if (const auto* j = std::get_if<Join>(&f.node)) {
    visit_from(*j->left, fn);
    visit_from(*j->right, fn);
    if (j->on) for_each_expr(*j->on, fn);
  }
}

FromItem rewrite_from(const FromItem& f, const Rewriter& rw);

}  // namespace

namespace {

void for_each_child(const Expr& e, const std::function<void(const Expr&)>& fn) {
  std::visit(overloaded{[&](const Comparison& c) {
                          fn(*c.lhs);
                          fn(*c.rhs);
                        },
                        [&](const InList& in) {
                          fn(*in.operand);
                          for (const auto& i : in.items) fn(i);
                        },
                        [&](const Between& b) {
                          fn(*b.operand);
                          fn(*b.low);
                          fn(*b.high);
                        },
                        [&](const IsNull& n) { fn(*n.operand); },
                        [&](const CaseWhen& c) {
                          for (const auto& br : c.branches) {
                            fn(br.when);
                            fn(br.then);
                          }
                          if (c.otherwise) fn(**c.otherwise);
                        },
                        [&](const FunctionCall& f) {
                          for (const auto& a : f.args) fn(a);
                        },
                        [&](const Cast& c) { fn(*c.operand); },
                        [&](const Extract& x) { fn(*x.operand); },
                        [&](const WindowCall& w) {
                          for (const auto& a : w.call.args) fn(a);
                          for (const auto& p : w.partition_by) fn(p);
                          for (const auto& o : w.order_by) fn(o.expr);
                        },
                        [&](const Arith& a) {
                          fn(*a.lhs);
                          fn(*a.rhs);
                        },
                        [&](const Logical& l) {
                          fn(*l.lhs);
                          fn(*l.rhs);
                        },
                        [&](const Not& n) { fn(*n.operand); },
                        [&](const TimestampIn& t) { fn(*t.operand); },
                        [](const auto&) {}},
             e.node);
}

}  // namespace

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  if (const auto* s = std::get_if<ScalarSubquery>(&e.node)) {
    visit_query(*s->query, fn);
    return;
  }
  for_each_child(e, [&](const Expr& c) { for_each_expr(c, fn); });
}

void for_each_expr(const Query& q, const std::function<void(const Expr&)>& fn) { visit_query(q, fn); }

namespace {

// Scalar subqueries directly under e, not those nested in deeper queries.
void own_subqueries(const Expr& e, const std::function<void(const Query&)>& fn) {
  if (const auto* s = std::get_if<ScalarSubquery>(&e.node)) {
    fn(*s->query);
    return;
  }
  for_each_child(e, [&](const Expr& c) { own_subqueries(c, fn); });
}

}  // namespace

void for_each_query(const Query& q, const std::function<void(const Query&)>& fn) {
  fn(q);
  auto recurse = [&](const Query& sub) { for_each_query(sub, fn); };
  std::function<void(const FromItem&)> from = [&](const FromItem& f) {
    if (const auto* s = std::get_if<SubqueryRef>(&f.node)) {
      recurse(*s->query);
    } else if (const auto* j = std::get_if<Join>(&f.node)) {
      from(*j->left);
      from(*j->right);
      if (j->on) own_subqueries(*j->on, recurse);
    }
  };
  if (const auto* s = std::get_if<SetOperation>(&q.body)) {
    recurse(*s->lhs);
    recurse(*s->rhs);
  } else {
    const auto& c = q.core();
    for (const auto& item : c.items) {
      if (item.expr) own_subqueries(*item.expr, recurse);
    }
    if (c.from) from(*c.from);
    if (c.where) own_subqueries(*c.where, recurse);
    for (const auto& g : c.group_by) own_subqueries(g, recurse);
    if (c.having) own_subqueries(*c.having, recurse);
  }
  for (const auto& o : q.order_by) own_subqueries(o.expr, recurse);
}

Expr rewrite(const Expr& e, const Rewriter& rw) {
  Expr out = e;
  auto sub = [&](Box<Expr>& b) { *b = rewrite(*b, rw); };
  auto each = [&](std::vector<Expr>& v) {
    for (auto& x : v) x = rewrite(x, rw);
  };
  std::visit(overloaded{[&](Comparison& c) {
                          sub(c.lhs);
                          sub(c.rhs);
                        },
                        [&](InList& in) {
                          sub(in.operand);
                          each(in.items);
                        },
                        [&](Between& b) {
                          sub(b.operand);
                          sub(b.low);
                          sub(b.high);
                        },
                        [&](IsNull& n) { sub(n.operand); },
                        [&](CaseWhen& c) {
                          for (auto& br : c.branches) {
                            br.when = rewrite(br.when, rw);
                            br.then = rewrite(br.then, rw);
                          }
                          if (c.otherwise) sub(*c.otherwise);
                        },
                        [&](FunctionCall& f) { each(f.args); },
                        [&](Cast& c) { sub(c.operand); },
                        [&](Extract& x) { sub(x.operand); },
                        [&](WindowCall& w) {
                          each(w.call.args);
                          each(w.partition_by);
                          for (auto& o : w.order_by) o.expr = rewrite(o.expr, rw);
                        },
                        [&](Arith& a) {
                          sub(a.lhs);
                          sub(a.rhs);
                        },
                        [&](Logical& l) {
                          sub(l.lhs);
                          sub(l.rhs);
                        },
                        [&](Not& n) { sub(n.operand); },
                        [&](ScalarSubquery& s) { *s.query = rewrite(*s.query, rw); },
                        [&](TimestampIn& t) { sub(t.operand); },
                        [](auto&) {}},
             out.node);
  if (rw.expr) {
    if (auto r = rw.expr(out)) return std::move(*r);
  }
  return out;
}

namespace {

FromItem rewrite_from(const FromItem& f, const Rewriter& rw) {
  FromItem out = f;
  if (auto* s = std::get_if<SubqueryRef>(&out.node)) {
    *s->query = rewrite(*s->query, rw);
  } else if (auto* j = std::get_if<Join>(&out.node)) {
    *j->left = rewrite_from(*j->left, rw);
    *j->right = rewrite_from(*j->right, rw);
    if (j->on) j->on = rewrite(*j->on, rw);
  }
  if (rw.from) {
    if (auto r = rw.from(out)) return std::move(*r);
  }
  return out;
}

}  // namespace

Query rewrite(const Query& q, const Rewriter& rw) {
  Query out = q;
  if (auto* s = std::get_if<SetOperation>(&out.body)) {
    *s->lhs = rewrite(*s->lhs, rw);
    *s->rhs = rewrite(*s->rhs, rw);
  } else {
    auto& c = out.core();
    for (auto& item : c.items) {
      if (item.expr) item.expr = rewrite(*item.expr, rw);
    }
    if (c.from) c.from = rewrite_from(*c.from, rw);
    if (c.where) c.where = rewrite(*c.where, rw);
    for (auto& g : c.group_by) g = rewrite(g, rw);
    if (c.having) c.having = rewrite(*c.having, rw);
  }
  for (auto& o : out.order_by) o.expr = rewrite(o.expr, rw);
  if (rw.query) {
    if (auto r = rw.query(out)) return std::move(*r);
  }
  return out;
}

Statement rewrite(const Statement& s, const Rewriter& rw) {
  return std::visit(overloaded{[&](const CreateTable& c) -> Statement {
                                 if (rw.table) {
                                   if (auto r = rw.table(c)) return std::move(*r);
                                 }
                                 return c;
                               },
                               [&](const Insert& i) -> Statement { return i; },
                               [&](const Query& q) -> Statement { return rewrite(q, rw); }},
                    s.node);
}

bool contains_null_literal(const Expr& e) {
  bool found = false;
  for_each_expr(e, [&](const Expr& x) { found = found || is_null_literal(x); });
  return found;
}

namespace {

const char* fn_clause(Fn fn) {
  switch (fn) {
    case Fn::Count: return "count";
    case Fn::CountDistinct: return "count-distinct";
    case Fn::Avg: return "avg";
    case Fn::Sum: return "sum";
    case Fn::Max: return "max";
    case Fn::Min: return "min";
    case Fn::Abs: return "abs";
    case Fn::Now: return "now";
    case Fn::DateAdd: return "dateadd";
    case Fn::DateDiff: return "datediff";
    case Fn::DateTrunc: return "date-trunc";
  }
  return "?";
}

void expr_clauses(const Expr& e, std::set<std::string>& out) {
  {
    std::visit(overloaded{[&](const Comparison& c) {
                            out.insert(c.op == CmpOp::NotDistinct ? "is-not-distinct" : "comparison");
                            if (is_null_literal(*c.lhs) || is_null_literal(*c.rhs)) out.insert("null-comparison");
                          },
                          [&](const InList& in) {
                            out.insert("in-list");
                            for (const auto& i : in.items) {
                              if (is_null_literal(i)) out.insert("null-comparison");
                            }
                          },
                          [&](const Between& b) { out.insert(b.symmetric ? "between-symmetric" : "between"); },
                          [&](const IsNull&) { out.insert("is-null"); },
                          [&](const CaseWhen&) { out.insert("case-when"); },
                          [&](const FunctionCall& f) {
                            out.insert(fn_clause(f.fn));
                            if (f.distinct) out.insert("count-distinct-keyword");
                          },
                          [&](const Cast&) { out.insert("cast"); },
                          [&](const Extract&) { out.insert("extract"); },
                          [&](const WindowCall& w) {
                            out.insert("window");
                            out.insert(fn_clause(w.call.fn));
                          },
                          [&](const Arith&) { out.insert("arithmetic"); },
                          [&](const Logical& l) { out.insert(l.op == BoolOp::And ? "and" : "or"); },
                          [&](const Not&) { out.insert("not"); },
                          [&](const ScalarSubquery&) { out.insert("scalar-subquery"); },
                          [&](const TimestampIn&) { out.insert("timestamp-in"); },
                          [&](const IntervalLit&) { out.insert("interval"); },
                          [](const auto&) {}},
               e.node);
  }
}

void from_clauses(const FromItem& f, std::set<std::string>& out) {
  std::visit(overloaded{[&](const TableRef&) {},
                        [&](const SubqueryRef&) { out.insert("subquery"); },
                        [&](const WindowTable& w) { out.insert(w.kind == WindowKind::Tumble ? "tumble" : "hop"); },
                        [&](const Join& j) {
                          switch (j.kind) {
                            case JoinKind::Inner: out.insert("join"); break;
                            case JoinKind::Left: out.insert("left-join"); break;
                            case JoinKind::Cross: out.insert("cross-join"); break;
                          }
                          from_clauses(*j.left, out);
                          from_clauses(*j.right, out);
                        }},
             f.node);
}

}  // namespace

std::set<std::string> clauses_used(const Statement& s) {
  std::set<std::string> out;
  std::visit(overloaded{[&](const CreateTable& c) {
                          out.insert("create-table");
                          for (const auto& col : c.columns) {
                            if (col.type.kind == TypeKind::Symbol) out.insert("symbol");
                          }
                          if (c.designated_timestamp) out.insert("designated-timestamp");
                        },
                        [&](const Insert&) { out.insert("insert"); },
                        [&](const Query& root) {
                          for_each_query(root, [&](const Query& q) {
                            if (!q.order_by.empty()) out.insert("order-by");
                            if (q.limit) out.insert("limit");
                            if (const auto* so = std::get_if<SetOperation>(&q.body)) {
                              switch (so->op) {
                                case SetOpKind::Union: out.insert("union"); break;
                                case SetOpKind::UnionAll: out.insert("union-all"); break;
                                case SetOpKind::Except: out.insert("except"); break;
                                case SetOpKind::Intersect: out.insert("intersect"); break;
                              }
                              return;
                            }
                            const auto& c = q.core();
                            out.insert("select");
                            if (c.distinct) out.insert("distinct");
                            if (c.from) from_clauses(*c.from, out);
                            if (c.where) out.insert("where");
                            if (!c.group_by.empty()) out.insert("group-by");
                            if (c.having) out.insert("having");
                            if (c.sample_by) out.insert("sample-by");
                            if (c.latest_on) out.insert("latest-on");
                          });
                          for_each_expr(root, [&](const Expr& e) { expr_clauses(e, out); });
                        }},
             s.node);
  return out;
}

std::set<std::string> tables_referenced(const Statement& s) {
  std::set<std::string> out;
  std::visit(overloaded{[&](const CreateTable& c) { out.insert(c.name); },
                        [&](const Insert& i) { out.insert(i.table); },
                        [&](const Query& root) {
                          std::function<void(const FromItem&)> from = [&](const FromItem& f) {
                            std::visit(overloaded{[&](const TableRef& t) { out.insert(t.name); },
                                                  [&](const WindowTable& w) { out.insert(w.table); },
                                                  [&](const Join& j) {
                                                    from(*j.left);
                                                    from(*j.right);
                                                  },
                                                  [](const SubqueryRef&) {}},
                                       f.node);
                          };
                          for_each_query(root, [&](const Query& q) {
                            if (!q.is_set_operation() && q.core().from) from(*q.core().from);
                          });
                        }},
             s.node);
  return out;
}

}  // namespace sqlxd
