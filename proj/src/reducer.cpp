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
#include "sqlxd/reducer.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "sqlxd/errors.hpp"
#include "sqlxd/parse.hpp"
#include "sqlxd/render.hpp"
#include "sqlxd/schema.hpp"
#include "sqlxd/walk.hpp"

namespace sqlxd {

namespace {

struct BudgetOut {};

std::vector<std::size_t> without_chunk(const std::vector<std::size_t>& cur, std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(lo));
  out.insert(out.end(), cur.begin() + static_cast<std::ptrdiff_t>(hi), cur.end());
  return out;
}

}  // namespace

std::vector<std::size_t> ddmin_indices(std::size_t n, const std::function<bool(const std::vector<std::size_t>&)>& test,
                                       std::size_t budget, DdminStats* stats) {
  DdminStats local;
  DdminStats& st = stats ? *stats : local;
  std::map<std::vector<std::size_t>, bool> memo;
  auto eval = [&](const std::vector<std::size_t>& s) {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    if (st.invocations >= budget) throw BudgetOut{};
    ++st.invocations;
    return memo[s] = test(s);
  };

  std::vector<std::size_t> cur(n);
  std::iota(cur.begin(), cur.end(), 0);
  st.invocations += 2;
  const bool first = test(cur);
  if (test(cur) != first) throw FlakyPredicate("predicate flipped on the unreduced input");
  if (!first) throw Error("predicate does not hold on the unreduced input");
  memo[cur] = true;
  if (n == 0) return cur;

  try {
    if (eval({})) {
      cur.clear();
    }
    std::size_t gran = 2;
    while (cur.size() >= 2) {
      gran = std::min(gran, cur.size());
      bool reduced = false;
      for (std::size_t i = 0; i < gran && !reduced; ++i) {
        const std::size_t lo = i * cur.size() / gran, hi = (i + 1) * cur.size() / gran;
        std::vector<std::size_t> chunk(cur.begin() + static_cast<std::ptrdiff_t>(lo),
                                       cur.begin() + static_cast<std::ptrdiff_t>(hi));
        if (eval(chunk)) {
          cur = std::move(chunk);
          gran = 2;
          reduced = true;
        }
      }
      for (std::size_t i = 0; i < gran && !reduced && gran > 2; ++i) {
        const std::size_t lo = i * cur.size() / gran, hi = (i + 1) * cur.size() / gran;
        auto comp = without_chunk(cur, lo, hi);
        if (eval(comp)) {
          cur = std::move(comp);
          gran = std::max<std::size_t>(gran - 1, 2);
          reduced = true;
        }
      }
      if (reduced) continue;
      if (gran >= cur.size()) break;
      gran = std::min(gran * 2, cur.size());
    }
  } catch (const BudgetOut&) {
    st.minimal = false;
  }
  ++st.invocations;
  if (!test(cur)) throw FlakyPredicate("predicate no longer holds on the reduced input");
  return cur;
}

// -- cases -----------------------------------------------------------------------

std::string render_case(const TestCase& c, const Dialect& dialect) {
  std::vector<Statement> all = c.setup;
  all.push_back(c.query);
  return render_script(all, dialect);
}

std::string render_mapped_case(const TestCase& c, const RuleSet& rules) {
  std::vector<Statement> all;
  for (const auto& s : c.setup) all.push_back(s.is<CreateTable>() ? map_ddl(s, rules) : s);
  all.push_back(apply_mappings(c.query, rules, MappingContext{SchemaSpec::from_statements(c.setup)}).mapped);
  return render_script(all, Dialect::postgresql());
}

TestCase parse_case(const std::string& script, const Dialect& dialect) {
  auto stmts = parse_script(script, dialect);
  if (stmts.empty() || !stmts.back().is<Query>()) throw SyntaxError(script.size(), "a case script must end with a query");
  TestCase c{{}, stmts.back()};
  stmts.pop_back();
  c.setup = std::move(stmts);
  return c;
}

std::size_t case_size(const TestCase& c) {
  std::size_t n = c.setup.size() + 1;
  for (const auto& s : c.setup) {
    if (s.is<Insert>()) n += s.as<Insert>().rows.size();
  }
  for_each_expr(c.query.as<Query>(), [&](const Expr&) { ++n; });
  return n;
}

namespace {

using namespace build;

// Left spine of a set-operation chain: branches[0] op[0] branches[1] ...
void flatten_setop(const Query& q, std::vector<Query>& branches, std::vector<SetOpKind>& ops) {
  const auto* so = std::get_if<SetOperation>(&q.body);
  if (!so || !q.order_by.empty() || q.limit) {
    branches.push_back(q);
    return;
  }
  flatten_setop(*so->lhs, branches, ops);
  ops.push_back(so->op);
  branches.push_back(*so->rhs);
}

void split_and(const Expr& e, std::vector<Expr>& out) {
  if (const auto* l = std::get_if<Logical>(&e.node); l && l->op == BoolOp::And) {
    split_and(*l->lhs, out);
    split_and(*l->rhs, out);
    return;
  }
  out.push_back(e);
}

std::optional<Expr> join_and(const std::vector<Expr>& parts) {
  std::optional<Expr> out;
  for (const auto& p : parts) out = out ? and_(std::move(*out), p) : p;
  return out;
}

enum class Feature { WhereConjunct, Having, Distinct, OrderBy, Limit, Branch, JoinLeft, JoinRight };

struct Reducer {
  const CasePredicate& pred;
  const ReduceOptions& opts;
  std::size_t used = 0;
  bool exhausted = false;
  std::map<std::string, bool> memo;

  bool valid(const TestCase& c) const {
    try {
      if (!(parse_case(render_case(c, opts.dialect), opts.dialect) == c)) return false;
      std::set<std::string> tables;
      for (const auto& s : c.setup) {
        if (s.is<CreateTable>()) tables.insert(s.as<CreateTable>().name);
      }
      for (const auto& s : c.setup) {
        if (s.is<Insert>() && !tables.count(s.as<Insert>().table)) return false;
      }
      for (const auto& t : tables_referenced(c.query)) {
        if (!tables.count(t)) return false;
      }
      render_mapped_case(c, *opts.rules);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  bool check(const TestCase& c) {
    const std::string key = render_case(c, opts.dialect);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (!valid(c)) return memo[key] = false;
    if (used >= opts.budget) {
      exhausted = true;  // out of budget: treat as failing, result is not minimal
      return false;
    }
    ++used;
    return memo[key] = pred(c);
  }

  /// Runs ddmin over n units; build maps a kept-index list to a candidate.
  TestCase phase(const char* name, std::size_t n, const TestCase& cur,
                 const std::function<std::optional<TestCase>(const std::vector<std::size_t>&)>& build,
                 std::vector<ReductionStep>& trace) {
    if (n == 0 || exhausted) return cur;
    DdminStats st;
    auto kept = ddmin_indices(
        n,
        [&](const std::vector<std::size_t>& idx) {
          auto cand = build(idx);
          return cand && check(*cand);
        },
        std::numeric_limits<std::size_t>::max(), &st);
    TestCase out = *build(kept);
    trace.push_back({name, case_size(cur), case_size(out)});
    return out;
  }

  TestCase rows(const TestCase& cur, std::vector<ReductionStep>& trace) {
    std::vector<std::pair<std::size_t, std::size_t>> units;
    for (std::size_t s = 0; s < cur.setup.size(); ++s) {
      if (!cur.setup[s].is<Insert>()) continue;
      for (std::size_t r = 0; r < cur.setup[s].as<Insert>().rows.size(); ++r) units.emplace_back(s, r);
    }
    return phase("rows", units.size(), cur,
                 [&](const std::vector<std::size_t>& idx) -> std::optional<TestCase> {
                   std::map<std::size_t, std::vector<std::vector<Literal>>> kept;
                   for (std::size_t i : idx) {
                     kept[units[i].first].push_back(cur.setup[units[i].first].as<Insert>().rows[units[i].second]);
                   }
                   TestCase c{{}, cur.query};
                   for (std::size_t s = 0; s < cur.setup.size(); ++s) {
                     if (!cur.setup[s].is<Insert>()) {
                       c.setup.push_back(cur.setup[s]);
                     } else if (kept.count(s)) {
                       c.setup.push_back(Insert{cur.setup[s].as<Insert>().table, kept[s]});
                     }
                   }
                   return c;
                 },
                 trace);
  }

  TestCase tables(const TestCase& cur, std::vector<ReductionStep>& trace) {
    std::vector<std::string> names;
    for (const auto& s : cur.setup) {
      if (s.is<CreateTable>()) names.push_back(s.as<CreateTable>().name);
    }
    return phase("tables", names.size(), cur,
                 [&](const std::vector<std::size_t>& idx) -> std::optional<TestCase> {
                   std::set<std::string> keep;
                   for (std::size_t i : idx) keep.insert(names[i]);
                   TestCase c{{}, cur.query};
                   for (const auto& s : cur.setup) {
                     const std::string& t = s.is<CreateTable>() ? s.as<CreateTable>().name : s.as<Insert>().table;
                     if (keep.count(t)) c.setup.push_back(s);
                   }
                   return c;
                 },
                 trace);
  }

  TestCase projections(const TestCase& cur, std::vector<ReductionStep>& trace) {
    const Query& q = cur.query.as<Query>();
    if (q.is_set_operation() || q.core().items.size() < 2) return cur;
    const auto items = q.core().items;
    return phase("projections", items.size(), cur,
                 [&](const std::vector<std::size_t>& idx) -> std::optional<TestCase> {
                   if (idx.empty()) return std::nullopt;
                   Query nq = q;
                   nq.core().items.clear();
                   for (std::size_t i : idx) nq.core().items.push_back(items[i]);
                   return TestCase{cur.setup, nq};
                 },
                 trace);
  }

  TestCase clauses(const TestCase& cur, std::vector<ReductionStep>& trace) {
    const Query& q = cur.query.as<Query>();
    std::vector<std::pair<Feature, std::size_t>> units;
    std::vector<Query> branches;
    std::vector<SetOpKind> ops;
    std::vector<Expr> conjuncts;
    if (!q.order_by.empty()) units.emplace_back(Feature::OrderBy, 0);
    if (q.limit) units.emplace_back(Feature::Limit, 0);
    if (const auto* so = std::get_if<SetOperation>(&q.body)) {
      Query body = q;
      body.order_by.clear();
      body.limit.reset();
      flatten_setop(body, branches, ops);
      for (std::size_t i = 0; i < branches.size(); ++i) units.emplace_back(Feature::Branch, i);
      (void)so;
    } else {
      const SelectCore& c = q.core();
      if (c.where) split_and(*c.where, conjuncts);
      for (std::size_t i = 0; i < conjuncts.size(); ++i) units.emplace_back(Feature::WhereConjunct, i);
      if (c.having) units.emplace_back(Feature::Having, 0);
      if (c.distinct) units.emplace_back(Feature::Distinct, 0);
      if (c.from && c.from->is<Join>()) {
        units.emplace_back(Feature::JoinLeft, 0);
        units.emplace_back(Feature::JoinRight, 0);
      }
    }
    return phase("clauses", units.size(), cur,
                 [&](const std::vector<std::size_t>& idx) -> std::optional<TestCase> {
                   std::set<std::pair<Feature, std::size_t>> keep;
                   for (std::size_t i : idx) keep.insert(units[i]);
                   auto has = [&](Feature f, std::size_t i = 0) { return keep.count({f, i}) > 0; };
                   Query nq = q;
                   if (!has(Feature::OrderBy)) nq.order_by.clear();
                   if (!has(Feature::Limit)) nq.limit.reset();
                   if (!branches.empty()) {
                     std::optional<Query> chain;
                     for (std::size_t i = 0; i < branches.size(); ++i) {
                       if (!has(Feature::Branch, i)) continue;
                       if (!chain) {
                         chain = branches[i];
                       } else {
                         chain = set_op(ops[i - 1], std::move(*chain), branches[i]);
                       }
                     }
                     if (!chain) return std::nullopt;
                     if (chain->order_by.empty() && !chain->limit) {
                       chain->order_by = nq.order_by;
                       chain->limit = nq.limit;
                     } else if (!nq.order_by.empty() || nq.limit) {
                       return std::nullopt;
                     }
                     return TestCase{cur.setup, *chain};
                   }
                   SelectCore& c = nq.core();
                   std::vector<Expr> kept;
                   for (std::size_t i = 0; i < conjuncts.size(); ++i) {
                     if (has(Feature::WhereConjunct, i)) kept.push_back(conjuncts[i]);
                   }
                   c.where = join_and(kept);
                   if (!has(Feature::Having)) c.having.reset();
                   if (!has(Feature::Distinct)) c.distinct = false;
                   if (c.from && c.from->is<Join>()) {
                     const Join j = c.from->as<Join>();
                     const bool l = has(Feature::JoinLeft), r = has(Feature::JoinRight);
                     if (!l && !r) return std::nullopt;
                     if (!l) c.from = *j.right;
                     if (!r) c.from = *j.left;
                   }
                   return TestCase{cur.setup, nq};
                 },
                 trace);
  }

  static std::optional<Query> flatten_once(const Query& q) {
    if (q.is_set_operation()) return std::nullopt;
    const SelectCore& outer = q.core();
    if (!outer.from || !outer.from->is<SubqueryRef>()) return std::nullopt;
    const SubqueryRef& sub = outer.from->as<SubqueryRef>();
    const Query& inner = *sub.query;
    if (inner.is_set_operation() || !inner.order_by.empty() || inner.limit) return std::nullopt;
    const SelectCore& ic = inner.core();
    if (ic.distinct || !ic.group_by.empty() || ic.having || ic.sample_by || ic.latest_on || !ic.from) {
      return std::nullopt;
    }
    std::map<std::string, Expr> names;
    for (const auto& it : ic.items) {
      if (it.is_star()) return std::nullopt;
      bool agg = false;
      for_each_expr(*it.expr, [&](const Expr& e) {
        agg = agg || e.is<WindowCall>() || (e.is<FunctionCall>() && is_aggregate(e.as<FunctionCall>().fn));
      });
      if (agg) return std::nullopt;
      if (!it.alias.empty()) {
        names.emplace(it.alias, *it.expr);
      } else if (it.expr->is<ColumnRef>()) {
        names.emplace(it.expr->as<ColumnRef>().name, *it.expr);
      } else {
        return std::nullopt;
      }
    }
    bool ok = true;
    Rewriter rw;
    rw.expr = [&](const Expr& e) -> std::optional<Expr> {
      const auto* c = std::get_if<ColumnRef>(&e.node);
      if (!c) return std::nullopt;
      if (c->qualifier != sub.alias) {
        if (c->qualifier.empty()) ok = false;
        return std::nullopt;
      }
      auto it = names.find(c->name);
      if (it == names.end()) {
        ok = false;
        return std::nullopt;
      }
      return it->second;
    };
    Query out = q;
    SelectCore& oc = out.core();
    for (auto& it : oc.items) {
      if (it.is_star()) return std::nullopt;
      it.expr = rewrite(*it.expr, rw);
    }
    if (oc.where) oc.where = rewrite(*oc.where, rw);
    for (auto& g : oc.group_by) g = rewrite(g, rw);
    if (oc.having) oc.having = rewrite(*oc.having, rw);
    for (auto& o : out.order_by) o.expr = rewrite(o.expr, rw);
    if (!ok) return std::nullopt;
    std::vector<Expr> where;
    if (ic.where) where.push_back(*ic.where);
    if (oc.where) where.push_back(*oc.where);
    oc.where = join_and(where);
    oc.from = *ic.from;
    return out;
  }

  TestCase subqueries(const TestCase& cur, std::vector<ReductionStep>& trace) {
    TestCase best = cur;
    while (!exhausted) {
      auto flat = flatten_once(best.query.as<Query>());
      if (!flat) break;
      TestCase cand{best.setup, *flat};
      if (used >= opts.budget) {
        exhausted = true;
        break;
      }
      if (!check(cand)) break;
      best = std::move(cand);
    }
    if (!(best == cur)) trace.push_back({"subqueries", case_size(cur), case_size(best)});
    return best;
  }
};

}  // namespace

ReducedCase reduce_case(const TestCase& c, const CasePredicate& pred, const ReduceOptions& opts) {
  ReducedCase out{c, {}, true, false, 0};
  const bool first = pred(c);
  const bool second = pred(c);
  out.invocations = 2;
  if (first != second) {
    out.flaky = true;
    out.minimal = false;
    return out;
  }
  if (!first) throw Error("reduction predicate does not hold on the original case");
  Reducer r{pred, opts, 0, false, {}};
  r.memo[render_case(c, opts.dialect)] = true;
  try {
    TestCase cur = c;
    cur = r.rows(cur, out.trace);
    cur = r.tables(cur, out.trace);
    cur = r.projections(cur, out.trace);
    cur = r.clauses(cur, out.trace);
    cur = r.subqueries(cur, out.trace);
    out.invocations += r.used + 1;
    if (!(cur == c) && !pred(cur)) throw FlakyPredicate("reduced case no longer triggers");
    out.reduced = std::move(cur);
    out.minimal = !r.exhausted;
  } catch (const FlakyPredicate&) {
    out.reduced = c;
    out.flaky = true;
    out.minimal = false;
  }
  return out;
}

}  // namespace sqlxd
