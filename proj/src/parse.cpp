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
#include "sqlxd/parse.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <string>

#include "sqlxd/errors.hpp"

namespace sqlxd {
namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
         });
}

constexpr std::array kReserved = {
    "SELECT", "FROM",  "WHERE",  "GROUP",   "BY",      "HAVING",    "ORDER",  "LIMIT",     "UNION",
    "ALL",    "EXCEPT", "INTERSECT", "JOIN", "INNER",  "LEFT",      "CROSS",  "ON",        "AS",
    "AND",    "OR",    "NOT",    "IN",      "BETWEEN", "SYMMETRIC", "IS",     "NULL",      "CASE",
    "WHEN",   "THEN",  "ELSE",   "END",     "DISTINCT", "SAMPLE",   "LATEST", "PARTITION", "FILL",
    "CAST",   "EXTRACT", "INTERVAL", "OVER", "TRUE",    "FALSE",     "CREATE", "TABLE",     "INSERT",
    "INTO",   "VALUES", "ASC",   "DESC",    "OUTER"};

bool reserved(std::string_view word) {
  return std::any_of(kReserved.begin(), kReserved.end(), [&](const char* k) { return iequals(word, k); });
}

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i + 1 < s.size() && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), start});
      continue;
    }
    if (c == '\'') {
      std::string text;
      ++i;
      for (;;) {
        if (i >= s.size()) throw SyntaxError(start, "unterminated string literal");
        if (s[i] == '\'') {
          if (i + 1 < s.size() && s[i + 1] == '\'') {
            text += '\'';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        text += s[i++];
      }
      out.push_back({Tok::String, std::move(text), start});
      continue;
    }
    // Backquoted units as they appear in prose ("dateadd(`h',1,ts)") are not accepted.
    static constexpr std::array<std::string_view, 4> kTwoChar = {"<>", "!=", "<=", ">="};
    if (i + 1 < s.size()) {
      const std::string_view two = s.substr(i, 2);
      if (std::find(kTwoChar.begin(), kTwoChar.end(), two) != kTwoChar.end()) {
        out.push_back({Tok::Punct, std::string(two), start});
        i += 2;
        continue;
      }
    }
    if (std::string_view("(),.*=<>+-/;").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), start});
      ++i;
      continue;
    }
    throw SyntaxError(start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

std::optional<TimeUnit> unit_from_word(std::string_view w) {
  std::string lower(w);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (!lower.empty() && lower.back() == 's' && lower.size() > 1) lower.pop_back();
  if (lower == "second") return TimeUnit::Second;
  if (lower == "minute") return TimeUnit::Minute;
  if (lower == "hour") return TimeUnit::Hour;
  if (lower == "day") return TimeUnit::Day;
  if (lower == "month") return TimeUnit::Month;
  if (lower == "year") return TimeUnit::Year;
  return std::nullopt;
}

std::optional<TimeUnit> unit_from_letter(std::string_view w) {
  if (w == "s") return TimeUnit::Second;
  if (w == "m") return TimeUnit::Minute;
  if (w == "h") return TimeUnit::Hour;
  if (w == "d") return TimeUnit::Day;
  if (w == "M") return TimeUnit::Month;
  if (w == "y") return TimeUnit::Year;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::string_view sql) : toks_(lex(sql)) {}

  bool at_end() const { return peek().kind == Tok::End; }

  void skip_semicolons() {
    while (is_punct(";")) ++pos_;
  }

  Statement statement() {
    if (is_kw("CREATE")) return create_table();
    if (is_kw("INSERT")) return insert();
    return query();
  }

  void expect_statement_end() {
    if (!is_punct(";") && !at_end()) fail("unexpected '" + peek().text + "'");
  }

  Expr expression() { return or_expr(); }

 private:
  // -- token helpers ----------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(peek().pos, message); }

  bool is_kw(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && iequals(t.text, kw);
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }
  bool accept_kw(std::string_view kw) {
    if (!is_kw(kw)) return false;
    ++pos_;
    return true;
  }
  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) fail("expected " + std::string(kw));
  }
  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }
  std::string identifier() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || reserved(t.text)) fail("expected identifier");
    ++pos_;
    return t.text;
  }
  std::string string_token() {
    const Token& t = peek();
    if (t.kind != Tok::String) fail("expected string literal");
    ++pos_;
    return t.text;
  }
  std::int64_t integer_token() {
    const Token& t = peek();
    std::int64_t v = 0;
    if (t.kind != Tok::Number ||
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v).ec != std::errc{} ||
        t.text.find_first_of(".eE") != std::string::npos) {
      fail("expected integer");
    }
    ++pos_;
    return v;
  }

  /// '(' ... SELECT: a parenthesized query rather than an expression or join.
  bool paren_starts_query() const {
    std::size_t k = 0;
    while (is_punct("(", k)) ++k;
    return k > 0 && is_kw("SELECT", k);
  }

  // -- statements -------------------------------------------------------

  DataType data_type() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected type name");
    const std::string w = t.text;
    ++pos_;
    auto is = [&](const char* name) { return iequals(w, name); };
    if (is("INT") || is("INTEGER") || is("INT4")) return {TypeKind::Integer, {}};
    if (is("LONG") || is("BIGINT") || is("INT8")) return {TypeKind::BigInteger, {}};
    if (is("SHORT") || is("SMALLINT") || is("INT2")) return {TypeKind::SmallInteger, {}};
    if (is("DOUBLE")) {
      accept_kw("PRECISION");
      return {TypeKind::Float, {}};
    }
    if (is("FLOAT") || is("FLOAT8")) return {TypeKind::Float, {}};
    if (is("BOOLEAN") || is("BOOL")) return {TypeKind::Boolean, {}};
    if (is("STRING") || is("TEXT")) return {TypeKind::String, {}};
    if (is("VARCHAR")) {
      if (accept_punct("(")) {
        const auto n = integer_token();
        expect_punct(")");
        return {TypeKind::String, static_cast<int>(n)};
      }
      return {TypeKind::String, {}};
    }
    if (is("SYMBOL")) return {TypeKind::Symbol, {}};
    if (is("TIMESTAMP")) return {TypeKind::Timestamp, {}};
    --pos_;
    fail("unknown type '" + w + "'");
  }

  Statement create_table() {
    expect_kw("CREATE");
    expect_kw("TABLE");
    CreateTable c;
    c.name = identifier();
    expect_punct("(");
    do {
      ColumnDef col;
      col.name = identifier();
      col.type = data_type();
      c.columns.push_back(std::move(col));
    } while (accept_punct(","));
    expect_punct(")");
    if (accept_kw("TIMESTAMP")) {
      expect_punct("(");
      c.designated_timestamp = identifier();
      expect_punct(")");
    }
    return c;
  }

  Literal literal_value() {
    if (accept_kw("NULL")) return Literal::null();
    if (accept_kw("TRUE")) return Literal::boolean(true);
    if (accept_kw("FALSE")) return Literal::boolean(false);
    bool negative = false;
    if (is_punct("-") && peek(1).kind == Tok::Number) {
      negative = true;
      ++pos_;
    }
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      ++pos_;
      return number(t, negative);
    }
    if (negative) fail("expected number after '-'");
    if (t.kind == Tok::String) {
      ++pos_;
      if (auto ts = parse_canonical_timestamp(t.text)) return Literal::timestamp(*ts);
      return Literal::string(t.text);
    }
    fail("expected literal");
  }

  Literal number(const Token& t, bool negative) {
    const std::string text = (negative ? "-" : "") + t.text;
    if (t.text.find_first_of(".eE") == std::string::npos) {
      std::int64_t v = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (res.ec == std::errc{} && res.ptr == text.data() + text.size()) return Literal::integer(v);
    }
    double d = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), d);
    if (res.ec != std::errc{}) throw SyntaxError(t.pos, "bad numeric literal '" + text + "'");
    return Literal::floating(d);
  }

  Statement insert() {
    expect_kw("INSERT");
    expect_kw("INTO");
    Insert ins;
    ins.table = identifier();
    expect_kw("VALUES");
    do {
      expect_punct("(");
      std::vector<Literal> row;
      do {
        row.push_back(literal_value());
      } while (accept_punct(","));
      expect_punct(")");
      ins.rows.push_back(std::move(row));
    } while (accept_punct(","));
    return ins;
  }

  // -- queries ----------------------------------------------------------

  Query query() {
    Query q = set_union();
    if (is_kw("ORDER") || is_kw("LIMIT")) {
      if (!q.order_by.empty() || q.limit) fail("nested ORDER BY/LIMIT needs parentheses");
      if (accept_kw("ORDER")) {
        expect_kw("BY");
        q.order_by = order_list();
      }
      if (accept_kw("LIMIT")) q.limit = integer_token();
    }
    return q;
  }

  Query set_union() {
    Query lhs = set_intersect();
    for (;;) {
      SetOpKind op;
      if (accept_kw("UNION")) {
        op = accept_kw("ALL") ? SetOpKind::UnionAll : SetOpKind::Union;
      } else if (accept_kw("EXCEPT")) {
        op = SetOpKind::Except;
      } else {
        return lhs;
      }
      Query rhs = set_intersect();
      lhs = build::set_op(op, std::move(lhs), std::move(rhs));
    }
  }

  Query set_intersect() {
    Query lhs = set_primary();
    while (accept_kw("INTERSECT")) {
      Query rhs = set_primary();
      lhs = build::set_op(SetOpKind::Intersect, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Query set_primary() {
    if (accept_punct("(")) {
      Query q = query();
      expect_punct(")");
      return q;
    }
    return Query{select_core(), {}, std::nullopt};
  }

  SelectCore select_core() {
    expect_kw("SELECT");
    SelectCore c;
    c.distinct = accept_kw("DISTINCT");
    do {
      c.items.push_back(select_item());
    } while (accept_punct(","));
    if (accept_kw("FROM")) c.from = from_clause();
    if (accept_kw("WHERE")) c.where = expression();
    if (accept_kw("LATEST")) {
      expect_kw("ON");
      LatestOn lo;
      lo.timestamp_column = identifier();
      if (accept_kw("PARTITION")) {
        expect_kw("BY");
        do {
          lo.partition_by.push_back(identifier());
        } while (accept_punct(","));
      }
      c.latest_on = std::move(lo);
    }
    if (accept_kw("GROUP")) {
      expect_kw("BY");
      do {
        c.group_by.push_back(expression());
      } while (accept_punct(","));
    }
    if (accept_kw("HAVING")) c.having = expression();
    if (accept_kw("SAMPLE")) {
      expect_kw("BY");
      SampleBy sb;
      sb.count = integer_token();
      const Token& u = peek();
      auto unit = u.kind == Tok::Ident ? unit_from_letter(u.text) : std::nullopt;
      if (!unit) fail("expected sample unit (s, m, h, d, M, y)");
      ++pos_;
      sb.unit = *unit;
      if (accept_kw("FILL")) {
        expect_punct("(");
        if (accept_kw("NONE")) {
          sb.fill = FillMode::None;
        } else if (accept_kw("NULL")) {
          sb.fill = FillMode::Null;
        } else if (accept_kw("PREV")) {
          sb.fill = FillMode::Prev;
        } else if (accept_kw("LINEAR")) {
          sb.fill = FillMode::Linear;
        } else {
          fail("expected fill mode");
        }
        expect_punct(")");
      }
      c.sample_by = sb;
    }
    return c;
  }

  SelectItem select_item() {
    if (accept_punct("*")) return build::star();
    if (peek().kind == Tok::Ident && !reserved(peek().text) && is_punct(".", 1) && is_punct("*", 2)) {
      std::string q = identifier();
      pos_ += 2;
      return build::star(std::move(q));
    }
    SelectItem item;
    item.expr = expression();
    item.alias = optional_alias();
    return item;
  }

  std::string optional_alias() {
    if (accept_kw("AS")) return identifier();
    if (peek().kind == Tok::Ident && !reserved(peek().text)) return identifier();
    return {};
  }

  std::vector<OrderItem> order_list() {
    std::vector<OrderItem> out;
    do {
      OrderItem item{expression(), false};
      if (accept_kw("DESC")) {
        item.descending = true;
      } else {
        accept_kw("ASC");
      }
      out.push_back(std::move(item));
    } while (accept_punct(","));
    return out;
  }

  FromItem from_clause() {
    FromItem lhs = from_primary();
    for (;;) {
      JoinKind kind;
      if (accept_punct(",")) {
        kind = JoinKind::Cross;
      } else if (accept_kw("CROSS")) {
        expect_kw("JOIN");
        kind = JoinKind::Cross;
      } else if (accept_kw("LEFT")) {
        accept_kw("OUTER");
        expect_kw("JOIN");
        kind = JoinKind::Left;
      } else if (accept_kw("INNER") || is_kw("JOIN")) {
        expect_kw("JOIN");
        kind = JoinKind::Inner;
      } else {
        return lhs;
      }
      FromItem rhs = from_primary();
      std::optional<Expr> on;
      if (kind != JoinKind::Cross) {
        expect_kw("ON");
        on = expression();
      }
      lhs = Join{kind, std::move(lhs), std::move(rhs), std::move(on)};
    }
  }

  IntervalLit interval_literal() {
    expect_kw("INTERVAL");
    const std::size_t at = peek().pos;
    const std::string text = string_token();
    const auto space = text.find(' ');
    std::int64_t count = 0;
    if (space == std::string::npos ||
        std::from_chars(text.data(), text.data() + space, count).ec != std::errc{}) {
      throw SyntaxError(at, "malformed interval '" + text + "'");
    }
    auto unit = unit_from_word(std::string_view(text).substr(space + 1));
    if (!unit) throw SyntaxError(at, "unknown interval unit in '" + text + "'");
    return {count, *unit};
  }

  FromItem from_primary() {
    if (is_punct("(")) {
      if (paren_starts_query()) {
        expect_punct("(");
        Query q = query();
        expect_punct(")");
        return SubqueryRef{std::move(q), optional_alias()};
      }
      expect_punct("(");
      FromItem inner = from_clause();
      expect_punct(")");
      return inner;
    }
    if ((is_kw("tumble") || is_kw("hop")) && is_punct("(", 1)) {
      WindowTable w;
      w.kind = is_kw("tumble") ? WindowKind::Tumble : WindowKind::Hop;
      pos_ += 2;
      w.table = identifier();
      expect_punct(",");
      w.time_column = identifier();
      expect_punct(",");
      w.size = interval_literal();
      if (w.kind == WindowKind::Hop) {
        expect_punct(",");
        w.slide = w.size;
        w.size = interval_literal();
      }
      expect_punct(")");
      w.alias = optional_alias();
      return w;
    }
    TableRef t;
    t.name = identifier();
    t.alias = optional_alias();
    return t;
  }

  // -- expressions ------------------------------------------------------

  Expr or_expr() {
    Expr lhs = and_expr();
    while (accept_kw("OR")) lhs = build::or_(std::move(lhs), and_expr());
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = not_expr();
    while (accept_kw("AND")) lhs = build::and_(std::move(lhs), not_expr());
    return lhs;
  }

  Expr not_expr() {
    if (accept_kw("NOT")) return build::not_(not_expr());
    return predicate();
  }

  Expr predicate() {
    Expr lhs = additive();
    static constexpr std::array<std::pair<std::string_view, CmpOp>, 7> kOps = {{{"=", CmpOp::Eq},
                                                                                 {"<>", CmpOp::Ne},
                                                                                 {"!=", CmpOp::Ne},
                                                                                 {"<=", CmpOp::Le},
                                                                                 {">=", CmpOp::Ge},
                                                                                 {"<", CmpOp::Lt},
                                                                                 {">", CmpOp::Gt}}};
    for (const auto& [text, op] : kOps) {
      if (accept_punct(text)) return build::cmp(op, std::move(lhs), additive());
    }
    if (accept_kw("IS")) {
      if (accept_kw("NOT")) {
        if (accept_kw("DISTINCT")) {
          expect_kw("FROM");
          return build::cmp(CmpOp::NotDistinct, std::move(lhs), additive());
        }
        expect_kw("NULL");
        return build::is_null(std::move(lhs), true);
      }
      expect_kw("NULL");
      return build::is_null(std::move(lhs), false);
    }
    if (accept_kw("IN")) {
      if (peek().kind == Tok::String) return TimestampIn{std::move(lhs), string_token()};
      expect_punct("(");
      std::vector<Expr> items;
      do {
        items.push_back(expression());
      } while (accept_punct(","));
      expect_punct(")");
      return build::in_list(std::move(lhs), std::move(items));
    }
    if (accept_kw("BETWEEN")) {
      const bool symmetric = accept_kw("SYMMETRIC");
      Expr lo = additive();
      expect_kw("AND");
      Expr hi = additive();
      return build::between(std::move(lhs), std::move(lo), std::move(hi), symmetric);
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    for (;;) {
      if (accept_punct("+")) {
        lhs = build::arith(ArithOp::Add, std::move(lhs), multiplicative());
      } else if (accept_punct("-")) {
        lhs = build::arith(ArithOp::Sub, std::move(lhs), multiplicative());
      } else {
        return lhs;
      }
    }
  }

  Expr multiplicative() {
    Expr lhs = unary();
    for (;;) {
      if (accept_punct("*")) {
        lhs = build::arith(ArithOp::Mul, std::move(lhs), unary());
      } else if (accept_punct("/")) {
        lhs = build::arith(ArithOp::Div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (is_punct("-")) {
      if (peek(1).kind != Tok::Number) fail("unary minus is only supported on numeric literals");
      return literal_value();
    }
    return primary();
  }

  std::optional<Fn> function_from(std::string_view name) const {
    static constexpr std::array<std::pair<std::string_view, Fn>, 11> kFns = {{{"count", Fn::Count},
                                                                                {"count_distinct", Fn::CountDistinct},
                                                                                {"avg", Fn::Avg},
                                                                                {"sum", Fn::Sum},
                                                                                {"max", Fn::Max},
                                                                                {"min", Fn::Min},
                                                                                {"abs", Fn::Abs},
                                                                                {"now", Fn::Now},
                                                                                {"dateadd", Fn::DateAdd},
                                                                                {"datediff", Fn::DateDiff},
                                                                                {"date_trunc", Fn::DateTrunc}}};
    for (const auto& [text, fn] : kFns) {
      if (iequals(name, text)) return fn;
    }
    return std::nullopt;
  }

  DatePart date_part() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) fail("expected date part");
    static constexpr std::array<std::pair<std::string_view, DatePart>, 6> kParts = {{{"YEAR", DatePart::Year},
                                                                                       {"MONTH", DatePart::Month},
                                                                                       {"DAY", DatePart::Day},
                                                                                       {"HOUR", DatePart::Hour},
                                                                                       {"MINUTE", DatePart::Minute},
                                                                                       {"SECOND", DatePart::Second}}};
    for (const auto& [text, part] : kParts) {
      if (iequals(t.text, text)) {
        ++pos_;
        return part;
      }
    }
    fail("unknown date part '" + t.text + "'");
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number || t.kind == Tok::String) return literal_value();
    if (is_kw("NULL") || is_kw("TRUE") || is_kw("FALSE")) return literal_value();
    if (is_kw("INTERVAL")) return interval_literal();
    if (is_punct("(")) {
      if (paren_starts_query()) {
        expect_punct("(");
        Query q = query();
        expect_punct(")");
        return ScalarSubquery{std::move(q)};
      }
      expect_punct("(");
      Expr e = expression();
      expect_punct(")");
      return e;
    }
    if (accept_kw("CASE")) {
      CaseWhen c;
      while (accept_kw("WHEN")) {
        Expr when = expression();
        expect_kw("THEN");
        c.branches.push_back(WhenThen{std::move(when), expression()});
      }
      if (c.branches.empty()) fail("CASE needs at least one WHEN");
      if (accept_kw("ELSE")) c.otherwise = Box<Expr>(expression());
      expect_kw("END");
      return c;
    }
    if (accept_kw("CAST")) {
      expect_punct("(");
      Expr e = expression();
      expect_kw("AS");
      DataType type = data_type();
      expect_punct(")");
      return build::cast(std::move(e), type);
    }
    if (accept_kw("EXTRACT")) {
      expect_punct("(");
      DatePart part = date_part();
      expect_kw("FROM");
      Expr e = expression();
      expect_punct(")");
      return build::extract(part, std::move(e));
    }
    if (t.kind != Tok::Ident || reserved(t.text)) fail("expected expression");
    if (is_punct("(", 1)) {
      auto fn = function_from(t.text);
      if (!fn) fail("unknown function '" + t.text + "'");
      pos_ += 2;
      FunctionCall call{*fn, {}, false, false};
      if (accept_punct("*")) {
        call.star = true;
      } else if (!is_punct(")")) {
        call.distinct = accept_kw("DISTINCT");
        do {
          call.args.push_back(expression());
        } while (accept_punct(","));
      }
      expect_punct(")");
      if (accept_kw("OVER")) return window(std::move(call));
      return call;
    }
    std::string first = identifier();
    if (accept_punct(".")) return build::col(std::move(first), identifier());
    return build::col(std::move(first));
  }

  Expr window(FunctionCall call) {
    WindowCall w{std::move(call), {}, {}};
    expect_punct("(");
    if (accept_kw("PARTITION")) {
      expect_kw("BY");
      do {
        w.partition_by.push_back(expression());
      } while (accept_punct(","));
    }
    if (accept_kw("ORDER")) {
      expect_kw("BY");
      w.order_by = order_list();
    }
    expect_punct(")");
    return w;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Statement parse(std::string_view sql, const Dialect& /*dialect*/) {
  Parser p(sql);
  Statement s = p.statement();
  p.skip_semicolons();
  if (!p.at_end()) p.expect_statement_end();
  return s;
}

std::vector<Statement> parse_script(std::string_view sql, const Dialect& /*dialect*/) {
  Parser p(sql);
  std::vector<Statement> out;
  p.skip_semicolons();
  while (!p.at_end()) {
    out.push_back(p.statement());
    p.expect_statement_end();
    p.skip_semicolons();
  }
  return out;
}

Expr parse_expr(std::string_view sql, const Dialect& /*dialect*/) {
  Parser p(sql);
  Expr e = p.expression();
  if (!p.at_end()) p.expect_statement_end();
  return e;
}

}  // namespace sqlxd
