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
#include "sqlxd/ast.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <limits>

namespace sqlxd {

bool is_numeric(TypeKind kind) {
  switch (kind) {
    case TypeKind::Integer:
    case TypeKind::BigInteger:
    case TypeKind::SmallInteger:
    case TypeKind::Float:
      return true;
    default:
      return false;
  }
}

bool is_textual(TypeKind kind) { return kind == TypeKind::String || kind == TypeKind::Symbol; }

bool comparable(TypeKind a, TypeKind b) {
  if (is_numeric(a) && is_numeric(b)) return true;
  if (is_textual(a) && is_textual(b)) return true;
  return a == b;
}

const char* to_string(TypeKind kind) {
  switch (kind) {
    case TypeKind::Integer: return "integer";
    case TypeKind::BigInteger: return "big-integer";
    case TypeKind::SmallInteger: return "small-integer";
    case TypeKind::Float: return "float";
    case TypeKind::Boolean: return "boolean";
    case TypeKind::String: return "string";
    case TypeKind::Symbol: return "symbol";
    case TypeKind::Timestamp: return "timestamp";
  }
  return "?";
}

std::optional<TypeKind> type_kind_from_string(std::string_view name) {
  for (auto k : {TypeKind::Integer, TypeKind::BigInteger, TypeKind::SmallInteger, TypeKind::Float, TypeKind::Boolean,
                 TypeKind::String, TypeKind::Symbol, TypeKind::Timestamp}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

Literal Literal::integer(std::int64_t v) {
  const bool fits = v >= std::numeric_limits<std::int32_t>::min() && v <= std::numeric_limits<std::int32_t>::max();
  return {{fits ? TypeKind::Integer : TypeKind::BigInteger, {}}, v};
}

const char* function_name(Fn fn) {
  switch (fn) {
    case Fn::Count: return "count";
    case Fn::CountDistinct: return "count_distinct";
    case Fn::Avg: return "avg";
    case Fn::Sum: return "sum";
    case Fn::Max: return "max";
    case Fn::Min: return "min";
    case Fn::Abs: return "abs";
    case Fn::Now: return "now";
    case Fn::DateAdd: return "dateadd";
    case Fn::DateDiff: return "datediff";
    case Fn::DateTrunc: return "date_trunc";
  }
  return "?";
}

bool is_aggregate(Fn fn) {
  switch (fn) {
    case Fn::Count:
    case Fn::CountDistinct:
    case Fn::Avg:
    case Fn::Sum:
    case Fn::Max:
    case Fn::Min:
      return true;
    default:
      return false;
  }
}

std::size_t projection_arity(const Query& q) {
  if (const auto* op = std::get_if<SetOperation>(&q.body)) return projection_arity(*op->lhs);
  std::size_t n = 0;
  for (const auto& item : q.core().items) n += item.is_star() ? 0 : 1;
  return n;
}

// ---------------------------------------------------------------------------
// Timestamps

namespace {

constexpr std::int64_t kMicrosPerSecond = 1'000'000;
constexpr std::int64_t kMicrosPerDay = 86'400 * kMicrosPerSecond;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return res.ec == std::errc{};
}

}  // namespace

Timestamp make_timestamp(int year, int month, int day, int hour, int minute, int second, int micro) {
  using namespace std::chrono;
  const sys_days days = std::chrono::year{year} / month / day;
  const std::int64_t d = days.time_since_epoch().count();
  return Timestamp{d * kMicrosPerDay + ((hour * 60LL + minute) * 60LL + second) * kMicrosPerSecond + micro};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const std::int64_t day = floor_div(ts.micros, kMicrosPerDay);
  std::int64_t rem = ts.micros - day * kMicrosPerDay;
  const year_month_day ymd{sys_days{days{day}}};
  const int micro = static_cast<int>(rem % kMicrosPerSecond);
  rem /= kMicrosPerSecond;
  const int sec = static_cast<int>(rem % 60);
  rem /= 60;
  const int min = static_cast<int>(rem % 60);
  const int hour = static_cast<int>(rem / 60);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%06d", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), hour, min, sec, micro);
  return buf;
}

std::optional<Timestamp> parse_canonical_timestamp(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS.ffffff
  if (s.size() != 26 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':' ||
      s[19] != '.') {
    return std::nullopt;
  }
  int y, mo, d, h, mi, se, us;
  if (!read_int(s, 0, 4, y) || !read_int(s, 5, 2, mo) || !read_int(s, 8, 2, d) || !read_int(s, 11, 2, h) ||
      !read_int(s, 14, 2, mi) || !read_int(s, 17, 2, se) || !read_int(s, 20, 6, us)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 59) return std::nullopt;
  return make_timestamp(y, mo, d, h, mi, se, us);
}

std::optional<Timestamp> parse_timestamp_lenient(std::string_view s) {
  int y, mo, d;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-' || !read_int(s, 0, 4, y) || !read_int(s, 5, 2, mo) ||
      !read_int(s, 8, 2, d)) {
    return std::nullopt;
  }
  int h = 0, mi = 0, se = 0, us = 0;
  std::size_t pos = 10;
  if (pos < s.size() && (s[pos] == ' ' || s[pos] == 'T')) {
    if (!read_int(s, pos + 1, 2, h) || s.size() < pos + 9 || s[pos + 3] != ':' || !read_int(s, pos + 4, 2, mi) ||
        s[pos + 6] != ':' || !read_int(s, pos + 7, 2, se)) {
      return std::nullopt;
    }
    pos += 9;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      int digits = 0;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        if (digits < 6) {
          us = us * 10 + (s[pos] - '0');
          ++digits;
        }
        ++pos;
      }
      for (; digits < 6; ++digits) us *= 10;
    }
  }
  std::int64_t offset_micros = 0;
  if (pos < s.size()) {
    // Trailing zone: Z, +HH, +HH:MM, +HHMM
    if (s[pos] == 'Z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const int sign = s[pos] == '-' ? -1 : 1;
      int oh = 0, om = 0;
      if (!read_int(s, pos + 1, 2, oh)) return std::nullopt;
      pos += 3;
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (pos < s.size()) {
        if (!read_int(s, pos, 2, om)) return std::nullopt;
        pos += 2;
      }
      offset_micros = sign * (oh * 3600LL + om * 60LL) * kMicrosPerSecond;
    }
    if (pos != s.size()) return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  Timestamp ts = make_timestamp(y, mo, d, h, mi, se, us);
  ts.micros -= offset_micros;
  return ts;
}

}  // namespace sqlxd
