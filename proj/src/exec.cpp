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
#include "sqlxd/exec.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sqlxd/errors.hpp"
#include "sqlxd/parse.hpp"
#include "sqlxd/render.hpp"

namespace sqlxd {

using nlohmann::json;

ExecOutcome ExecOutcome::ok(std::vector<std::vector<Value>> rows, std::vector<DataType> types) {
  ExecOutcome o;
  o.rows = std::move(rows);
  o.column_types = std::move(types);
  return o;
}

ExecOutcome ExecOutcome::failure(std::string text) {
  ExecOutcome o;
  o.status = OutcomeStatus::Error;
  o.error = std::move(text);
  return o;
}

json to_json(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return nullptr;
  if (const auto* b = std::get_if<bool>(&v)) return *b;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v)) {
    if (!std::isfinite(*d)) return std::isnan(*d) ? "NaN" : (*d > 0 ? "Infinity" : "-Infinity");
    return *d;
  }
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return format_timestamp(std::get<Timestamp>(v));
}

Value value_from_json(const json& j, std::optional<TypeKind> hint) {
  if (j.is_null()) return std::monostate{};
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (hint == TypeKind::Timestamp) {
      if (auto ts = parse_timestamp_lenient(s)) return *ts;
    }
    if (hint == TypeKind::Float) {
      if (s == "NaN") return std::nan("");
      if (s == "Infinity") return HUGE_VAL;
      if (s == "-Infinity") return -HUGE_VAL;
    }
    return s;
  }
  throw Error("unsupported JSON scalar in fixture: " + j.dump());
}

json to_json(const ExecOutcome& o) {
  json j;
  j["status"] = o.is_error() ? "error" : "rows";
  if (o.is_error()) {
    j["error"] = o.error;
  } else {
    json rows = json::array();
    for (const auto& r : o.rows) {
      json row = json::array();
      for (const auto& v : r) row.push_back(to_json(v));
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    json types = json::array();
    for (const auto& t : o.column_types) types.push_back(to_string(t.kind));
    j["types"] = std::move(types);
  }
  if (o.plan) j["plan"] = *o.plan;
  j["latency_us"] = o.latency.count();
  return j;
}

ExecOutcome outcome_from_json(const json& j) {
  ExecOutcome o;
  const std::string status = j.value("status", "rows");
  if (status == "error") {
    o.status = OutcomeStatus::Error;
    o.error = j.value("error", "");
  } else if (status != "rows") {
    throw Error("fixture status must be 'rows' or 'error', got '" + status + "'");
  }
  if (j.contains("types")) {
    for (const auto& t : j["types"]) {
      auto kind = type_kind_from_string(t.get<std::string>());
      if (!kind) throw Error("unknown fixture column type " + t.dump());
      o.column_types.push_back({*kind, {}});
    }
  }
  if (j.contains("rows")) {
    for (const auto& r : j["rows"]) {
      std::vector<Value> row;
      for (std::size_t i = 0; i < r.size(); ++i) {
        std::optional<TypeKind> hint;
        if (i < o.column_types.size()) hint = o.column_types[i].kind;
        row.push_back(value_from_json(r[i], hint));
      }
      o.rows.push_back(std::move(row));
    }
  }
  if (j.contains("plan") && j["plan"].is_string()) o.plan = j["plan"].get<std::string>();
  o.latency = std::chrono::microseconds(j.value("latency_us", std::int64_t{0}));
  return o;
}

std::string format_value(const Value& v) {
  if (std::holds_alternative<std::monostate>(v)) return "NULL";
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "TRUE" : "FALSE";
  if (const auto* s = std::get_if<std::string>(&v)) return "'" + *s + "'";
  return to_json(v).dump();
}

std::string format_rows(const std::vector<std::vector<Value>>& rows) {
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r) out += ", ";
    out += "(";
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i) out += ", ";
      out += format_value(rows[r][i]);
    }
    out += ")";
  }
  return out + "]";
}

std::string canonical_sql(std::string_view sql) {
  static const Dialect kCanonical = Dialect::canonical();
  try {
    return render(parse(sql, kCanonical), kCanonical);
  } catch (const SyntaxError&) {
    std::string out;
    bool space = false;
    for (char c : sql) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = !out.empty();
        continue;
      }
      if (space) out += ' ';
      space = false;
      out += c;
    }
    while (!out.empty() && out.back() == ';') out.pop_back();
    return out;
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

std::string sql_digest(std::string_view sql) { return sha256_hex(canonical_sql(sql)); }

std::string SessionDigest::key_for(std::string_view sql) const {
  if (state_.empty()) return sql_digest(sql);
  return sha256_hex(state_ + "\n" + canonical_sql(sql));
}

bool is_setup_statement(std::string_view sql) {
  std::size_t i = 0;
  while (i < sql.size() && (std::isspace(static_cast<unsigned char>(sql[i])) || sql[i] == '(')) ++i;
  std::string word;
  while (i < sql.size() && std::isalpha(static_cast<unsigned char>(sql[i]))) {
    word += static_cast<char>(std::toupper(static_cast<unsigned char>(sql[i++])));
  }
  return word == "CREATE" || word == "INSERT" || word == "DROP" || word == "ALTER" || word == "DELETE" ||
         word == "UPDATE" || word == "TRUNCATE";
}

// -- FixtureStore -------------------------------------------------------------

FixtureStore FixtureStore::load(const std::string& path) {
  FixtureStore s;
  s.load_into(path);
  return s;
}

void FixtureStore::load_into(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open fixture file " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    const std::string sql = j.at("sql").get<std::string>();
    std::string digest;
    if (j.contains("sql-digest")) {
      digest = j["sql-digest"].get<std::string>();
    } else {
      SessionDigest session;
      for (const auto& s : j.value("setup", json::array())) session.absorb(s.get<std::string>());
      digest = session.key_for(sql);
    }
    put(j.at("endpoint").get<std::string>(), digest, {sql, outcome_from_json(j)});
  }
}

void FixtureStore::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write fixture file " + path);
  for (const auto& [key, entry] : entries_) {
    json j = to_json(entry.outcome);
    j["endpoint"] = key.endpoint;
    j["sql-digest"] = key.digest;
    j["sql"] = entry.sql;
    out << j.dump() << "\n";
  }
}

void FixtureStore::put(const std::string& endpoint, const std::string& digest, Entry entry) {
  entries_[{endpoint, digest}] = std::move(entry);
}

const FixtureStore::Entry* FixtureStore::find(const std::string& endpoint, const std::string& digest) const {
  auto it = entries_.find({endpoint, digest});
  return it == entries_.end() ? nullptr : &it->second;
}

// -- ReplayExecutor -----------------------------------------------------------

ReplayExecutor::ReplayExecutor(std::string endpoint, Dialect dialect, std::shared_ptr<const FixtureStore> store)
    : endpoint_(std::move(endpoint)), dialect_(std::move(dialect)), store_(std::move(store)) {}

ExecOutcome ReplayExecutor::execute(const std::string& sql) {
  const std::string key = session_.key_for(sql);
  const auto* entry = store_->find(endpoint_, key);
  if (is_setup_statement(sql)) {
    session_.absorb(sql);
    return entry ? entry->outcome : ExecOutcome::ok();
  }
  if (!entry) throw FixtureMissing("no recorded outcome on '" + endpoint_ + "' for: " + sql);
  return entry->outcome;
}

std::optional<std::string> ReplayExecutor::explain(const std::string& sql) {
  const auto* entry = store_->find(endpoint_, session_.key_for(sql));
  if (!entry) return std::nullopt;
  return entry->outcome.plan;
}

// -- RecordingExecutor --------------------------------------------------------

RecordingExecutor::RecordingExecutor(std::unique_ptr<Executor> inner, std::shared_ptr<FixtureStore> sink)
    : inner_(std::move(inner)), sink_(std::move(sink)) {}

ExecOutcome RecordingExecutor::execute(const std::string& sql) {
  ExecOutcome o = inner_->execute(sql);
  const std::string key = session_.key_for(sql);
  if (const auto* prior = sink_->find(endpoint(), key); prior && prior->outcome.plan && !o.plan) {
    o.plan = prior->outcome.plan;
  }
  sink_->put(endpoint(), key, {sql, o});
  if (is_setup_statement(sql)) session_.absorb(sql);
  return o;
}

std::optional<std::string> RecordingExecutor::explain(const std::string& sql) {
  auto plan = inner_->explain(sql);
  const std::string key = session_.key_for(sql);
  if (const auto* prior = sink_->find(endpoint(), key)) {
    FixtureStore::Entry updated = *prior;
    updated.outcome.plan = plan;
    sink_->put(endpoint(), key, std::move(updated));
  }
  return plan;
}

void RecordingExecutor::reset() {
  inner_->reset();
  session_.reset();
}

}  // namespace sqlxd
