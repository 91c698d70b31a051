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
#include "sqlxd/clause_registry.hpp"

#include <fstream>
#include <regex>

#include "sqlxd/errors.hpp"
#include "sqlxd/oracle.hpp"

namespace sqlxd {

using nlohmann::json;

const char* to_string(ClauseCategory c) {
  switch (c) {
    case ClauseCategory::Clause: return "clause";
    case ClauseCategory::Function: return "function";
    case ClauseCategory::Type: return "type";
    case ClauseCategory::Feature: return "feature";
  }
  return "?";
}

const char* to_string(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::Unprobed: return "unprobed";
    case ClauseStatus::Shared: return "shared";
    case ClauseStatus::Failed: return "failed";
    case ClauseStatus::Mappable: return "mappable";
  }
  return "?";
}

namespace {

ClauseCategory category_from(const std::string& s) {
  for (auto c : {ClauseCategory::Clause, ClauseCategory::Function, ClauseCategory::Type, ClauseCategory::Feature}) {
    if (s == to_string(c)) return c;
  }
  throw ConfigError("unknown clause category '" + s + "'");
}

std::vector<std::string> split_script(const std::string& script) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : script) {
    if (c == '\'') quoted = !quoted;
    if (c == ';' && !quoted) {
      if (cur.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (cur.find_first_not_of(" \t\r\n") != std::string::npos) out.push_back(cur);
  return out;
}

}  // namespace

ClauseDescriptor::ClauseDescriptor(std::string id, ClauseCategory category, std::string template_sql, std::string notes)
    : id_(std::move(id)), category_(category), template_sql_(std::move(template_sql)), notes_(std::move(notes)) {}

void ClauseDescriptor::set_status(ClauseStatus s) {
  if (status_ != ClauseStatus::Unprobed) {
    throw Error("clause '" + id_ + "' already classified as " + to_string(status_));
  }
  if (s == ClauseStatus::Unprobed) throw Error("cannot reset clause '" + id_ + "' to unprobed");
  status_ = s;
}

ClauseRegistry ClauseRegistry::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open clause registry " + path);
  ClauseRegistry reg;
  std::string line;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    if (j.contains("probe-schema")) {
      reg.target_schema = j["probe-schema"].value("target", std::vector<std::string>{});
      reg.reference_schema = j["probe-schema"].value("reference", std::vector<std::string>{});
      continue;
    }
    ClauseDescriptor d(j.at("id").get<std::string>(), category_from(j.at("category").get<std::string>()),
                       j.at("template-sql").get<std::string>(), j.value("notes", ""));
    if (!seen.insert(d.id()).second) throw ConfigError("duplicate clause id '" + d.id() + "' in " + path);
    if (j.contains("expect")) {
      std::vector<std::vector<Value>> rows;
      for (const auto& r : j["expect"]) {
        std::vector<Value> row;
        for (const auto& v : r) row.push_back(value_from_json(v));
        rows.push_back(std::move(row));
      }
      d.set_expect(std::move(rows));
    }
    reg.add(std::move(d));
  }
  return reg;
}

const ClauseDescriptor* ClauseRegistry::find(const std::string& id) const {
  for (const auto& d : descriptors_) {
    if (d.id() == id) return &d;
  }
  return nullptr;
}

ProbeOutcome probe(const ClauseDescriptor& desc, Executor& exec) {
  ExecOutcome last = ExecOutcome::ok();
  for (const auto& stmt : split_script(desc.template_sql())) {
    last = exec.execute(stmt);
    if (last.is_error()) return ProbeOutcome::failure(last.error);
  }
  if (desc.expect() && normalize(last, false) != normalize(ExecOutcome::ok(*desc.expect()), false)) {
    return ProbeOutcome::failure("semantic mismatch: got " + format_rows(last.rows) + ", target semantics give " +
                                 format_rows(*desc.expect()));
  }
  return ProbeOutcome::success();
}

ClauseStatus classify(const ProbeOutcome& target, const ProbeOutcome& reference) {
  if (target.ok && reference.ok) return ClauseStatus::Shared;
  if (!target.ok && !reference.ok) return ClauseStatus::Failed;
  return ClauseStatus::Mappable;
}

bool is_connection_error(const std::string& text) {
  static const std::regex kConn("connection|broken pipe|terminating|could not connect|server closed",
                                std::regex::ECMAScript | std::regex::icase);
  return std::regex_search(text, kConn);
}

void probe_all(ClauseRegistry& registry, Executor& target, Executor& reference, int max_retries) {
  auto install = [](Executor& exec, const std::vector<std::string>& stmts) {
    exec.reset();
    for (const auto& s : stmts) {
      auto o = exec.execute(s);
      if (o.is_error()) throw Error("probe schema failed on " + exec.endpoint() + ": " + o.error);
    }
  };
  install(target, registry.target_schema);
  install(reference, registry.reference_schema);
  for (auto& d : registry.descriptors()) {
    if (d.status() != ClauseStatus::Unprobed) continue;
    const ProbeOutcome t = probe(d, target);
    ProbeOutcome r;
    for (int attempt = 0;; ++attempt) {
      try {
        r = probe(d, reference);
      } catch (const ConnectionLost& e) {
        if (!t.ok || attempt >= max_retries) throw;
        continue;
      }
      if (t.ok && !r.ok && is_connection_error(r.error) && attempt < max_retries) continue;
      break;
    }
    d.set_status(classify(t, r));
  }
}

std::set<std::string> ClausePool::effective() const {
  std::set<std::string> out = shared;
  out.insert(mapped.begin(), mapped.end());
  return out;
}

ClausePool ClausePool::everything(const std::set<std::string>& ids) {
  ClausePool p;
  p.target_supported = p.reference_supported = p.shared = ids;
  return p;
}

ClausePool build_pool(const ClauseRegistry& registry, const RuleSet& rules) {
  ClausePool pool;
  const std::set<std::string> covered = rules.clauses();
  for (const auto& d : registry.descriptors()) {
    switch (d.status()) {
      case ClauseStatus::Shared:
        pool.target_supported.insert(d.id());
        pool.reference_supported.insert(d.id());
        pool.shared.insert(d.id());
        break;
      case ClauseStatus::Mappable:
        pool.target_supported.insert(d.id());
        if (covered.count(d.id())) {
          pool.mapped.insert(d.id());
        } else {
          pool.warnings.push_back("clause '" + d.id() + "' is mappable but no rule covers it; excluded");
        }
        break;
      case ClauseStatus::Failed:
        break;
      case ClauseStatus::Unprobed:
        pool.warnings.push_back("clause '" + d.id() + "' was never probed; excluded");
        break;
    }
  }
  return pool;
}

}  // namespace sqlxd
