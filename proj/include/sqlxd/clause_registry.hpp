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

// Clause candidates, probing against both systems, and the resulting pool.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sqlxd/exec.hpp"
#include "sqlxd/mapping.hpp"

namespace sqlxd {

enum class ClauseCategory { Clause, Function, Type, Feature };
enum class ClauseStatus { Unprobed, Shared, Failed, Mappable };

const char* to_string(ClauseCategory c);
const char* to_string(ClauseStatus s);

struct ProbeOutcome {
  bool ok = false;
  std::string error;

  static ProbeOutcome success() { return {true, {}}; }
  static ProbeOutcome failure(std::string text) { return {false, std::move(text)}; }
};

class ClauseDescriptor {
 public:
  ClauseDescriptor(std::string id, ClauseCategory category, std::string template_sql, std::string notes = {});

  const std::string& id() const { return id_; }
  ClauseCategory category() const { return category_; }
  /// Target-dialect text; several statements may be separated by ';'.
  const std::string& template_sql() const { return template_sql_; }
  const std::string& notes() const { return notes_; }
  /// Rows the target's semantics produce. A system that runs the template
  /// but returns something else has a different meaning for the clause,
  /// which counts as a failed probe on that side.
  const std::optional<std::vector<std::vector<Value>>>& expect() const { return expect_; }
  void set_expect(std::vector<std::vector<Value>> rows) { expect_ = std::move(rows); }

  ClauseStatus status() const { return status_; }
  /// Only unprobed descriptors may be classified; throws otherwise.
  void set_status(ClauseStatus s);

 private:
  std::string id_;
  ClauseCategory category_;
  std::string template_sql_;
  std::string notes_;
  std::optional<std::vector<std::vector<Value>>> expect_;
  ClauseStatus status_ = ClauseStatus::Unprobed;
};

class ClauseRegistry {
 public:
  /// Line-delimited records {id, category, template-sql, notes, expect?}.
  /// One optional record {"probe-schema": {"target": [...], "reference": [...]}}
  /// lists the statements that install the trivial probe table per side.
  static ClauseRegistry load(const std::string& path);

  void add(ClauseDescriptor d) { descriptors_.push_back(std::move(d)); }
  std::vector<ClauseDescriptor>& descriptors() { return descriptors_; }
  const std::vector<ClauseDescriptor>& descriptors() const { return descriptors_; }
  const ClauseDescriptor* find(const std::string& id) const;

  std::vector<std::string> target_schema;
  std::vector<std::string> reference_schema;

 private:
  std::vector<ClauseDescriptor> descriptors_;
};

/// Runs the template once. Throws ConnectionLost, never records it as an
/// error outcome. Does not touch the registry.
ProbeOutcome probe(const ClauseDescriptor& desc, Executor& exec);

/// ok/ok shared, error/error failed, anything else mappable.
ClauseStatus classify(const ProbeOutcome& target, const ProbeOutcome& reference);

/// True for error text that points at the transport rather than the query.
bool is_connection_error(const std::string& text);

/// Installs the probe schema on both sides, probes every unprobed
/// descriptor and classifies it. A target success paired with a
/// connection-class reference failure is re-probed up to max_retries times.
void probe_all(ClauseRegistry& registry, Executor& target, Executor& reference, int max_retries = 3);

struct ClausePool {
  std::set<std::string> target_supported;     // C1
  std::set<std::string> reference_supported;  // C2
  std::set<std::string> shared;               // C = C1 and C2
  std::set<std::string> mapped;               // C3: mappable with a rule
  /// Mappable clauses left out because no rule covers them.
  std::vector<std::string> warnings;

  std::set<std::string> effective() const;
  bool contains(const std::string& id) const { return shared.count(id) || mapped.count(id); }
  /// Every clause id, as if all were shared; for generator-only use.
  static ClausePool everything(const std::set<std::string>& ids);
};

/// Probe outcomes are not kept on descriptors, so C1 and C2 are derived
/// from the status: shared clauses are in both; mappable ones in C1 only.
ClausePool build_pool(const ClauseRegistry& registry, const RuleSet& rules);

}  // namespace sqlxd
