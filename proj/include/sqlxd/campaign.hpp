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

// End-to-end loop: schema and data on both systems, query generation,
// mapping, execution, comparison, reduction, dedupe and reports.

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqlxd/exec.hpp"
#include "sqlxd/mapping.hpp"
#include "sqlxd/oracle.hpp"
#include "sqlxd/plan.hpp"
#include "sqlxd/reducer.hpp"
#include "sqlxd/workload_gen.hpp"

namespace sqlxd {

enum class Mode { Live, Replay, Record };
const char* to_string(Mode m);
Mode mode_from_string(const std::string& s);

struct EndpointConfig {
  std::string id;
  std::string dialect;  // questdb, risingwave, postgresql
  std::string host = "127.0.0.1";
  int port = 5432;
  std::string user = "postgres";
  std::string database = "postgres";
  /// Name of the environment variable holding the password.
  std::string password_env;
  std::chrono::milliseconds timeout{30000};
  /// Collect plans for fingerprinting. On by default for the reference only.
  std::optional<bool> explain;

  Dialect make_dialect() const { return Dialect::by_name(dialect); }
  PgEndpoint pg() const;
};

struct CampaignConfig {
  std::string run_id = "sqlxd";
  Mode mode = Mode::Replay;
  std::uint64_t seed = 1;
  std::optional<std::size_t> queries;
  std::optional<std::chrono::seconds> duration;
  EndpointConfig target;
  EndpointConfig reference;
  GenConfig gen;
  std::string registry_path;
  std::vector<std::string> fixtures;
  /// Bundled cases to replay instead of generating queries.
  std::string cases_path;
  std::vector<std::string> extra_unexpected;
  std::vector<std::string> extra_expected;
  std::vector<std::string> disabled_rules;
  std::string out_dir = "sqlxd-out";
  std::string record_path;  // record mode; defaults to <out>/fixtures.jsonl
  int workers = 1;
  std::size_t refresh_every = 100;
  std::size_t reduce_budget = 500;

  /// Relative paths inside the file resolve against its directory.
  static CampaignConfig load(const std::string& path);
  static CampaignConfig from_json(const nlohmann::json& j, const std::string& base_dir = ".");
  nlohmann::json to_json() const;
  /// Exactly one of queries/duration, at least one worker, writable output.
  void validate() const;
  RuleSet rules() const;
  ErrorClassifier classifier() const;
};

/// A bundled or reduced case. The reference setup defaults to the mapped
/// target setup; cases may pin it when the systems need different DDL.
struct CaseSpec {
  std::string id;
  TestCase test;
  std::optional<std::vector<Statement>> reference_setup;
  std::string expect;  // "logic", "internal", ... informational
  std::string notes;
};

/// Line-delimited {id, setup:[sql], reference-setup?:[sql], query, expect?, notes?}.
std::vector<CaseSpec> load_cases(const std::string& path, const Dialect& target);

struct ExecutorPair {
  std::unique_ptr<Executor> target;
  std::unique_ptr<Executor> reference;
};

struct CaseRun {
  MappedQuery mapped;
  std::string target_sql;
  std::string reference_sql;
  ExecOutcome target;
  ExecOutcome reference;
  Verdict verdict;
  bool has_order_by = false;
};

/// Resets both executors, installs the setup on each side and runs the query
/// pair. Setup statements that fail on either side surface as ConfigError.
CaseRun run_case(ExecutorPair& ex, const TestCase& c, const std::optional<std::vector<Statement>>& reference_setup,
                 const RuleSet& rules, const ErrorClassifier& classifier);

/// Same verdict kind and, for internal errors, the same error class.
bool same_finding(const Verdict& a, const Verdict& b);

struct BugReport {
  std::string id;    // 16 hex digits over the canonical reduced script
  std::string kind;  // logic-bug, internal-error, review
  std::string case_id;
  TestCase original;
  TestCase reduced;
  std::optional<std::vector<Statement>> reference_setup;
  std::vector<std::string> rules;
  ExecOutcome target;
  ExecOutcome reference;
  Verdict verdict;
  std::uint64_t seed = 0;
  int worker = 0;
  bool flaky = false;
  bool minimal = true;
  std::vector<ReductionStep> trace;
  std::string fingerprint;  // plan fingerprint digest of the reduced query, if any
};

std::string report_id(const TestCase& reduced);

/// Duplicate iff the reduced-script digest matches, or an internal error
/// shares both error class and non-empty plan fingerprint with one seen.
class ReportIndex {
 public:
  /// Returns the id this report duplicates, or nullopt after recording it.
  std::optional<std::string> check_and_add(const BugReport& r);
  std::size_t size() const { return ids_.size(); }

 private:
  std::set<std::string> ids_;
  std::map<std::pair<std::string, std::string>, std::string> internal_;
};

struct CampaignSummary {
  std::size_t queries = 0;
  std::size_t equal = 0;
  std::size_t logic = 0;
  std::size_t internal = 0;
  std::size_t expected = 0;
  std::size_t both_error_consistent = 0;
  std::size_t review_queue = 0;
  std::size_t unique_plans = 0;
  std::size_t dedup_suppressed = 0;
  std::size_t unmappable_skipped = 0;
  std::size_t timeouts = 0;
  std::vector<std::string> reports;  // sorted ids of emitted bug reports
  std::vector<std::string> warnings;
  bool aborted = false;
  std::string error;

  std::size_t findings() const { return reports.size(); }
  /// 0 clean, 1 findings, 2 operational failure.
  int exit_code() const;
  nlohmann::json to_json() const;
  bool operator==(const CampaignSummary&) const = default;
};

ExecutorPair make_executors(const CampaignConfig& cfg, int worker,
                            const std::shared_ptr<const FixtureStore>& replay_store,
                            const std::shared_ptr<FixtureStore>& record_sink);

/// Writes <out>/<id>/{repro.sql, repro.mapped.sql, meta.json}; review items
/// go under <out>/review/<id>/.
void write_report(const std::string& out_dir, const BugReport& r, const CampaignConfig& cfg);

CampaignSummary run_campaign(const CampaignConfig& cfg);

}  // namespace sqlxd
