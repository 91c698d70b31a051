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
#include "sqlxd/campaign.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "sqlxd/clause_registry.hpp"
#include "sqlxd/errors.hpp"
#include "sqlxd/parse.hpp"
#include "sqlxd/render.hpp"
#include "sqlxd/schema.hpp"

namespace sqlxd {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Live: return "live";
    case Mode::Replay: return "replay";
    case Mode::Record: return "record";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "live") return Mode::Live;
  if (s == "replay") return Mode::Replay;
  if (s == "record") return Mode::Record;
  throw ConfigError("unknown mode '" + s + "' (live, replay or record)");
}

PgEndpoint EndpointConfig::pg() const {
  PgEndpoint p;
  p.id = id;
  p.host = host;
  p.port = port;
  p.user = user;
  p.database = database;
  p.timeout = timeout;
  if (!password_env.empty()) {
    if (const char* v = std::getenv(password_env.c_str())) p.password = v;
  }
  return p;
}

// -- config ------------------------------------------------------------------

namespace {

EndpointConfig endpoint_from_json(const json& j, const char* role) {
  if (!j.is_object()) throw ConfigError(std::string("missing endpoint '") + role + "'");
  EndpointConfig e;
  e.id = j.value("id", std::string(role));
  e.dialect = j.value("dialect", std::string(role) == "reference" ? "postgresql" : "questdb");
  e.host = j.value("host", e.host);
  e.port = j.value("port", e.port);
  e.user = j.value("user", e.user);
  e.database = j.value("database", e.database);
  e.password_env = j.value("password-env", "");
  e.timeout = std::chrono::milliseconds(j.value("timeout-ms", 30000));
  if (j.contains("explain")) e.explain = j["explain"].get<bool>();
  Dialect::by_name(e.dialect);  // validates
  return e;
}

json endpoint_to_json(const EndpointConfig& e) {
  json j = {{"id", e.id},     {"dialect", e.dialect},          {"host", e.host},
            {"port", e.port}, {"user", e.user},                {"database", e.database},
            {"password-env", e.password_env}, {"timeout-ms", e.timeout.count()}};
  if (e.explain) j["explain"] = *e.explain;
  return j;
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

std::string sanitize_id(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::tolower(c)) : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "r" + out;
  return out;
}

}  // namespace

CampaignConfig CampaignConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return from_json(j, fs::path(path).parent_path().string());
}

CampaignConfig CampaignConfig::from_json(const json& j, const std::string& base) {
  CampaignConfig c;
  try {
    c.run_id = j.value("run-id", c.run_id);
    c.mode = mode_from_string(j.value("mode", std::string("replay")));
    c.seed = j.value("seed", c.seed);
    if (j.contains("queries")) c.queries = j["queries"].get<std::size_t>();
    if (j.contains("duration-seconds")) c.duration = std::chrono::seconds(j["duration-seconds"].get<long>());
    c.target = endpoint_from_json(j.value("target", json::object()), "target");
    c.reference = endpoint_from_json(j.value("reference", json::object()), "reference");
    if (j.contains("generator")) c.gen = GenConfig::from_json(j["generator"]);
    c.registry_path = resolve(base, j.value("registry", ""));
    for (const auto& f : j.value("fixtures", std::vector<std::string>{})) c.fixtures.push_back(resolve(base, f));
    c.cases_path = resolve(base, j.value("cases", ""));
    if (j.contains("classifier")) {
      c.extra_unexpected = j["classifier"].value("unexpected", std::vector<std::string>{});
      c.extra_expected = j["classifier"].value("expected", std::vector<std::string>{});
    }
    c.disabled_rules = j.value("disabled-rules", std::vector<std::string>{});
    c.out_dir = resolve(base, j.value("out", c.out_dir));
    c.record_path = resolve(base, j.value("record-to", ""));
    c.workers = j.value("workers", c.workers);
    c.refresh_every = j.value("refresh-every", c.refresh_every);
    c.reduce_budget = j.value("reduce-budget", c.reduce_budget);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

json CampaignConfig::to_json() const {
  json j = {{"run-id", run_id},
            {"mode", sqlxd::to_string(mode)},
            {"seed", seed},
            {"target", endpoint_to_json(target)},
            {"reference", endpoint_to_json(reference)},
            {"generator", gen.to_json()},
            {"registry", registry_path},
            {"fixtures", fixtures},
            {"cases", cases_path},
            {"classifier", {{"unexpected", extra_unexpected}, {"expected", extra_expected}}},
            {"disabled-rules", disabled_rules},
            {"workers", workers},
            {"refresh-every", refresh_every},
            {"reduce-budget", reduce_budget}};
  if (queries) j["queries"] = *queries;
  if (duration) j["duration-seconds"] = duration->count();
  return j;
}

void CampaignConfig::validate() const {
  if (queries.has_value() == duration.has_value()) {
    throw ConfigError("set exactly one of queries and duration-seconds");
  }
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (refresh_every < 1) throw ConfigError("refresh-every must be at least 1");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const fs::path probe = fs::path(out_dir) / ".write-probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory " + out_dir + " is not writable");
  }
  fs::remove(probe, ec);
  gen.validate();
}

RuleSet CampaignConfig::rules() const {
  std::set<std::string> ids(disabled_rules.begin(), disabled_rules.end());
  for (const auto& id : ids) {
    if (!RuleSet::standard().find(id)) throw ConfigError("unknown mapping rule '" + id + "'");
  }
  return RuleSet::standard().without(ids);
}

ErrorClassifier CampaignConfig::classifier() const {
  ErrorClassifier c;
  for (const auto& p : extra_unexpected) c.add_unexpected(p);
  for (const auto& p : extra_expected) c.add_expected(p);
  return c;
}

// -- cases ---------------------------------------------------------------------

std::vector<CaseSpec> load_cases(const std::string& path, const Dialect& target) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cases " + path);
  std::vector<CaseSpec> out;
  std::string line;
  auto stmts = [&](const json& arr) {
    std::vector<Statement> v;
    for (const auto& s : arr) v.push_back(parse(s.get<std::string>(), target));
    return v;
  };
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    CaseSpec c;
    c.id = j.at("id").get<std::string>();
    c.test.setup = stmts(j.value("setup", json::array()));
    c.test.query = parse(j.at("query").get<std::string>(), target);
    if (j.contains("reference-setup")) {
      std::vector<Statement> v;
      for (const auto& s : j["reference-setup"]) v.push_back(parse(s.get<std::string>(), Dialect::postgresql()));
      c.reference_setup = std::move(v);
    }
    c.expect = j.value("expect", "");
    c.notes = j.value("notes", "");
    out.push_back(std::move(c));
  }
  return out;
}

// -- execution --------------------------------------------------------------------

namespace {

ExecOutcome exec_retry(Executor& e, const std::string& sql, int retries = 3) {
  for (int attempt = 0;; ++attempt) {
    try {
      return e.execute(sql);
    } catch (const ConnectionLost&) {
      if (attempt >= retries) throw;
    }
  }
}

void install(Executor& e, const std::vector<Statement>& stmts, const Dialect& d) {
  for (const auto& s : stmts) {
    auto o = exec_retry(e, render(s, d));
    if (o.is_error()) throw ConfigError("setup failed on " + e.endpoint() + ": " + o.error);
  }
}

std::vector<Statement> reference_setup_for(const std::vector<Statement>& setup, const RuleSet& rules) {
  std::vector<Statement> out;
  for (const auto& s : setup) out.push_back(s.is<CreateTable>() ? map_ddl(s, rules) : s);
  return out;
}

}  // namespace

CaseRun run_case(ExecutorPair& ex, const TestCase& c, const std::optional<std::vector<Statement>>& reference_setup,
                 const RuleSet& rules, const ErrorClassifier& classifier) {
  const Dialect& td = ex.target->dialect();
  const Dialect& rd = ex.reference->dialect();
  ex.target->reset();
  ex.reference->reset();
  install(*ex.target, c.setup, td);
  install(*ex.reference, reference_setup ? *reference_setup : reference_setup_for(c.setup, rules), rd);
  CaseRun r;
  r.mapped = apply_mappings(c.query, rules, MappingContext{SchemaSpec::from_statements(c.setup)}, rd);
  r.target_sql = render(c.query, td);
  r.reference_sql = render(r.mapped.mapped, rd);
  r.target = exec_retry(*ex.target, r.target_sql);
  r.reference = exec_retry(*ex.reference, r.reference_sql);
  r.has_order_by = !c.query.as<Query>().order_by.empty();
  r.verdict = compare(r.target, r.reference, r.has_order_by, classifier);
  return r;
}

bool same_finding(const Verdict& a, const Verdict& b) {
  if (a.kind != b.kind || a.review != b.review) return false;
  return a.kind != VerdictKind::InternalError || a.error_class == b.error_class;
}

// -- reports ------------------------------------------------------------------------

std::string report_id(const TestCase& reduced) {
  return sha256_hex(render_case(reduced, Dialect::canonical())).substr(0, 16);
}

std::optional<std::string> ReportIndex::check_and_add(const BugReport& r) {
  if (ids_.count(r.id)) return r.id;
  if (r.kind == "internal-error" && !r.fingerprint.empty()) {
    const auto key = std::make_pair(r.verdict.error_class, r.fingerprint);
    if (auto it = internal_.find(key); it != internal_.end()) return it->second;
    internal_.emplace(key, r.id);
  }
  ids_.insert(r.id);
  return std::nullopt;
}

namespace {

json verdict_json(const Verdict& v) {
  return {{"kind", to_string(v.kind)}, {"review", v.review}, {"error-class", v.error_class}, {"detail", v.detail}};
}

std::string mapped_script(const BugReport& r, const RuleSet& rules) {
  if (r.reference_setup && r.reduced.setup == r.original.setup) {
    std::vector<Statement> all = *r.reference_setup;
    all.push_back(apply_mappings(r.reduced.query, rules, MappingContext{SchemaSpec::from_statements(r.reduced.setup)})
                      .mapped);
    return render_script(all, Dialect::postgresql());
  }
  return render_mapped_case(r.reduced, rules);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

}  // namespace

void write_report(const std::string& out_dir, const BugReport& r, const CampaignConfig& cfg) {
  const fs::path dir = r.kind == "review" ? fs::path(out_dir) / "review" / r.id : fs::path(out_dir) / r.id;
  fs::create_directories(dir);
  const Dialect td = cfg.target.make_dialect();
  const RuleSet rules = cfg.rules();
  write_file(dir / "repro.sql", render_case(r.reduced, td));
  write_file(dir / "repro.mapped.sql", mapped_script(r, rules));
  json trace = json::array();
  for (const auto& s : r.trace) trace.push_back({{"phase", s.phase}, {"before", s.before}, {"after", s.after}});
  json meta = {{"id", r.id},
               {"kind", r.kind},
               {"case", r.case_id},
               {"verdict", verdict_json(r.verdict)},
               {"seed", r.seed},
               {"worker", r.worker},
               {"rules", r.rules},
               {"outcomes", {{"target", to_json(r.target)}, {"reference", to_json(r.reference)}}},
               {"original", render_case(r.original, td)},
               {"flaky", r.flaky},
               {"minimal", r.minimal},
               {"trace", trace},
               {"plan-fingerprint", r.fingerprint},
               {"dedup", "heuristic: canonical reduced-script digest, or error class plus plan fingerprint"},
               {"config", cfg.to_json()}};
  if (cfg.mode != Mode::Replay) {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    meta["timestamps"] = {{"written", buf}};
  }
  write_file(dir / "meta.json", meta.dump(2) + "\n");
}

int CampaignSummary::exit_code() const {
  if (aborted) return 2;
  return reports.empty() ? 0 : 1;
}

json CampaignSummary::to_json() const {
  json j = {{"queries", queries},
            {"equal", equal},
            {"logic", logic},
            {"internal", internal},
            {"expected", expected},
            {"both_error_consistent", both_error_consistent},
            {"review_queue", review_queue},
            {"unique_plans", unique_plans},
            {"dedup_suppressed", dedup_suppressed},
            {"unmappable_skipped", unmappable_skipped},
            {"timeouts", timeouts},
            {"reports", reports},
            {"warnings", warnings},
            {"aborted", aborted}};
  if (!error.empty()) j["error"] = error;
  return j;
}

ExecutorPair make_executors(const CampaignConfig& cfg, int worker,
                            const std::shared_ptr<const FixtureStore>& replay_store,
                            const std::shared_ptr<FixtureStore>& record_sink) {
  (void)worker;
  auto one = [&](const EndpointConfig& e) -> std::unique_ptr<Executor> {
    switch (cfg.mode) {
      case Mode::Replay: return std::make_unique<ReplayExecutor>(e.id, e.make_dialect(), replay_store);
      case Mode::Live: return std::make_unique<PgWireExecutor>(e.pg(), e.make_dialect());
      case Mode::Record:
        return std::make_unique<RecordingExecutor>(std::make_unique<PgWireExecutor>(e.pg(), e.make_dialect()),
                                                   record_sink);
    }
    return nullptr;
  };
  return {one(cfg.target), one(cfg.reference)};
}

// -- campaign loop ------------------------------------------------------------------

namespace {

struct WorkerResult {
  CampaignSummary counts;
  std::set<std::string> plans;
  std::vector<BugReport> reports;
  std::shared_ptr<FixtureStore> recorded = std::make_shared<FixtureStore>();
};

struct Shared {
  const CampaignConfig& cfg;
  RuleSet rules;
  ErrorClassifier classifier;
  ClausePool pool;
  std::shared_ptr<const FixtureStore> store;
  std::vector<CaseSpec> cases;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

class Worker {
 public:
  Worker(const Shared& sh, int index, std::size_t budget)
      : sh_(sh), index_(index), budget_(budget), ex_(make_executors(sh.cfg, index, sh.store, res_.recorded)) {}

  WorkerResult run() {
    try {
      if (!sh_.cfg.cases_path.empty()) {
        run_cases();
      } else {
        run_generated();
      }
    } catch (const std::exception& e) {
      res_.counts.aborted = true;
      res_.counts.error = "worker " + std::to_string(index_) + ": " + e.what();
    }
    return std::move(res_);
  }

 private:
  bool out_of_budget(std::size_t done) const {
    if (sh_.deadline) return std::chrono::steady_clock::now() >= *sh_.deadline;
    return done >= budget_;
  }

  void tally(const Verdict& v, const ExecOutcome& t, const ExecOutcome& r) {
    auto& c = res_.counts;
    ++c.queries;
    if (t.error == "TIMEOUT" || r.error == "TIMEOUT") ++c.timeouts;
    switch (v.kind) {
      case VerdictKind::Equal: ++c.equal; break;
      case VerdictKind::LogicDiscrepancy:
        ++c.logic;
        if (v.review) ++c.review_queue;
        break;
      case VerdictKind::InternalError: ++c.internal; break;
      case VerdictKind::ExpectedError: ++c.expected; break;
      case VerdictKind::BothErrorConsistent: ++c.both_error_consistent; break;
    }
  }

  bool explain_target() const { return sh_.cfg.target.explain.value_or(false); }
  bool explain_reference() const { return sh_.cfg.reference.explain.value_or(true); }

  std::string collect_plans(const CaseRun& r) {
    std::string fp;
    if (explain_reference()) {
      if (auto p = ex_.reference->explain(r.reference_sql); p && !p->empty()) {
        fp = plan_fingerprint(*p).digest();
        res_.plans.insert(ex_.reference->endpoint() + ":" + fp);
      }
    }
    if (explain_target()) {
      if (auto p = ex_.target->explain(r.target_sql); p && !p->empty()) {
        fp = plan_fingerprint(*p).digest();
        res_.plans.insert(ex_.target->endpoint() + ":" + fp);
      }
    }
    return fp;
  }

  void handle(const std::string& case_id, const TestCase& tc, const std::optional<std::vector<Statement>>& ref_setup,
              const CaseRun& run, const std::function<void()>& restore) {
    tally(run.verdict, run.target, run.reference);
    collect_plans(run);
    const Verdict& v = run.verdict;
    const bool finding = v.kind == VerdictKind::InternalError || v.kind == VerdictKind::LogicDiscrepancy;
    if (!finding) return;

    BugReport rep;
    rep.case_id = case_id;
    rep.original = tc;
    rep.reduced = tc;
    rep.reference_setup = ref_setup;
    rep.rules = run.mapped.applied;
    rep.target = run.target;
    rep.reference = run.reference;
    rep.verdict = v;
    rep.seed = sh_.cfg.seed ^ static_cast<std::uint64_t>(index_);
    rep.worker = index_;
    rep.kind = v.kind == VerdictKind::InternalError ? "internal-error" : (v.review ? "review" : "logic-bug");

    if (rep.kind != "review") {
      auto pred = [&](const TestCase& cand) {
        try {
          auto ref = cand.setup == tc.setup ? ref_setup : std::nullopt;
          return same_finding(run_case(ex_, cand, ref, sh_.rules, sh_.classifier).verdict, v);
        } catch (const FixtureMissing&) {
          return false;
        } catch (const UnmappableConstruct&) {
          return false;
        } catch (const ConfigError&) {
          return false;
        }
      };
      ReduceOptions opts;
      opts.dialect = ex_.target->dialect();
      opts.rules = &sh_.rules;
      opts.budget = sh_.cfg.reduce_budget;
      ReducedCase red = reduce_case(tc, pred, opts);
      rep.reduced = red.reduced;
      rep.trace = red.trace;
      rep.minimal = red.minimal;
      rep.flaky = red.flaky;
      // Self-check: the emitted script must re-trigger before it is written.
      CaseRun again = run_case(ex_, rep.reduced, rep.reduced.setup == tc.setup ? ref_setup : std::nullopt,
                               sh_.rules, sh_.classifier);
      if (!same_finding(again.verdict, v)) {
        rep.flaky = true;
        rep.reduced = tc;
        again = run_case(ex_, tc, ref_setup, sh_.rules, sh_.classifier);
      }
      rep.rules = again.mapped.applied;
      rep.target = again.target;
      rep.reference = again.reference;
      if (explain_target()) {
        if (auto p = ex_.target->explain(again.target_sql); p && !p->empty()) rep.fingerprint = plan_fingerprint(*p).digest();
      }
      if (rep.fingerprint.empty() && explain_reference()) {
        if (auto p = ex_.reference->explain(again.reference_sql); p && !p->empty()) {
          rep.fingerprint = plan_fingerprint(*p).digest();
        }
      }
      if (restore) restore();
    }
    rep.id = report_id(rep.reduced);
    res_.reports.push_back(std::move(rep));
  }

  void run_cases() {
    std::size_t done = 0;
    for (std::size_t i = static_cast<std::size_t>(index_); i < sh_.cases.size();
         i += static_cast<std::size_t>(sh_.cfg.workers)) {
      if (out_of_budget(done)) break;
      const CaseSpec& c = sh_.cases[i];
      CaseRun run;
      try {
        run = run_case(ex_, c.test, c.reference_setup, sh_.rules, sh_.classifier);
      } catch (const UnmappableConstruct&) {
        ++res_.counts.unmappable_skipped;
        continue;
      }
      ++done;
      handle(c.id, c.test, c.reference_setup, run, nullptr);
    }
  }

  void run_generated() {
    GenConfig gc = sh_.cfg.gen;
    gc.seed = sh_.cfg.seed ^ static_cast<std::uint64_t>(index_);
    gc.table_prefix = sanitize_id(sh_.cfg.run_id) + "_w" + std::to_string(index_) + "_t";
    Generator gen(gc, ex_.target->dialect());
    SchemaSpec schema;
    std::vector<Statement> setup;
    auto install_round = [&] {
      ex_.target->reset();
      ex_.reference->reset();
      install(*ex_.target, setup, ex_.target->dialect());
      install(*ex_.reference, reference_setup_for(setup, sh_.rules), ex_.reference->dialect());
    };
    std::size_t done = 0;
    for (std::size_t iter = 0; !out_of_budget(done); ++iter) {
      if (iter % sh_.cfg.refresh_every == 0) {
        schema = gen.gen_schema(&sh_.pool);
        setup.clear();
        for (const auto& t : schema.tables) setup.emplace_back(t.ddl());
        for (auto& s : gen.gen_data(schema)) setup.push_back(std::move(s));
        install_round();
      }
      Statement q = gen.gen_query(schema, sh_.pool);
      MappedQuery mapped;
      try {
        mapped = apply_mappings(q, sh_.rules, MappingContext{schema}, ex_.reference->dialect());
      } catch (const UnmappableConstruct&) {
        ++res_.counts.unmappable_skipped;
        continue;
      }
      ++done;
      CaseRun run;
      run.mapped = mapped;
      run.target_sql = render(q, ex_.target->dialect());
      run.reference_sql = render(mapped.mapped, ex_.reference->dialect());
      run.target = exec_retry(*ex_.target, run.target_sql);
      run.reference = exec_retry(*ex_.reference, run.reference_sql);
      run.has_order_by = !q.as<Query>().order_by.empty();
      run.verdict = compare(run.target, run.reference, run.has_order_by, sh_.classifier);
      handle("gen-" + std::to_string(index_) + "-" + std::to_string(iter), TestCase{setup, q}, std::nullopt, run,
             install_round);
    }
  }

  const Shared& sh_;
  int index_;
  std::size_t budget_;
  WorkerResult res_;
  ExecutorPair ex_;
};

void merge_counts(CampaignSummary& into, const CampaignSummary& c) {
  into.queries += c.queries;
  into.equal += c.equal;
  into.logic += c.logic;
  into.internal += c.internal;
  into.expected += c.expected;
  into.both_error_consistent += c.both_error_consistent;
  into.review_queue += c.review_queue;
  into.unmappable_skipped += c.unmappable_skipped;
  into.timeouts += c.timeouts;
  if (c.aborted) {
    into.aborted = true;
    if (!into.error.empty()) into.error += "; ";
    into.error += c.error;
  }
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& cfg) {
  cfg.validate();
  CampaignSummary summary;
  Shared sh{cfg, cfg.rules(), cfg.classifier(), {}, nullptr, {}, std::nullopt};
  try {
    auto store = std::make_shared<FixtureStore>();
    for (const auto& f : cfg.fixtures) store->load_into(f);
    sh.store = store;
    if (!cfg.cases_path.empty()) {
      sh.cases = load_cases(cfg.cases_path, cfg.target.make_dialect());
    } else if (!cfg.registry_path.empty()) {
      auto reg = ClauseRegistry::load(cfg.registry_path);
      auto sink = std::make_shared<FixtureStore>();
      ExecutorPair probe_ex = make_executors(cfg, -1, sh.store, sink);
      probe_all(reg, *probe_ex.target, *probe_ex.reference);
      sh.pool = build_pool(reg, sh.rules);
      summary.warnings = sh.pool.warnings;
    } else {
      sh.pool = ClausePool::everything(generator_clauses());
    }
  } catch (const std::exception& e) {
    summary.aborted = true;
    summary.error = e.what();
    return summary;
  }
  if (cfg.duration) sh.deadline = std::chrono::steady_clock::now() + *cfg.duration;

  const std::size_t total = cfg.queries.value_or(0);
  const auto n = static_cast<std::size_t>(cfg.workers);
  std::vector<WorkerResult> results(n);
  {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t budget = total / n + (i < total % n ? 1 : 0);
      threads.emplace_back([&, i, budget] {
        try {
          results[i] = Worker(sh, static_cast<int>(i), budget).run();
        } catch (const std::exception& e) {
          results[i].counts.aborted = true;
          results[i].counts.error = e.what();
        }
      });
    }
    for (auto& t : threads) t.join();
  }

  // Single collector: counts, plan set, dedupe and report writes in worker order.
  std::set<std::string> plans;
  ReportIndex index;
  std::set<std::string> review_written;
  FixtureStore recorded;
  for (const auto& r : results) {
    merge_counts(summary, r.counts);
    plans.insert(r.plans.begin(), r.plans.end());
    for (const auto& [key, entry] : r.recorded->entries()) recorded.put(key.endpoint, key.digest, entry);
    for (const auto& rep : r.reports) {
      if (rep.kind == "review") {
        if (review_written.insert(rep.id).second) write_report(cfg.out_dir, rep, cfg);
        continue;
      }
      if (index.check_and_add(rep)) {
        ++summary.dedup_suppressed;
        continue;
      }
      write_report(cfg.out_dir, rep, cfg);
      summary.reports.push_back(rep.id);
    }
  }
  summary.unique_plans = plans.size();
  std::sort(summary.reports.begin(), summary.reports.end());
  if (cfg.mode == Mode::Record) {
    recorded.save(cfg.record_path.empty() ? (fs::path(cfg.out_dir) / "fixtures.jsonl").string() : cfg.record_path);
  }
  std::ofstream(fs::path(cfg.out_dir) / "summary.json") << summary.to_json().dump(2) << "\n";
  return summary;
}

}  // namespace sqlxd
