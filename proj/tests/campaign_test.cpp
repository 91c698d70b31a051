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
#include <gtest/gtest.h>

#include "sqlxd/campaign.hpp"
#include "sqlxd/errors.hpp"
#include "sqlxd/parse.hpp"
#include "fake_pg_server.hpp"
#include "support.hpp"

namespace sqlxd {
namespace {

namespace fs = std::filesystem;

CampaignConfig known_bugs(const std::string& out) {
  auto cfg = CampaignConfig::load(testing::data_path("configs/replay_known_bugs.json"));
  cfg.out_dir = out;
  return cfg;
}

TEST(Config, LoadResolvesRelativePaths) {
  const auto cfg = CampaignConfig::load(testing::data_path("configs/replay_known_bugs.json"));
  EXPECT_EQ(cfg.mode, Mode::Replay);
  EXPECT_EQ(cfg.queries, std::optional<std::size_t>(6));
  EXPECT_TRUE(fs::path(cfg.cases_path).is_absolute() || fs::exists(cfg.cases_path));
  EXPECT_TRUE(fs::exists(cfg.fixtures.at(0)));
  EXPECT_EQ(cfg.target.make_dialect().name(), "questdb");
}

TEST(Config, ExactlyOneBudget) {
  auto cfg = known_bugs(testing::scratch_dir("cfg-budget"));
  cfg.duration = std::chrono::seconds(5);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.queries.reset();
  cfg.duration.reset();
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Config, RejectsUnknownRuleAndMode) {
  auto cfg = known_bugs(testing::scratch_dir("cfg-rule"));
  cfg.disabled_rules = {"m99"};
  EXPECT_THROW(cfg.rules(), ConfigError);
  EXPECT_THROW(mode_from_string("offline"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  const auto cfg = CampaignConfig::load(testing::data_path("configs/replay_known_bugs.json"));
  const auto back = CampaignConfig::from_json(cfg.to_json(), "/");
  EXPECT_EQ(back.to_json(), cfg.to_json());
}

TEST(Campaign, ZeroBudgetIsEmpty) {
  auto cfg = known_bugs(testing::scratch_dir("zero"));
  cfg.queries = 0;
  const auto s = run_campaign(cfg);
  EXPECT_EQ(s, CampaignSummary{});
  EXPECT_EQ(s.exit_code(), 0);
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "summary.json"));
}

TEST(Campaign, KnownBugsReplay) {
  const auto out = testing::scratch_dir("known_bugs");
  const auto s = run_campaign(known_bugs(out));
  EXPECT_FALSE(s.aborted) << s.error;
  EXPECT_EQ(s.queries, 6u);
  EXPECT_EQ(s.logic, 3u);
  EXPECT_EQ(s.internal, 3u);
  EXPECT_EQ(s.reports.size(), 6u);
  EXPECT_EQ(s.exit_code(), 1);
  EXPECT_GE(s.unique_plans, 1u);
  for (const auto& id : s.reports) {
    const fs::path dir = fs::path(out) / id;
    EXPECT_TRUE(fs::exists(dir / "repro.sql"));
    EXPECT_TRUE(fs::exists(dir / "repro.mapped.sql"));
    const auto meta = nlohmann::json::parse(testing::slurp(dir / "meta.json"));
    EXPECT_FALSE(meta.contains("timestamps"));
    EXPECT_FALSE(meta.at("flaky").get<bool>());
    EXPECT_EQ(id, report_id(parse_case(testing::slurp(dir / "repro.sql"), Dialect::questdb())));
  }
}

TEST(Campaign, WorkerCountDoesNotChangeSummary) {
  auto one = known_bugs(testing::scratch_dir("w1"));
  auto three = known_bugs(testing::scratch_dir("w3"));
  three.workers = 3;
  EXPECT_EQ(run_campaign(one).to_json(), run_campaign(three).to_json());
}

TEST(Campaign, ReferenceSetupOverrideKeptInRepro) {
  const auto out = testing::scratch_dir("override");
  const auto s = run_campaign(known_bugs(out));
  bool found = false;
  for (const auto& id : s.reports) {
    const auto mapped = testing::slurp(fs::path(out) / id / "repro.mapped.sql");
    if (mapped.find("c0 FLOAT") != std::string::npos || mapped.find("c0 REAL") != std::string::npos ||
        mapped.find("c0 DOUBLE") != std::string::npos) {
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Campaign, MissingFixturesAbort) {
  auto cfg = known_bugs(testing::scratch_dir("nofix"));
  cfg.fixtures.clear();
  const auto s = run_campaign(cfg);
  EXPECT_TRUE(s.aborted);
  EXPECT_EQ(s.exit_code(), 2);
}

TEST(Campaign, GeneratedReplayWithoutFixturesAborts) {
  auto cfg = known_bugs(testing::scratch_dir("gen-nofix"));
  cfg.cases_path.clear();
  cfg.fixtures.clear();
  cfg.queries = 5;
  const auto s = run_campaign(cfg);
  EXPECT_TRUE(s.aborted);
  EXPECT_NE(s.error.find("no recorded outcome"), std::string::npos) << s.error;
}

TEST(Campaign, ProbedPoolWarningsSurface) {
  auto cfg = CampaignConfig::load(testing::data_path("configs/replay_probe.json"));
  cfg.out_dir = testing::scratch_dir("probe");
  const auto s = run_campaign(cfg);
  EXPECT_FALSE(s.aborted) << s.error;
  ASSERT_EQ(s.warnings.size(), 1u);
  EXPECT_NE(s.warnings[0].find("fill"), std::string::npos);
}

BugReport report(const std::string& id, const std::string& kind, const std::string& cls, const std::string& fp) {
  BugReport r;
  r.id = id;
  r.kind = kind;
  r.verdict.error_class = cls;
  r.fingerprint = fp;
  return r;
}

TEST(Dedupe, SameScriptSuppressed) {
  ReportIndex idx;
  EXPECT_FALSE(idx.check_and_add(report("a", "logic-bug", "", "")));
  EXPECT_EQ(idx.check_and_add(report("a", "logic-bug", "", "")), std::optional<std::string>("a"));
  EXPECT_FALSE(idx.check_and_add(report("b", "logic-bug", "", "")));
}

TEST(Dedupe, InternalErrorsByClassAndPlan) {
  ReportIndex idx;
  EXPECT_FALSE(idx.check_and_add(report("a", "internal-error", "core dumped", "f1")));
  EXPECT_EQ(idx.check_and_add(report("b", "internal-error", "core dumped", "f1")), std::optional<std::string>("a"));
  EXPECT_FALSE(idx.check_and_add(report("c", "internal-error", "core dumped", "f2")));
  EXPECT_FALSE(idx.check_and_add(report("d", "internal-error", "TIMEOUT", "f1")));
  // Without a plan there is nothing to group on.
  EXPECT_FALSE(idx.check_and_add(report("e", "internal-error", "core dumped", "")));
}

TEST(Finding, SameKindAndClass) {
  Verdict a{VerdictKind::InternalError, false, "core dumped", ""};
  Verdict b = a;
  b.detail = "other text";
  EXPECT_TRUE(same_finding(a, b));
  b.error_class = "TIMEOUT";
  EXPECT_FALSE(same_finding(a, b));
  Verdict l{VerdictKind::LogicDiscrepancy, false, "", "x"};
  Verdict m{VerdictKind::LogicDiscrepancy, true, "", "x"};
  EXPECT_FALSE(same_finding(l, m));
}

TEST(Cases, LoadKnownBugs) {
  const auto cases = load_cases(testing::data_path("cases/known_bugs.jsonl"), Dialect::questdb());
  ASSERT_EQ(cases.size(), 6u);
  EXPECT_TRUE(cases[3].reference_setup.has_value());
  EXPECT_EQ(cases[2].test.setup.size(), 0u);
}

TEST(RunCase, SetupFailureIsConfigError) {
  auto store = std::make_shared<FixtureStore>();
  store->put("t", sql_digest("CREATE TABLE x (a INT)"), {"", ExecOutcome::failure("disk full")});
  ExecutorPair ex{std::make_unique<ReplayExecutor>("t", Dialect::questdb(), store),
                  std::make_unique<ReplayExecutor>("r", Dialect::postgresql(), store)};
  const auto tc = parse_case("CREATE TABLE x (a INT); SELECT a FROM x;", Dialect::questdb());
  EXPECT_THROW(run_case(ex, tc, std::nullopt, RuleSet::standard(), ErrorClassifier{}), ConfigError);
}

CampaignConfig generated(int target_port, int reference_port, const std::string& out) {
  CampaignConfig cfg;
  cfg.run_id = "gen";
  cfg.seed = 3;
  cfg.queries = 40;
  cfg.workers = 2;
  cfg.refresh_every = 15;
  cfg.reduce_budget = 60;
  cfg.target = {"target", "questdb"};
  cfg.target.port = target_port;
  cfg.reference = {"reference", "postgresql"};
  cfg.reference.port = reference_port;
  cfg.gen.table_count = 2;
  cfg.gen.max_columns = 4;
  cfg.gen.min_rows = 5;
  cfg.gen.max_rows = 20;
  cfg.out_dir = out;
  return cfg;
}

// Live run against scripted endpoints, recorded, then replayed offline.
TEST(Campaign, RecordThenReplayGeneratedWorkload) {
  testing::FakeServer target(testing::Auth::Trust), reference(testing::Auth::Md5);
  target.otherwise([](const std::string& sql) {
    testing::Reply r;
    if (sql.find("count_distinct") != std::string::npos) r.error = "java.lang.NullPointerException";
    return r;
  });
  auto rec = generated(target.port(), reference.port(), testing::scratch_dir("gen-record"));
  rec.mode = Mode::Record;
  rec.reference.password_env = "SQLXD_TEST_PW";
  ::setenv("SQLXD_TEST_PW", "secret", 1);
  const auto live = run_campaign(rec);
  ASSERT_FALSE(live.aborted) << live.error;
  EXPECT_EQ(live.queries, 40u);
  EXPECT_GT(live.internal, 0u);
  EXPECT_EQ(live.internal + live.equal, live.queries);
  EXPECT_FALSE(live.reports.empty());
  const auto fixtures = (fs::path(rec.out_dir) / "fixtures.jsonl").string();
  ASSERT_TRUE(fs::exists(fixtures));

  auto rep = generated(0, 0, testing::scratch_dir("gen-replay"));
  rep.mode = Mode::Replay;
  rep.fixtures = {fixtures};
  const auto offline = run_campaign(rep);
  ASSERT_FALSE(offline.aborted) << offline.error;
  EXPECT_EQ(offline.to_json(), live.to_json());
  // Reduced reports keep the trigger and drop the rest.
  for (const auto& id : offline.reports) {
    const auto sql = testing::slurp(fs::path(rep.out_dir) / id / "repro.sql");
    EXPECT_NE(sql.find("count_distinct"), std::string::npos) << sql;
  }
}

}  // namespace
}  // namespace sqlxd
