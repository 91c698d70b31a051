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
// sqlxdiff command line.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sqlxd/campaign.hpp"
#include "sqlxd/clause_registry.hpp"
#include "sqlxd/errors.hpp"
#include "sqlxd/parse.hpp"
#include "sqlxd/render.hpp"
#include "sqlxd/workload_gen.hpp"

namespace fs = std::filesystem;
using namespace sqlxd;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> queries;
  std::optional<long> duration;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  std::optional<int> workers;

  void attach(CLI::App* app, bool config_required = true) {
    auto* c = app->add_option("--config", config, "campaign config (JSON)");
    if (config_required) c->required();
    app->add_option("--seed", seed, "generator seed");
    app->add_option("--queries", queries, "query budget");
    app->add_option("--duration", duration, "time budget in seconds");
    app->add_option("--out", out, "output directory");
    app->add_option("--mode", mode, "live, replay or record");
    app->add_option("--workers", workers, "parallel workers");
  }

  CampaignConfig load() const {
    CampaignConfig cfg = CampaignConfig::load(config);
    if (seed) cfg.seed = *seed;
    if (queries) {
      cfg.queries = *queries;
      cfg.duration.reset();
    }
    if (duration) {
      cfg.duration = std::chrono::seconds(*duration);
      cfg.queries.reset();
    }
    if (out) cfg.out_dir = *out;
    if (mode) cfg.mode = mode_from_string(*mode);
    if (workers) cfg.workers = *workers;
    return cfg;
  }
};

std::shared_ptr<const FixtureStore> fixtures_of(const CampaignConfig& cfg) {
  auto s = std::make_shared<FixtureStore>();
  for (const auto& f : cfg.fixtures) s->load_into(f);
  return s;
}

int cmd_run(const Overrides& o) {
  CampaignConfig cfg = o.load();
  CampaignSummary s = run_campaign(cfg);
  std::cout << s.to_json().dump(2) << "\n";
  if (s.aborted) std::cerr << "aborted: " << s.error << "\n";
  return s.exit_code();
}

int cmd_probe(const Overrides& o, const std::string& registry) {
  CampaignConfig cfg = o.load();
  auto reg = ClauseRegistry::load(registry.empty() ? cfg.registry_path : registry);
  auto sink = std::make_shared<FixtureStore>();
  ExecutorPair ex = make_executors(cfg, 0, fixtures_of(cfg), sink);
  probe_all(reg, *ex.target, *ex.reference);
  ClausePool pool = build_pool(reg, cfg.rules());
  for (const auto& d : reg.descriptors()) {
    std::cout << d.id() << "\t" << to_string(d.category()) << "\t" << to_string(d.status()) << "\n";
  }
  for (const auto& w : pool.warnings) std::cerr << "warning: " << w << "\n";
  if (cfg.mode == Mode::Record && !cfg.record_path.empty()) sink->save(cfg.record_path);
  return 0;
}

int cmd_map(const std::string& sql_or_file, const std::string& dialect, const std::vector<std::string>& disabled) {
  const std::string text = fs::exists(sql_or_file) ? slurp(sql_or_file) : sql_or_file;
  const TestCase c = parse_case(text, Dialect::by_name(dialect));
  std::set<std::string> off(disabled.begin(), disabled.end());
  std::cout << render_mapped_case(c, RuleSet::standard().without(off));
  return 0;
}

int cmd_reduce(const Overrides& o, const std::string& case_file) {
  CampaignConfig cfg = o.load();
  const Dialect td = cfg.target.make_dialect();
  const TestCase c = parse_case(slurp(case_file), td);
  const RuleSet rules = cfg.rules();
  const ErrorClassifier cls = cfg.classifier();
  auto sink = std::make_shared<FixtureStore>();
  ExecutorPair ex = make_executors(cfg, 0, fixtures_of(cfg), sink);
  const Verdict v = run_case(ex, c, std::nullopt, rules, cls).verdict;
  std::cerr << "verdict: " << to_string(v.kind) << " " << v.detail << "\n";
  if (v.kind == VerdictKind::Equal) return 0;
  ReduceOptions opts;
  opts.dialect = td;
  opts.rules = &rules;
  opts.budget = cfg.reduce_budget;
  ReducedCase r = reduce_case(
      c,
      [&](const TestCase& cand) {
        try {
          return same_finding(run_case(ex, cand, std::nullopt, rules, cls).verdict, v);
        } catch (const Error&) {
          return false;
        }
      },
      opts);
  std::cout << render_case(r.reduced, td);
  std::cerr << "minimal: " << (r.minimal ? "yes" : "no") << ", flaky: " << (r.flaky ? "yes" : "no")
            << ", invocations: " << r.invocations << "\n";
  return 1;
}

// Re-triggers a written report against the configured executors.
int cmd_replay(const Overrides& o, const std::string& report_dir) {
  CampaignConfig cfg = o.load();
  if (report_dir.empty()) return cmd_run(o);
  const auto meta = nlohmann::json::parse(slurp((fs::path(report_dir) / "meta.json").string()));
  const Dialect td = cfg.target.make_dialect();
  const TestCase c = parse_case(slurp((fs::path(report_dir) / "repro.sql").string()), td);
  std::optional<std::vector<Statement>> ref_setup;
  {
    auto mapped = parse_script(slurp((fs::path(report_dir) / "repro.mapped.sql").string()), Dialect::postgresql());
    if (!mapped.empty()) {
      mapped.pop_back();
      ref_setup = std::move(mapped);
    }
  }
  auto sink = std::make_shared<FixtureStore>();
  ExecutorPair ex = make_executors(cfg, 0, fixtures_of(cfg), sink);
  const CaseRun run = run_case(ex, c, ref_setup, cfg.rules(), cfg.classifier());
  const std::string expected = meta.at("verdict").at("kind").get<std::string>();
  std::cout << "verdict: " << to_string(run.verdict.kind) << " (report says " << expected << ")\n";
  return expected == to_string(run.verdict.kind) ? 1 : 0;
}

int cmd_gen(const Overrides& o, std::size_t count, const std::string& dialect, const std::string& out) {
  GenConfig gc;
  std::string d = dialect;
  if (!o.config.empty()) {
    CampaignConfig cfg = o.load();
    gc = cfg.gen;
    gc.seed = cfg.seed;
    if (d.empty()) d = cfg.target.dialect;
  }
  if (o.seed) gc.seed = *o.seed;
  if (d.empty()) d = "questdb";
  gc.validate();
  Generator g(gc, Dialect::by_name(d));
  const ClausePool pool = ClausePool::everything(generator_clauses());
  const SchemaSpec schema = g.gen_schema(&pool);
  std::vector<Statement> stmts;
  for (const auto& t : schema.tables) stmts.emplace_back(t.ddl());
  for (auto& s : g.gen_data(schema)) stmts.push_back(std::move(s));
  for (std::size_t i = 0; i < count; ++i) stmts.push_back(g.gen_query(schema, pool));
  if (out.empty()) {
    for (const auto& s : stmts) std::cout << render(s, g.dialect()) << ";\n";
  } else {
    dump_corpus(out, stmts, g.dialect(), gc);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqlxdiff: differential testing across SQL dialects"};
  app.require_subcommand(1);

  Overrides run_o, probe_o, reduce_o, replay_o, gen_o;
  auto* run = app.add_subcommand("run", "run a campaign");
  run_o.attach(run);

  std::string registry;
  auto* probe = app.add_subcommand("probe", "probe the clause registry on both endpoints");
  probe_o.attach(probe);
  probe->add_option("--registry", registry, "registry JSONL (defaults to the config's)");

  std::string map_input, map_dialect = "questdb";
  std::vector<std::string> map_disabled;
  auto* map = app.add_subcommand("map", "print the reference-side script for a target script");
  map->add_option("input", map_input, "SQL text or file")->required();
  map->add_option("--dialect", map_dialect, "target dialect");
  map->add_option("--disable", map_disabled, "rule ids to disable");

  std::string case_file;
  auto* reduce = app.add_subcommand("reduce", "minimize a failing script");
  reduce_o.attach(reduce);
  reduce->add_option("case", case_file, "script file (setup; query)")->required();

  std::string report_dir;
  auto* replay = app.add_subcommand("replay", "run offline from fixtures, or re-trigger a report");
  replay_o.attach(replay);
  replay->add_option("--report", report_dir, "report directory to re-trigger");

  std::size_t gen_count = 20;
  std::string gen_dialect, gen_out;
  auto* gen = app.add_subcommand("gen", "emit a generated workload");
  gen_o.attach(gen, false);
  gen->add_option("--count", gen_count, "number of queries");
  gen->add_option("--dialect", gen_dialect, "target dialect");
  gen->add_option("--corpus", gen_out, "write a corpus file plus manifest");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_o);
    if (*probe) return cmd_probe(probe_o, registry);
    if (*map) return cmd_map(map_input, map_dialect, map_disabled);
    if (*reduce) return cmd_reduce(reduce_o, case_file);
    if (*replay) {
      if (!replay_o.mode) replay_o.mode = "replay";
      return cmd_replay(replay_o, report_dir);
    }
    if (*gen) return cmd_gen(gen_o, gen_count, gen_dialect, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
