#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cypherforge/campaign.hpp"
#include "cypherforge/dedup.hpp"
#include "cypherforge/generator.hpp"
#include "cypherforge/render.hpp"

using namespace cypherforge;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  auto dir = fs::temp_directory_path() /
             ("cf-campaign-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

CampaignConfig base_config(std::uint64_t budget) {
  CampaignConfig cfg;
  cfg.gen.seed = 42;
  cfg.query_budget = budget;
  cfg.timeout_ms = 1000;
  return cfg;
}

// An engine that never comes back after a crash.
class DeadEndEngine : public MockEngine {
 public:
  using MockEngine::MockEngine;
  bool reset() override { return false; }
};

}  // namespace

TEST_CASE("a fault-free campaign yields an all-valid corpus") {
  MockEngine engine;
  CampaignConfig cfg = base_config(100);
  CampaignResult res = run_campaign(cfg, engine);

  CHECK(res.stats.generated == 100);
  CHECK(res.stats.valid == 100);
  CHECK(res.stats.validity_rate() == 1.0);
  CHECK(res.stats.by_classification ==
        std::map<std::string, std::uint64_t>{{"VALID", 100}});
  CHECK(res.stats.discrepancies == 0);
  CHECK(res.stats.wall_seconds > 0);
  CHECK(res.stats.throughput() > 0);
  CHECK(res.stats.mean_clauses() > 1.0);
  CHECK(res.stats.mean_bytes() > 0);
  CHECK(res.bugs.empty());
  CHECK_FALSE(res.aborted);
  CHECK(engine.submissions() == 100);
}

TEST_CASE("corpus, config, and stats files round-trip") {
  auto dir = temp_dir("files");
  CampaignConfig cfg = base_config(60);
  cfg.gen.max_clauses = 12;
  cfg.out_dir = dir.string();
  MockEngine engine;
  CampaignResult res = run_campaign(cfg, engine);
  REQUIRE(res.stats.generated == 60);

  std::vector<CorpusRecord> records =
      load_corpus((dir / "corpus.jsonl").string());
  REQUIRE(records.size() == 60);
  std::vector<bool> seen(60, false);
  for (const CorpusRecord& r : records) {
    CHECK(r.seed == 42);
    REQUIRE(r.index < 60);
    CHECK_FALSE(seen[r.index]);
    seen[r.index] = true;
    CHECK(r.byte_len == r.query_text.size());
    CHECK(r.classification == Classification::Valid);
    // Line-level round trip.
    CorpusRecord again = CorpusRecord::parse(r.to_json());
    CHECK(again.query_text == r.query_text);
    CHECK(again.clause_count == r.clause_count);
    CHECK(again.dep_count == r.dep_count);
    CHECK(again.latency_ms == r.latency_ms);
  }

  // Every record replays from (config, seed, index) alone.
  GenConfig replay_cfg;
  apply_config_text(replay_cfg, [&] {
    std::ifstream in(dir / "config.txt");
    return std::string(std::istreambuf_iterator<char>(in), {});
  }());
  CHECK(dump_config(replay_cfg) == dump_config(cfg.gen));
  for (std::size_t i = 0; i < 5; ++i) {
    Query q = gen_query_at(replay_cfg, records[i].seed, records[i].index);
    CHECK(render(q) == records[i].query_text);
  }

  // Derived statistics agree with the live campaign counters.
  CampaignStats derived = stats_from_corpus(records);
  CHECK(derived.generated == res.stats.generated);
  CHECK(derived.valid == res.stats.valid);
  CHECK(derived.clause_sum == res.stats.clause_sum);
  CHECK(derived.dep_sum == res.stats.dep_sum);
  CHECK(derived.byte_sum == res.stats.byte_sum);
  CHECK(derived.by_classification == res.stats.by_classification);
  CHECK(derived.wall_seconds == 0);

  auto stats_json = nlohmann::json::parse([&] {
    std::ifstream in(dir / "stats.json");
    return std::string(std::istreambuf_iterator<char>(in), {});
  }());
  CHECK(stats_json.at("generated").get<std::uint64_t>() == 60);
  CHECK(stats_json.at("valid").get<std::uint64_t>() == 60);
  fs::remove_all(dir);
}

TEST_CASE("the worker count does not change the corpus") {
  auto dir1 = temp_dir("one");
  auto dir4 = temp_dir("four");
  CampaignConfig cfg = base_config(80);
  cfg.out_dir = dir1.string();
  MockEngine engine;
  CampaignResult single = run_campaign(cfg, engine);

  cfg.out_dir = dir4.string();
  cfg.workers = 4;
  CampaignResult multi = run_campaign(
      cfg, [] { return std::make_unique<MockEngine>(); });

  CHECK(single.stats.generated == 80);
  CHECK(multi.stats.generated == 80);
  CHECK(multi.stats.clause_sum == single.stats.clause_sum);
  CHECK(multi.stats.byte_sum == single.stats.byte_sum);

  auto texts = [](const fs::path& dir) {
    std::vector<CorpusRecord> records =
        load_corpus((dir / "corpus.jsonl").string());
    std::sort(records.begin(), records.end(),
              [](const CorpusRecord& a, const CorpusRecord& b) {
                return a.index < b.index;
              });
    std::vector<std::string> out;
    for (const auto& r : records) out.push_back(r.query_text);
    return out;
  };
  CHECK(texts(dir1) == texts(dir4));
  fs::remove_all(dir1);
  fs::remove_all(dir4);
}

TEST_CASE("internal errors become sequential bug reports") {
  auto dir = temp_dir("bugs");
  CampaignConfig cfg = base_config(150);
  cfg.out_dir = dir.string();
  MockEngine engine({parse_mock_fault("FOREACH (:internal:mock blew up")});
  CampaignResult res = run_campaign(cfg, engine);

  std::vector<CorpusRecord> records =
      load_corpus((dir / "corpus.jsonl").string());
  std::uint64_t triggered = 0;
  for (const auto& r : records)
    if (r.query_text.find("FOREACH (") != std::string::npos) ++triggered;
  REQUIRE(triggered > 0);
  CHECK(res.bugs.size() == triggered);
  CHECK(res.stats.by_classification.at("INTERNAL_ERROR") == triggered);
  CHECK_FALSE(res.aborted);

  for (std::size_t i = 0; i < res.bugs.size(); ++i) {
    const BugReport& bug = res.bugs[i];
    char expect[16];
    std::snprintf(expect, sizeof expect, "bug-%06zu", i);
    CHECK(bug.id == expect);
    CHECK(bug.classification == Classification::InternalError);
    CHECK(bug.fingerprint == normalize_error_message("mock blew up"));
    CHECK(bug.original.find("FOREACH (") != std::string::npos);

    auto bug_dir = dir / "bugs" / bug.id;
    REQUIRE(fs::exists(bug_dir / "original.cypher"));
    REQUIRE(fs::exists(bug_dir / "meta.json"));
    REQUIRE(fs::exists(bug_dir / "outcome.json"));
    CHECK_FALSE(fs::exists(bug_dir / "reduced.cypher"));

    StoredBug stored = load_bug_report(bug_dir.string());
    CHECK(stored.bug.original == bug.original);
    CHECK(stored.bug.outcome == bug.outcome);
    // The stored config replays the exact query.
    Query q = gen_query_at(stored.gen, stored.bug.seed, stored.bug.index);
    CHECK(render(q) == bug.original);
  }
  fs::remove_all(dir);
}

TEST_CASE("crashes recover through resets and the campaign continues") {
  CampaignConfig cfg = base_config(150);
  MockEngine engine({parse_mock_fault("FOREACH (:crash")});
  CampaignResult res = run_campaign(cfg, engine);

  CHECK(res.stats.generated == 150);
  REQUIRE_FALSE(res.bugs.empty());
  for (const BugReport& bug : res.bugs) {
    CHECK(bug.classification == Classification::Crash);
    CHECK(bug.fingerprint.empty());
    CHECK(bug.outcome == Outcome::connection_lost());
  }
  CHECK(engine.resets() >= res.bugs.size());
  CHECK_FALSE(res.aborted);
  CHECK(res.stats.by_classification.at("CRASH") == res.bugs.size());
}

TEST_CASE("a dead engine aborts the campaign") {
  MockFault always;
  always.kind = MockFault::Kind::Crash;
  always.predicate = [](const std::string&) { return true; };
  DeadEndEngine engine({always});
  CampaignConfig cfg = base_config(50);
  CampaignResult res = run_campaign(cfg, engine);

  CHECK(res.aborted);
  CHECK(res.stats.generated == 1);
  CHECK(res.bugs.size() == 1);
}

TEST_CASE("periodic resets follow the configured cadence") {
  MockEngine engine;
  CampaignConfig cfg = base_config(10);
  cfg.reset_every = 3;
  run_campaign(cfg, engine);
  CHECK(engine.resets() == 3);  // after queries 3, 6, and 9

  MockEngine never;
  cfg.reset_every = 0;
  run_campaign(cfg, never);
  CHECK(never.resets() == 0);
}

TEST_CASE("timeouts and syntax rejections are recorded but are not bugs") {
  CampaignConfig cfg = base_config(30);
  MockEngine slow({parse_mock_fault("RETURN:timeout")});
  CampaignResult timed_out = run_campaign(cfg, slow);
  CHECK(timed_out.bugs.empty());
  CHECK(timed_out.stats.by_classification.at("TIMEOUT") > 0);
  CHECK(timed_out.stats.discrepancies == 0);

  MockEngine picky({parse_mock_fault("RETURN:syntax:unexpected token")});
  CampaignResult rejected = run_campaign(cfg, picky);
  CHECK(rejected.bugs.empty());
  // Every generated query is validator-clean, so each rejection is a
  // discrepancy worth triaging.
  CHECK(rejected.stats.discrepancies ==
        rejected.stats.by_classification.at("SYNTAX_ERROR"));
  CHECK(rejected.stats.discrepancies > 0);
}

TEST_CASE("a timed campaign stops at the deadline") {
  MockEngine engine;
  CampaignConfig cfg = base_config(0);
  cfg.duration_seconds = 0.2;
  CampaignResult res = run_campaign(cfg, engine);
  CHECK(res.stats.generated > 0);
  CHECK(res.stats.wall_seconds >= 0.2);
  CHECK_FALSE(res.aborted);
}

TEST_CASE("bug reports round-trip through their directory layout") {
  auto dir = temp_dir("bugdir");
  BugReport bug;
  bug.id = "bug-000007";
  bug.target = "mock";
  bug.version = "9.9";
  bug.original = "MERGE (x)\nDELETE x";
  bug.reduced = "DELETE x";
  bug.classification = Classification::InternalError;
  bug.fingerprint = "boom at N";
  bug.outcome = Outcome::error("boom at 17", "mock.internal");
  bug.seed = 42;
  bug.index = 1234;

  GenConfig gen;
  gen.seed = 42;
  gen.max_clauses = 17;
  gen.guard_division = true;
  write_bug_report(dir.string(), bug, gen);
  StoredBug stored = load_bug_report(dir.string());

  CHECK(stored.bug.id == bug.id);
  CHECK(stored.bug.target == bug.target);
  CHECK(stored.bug.version == bug.version);
  CHECK(stored.bug.original == bug.original);
  CHECK(stored.bug.reduced == bug.reduced);
  CHECK(stored.bug.classification == bug.classification);
  CHECK(stored.bug.fingerprint == bug.fingerprint);
  CHECK(stored.bug.outcome == bug.outcome);
  CHECK(stored.bug.seed == bug.seed);
  CHECK(stored.bug.index == bug.index);
  CHECK(dump_config(stored.gen) == dump_config(gen));
  fs::remove_all(dir);
}

TEST_CASE("corpus records tolerate multi-line query text") {
  CorpusRecord r;
  r.seed = 7;
  r.index = 9;
  r.query_text = "MATCH ()\nRETURN 'a\\nb'";
  r.clause_count = 2;
  r.dep_count = 3;
  r.byte_len = r.query_text.size();
  r.classification = Classification::SemanticError;
  r.latency_ms = 1.25;

  CorpusRecord back = CorpusRecord::parse(r.to_json());
  CHECK(back.seed == 7);
  CHECK(back.index == 9);
  CHECK(back.query_text == r.query_text);
  CHECK(back.clause_count == 2);
  CHECK(back.dep_count == 3);
  CHECK(back.byte_len == r.byte_len);
  CHECK(back.classification == Classification::SemanticError);
  CHECK(back.latency_ms == 1.25);
}
