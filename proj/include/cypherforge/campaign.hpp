#pragma once

// Campaign loop: generate → render → execute → classify → record. Workers
// pull query indices from a shared counter, so a corpus is the same set of
// (seed, index) queries no matter how many workers produced it.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cypherforge/classify.hpp"
#include "cypherforge/config.hpp"
#include "cypherforge/engine.hpp"

namespace cypherforge {

struct CampaignConfig {
  GenConfig gen;
  std::string target = "mock";
  std::string url;
  std::string out_dir;             // empty: keep everything in memory
  std::uint64_t query_budget = 0;  // 0: no count limit
  double duration_seconds = 0;     // 0: no time limit
  unsigned timeout_ms = 10000;
  unsigned reset_every = 50;  // reset the database every N queries; 0: never
  unsigned workers = 1;
  std::string pattern_dir;  // internal-error pattern files; empty: built-ins
  std::string version;      // engine version tag recorded in bug reports
};

// One line of corpus.jsonl.
struct CorpusRecord {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::string query_text;
  std::size_t clause_count = 0;
  std::size_t dep_count = 0;
  std::size_t byte_len = 0;
  Classification classification = Classification::Valid;
  double latency_ms = 0;

  std::string to_json() const;
  static CorpusRecord parse(const std::string& line);
};

struct BugReport {
  std::string id;  // bug-NNNNNN
  std::string target;
  std::string version;
  std::string original;
  std::string reduced;  // empty until the reducer has run
  Classification classification = Classification::InternalError;
  std::string fingerprint;  // normalized error signature; empty for crashes
  Outcome outcome;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

struct CampaignStats {
  std::uint64_t generated = 0;
  std::uint64_t valid = 0;
  std::map<std::string, std::uint64_t> by_classification;
  std::uint64_t clause_sum = 0;
  std::uint64_t dep_sum = 0;
  std::uint64_t byte_sum = 0;
  // Validator-clean queries the engine rejected as syntax errors: either a
  // generator gap or an engine parser quirk, so they are counted for triage.
  std::uint64_t discrepancies = 0;
  double wall_seconds = 0;

  double validity_rate() const;
  double mean_clauses() const;
  double mean_dependencies() const;
  double mean_bytes() const;
  double throughput() const;  // queries per second of wall time

  std::string to_json() const;
};

struct CampaignResult {
  CampaignStats stats;
  std::vector<BugReport> bugs;
  bool aborted = false;  // the engine stayed unreachable; partial results
};

using AdapterFactory = std::function<std::unique_ptr<EngineAdapter>()>;

// Each worker owns one adapter from `factory`. With out_dir set, writes
// corpus.jsonl (flushed per line), config.txt, stats.json, and
// bugs/bug-NNNNNN/ directories.
CampaignResult run_campaign(const CampaignConfig& cfg,
                            const AdapterFactory& factory);

// Single-worker convenience over a caller-owned adapter.
CampaignResult run_campaign(const CampaignConfig& cfg, EngineAdapter& adapter);

// ─── persistence ─────────────────────────────────────────────────────────────

std::vector<CorpusRecord> load_corpus(const std::string& path);

// Recomputes counts, sums, and discrepancy-free means from records alone;
// wall_seconds (and so throughput) stays zero.
CampaignStats stats_from_corpus(const std::vector<CorpusRecord>& records);

// Bug directory layout: original.cypher, reduced.cypher (once reduced),
// outcome.json, meta.json. meta.json carries the generator config dump so
// (seed, index) replays byte-identically.
void write_bug_report(const std::string& dir, const BugReport& bug,
                      const GenConfig& gen);

struct StoredBug {
  BugReport bug;
  GenConfig gen;
};

StoredBug load_bug_report(const std::string& dir);

}  // namespace cypherforge
