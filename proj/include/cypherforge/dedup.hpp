#pragma once

// Bug deduplication: a cheap fingerprint pre-filter, then — when an ordered
// engine-version range is available — bisection to the version that
// introduced the bug. Prepared versions are cached so overlapping bisections
// never rebuild the same engine.

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "cypherforge/campaign.hpp"

namespace cypherforge {

// Masks run-specific detail so two reports of one bug collapse: hex
// addresses → ADDR, decimal literals → N, quoted identifiers → ID.
std::string normalize_error_message(const std::string& message);

struct Fingerprint {
  Classification classification = Classification::InternalError;
  std::string signature;  // normalized message; empty for crashes/timeouts
  std::string target;

  auto operator<=>(const Fingerprint&) const = default;
  std::string to_string() const;  // "<target>/<CLASSIFICATION>/<signature>"
};

Fingerprint fingerprint(const BugReport& report);

// Does `outcome` reproduce `bug`? Crashes and timeouts match on kind alone;
// errors must match the bug's normalized message. Also the reduction
// predicate, so a shrinking query must keep hitting the same failure.
bool outcome_matches(const BugReport& bug, const Outcome& outcome);

// ─── version bisection ───────────────────────────────────────────────────────

// Answers "does version v reproduce this bug?" over an ordered version
// range. Soundness needs monotone answers: false strictly before the
// bug-inducing version, true from it on.
class VersionOracle {
 public:
  virtual ~VersionOracle() = default;
  virtual std::size_t version_count() const = 0;
  virtual bool reproduce(std::size_t version, const BugReport& bug) = 0;
};

struct BisectOutcome {
  std::size_t version = 0;  // earliest version reproducing the bug
  bool flaky = false;       // verification disagreed with the search
  std::size_t probes = 0;   // distinct versions the search probed
  std::size_t verification_probes = 0;
  std::string error;  // non-empty: precondition violated or empty range

  bool ok() const { return error.empty() && !flaky; }
};

// Binary search for the first reproducing version. Probes ≤ ⌈log2 n⌉ + 1
// distinct versions; answers are memoized per run, and the result is
// re-verified with fresh probes at (version-1, version) to catch flaky
// predicates. An all-true range reports "bug present at range start", an
// all-false range "bug absent at range end".
BisectOutcome bisect(VersionOracle& oracle, const BugReport& bug);

// Equal fingerprints → duplicate. Distinct fingerprints → duplicate only
// when an oracle is given and both bugs bisect cleanly to the same version.
bool is_duplicate(const BugReport& a, const BugReport& b,
                  VersionOracle* oracle = nullptr);

// ─── oracle backends ─────────────────────────────────────────────────────────

// The expensive half of an oracle: prepare builds/boots one engine version,
// run executes the bug's query against it.
class VersionBackend {
 public:
  virtual ~VersionBackend() = default;
  virtual std::size_t version_count() const = 0;
  virtual void prepare(std::size_t version) = 0;
  virtual bool run(std::size_t version, const BugReport& bug) = 0;
};

// Shared get-or-prepare cache in front of a backend: each version is
// prepared at most once even under concurrent bisections; a reproduce() that
// finds its version already prepared counts as a cache hit.
class CachedVersionOracle : public VersionOracle {
 public:
  explicit CachedVersionOracle(VersionBackend& backend);

  std::size_t version_count() const override;
  bool reproduce(std::size_t version, const BugReport& bug) override;

  std::uint64_t preparations() const;
  std::uint64_t cache_hits() const;

 private:
  enum class Prep { None, InFlight, Ready };

  VersionBackend& backend_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<Prep> state_;
  std::uint64_t preparations_ = 0;
  std::uint64_t cache_hits_ = 0;
};

// Desk-scale stand-in: one fault table per version, run() replays the bug's
// query on a mock engine for that version.
class VersionedMockBackend : public VersionBackend {
 public:
  explicit VersionedMockBackend(
      std::vector<std::vector<MockFault>> faults_by_version);

  std::size_t version_count() const override { return faults_.size(); }
  void prepare(std::size_t version) override;
  bool run(std::size_t version, const BugReport& bug) override;

  std::uint64_t prepare_calls() const { return prepares_.load(); }

 private:
  std::vector<std::vector<MockFault>> faults_;
  std::atomic<std::uint64_t> prepares_{0};
};

// Real-engine hook: `<command> prepare <v>` builds version v (nonzero exit
// throws); `<command> run <v> <query-file>` exits 0 iff the bug reproduced.
class ExternalCommandBackend : public VersionBackend {
 public:
  ExternalCommandBackend(std::string command, std::size_t versions);

  std::size_t version_count() const override { return versions_; }
  void prepare(std::size_t version) override;
  bool run(std::size_t version, const BugReport& bug) override;

 private:
  std::string command_;
  std::size_t versions_;
};

}  // namespace cypherforge
