#include "cypherforge/dedup.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <stdexcept>

namespace cypherforge {

std::string normalize_error_message(const std::string& message) {
  static const std::regex hex("0x[0-9a-fA-F]+");
  static const std::regex dec("-?[0-9]+(\\.[0-9]+)?");
  static const std::regex quoted("\"[^\"]*\"|'[^']*'|`[^`]*`");
  std::string s = std::regex_replace(message, hex, "ADDR");
  s = std::regex_replace(s, dec, "N");
  s = std::regex_replace(s, quoted, "ID");
  return s;
}

std::string Fingerprint::to_string() const {
  return target + "/" + cypherforge::to_string(classification) + "/" +
         signature;
}

Fingerprint fingerprint(const BugReport& report) {
  Fingerprint fp;
  fp.classification = report.classification;
  fp.target = report.target;
  if (report.outcome.kind == Outcome::Kind::Error)
    fp.signature = report.fingerprint.empty()
                       ? normalize_error_message(report.outcome.message)
                       : report.fingerprint;
  return fp;
}

bool outcome_matches(const BugReport& bug, const Outcome& outcome) {
  if (bug.outcome.kind != outcome.kind) return false;
  if (bug.outcome.kind != Outcome::Kind::Error) return true;
  std::string want = bug.fingerprint.empty()
                         ? normalize_error_message(bug.outcome.message)
                         : bug.fingerprint;
  return normalize_error_message(outcome.message) == want;
}

// ─── bisection ───────────────────────────────────────────────────────────────

BisectOutcome bisect(VersionOracle& oracle, const BugReport& bug) {
  BisectOutcome out;
  std::size_t n = oracle.version_count();
  if (n == 0) {
    out.error = "empty version range";
    return out;
  }
  std::map<std::size_t, bool> memo;
  auto probe = [&](std::size_t v) {
    auto it = memo.find(v);
    if (it != memo.end()) return it->second;
    ++out.probes;
    bool r = oracle.reproduce(v, bug);
    memo.emplace(v, r);
    return r;
  };
  std::size_t lo = 0, hi = n;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (probe(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  if (lo == 0) {
    out.error = "bug present at range start";
    return out;
  }
  if (lo == n) {
    out.error = "bug absent at range end";
    return out;
  }
  out.version = lo;
  // Fresh probes: the search already saw false at lo-1 and true at lo, so
  // any disagreement here is predicate flakiness.
  bool before = oracle.reproduce(lo - 1, bug);
  bool at = oracle.reproduce(lo, bug);
  out.verification_probes = 2;
  out.flaky = before || !at;
  return out;
}

bool is_duplicate(const BugReport& a, const BugReport& b,
                  VersionOracle* oracle) {
  if (fingerprint(a) == fingerprint(b)) return true;
  if (!oracle) return false;
  BisectOutcome ba = bisect(*oracle, a);
  BisectOutcome bb = bisect(*oracle, b);
  if (!ba.ok() || !bb.ok()) return false;
  return ba.version == bb.version;
}

// ─── cached oracle ───────────────────────────────────────────────────────────

CachedVersionOracle::CachedVersionOracle(VersionBackend& backend)
    : backend_(backend), state_(backend.version_count(), Prep::None) {}

std::size_t CachedVersionOracle::version_count() const {
  return state_.size();
}

bool CachedVersionOracle::reproduce(std::size_t version,
                                    const BugReport& bug) {
  if (version >= state_.size())
    throw std::out_of_range("version out of range");
  {
    std::unique_lock<std::mutex> lk(mu_);
    for (;;) {
      if (state_[version] == Prep::Ready) {
        ++cache_hits_;
        break;
      }
      if (state_[version] == Prep::None) {
        state_[version] = Prep::InFlight;
        lk.unlock();
        try {
          backend_.prepare(version);
        } catch (...) {
          lk.lock();
          state_[version] = Prep::None;
          cv_.notify_all();
          throw;
        }
        lk.lock();
        state_[version] = Prep::Ready;
        ++preparations_;
        cv_.notify_all();
        break;
      }
      cv_.wait(lk);
    }
  }
  return backend_.run(version, bug);
}

std::uint64_t CachedVersionOracle::preparations() const {
  std::lock_guard<std::mutex> lk(mu_);
  return preparations_;
}

std::uint64_t CachedVersionOracle::cache_hits() const {
  std::lock_guard<std::mutex> lk(mu_);
  return cache_hits_;
}

// ─── backends ────────────────────────────────────────────────────────────────

VersionedMockBackend::VersionedMockBackend(
    std::vector<std::vector<MockFault>> faults_by_version)
    : faults_(std::move(faults_by_version)) {}

void VersionedMockBackend::prepare(std::size_t version) {
  if (version >= faults_.size())
    throw std::out_of_range("version out of range");
  prepares_.fetch_add(1);
}

bool VersionedMockBackend::run(std::size_t version, const BugReport& bug) {
  MockEngine engine(faults_.at(version));
  const std::string& text = bug.reduced.empty() ? bug.original : bug.reduced;
  Outcome out = engine.submit(text, 10000, 1);
  return outcome_matches(bug, out);
}

ExternalCommandBackend::ExternalCommandBackend(std::string command,
                                               std::size_t versions)
    : command_(std::move(command)), versions_(versions) {}

void ExternalCommandBackend::prepare(std::size_t version) {
  std::string cmd = command_ + " prepare " + std::to_string(version);
  int rc = std::system(cmd.c_str());
  if (rc != 0)
    throw std::runtime_error("prepare exited " + std::to_string(rc) + ": " +
                             cmd);
}

bool ExternalCommandBackend::run(std::size_t version, const BugReport& bug) {
  static std::atomic<std::uint64_t> counter{0};
  auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  auto path = std::filesystem::temp_directory_path() /
              ("cypherforge-" + std::to_string(stamp) + "-" +
               std::to_string(counter.fetch_add(1)) + ".cypher");
  {
    std::ofstream out(path);
    out << (bug.reduced.empty() ? bug.original : bug.reduced) << "\n";
  }
  std::string cmd = command_ + " run " + std::to_string(version) + " " +
                    path.string();
  int rc = std::system(cmd.c_str());
  std::error_code ec;
  std::filesystem::remove(path, ec);
  return rc == 0;
}

}  // namespace cypherforge
