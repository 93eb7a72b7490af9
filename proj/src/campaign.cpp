#include "cypherforge/campaign.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cypherforge/dedup.hpp"
#include "cypherforge/generator.hpp"
#include "cypherforge/render.hpp"
#include "cypherforge/state.hpp"
#include "cypherforge/validator.hpp"

namespace cypherforge {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

json outcome_to_json(const Outcome& o) {
  json j;
  switch (o.kind) {
    case Outcome::Kind::Rows:
      j["kind"] = "rows";
      j["rows"] = o.rows;
      break;
    case Outcome::Kind::Error:
      j["kind"] = "error";
      j["message"] = o.message;
      j["code"] = o.code;
      break;
    case Outcome::Kind::ConnectionLost:
      j["kind"] = "connection-lost";
      break;
    case Outcome::Kind::Timeout:
      j["kind"] = "timeout";
      break;
  }
  return j;
}

Outcome outcome_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "rows")
    return Outcome::rows_returned(j.value("rows", std::uint64_t{0}));
  if (kind == "error")
    return Outcome::error(j.value("message", std::string()),
                          j.value("code", std::string()));
  if (kind == "connection-lost") return Outcome::connection_lost();
  if (kind == "timeout") return Outcome::timeout();
  throw std::runtime_error("unknown outcome kind: " + kind);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_trailing_newline(std::string s) {
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

}  // namespace

// ─── records ─────────────────────────────────────────────────────────────────

std::string CorpusRecord::to_json() const {
  json j;
  j["seed"] = seed;
  j["index"] = index;
  j["query_text"] = query_text;
  j["clause_count"] = clause_count;
  j["dep_count"] = dep_count;
  j["byte_len"] = byte_len;
  j["classification"] = cypherforge::to_string(classification);
  j["latency_ms"] = latency_ms;
  return j.dump();
}

CorpusRecord CorpusRecord::parse(const std::string& line) {
  json j = json::parse(line);
  CorpusRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.index = j.at("index").get<std::uint64_t>();
  r.query_text = j.at("query_text").get<std::string>();
  r.clause_count = j.at("clause_count").get<std::size_t>();
  r.dep_count = j.at("dep_count").get<std::size_t>();
  r.byte_len = j.at("byte_len").get<std::size_t>();
  r.classification =
      classification_from_string(j.at("classification").get<std::string>());
  r.latency_ms = j.at("latency_ms").get<double>();
  return r;
}

double CampaignStats::validity_rate() const {
  return generated ? double(valid) / double(generated) : 0.0;
}
double CampaignStats::mean_clauses() const {
  return generated ? double(clause_sum) / double(generated) : 0.0;
}
double CampaignStats::mean_dependencies() const {
  return generated ? double(dep_sum) / double(generated) : 0.0;
}
double CampaignStats::mean_bytes() const {
  return generated ? double(byte_sum) / double(generated) : 0.0;
}
double CampaignStats::throughput() const {
  return wall_seconds > 0 ? double(generated) / wall_seconds : 0.0;
}

std::string CampaignStats::to_json() const {
  json j;
  j["generated"] = generated;
  j["valid"] = valid;
  j["validity_rate"] = validity_rate();
  j["mean_clauses"] = mean_clauses();
  j["mean_dependencies"] = mean_dependencies();
  j["mean_bytes"] = mean_bytes();
  j["by_classification"] = by_classification;
  j["discrepancies"] = discrepancies;
  j["wall_seconds"] = wall_seconds;
  j["throughput"] = throughput();
  return j.dump(2);
}

// ─── campaign loop ───────────────────────────────────────────────────────────

namespace {

struct Shared {
  const CampaignConfig& cfg;
  TargetRules rules;
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  Clock::time_point deadline{};
  bool timed = false;

  std::mutex mu;
  CampaignStats stats;
  std::vector<BugReport> bugs;
  std::ofstream corpus;
  bool aborted = false;
  std::exception_ptr first_error;
};

bool recover(EngineAdapter& engine) {
  for (int attempt = 0; attempt < 3; ++attempt) {
    if (engine.reset()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  return false;
}

void worker_loop(Shared& sh, EngineAdapter& engine) {
  const CampaignConfig& cfg = sh.cfg;
  std::uint64_t since_reset = 0;
  while (!sh.stop.load(std::memory_order_relaxed)) {
    if (sh.timed && Clock::now() >= sh.deadline) break;
    std::uint64_t i = sh.next.fetch_add(1);
    if (cfg.query_budget && i >= cfg.query_budget) break;

    Query q = gen_query_at(cfg.gen, cfg.gen.seed, i);
    std::string text = render(q);
    ValidationReport vr = validate(q);

    CorpusRecord rec;
    rec.seed = cfg.gen.seed;
    rec.index = i;
    rec.query_text = text;
    rec.clause_count = clause_count(q);
    rec.dep_count = count_dependencies(q).total();
    rec.byte_len = text.size();

    auto t0 = Clock::now();
    Outcome out = engine.submit(text, cfg.timeout_ms, result_columns(q));
    rec.latency_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    Classification cls = classify(out, vr.clean(), sh.rules);
    rec.classification = cls;

    bool bug_found = is_bug(cls);
    BugReport bug;
    if (bug_found) {
      bug.target = cfg.target;
      bug.version = cfg.version;
      bug.original = text;
      bug.classification = cls;
      if (out.kind == Outcome::Kind::Error)
        bug.fingerprint = normalize_error_message(out.message);
      bug.outcome = out;
      bug.seed = cfg.gen.seed;
      bug.index = i;
    }

    {
      std::lock_guard<std::mutex> lk(sh.mu);
      CampaignStats& st = sh.stats;
      ++st.generated;
      if (cls == Classification::Valid) ++st.valid;
      ++st.by_classification[cypherforge::to_string(cls)];
      st.clause_sum += rec.clause_count;
      st.dep_sum += rec.dep_count;
      st.byte_sum += rec.byte_len;
      if (cls == Classification::SyntaxError && vr.clean())
        ++st.discrepancies;
      if (sh.corpus.is_open()) {
        sh.corpus << rec.to_json() << "\n";
        sh.corpus.flush();
      }
      if (bug_found) {
        char id[16];
        std::snprintf(id, sizeof id, "bug-%06zu", sh.bugs.size());
        bug.id = id;
        sh.bugs.push_back(bug);
        if (!cfg.out_dir.empty())
          write_bug_report(cfg.out_dir + "/bugs/" + bug.id, bug, cfg.gen);
      }
    }

    ++since_reset;
    if (bug_found || (cfg.reset_every && since_reset >= cfg.reset_every)) {
      since_reset = 0;
      if (!recover(engine)) {
        std::lock_guard<std::mutex> lk(sh.mu);
        sh.aborted = true;
        sh.stop.store(true);
        break;
      }
    }
  }
}

// Lets the borrowed-adapter overload reuse the owning-factory plumbing.
class BorrowedEngine : public EngineAdapter {
 public:
  explicit BorrowedEngine(EngineAdapter& inner) : inner_(inner) {}
  std::string name() const override { return inner_.name(); }
  Outcome submit(const std::string& query, unsigned timeout_ms,
                 std::size_t result_columns) override {
    return inner_.submit(query, timeout_ms, result_columns);
  }
  bool reset() override { return inner_.reset(); }
  bool alive() override { return inner_.alive(); }

 private:
  EngineAdapter& inner_;
};

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg,
                            const AdapterFactory& factory) {
  cfg.gen.check();
  Shared sh{cfg, rules_for(cfg.target, cfg.pattern_dir)};
  if (cfg.duration_seconds > 0) {
    sh.timed = true;
    sh.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(
                                         cfg.duration_seconds));
  }
  if (!cfg.out_dir.empty()) {
    fs::create_directories(cfg.out_dir);
    std::ofstream(cfg.out_dir + "/config.txt") << dump_config(cfg.gen);
    sh.corpus.open(cfg.out_dir + "/corpus.jsonl", std::ios::trunc);
    if (!sh.corpus)
      throw std::runtime_error("cannot write " + cfg.out_dir +
                               "/corpus.jsonl");
  }

  auto t0 = Clock::now();
  unsigned n = cfg.workers ? cfg.workers : 1;
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (unsigned w = 0; w < n; ++w) {
    threads.emplace_back([&sh, &factory] {
      try {
        std::unique_ptr<EngineAdapter> engine = factory();
        worker_loop(sh, *engine);
      } catch (...) {
        std::lock_guard<std::mutex> lk(sh.mu);
        if (!sh.first_error) sh.first_error = std::current_exception();
        sh.stop.store(true);
      }
    });
  }
  for (auto& t : threads) t.join();
  sh.stats.wall_seconds =
      std::chrono::duration<double>(Clock::now() - t0).count();

  if (sh.first_error) std::rethrow_exception(sh.first_error);

  CampaignResult result;
  result.stats = std::move(sh.stats);
  result.bugs = std::move(sh.bugs);
  result.aborted = sh.aborted;
  if (!cfg.out_dir.empty())
    std::ofstream(cfg.out_dir + "/stats.json") << result.stats.to_json()
                                               << "\n";
  return result;
}

CampaignResult run_campaign(const CampaignConfig& cfg,
                            EngineAdapter& adapter) {
  CampaignConfig one = cfg;
  one.workers = 1;
  return run_campaign(one, [&adapter]() -> std::unique_ptr<EngineAdapter> {
    return std::make_unique<BorrowedEngine>(adapter);
  });
}

// ─── persistence ─────────────────────────────────────────────────────────────

std::vector<CorpusRecord> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<CorpusRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(CorpusRecord::parse(line));
  }
  return records;
}

CampaignStats stats_from_corpus(const std::vector<CorpusRecord>& records) {
  CampaignStats st;
  for (const CorpusRecord& r : records) {
    ++st.generated;
    if (r.classification == Classification::Valid) ++st.valid;
    ++st.by_classification[cypherforge::to_string(r.classification)];
    st.clause_sum += r.clause_count;
    st.dep_sum += r.dep_count;
    st.byte_sum += r.byte_len;
  }
  return st;
}

void write_bug_report(const std::string& dir, const BugReport& bug,
                      const GenConfig& gen) {
  fs::create_directories(dir);
  std::ofstream(dir + "/original.cypher") << bug.original << "\n";
  if (!bug.reduced.empty())
    std::ofstream(dir + "/reduced.cypher") << bug.reduced << "\n";
  std::ofstream(dir + "/outcome.json") << outcome_to_json(bug.outcome).dump(2)
                                       << "\n";
  json meta;
  meta["id"] = bug.id;
  meta["target"] = bug.target;
  meta["version"] = bug.version;
  meta["seed"] = bug.seed;
  meta["index"] = bug.index;
  meta["fingerprint"] = bug.fingerprint;
  meta["classification"] = cypherforge::to_string(bug.classification);
  meta["config"] = dump_config(gen);
  std::ofstream(dir + "/meta.json") << meta.dump(2) << "\n";
}

StoredBug load_bug_report(const std::string& dir) {
  StoredBug stored;
  json meta = json::parse(slurp(dir + "/meta.json"));
  BugReport& bug = stored.bug;
  bug.id = meta.value("id", std::string());
  bug.target = meta.value("target", std::string());
  bug.version = meta.value("version", std::string());
  bug.seed = meta.at("seed").get<std::uint64_t>();
  bug.index = meta.at("index").get<std::uint64_t>();
  bug.fingerprint = meta.value("fingerprint", std::string());
  bug.classification =
      classification_from_string(meta.at("classification").get<std::string>());
  if (meta.contains("config"))
    apply_config_text(stored.gen, meta["config"].get<std::string>());
  bug.original = strip_trailing_newline(slurp(dir + "/original.cypher"));
  if (fs::exists(dir + "/reduced.cypher"))
    bug.reduced = strip_trailing_newline(slurp(dir + "/reduced.cypher"));
  if (fs::exists(dir + "/outcome.json"))
    bug.outcome = outcome_from_json(json::parse(slurp(dir + "/outcome.json")));
  return stored;
}

}  // namespace cypherforge
