// cypherforge — state-aware Cypher generation and fuzzing harness.
//
// Subcommands: fuzz, gen, validate, replay, reduce, dedup, stats.
// Exit codes: 0 clean, 1 bugs/violations found, 2 usage or config error,
// 3 target unreachable.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cypherforge/campaign.hpp"
#include "cypherforge/classify.hpp"
#include "cypherforge/config.hpp"
#include "cypherforge/dedup.hpp"
#include "cypherforge/engine.hpp"
#include "cypherforge/generator.hpp"
#include "cypherforge/reducer.hpp"
#include "cypherforge/render.hpp"
#include "cypherforge/state.hpp"
#include "cypherforge/validator.hpp"

namespace fs = std::filesystem;
using namespace cypherforge;

namespace {

// Generator options shared by the generating subcommands. Precedence:
// defaults < --config file < environment < explicit flags. Values are kept
// as strings and funneled through apply_config_entry so the file format and
// the flags accept identical spellings.
class GenFlags {
 public:
  std::string config_file;

  void attach(CLI::App& cmd) {
    cmd.add_option("--config", config_file,
                   "generator config file (key=value lines)")
        ->envname("CYPHERFORGE_CONFIG");
    add(cmd, "--seed", "seed", "base seed for query derivation");
    add(cmd, "--max-clauses", "max_clauses", "top-level clause budget");
    add(cmd, "--continue-prob", "continue_prob",
        "probability of appending another clause");
    add(cmd, "--max-expr-depth", "max_expr_depth",
        "expression nesting budget");
    add(cmd, "--max-subquery-depth", "max_subquery_depth",
        "CALL/UNION nesting budget");
    add(cmd, "--max-pattern-length", "max_pattern_length",
        "nodes per pattern chain");
    add(cmd, "--schema-reuse-prob", "schema_reuse_prob",
        "probability of reusing a known schema element");
    add(cmd, "--var-reuse-prob", "var_reuse_prob",
        "probability of reusing a visible variable");
    guard_ = cmd.add_flag("--guard-division",
                          "only generate non-zero divisors")
                 ->envname("CYPHERFORGE_GUARD_DIVISION");
    cmd.add_option("--clause-weight", clause_weights_,
                   "clause weight override KIND=WEIGHT (repeatable)")
        ->envname("CYPHERFORGE_CLAUSE_WEIGHT");
  }

  GenConfig build() const {
    GenConfig cfg;
    if (!config_file.empty()) apply_config_file(cfg, config_file);
    for (const auto& o : overrides_)
      if (o.opt->count() > 0) apply_config_entry(cfg, o.key, *o.value);
    if (guard_ && guard_->count() > 0)
      apply_config_entry(cfg, "guard_division", "true");
    for (const auto& w : clause_weights_) {
      auto eq = w.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(
            "--clause-weight expects KIND=WEIGHT, got '" + w + "'");
      apply_config_entry(cfg, "clause_weight." + w.substr(0, eq),
                         w.substr(eq + 1));
    }
    cfg.check();
    return cfg;
  }

 private:
  struct Override {
    CLI::Option* opt;
    std::string key;
    std::string* value;
  };

  void add(CLI::App& cmd, const char* flag, std::string key,
           const char* help) {
    values_.push_back(std::make_unique<std::string>());
    std::string env = "CYPHERFORGE_";
    for (char c : key)
      env += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    CLI::Option* opt = cmd.add_option(flag, *values_.back(), help)->envname(env);
    overrides_.push_back({opt, std::move(key), values_.back().get()});
  }

  std::vector<std::unique_ptr<std::string>> values_;
  std::vector<Override> overrides_;
  CLI::Option* guard_ = nullptr;
  std::vector<std::string> clause_weights_;
};

std::string resolve_corpus(const std::string& path) {
  if (fs::is_directory(path)) return (fs::path(path) / "corpus.jsonl").string();
  return path;
}

void print_stats(const CampaignStats& s, std::ostream& os) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "generated          " << s.generated << "\n";
  out << "valid              " << s.valid << " ("
      << s.validity_rate() * 100.0 << "%)\n";
  out << "mean clauses       " << s.mean_clauses() << "\n";
  out << "mean dependencies  " << s.mean_dependencies() << "\n";
  out << "mean bytes         " << s.mean_bytes() << "\n";
  if (s.wall_seconds > 0)
    out << "throughput         " << s.throughput() << " queries/s\n";
  out << "discrepancies      " << s.discrepancies << "\n";
  for (const auto& [name, count] : s.by_classification)
    out << "  " << name << "  " << count << "\n";
  os << out.str();
}

std::vector<MockFault> parse_faults(const std::vector<std::string>& specs) {
  std::vector<MockFault> faults;
  faults.reserve(specs.size());
  for (const auto& spec : specs) faults.push_back(parse_mock_fault(spec));
  return faults;
}

// ─── fuzz ────────────────────────────────────────────────────────────────────

struct FuzzArgs {
  GenFlags gen;
  std::string target = "mock";
  std::string url;
  std::string out_dir;
  std::uint64_t queries = 0;
  double duration = 0;
  unsigned workers = 1;
  unsigned timeout_ms = 10000;
  unsigned reset_every = 50;
  std::string pattern_dir;
  std::string engine_version;
  std::vector<std::string> fault_specs;
};

int run_fuzz(const FuzzArgs& a) {
  if (a.queries == 0 && a.duration <= 0)
    throw std::runtime_error("fuzz needs --queries or --duration");

  CampaignConfig cfg;
  cfg.gen = a.gen.build();
  cfg.target = a.target;
  cfg.url = a.url;
  cfg.out_dir = a.out_dir;
  cfg.query_budget = a.queries;
  cfg.duration_seconds = a.duration;
  cfg.timeout_ms = a.timeout_ms;
  cfg.reset_every = a.reset_every;
  cfg.workers = a.workers;
  cfg.pattern_dir = a.pattern_dir;
  cfg.version = a.engine_version;

  std::vector<MockFault> faults = parse_faults(a.fault_specs);
  AdapterFactory factory = [&a, &faults]() {
    return make_engine(a.target, a.url, faults);
  };

  {
    auto probe = factory();
    if (!probe->alive()) {
      std::cerr << "error: target '" << a.target << "' is unreachable\n";
      return 3;
    }
  }

  CampaignResult result = run_campaign(cfg, factory);
  print_stats(result.stats, std::cout);
  std::cout << "bugs               " << result.bugs.size() << "\n";
  for (const auto& b : result.bugs)
    std::cout << "  " << b.id << "  " << to_string(b.classification)
              << (b.fingerprint.empty() ? "" : "  " + b.fingerprint) << "\n";
  if (!a.out_dir.empty())
    std::cout << "wrote " << a.out_dir << "/corpus.jsonl, stats.json"
              << (result.bugs.empty() ? "" : ", bugs/") << "\n";
  if (result.aborted)
    std::cerr << "campaign aborted: engine stayed unreachable after resets; "
                 "partial results saved\n";
  if (!result.bugs.empty()) return 1;
  if (result.aborted) return 3;
  return 0;
}

// ─── gen ─────────────────────────────────────────────────────────────────────

// Corpus-only generation: no engine, no timing, so two runs with the same
// seed produce byte-identical files.
int run_gen(const GenFlags& flags, const std::string& out_dir,
            std::uint64_t queries) {
  GenConfig cfg = flags.build();
  fs::create_directories(out_dir);

  std::ofstream config_out(fs::path(out_dir) / "config.txt",
                           std::ios::trunc);
  config_out << dump_config(cfg);
  config_out.close();

  fs::path corpus_path = fs::path(out_dir) / "corpus.jsonl";
  std::ofstream corpus(corpus_path, std::ios::trunc);
  if (!corpus)
    throw std::runtime_error("cannot write " + corpus_path.string());

  std::uint64_t violations = 0;
  for (std::uint64_t i = 0; i < queries; ++i) {
    Query q = gen_query_at(cfg, cfg.seed, i);
    CorpusRecord rec;
    rec.seed = cfg.seed;
    rec.index = i;
    rec.query_text = render(q);
    rec.clause_count = clause_count(q);
    rec.dep_count = count_dependencies(q).total();
    rec.byte_len = rec.query_text.size();
    ValidationReport vr = validate(q);
    violations += vr.violations.size();
    rec.classification = vr.clean() ? Classification::Valid
                                    : Classification::SemanticError;
    corpus << rec.to_json() << "\n";
  }
  std::cout << "wrote " << queries << " queries to " << corpus_path.string()
            << "\n";
  if (violations > 0) {
    std::cerr << violations << " validator violations in generated corpus\n";
    return 1;
  }
  return 0;
}

// ─── validate ────────────────────────────────────────────────────────────────

int run_validate(GenFlags& flags, const std::string& corpus_arg) {
  std::string corpus_path = resolve_corpus(corpus_arg);
  if (flags.config_file.empty()) {
    fs::path sibling = fs::path(corpus_path).parent_path() / "config.txt";
    if (fs::exists(sibling)) flags.config_file = sibling.string();
  }
  GenConfig cfg = flags.build();

  std::vector<CorpusRecord> records = load_corpus(corpus_path);
  std::uint64_t violations = 0;
  std::uint64_t mismatches = 0;
  for (const CorpusRecord& rec : records) {
    Query q = gen_query_at(cfg, rec.seed, rec.index);
    if (render(q) != rec.query_text) {
      ++mismatches;
      nlohmann::ordered_json j;
      j["seed"] = rec.seed;
      j["index"] = rec.index;
      j["kind"] = "replay-mismatch";
      j["message"] = "regenerated text differs from corpus record";
      std::cout << j.dump() << "\n";
      continue;
    }
    ValidationReport vr = validate(q);
    for (const Violation& v : vr.violations) {
      ++violations;
      nlohmann::ordered_json j;
      j["seed"] = rec.seed;
      j["index"] = rec.index;
      j["clause"] = v.clause_index;
      j["kind"] = to_string(v.kind);
      j["message"] = v.message;
      std::cout << j.dump() << "\n";
    }
  }
  std::cerr << records.size() << " records, " << violations
            << " violations, " << mismatches << " replay mismatches\n";
  return (violations + mismatches) > 0 ? 1 : 0;
}

// ─── replay ──────────────────────────────────────────────────────────────────

int run_replay(const GenFlags& flags, std::uint64_t index) {
  GenConfig cfg = flags.build();
  std::cout << render(gen_query_at(cfg, cfg.seed, index)) << "\n";
  return 0;
}

// ─── reduce ──────────────────────────────────────────────────────────────────

struct ReduceArgs {
  std::string bug_dir;
  std::string target;  // empty: the target stored in the report
  std::string url;
  unsigned timeout_ms = 10000;
  std::vector<std::string> fault_specs;
};

int run_reduce(const ReduceArgs& a) {
  StoredBug stored = load_bug_report(a.bug_dir);
  Query original = gen_query_at(stored.gen, stored.bug.seed, stored.bug.index);
  if (render(original) != stored.bug.original)
    throw std::runtime_error(
        "stored config does not regenerate original.cypher for " + a.bug_dir);

  std::string target = a.target.empty() ? stored.bug.target : a.target;
  auto engine = make_engine(target, a.url, parse_faults(a.fault_specs));
  if (!engine->alive()) {
    std::cerr << "error: target '" << target << "' is unreachable\n";
    return 3;
  }

  auto predicate = [&](const Query& cand) {
    Outcome out =
        engine->submit(render(cand), a.timeout_ms, result_columns(cand));
    if (out.kind == Outcome::Kind::ConnectionLost) engine->reset();
    return outcome_matches(stored.bug, out);
  };

  ReduceResult res = reduce(original, predicate);
  std::string reduced_text = render(res.query);
  {
    std::ofstream out(fs::path(a.bug_dir) / "reduced.cypher",
                      std::ios::trunc);
    out << reduced_text << "\n";
  }
  std::cout << "reduced " << clause_count(original) << " clauses ("
            << stored.bug.original.size() << " bytes) to "
            << clause_count(res.query) << " (" << reduced_text.size()
            << " bytes) in " << res.predicate_calls << " predicate calls, "
            << res.memo_hits << " memo hits\n";
  if (!res.minimal)
    std::cerr << "warning: predicate went flaky; result may not be minimal\n";
  return 0;
}

// ─── dedup ───────────────────────────────────────────────────────────────────

std::vector<std::string> collect_bug_dirs(
    const std::vector<std::string>& args) {
  std::vector<std::string> dirs;
  for (const auto& arg : args) {
    fs::path p(arg);
    if (fs::exists(p / "meta.json")) {
      dirs.push_back(p.string());
      continue;
    }
    std::vector<std::string> found;
    for (const fs::path& root : {p, p / "bugs"}) {
      if (!fs::is_directory(root)) continue;
      for (const auto& entry : fs::directory_iterator(root))
        if (entry.is_directory() && fs::exists(entry.path() / "meta.json"))
          found.push_back(entry.path().string());
    }
    if (found.empty())
      throw std::runtime_error("no bug reports under " + arg);
    std::sort(found.begin(), found.end());
    dirs.insert(dirs.end(), found.begin(), found.end());
  }
  return dirs;
}

void append_bisect(const std::string& dir, const BisectOutcome& b) {
  fs::path meta_path = fs::path(dir) / "meta.json";
  std::ifstream in(meta_path);
  if (!in) throw std::runtime_error("cannot read " + meta_path.string());
  nlohmann::ordered_json meta = nlohmann::ordered_json::parse(in);
  in.close();
  meta["bisect"] = {{"version", b.version},
                    {"probes", b.probes},
                    {"verification_probes", b.verification_probes},
                    {"flaky", b.flaky},
                    {"error", b.error},
                    {"ok", b.ok()}};
  std::ofstream out(meta_path, std::ios::trunc);
  out << meta.dump(2) << "\n";
}

int run_dedup(const std::vector<std::string>& dir_args,
              const std::string& oracle_cmd, std::size_t versions) {
  std::vector<std::string> dirs = collect_bug_dirs(dir_args);
  std::vector<StoredBug> bugs;
  bugs.reserve(dirs.size());
  for (const auto& dir : dirs) bugs.push_back(load_bug_report(dir));

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < bugs.size(); ++i)
    groups[fingerprint(bugs[i].bug).to_string()].push_back(i);

  std::size_t gi = 1;
  for (const auto& [key, members] : groups) {
    std::cout << "group " << gi++ << ": " << key << " (" << members.size()
              << (members.size() == 1 ? " report)" : " reports)") << "\n";
    for (std::size_t m : members) std::cout << "  " << dirs[m] << "\n";
  }
  std::cout << groups.size() << " distinct fingerprints across "
            << bugs.size() << " reports\n";

  if (!oracle_cmd.empty()) {
    if (versions == 0)
      throw std::runtime_error("--versions must be > 0 with --oracle-cmd");
    ExternalCommandBackend backend(oracle_cmd, versions);
    CachedVersionOracle oracle(backend);
    for (std::size_t i = 0; i < bugs.size(); ++i) {
      BisectOutcome b = bisect(oracle, bugs[i].bug);
      append_bisect(dirs[i], b);
      if (b.ok())
        std::cout << "bisect " << dirs[i] << ": version " << b.version
                  << " (" << b.probes << " probes)\n";
      else
        std::cout << "bisect " << dirs[i] << ": "
                  << (b.error.empty() ? "flaky result" : b.error) << "\n";
    }
  }
  return 0;
}

// ─── stats ───────────────────────────────────────────────────────────────────

int run_stats(const std::string& corpus_arg) {
  std::vector<CorpusRecord> records = load_corpus(resolve_corpus(corpus_arg));
  CampaignStats s = stats_from_corpus(records);
  print_stats(s, std::cout);
  std::cout << s.to_json() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"state-aware Cypher query generator and fuzzing harness"};
  app.require_subcommand(1);
  int code = 0;

  // fuzz
  FuzzArgs fuzz;
  CLI::App* fuzz_cmd =
      app.add_subcommand("fuzz", "run a fuzzing campaign against a target");
  fuzz.gen.attach(*fuzz_cmd);
  fuzz_cmd->add_option("--target", fuzz.target, "neo4j|redisgraph|age|mock")
      ->envname("CYPHERFORGE_TARGET");
  fuzz_cmd->add_option("--url", fuzz.url, "engine endpoint URL")
      ->envname("CYPHERFORGE_URL");
  fuzz_cmd->add_option("--out", fuzz.out_dir, "output directory")
      ->envname("CYPHERFORGE_OUT");
  fuzz_cmd->add_option("--queries", fuzz.queries, "query budget")
      ->envname("CYPHERFORGE_QUERIES");
  fuzz_cmd->add_option("--duration", fuzz.duration, "time budget in seconds")
      ->envname("CYPHERFORGE_DURATION");
  fuzz_cmd->add_option("--workers", fuzz.workers, "worker thread count")
      ->envname("CYPHERFORGE_WORKERS");
  fuzz_cmd->add_option("--timeout", fuzz.timeout_ms, "per-query timeout (ms)")
      ->envname("CYPHERFORGE_TIMEOUT");
  fuzz_cmd
      ->add_option("--reset-every", fuzz.reset_every,
                   "reset the database every N queries (0: never)")
      ->envname("CYPHERFORGE_RESET_EVERY");
  fuzz_cmd
      ->add_option("--pattern-dir", fuzz.pattern_dir,
                   "internal-error pattern file directory")
      ->envname("CYPHERFORGE_PATTERN_DIR");
  fuzz_cmd
      ->add_option("--engine-version", fuzz.engine_version,
                   "version tag recorded in bug reports")
      ->envname("CYPHERFORGE_ENGINE_VERSION");
  fuzz_cmd
      ->add_option("--mock-fault", fuzz.fault_specs,
                   "mock fault TRIGGER:KIND[:MESSAGE] (repeatable)")
      ->envname("CYPHERFORGE_MOCK_FAULT");
  fuzz_cmd->callback([&]() { code = run_fuzz(fuzz); });

  // gen
  GenFlags gen_flags;
  std::string gen_out;
  std::uint64_t gen_queries = 100;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "generate a corpus without executing it");
  gen_flags.attach(*gen_cmd);
  gen_cmd->add_option("--out", gen_out, "output directory")
      ->envname("CYPHERFORGE_OUT")
      ->required();
  gen_cmd->add_option("--queries", gen_queries, "number of queries")
      ->envname("CYPHERFORGE_QUERIES");
  gen_cmd->callback([&]() { code = run_gen(gen_flags, gen_out, gen_queries); });

  // validate
  GenFlags validate_flags;
  std::string validate_corpus;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "re-derive a corpus and report violations");
  validate_flags.attach(*validate_cmd);
  validate_cmd
      ->add_option("corpus", validate_corpus,
                   "corpus file or directory (uses sibling config.txt)")
      ->required();
  validate_cmd->callback(
      [&]() { code = run_validate(validate_flags, validate_corpus); });

  // replay
  GenFlags replay_flags;
  std::uint64_t replay_index = 0;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "print the query at (seed, index)");
  replay_flags.attach(*replay_cmd);
  CLI::Option* replay_index_opt =
      replay_cmd->add_option("--index", replay_index, "query index");
  replay_index_opt->required();
  replay_cmd->callback([&]() { code = run_replay(replay_flags, replay_index); });

  // reduce
  ReduceArgs reduce_args;
  CLI::App* reduce_cmd =
      app.add_subcommand("reduce", "reduce a stored bug-triggering query");
  reduce_cmd->add_option("--bug", reduce_args.bug_dir, "bug report directory")
      ->required();
  reduce_cmd
      ->add_option("--target", reduce_args.target,
                   "override the report's target")
      ->envname("CYPHERFORGE_TARGET");
  reduce_cmd->add_option("--url", reduce_args.url, "engine endpoint URL")
      ->envname("CYPHERFORGE_URL");
  reduce_cmd
      ->add_option("--timeout", reduce_args.timeout_ms,
                   "per-query timeout (ms)")
      ->envname("CYPHERFORGE_TIMEOUT");
  reduce_cmd
      ->add_option("--mock-fault", reduce_args.fault_specs,
                   "mock fault TRIGGER:KIND[:MESSAGE] (repeatable)")
      ->envname("CYPHERFORGE_MOCK_FAULT");
  reduce_cmd->callback([&]() { code = run_reduce(reduce_args); });

  // dedup
  std::vector<std::string> dedup_dirs;
  std::string dedup_oracle;
  std::size_t dedup_versions = 0;
  CLI::App* dedup_cmd = app.add_subcommand(
      "dedup", "group bug reports by fingerprint, optionally bisect");
  dedup_cmd
      ->add_option("dirs", dedup_dirs,
                   "bug report directories (or parents of bugs/)")
      ->required();
  dedup_cmd->add_option(
      "--oracle-cmd", dedup_oracle,
      "external oracle: CMD prepare <v> / CMD run <v> <query-file>");
  dedup_cmd->add_option("--versions", dedup_versions,
                        "version count for the oracle range");
  dedup_cmd->callback(
      [&]() { code = run_dedup(dedup_dirs, dedup_oracle, dedup_versions); });

  // stats
  std::string stats_corpus;
  CLI::App* stats_cmd =
      app.add_subcommand("stats", "recompute statistics from a corpus");
  stats_cmd->add_option("corpus", stats_corpus, "corpus file or directory")
      ->required();
  stats_cmd->callback([&]() { code = run_stats(stats_corpus); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
