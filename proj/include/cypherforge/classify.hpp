#pragma once

#include <regex>
#include <string>
#include <vector>

#include "cypherforge/engine.hpp"

namespace cypherforge {

enum class Classification {
  Valid,
  SemanticError,
  SyntaxError,
  InternalError,
  Crash,
  Timeout,
};

// Serialized forms: VALID, SEMANTIC_ERROR, SYNTAX_ERROR, INTERNAL_ERROR,
// CRASH, TIMEOUT.
std::string to_string(Classification c);
Classification classification_from_string(const std::string& s);

// Classifications that warrant a persisted bug report.
inline bool is_bug(Classification c) {
  return c == Classification::InternalError || c == Classification::Crash;
}

// Per-target triage rules. `internal` holds compiled regexes; any match
// against an error message or code marks the outcome engine-internal.
struct TargetRules {
  std::string target;
  std::vector<std::string> sources;
  std::vector<std::regex> internal;

  bool matches_internal(const std::string& text) const;
};

// Loads <pattern_dir>/<target>.txt — one regex per line, `#` comments — and
// falls back to built-in defaults when the file is absent or pattern_dir is
// empty. Throws std::runtime_error on an unparsable pattern.
TargetRules rules_for(const std::string& target,
                      const std::string& pattern_dir = "");

// validator_clean reports whether the submitted query passed static
// validation; some targets reject clean queries with messages that only an
// engine bug explains (e.g. bogus type-inference complaints).
Classification classify(const Outcome& outcome, bool validator_clean,
                        const TargetRules& rules);

}  // namespace cypherforge
