#include "cypherforge/classify.hpp"

#include <fstream>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace cypherforge {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Valid: return "VALID";
    case Classification::SemanticError: return "SEMANTIC_ERROR";
    case Classification::SyntaxError: return "SYNTAX_ERROR";
    case Classification::InternalError: return "INTERNAL_ERROR";
    case Classification::Crash: return "CRASH";
    case Classification::Timeout: return "TIMEOUT";
  }
  return "SEMANTIC_ERROR";
}

Classification classification_from_string(const std::string& s) {
  static const std::unordered_map<std::string, Classification> table = {
      {"VALID", Classification::Valid},
      {"SEMANTIC_ERROR", Classification::SemanticError},
      {"SYNTAX_ERROR", Classification::SyntaxError},
      {"INTERNAL_ERROR", Classification::InternalError},
      {"CRASH", Classification::Crash},
      {"TIMEOUT", Classification::Timeout},
  };
  auto it = table.find(s);
  if (it == table.end())
    throw std::runtime_error("unknown classification: " + s);
  return it->second;
}

bool TargetRules::matches_internal(const std::string& text) const {
  for (const auto& re : internal)
    if (std::regex_search(text, re)) return true;
  return false;
}

namespace {

std::vector<std::string> builtin_patterns(const std::string& target) {
  if (target == "neo4j")
    return {
        "ExecutionFailed",
        "Cannot invoke",
        "NullPointerException",
        "IndexOutOfBoundsException",
        "arraycopy",
        "AssertionError",
        "IllegalStateException",
        "out of bounds",
        "Unexpected error",
        "DatabaseError",
    };
  if (target == "redisgraph")
    return {
        "Assertion",
        "Segmentation fault",
        "Internal error",
        "unhandled",
    };
  if (target == "age")
    return {
        "TRAP:",
        "PANIC",
        "FailedAssertion",
        "unrecognized node type",
        "unexpected node type",
    };
  if (target == "mock") return {};
  return {"AssertionError", "assertion failed", "Segmentation fault"};
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<std::vector<std::string>> load_pattern_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace

TargetRules rules_for(const std::string& target,
                      const std::string& pattern_dir) {
  TargetRules rules;
  rules.target = target;
  rules.sources = builtin_patterns(target);
  if (!pattern_dir.empty()) {
    if (auto loaded = load_pattern_file(pattern_dir + "/" + target + ".txt"))
      rules.sources = std::move(*loaded);
  }
  for (const auto& src : rules.sources) {
    try {
      rules.internal.emplace_back(src);
    } catch (const std::regex_error& e) {
      throw std::runtime_error("bad internal-error pattern for " + target +
                               ": " + src + " (" + e.what() + ")");
    }
  }
  return rules;
}

Classification classify(const Outcome& outcome, bool validator_clean,
                        const TargetRules& rules) {
  switch (outcome.kind) {
    case Outcome::Kind::Timeout: return Classification::Timeout;
    case Outcome::Kind::ConnectionLost: return Classification::Crash;
    case Outcome::Kind::Rows: return Classification::Valid;
    case Outcome::Kind::Error: break;
  }
  const std::string& msg = outcome.message;
  const std::string& code = outcome.code;
  if (rules.matches_internal(msg) || rules.matches_internal(code))
    return Classification::InternalError;
  if (rules.target == "neo4j") {
    // A type complaint about a statically clean query means the engine's
    // inference went wrong, not ours. Check before the code taxonomy: the
    // engine files these under its SyntaxError status code.
    if (validator_clean && msg.find("Type mismatch") != std::string::npos)
      return Classification::InternalError;
    if (code.find("SyntaxError") != std::string::npos)
      return Classification::SyntaxError;
  } else if (rules.target == "redisgraph") {
    if (msg.find("Invalid input") != std::string::npos ||
        msg.find("Syntax error") != std::string::npos)
      return Classification::SyntaxError;
  } else if (rules.target == "age") {
    if (code == "42601" || msg.find("syntax error") != std::string::npos)
      return Classification::SyntaxError;
    if (code.rfind("XX", 0) == 0) return Classification::InternalError;
  } else if (rules.target == "mock") {
    if (code == "mock.syntax") return Classification::SyntaxError;
    if (code == "mock.internal") return Classification::InternalError;
  } else if (msg.find("syntax error") != std::string::npos ||
             msg.find("Syntax error") != std::string::npos ||
             code.find("SyntaxError") != std::string::npos) {
    return Classification::SyntaxError;
  }
  return Classification::SemanticError;
}

}  // namespace cypherforge
