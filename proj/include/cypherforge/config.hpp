#pragma once

// Generation parameters. A flat key=value config file mirrors the field
// names; clause weights use dotted keys (clause_weight.match = 2.0).

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cypherforge/ast.hpp"

namespace cypherforge {

struct NamePools {
  // Labels and relationship types share one sequential alphabet: single
  // letters first, then <overflow_prefix><counter>.
  std::string label_alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::string label_overflow_prefix = "L";
  // Property keys: <property_prefix><counter>.
  std::string property_prefix = "n";
  // Variables: the lead names first, then <variable_prefix><counter>.
  std::vector<std::string> variable_leads = {"x", "y"};
  std::string variable_prefix = "n";
};

struct GenConfig {
  double continue_prob = 0.96;
  unsigned max_clauses = 30;
  std::map<ClauseKind, double> clause_weights;  // filled by default_weights()
  unsigned max_expr_depth = 4;
  unsigned max_subquery_depth = 2;
  unsigned max_pattern_length = 4;  // nodes per pattern chain
  double schema_reuse_prob = 0.6;
  double var_reuse_prob = 0.6;
  NamePools pools;
  bool guard_division = false;
  std::uint64_t seed = 0;

  GenConfig();

  static std::map<ClauseKind, double> default_weights();

  double weight(ClauseKind k) const;

  // Throws ContractError on out-of-range fields (probabilities outside
  // [0,1], zero bounds, negative weights, zero RETURN weight).
  void check() const;
};

// Identifier used for a clause kind in config keys (lowercase, underscores).
std::string config_key(ClauseKind k);
bool kind_from_config_key(const std::string& key, ClauseKind& out);

// Applies one key=value pair; throws std::runtime_error on unknown keys or
// unparsable values.
void apply_config_entry(GenConfig& cfg, const std::string& key,
                        const std::string& value);

// Loads key=value lines ('#' starts a comment) on top of defaults.
GenConfig load_config_file(const std::string& path);
void apply_config_file(GenConfig& cfg, const std::string& path);

// Same format applied from an in-memory string (embedded config dumps).
void apply_config_text(GenConfig& cfg, const std::string& text);

// Round-trippable dump of every field.
std::string dump_config(const GenConfig& cfg);

}  // namespace cypherforge
