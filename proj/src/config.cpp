#include "cypherforge/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cypherforge/render.hpp"

namespace cypherforge {

GenConfig::GenConfig() : clause_weights(default_weights()) {}

std::map<ClauseKind, double> GenConfig::default_weights() {
  std::map<ClauseKind, double> w;
  for (ClauseKind k : effect_kinds()) w[k] = 1.0;
  // Calibrated: a full-weight RETURN ends top-level generation too early for
  // the corpus shape targets, and UNION replaces the whole query.
  w[ClauseKind::Return] = 0.3;
  w[ClauseKind::Union] = 0.2;
  return w;
}

double GenConfig::weight(ClauseKind k) const {
  auto it = clause_weights.find(base_kind(k));
  return it == clause_weights.end() ? 0.0 : it->second;
}

void GenConfig::check() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!in_unit(continue_prob))
    throw ContractError("continue_prob must be within [0,1]");
  if (!in_unit(schema_reuse_prob))
    throw ContractError("schema_reuse_prob must be within [0,1]");
  if (!in_unit(var_reuse_prob))
    throw ContractError("var_reuse_prob must be within [0,1]");
  if (max_clauses < 1) throw ContractError("max_clauses must be >= 1");
  if (max_pattern_length < 1)
    throw ContractError("max_pattern_length must be >= 1");
  for (const auto& [kind, weight] : clause_weights)
    if (weight < 0.0)
      throw ContractError("clause weight must be non-negative: " +
                          config_key(kind));
  if (weight(ClauseKind::Return) <= 0.0)
    throw ContractError("RETURN weight must be positive");
  if (weight(ClauseKind::Foreach) > 0.0 && weight(ClauseKind::Create) <= 0.0 &&
      weight(ClauseKind::Merge) <= 0.0)
    throw ContractError("FOREACH bodies need CREATE or MERGE enabled");
  if (pools.label_alphabet.empty() && pools.label_overflow_prefix.empty())
    throw ContractError("label pool must be non-empty");
}

std::string config_key(ClauseKind k) {
  std::string s = to_string(k);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  std::replace(s.begin(), s.end(), ' ', '_');
  return s;
}

bool kind_from_config_key(const std::string& key, ClauseKind& out) {
  for (ClauseKind k :
       {ClauseKind::Match, ClauseKind::OptionalMatch, ClauseKind::Create,
        ClauseKind::Merge, ClauseKind::Delete, ClauseKind::DetachDelete,
        ClauseKind::Remove, ClauseKind::Set, ClauseKind::Unwind,
        ClauseKind::With, ClauseKind::Return, ClauseKind::Foreach,
        ClauseKind::Call, ClauseKind::Union, ClauseKind::Exists,
        ClauseKind::Count}) {
    if (config_key(k) == key) {
      out = k;
      return true;
    }
  }
  return false;
}

static double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double d = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad numeric value for " + key + ": '" +
                             value + "'");
  }
}

static std::uint64_t parse_u64(const std::string& key,
                               const std::string& value) {
  try {
    std::size_t pos = 0;
    std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad integer value for " + key + ": '" +
                             value + "'");
  }
}

static bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on")
    return true;
  if (value == "false" || value == "0" || value == "no" || value == "off")
    return false;
  throw std::runtime_error("config: bad boolean value for " + key + ": '" +
                           value + "'");
}

void apply_config_entry(GenConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "continue_prob") {
    cfg.continue_prob = parse_double(key, value);
  } else if (key == "max_clauses") {
    cfg.max_clauses = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "max_expr_depth") {
    cfg.max_expr_depth = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "max_subquery_depth") {
    cfg.max_subquery_depth = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "max_pattern_length") {
    cfg.max_pattern_length = static_cast<unsigned>(parse_u64(key, value));
  } else if (key == "schema_reuse_prob") {
    cfg.schema_reuse_prob = parse_double(key, value);
  } else if (key == "var_reuse_prob") {
    cfg.var_reuse_prob = parse_double(key, value);
  } else if (key == "guard_division") {
    cfg.guard_division = parse_bool(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "label_alphabet") {
    cfg.pools.label_alphabet = value;
  } else if (key == "label_overflow_prefix") {
    cfg.pools.label_overflow_prefix = value;
  } else if (key == "property_prefix") {
    cfg.pools.property_prefix = value;
  } else if (key == "variable_prefix") {
    cfg.pools.variable_prefix = value;
  } else if (key == "variable_leads") {
    cfg.pools.variable_leads.clear();
    std::stringstream ss(value);
    std::string lead;
    while (std::getline(ss, lead, ','))
      if (!lead.empty()) cfg.pools.variable_leads.push_back(lead);
  } else if (key.rfind("clause_weight.", 0) == 0) {
    ClauseKind kind;
    std::string kind_key = key.substr(14);
    if (!kind_from_config_key(kind_key, kind))
      throw std::runtime_error("config: unknown clause kind '" + kind_key +
                               "'");
    cfg.clause_weights[base_kind(kind)] = parse_double(key, value);
  } else {
    throw std::runtime_error("config: unknown key '" + key + "'");
  }
}

static std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  auto end = s.find_last_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, end - begin + 1);
}

static void apply_config_stream(GenConfig& cfg, std::istream& in,
                                const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: " + source + ":" +
                               std::to_string(lineno) + ": expected key=value");
    apply_config_entry(cfg, trim(line.substr(0, eq)),
                       trim(line.substr(eq + 1)));
  }
}

void apply_config_file(GenConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  apply_config_stream(cfg, in, path);
}

void apply_config_text(GenConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  apply_config_stream(cfg, in, "<inline>");
}

GenConfig load_config_file(const std::string& path) {
  GenConfig cfg;
  apply_config_file(cfg, path);
  return cfg;
}

std::string dump_config(const GenConfig& cfg) {
  std::ostringstream out;
  out << "continue_prob = " << format_float(cfg.continue_prob) << "\n";
  out << "max_clauses = " << cfg.max_clauses << "\n";
  out << "max_expr_depth = " << cfg.max_expr_depth << "\n";
  out << "max_subquery_depth = " << cfg.max_subquery_depth << "\n";
  out << "max_pattern_length = " << cfg.max_pattern_length << "\n";
  out << "schema_reuse_prob = " << format_float(cfg.schema_reuse_prob) << "\n";
  out << "var_reuse_prob = " << format_float(cfg.var_reuse_prob) << "\n";
  out << "guard_division = " << (cfg.guard_division ? "true" : "false")
      << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "label_alphabet = " << cfg.pools.label_alphabet << "\n";
  out << "label_overflow_prefix = " << cfg.pools.label_overflow_prefix << "\n";
  out << "property_prefix = " << cfg.pools.property_prefix << "\n";
  out << "variable_prefix = " << cfg.pools.variable_prefix << "\n";
  out << "variable_leads = ";
  for (std::size_t i = 0; i < cfg.pools.variable_leads.size(); ++i) {
    if (i) out << ",";
    out << cfg.pools.variable_leads[i];
  }
  out << "\n";
  for (const auto& [kind, weight] : cfg.clause_weights)
    out << "clause_weight." << config_key(kind) << " = "
        << format_float(weight) << "\n";
  return out.str();
}

}  // namespace cypherforge
