#include "cypherforge/functions.hpp"

#include <algorithm>

namespace cypherforge {

const std::vector<FnSignature>& builtin_signatures() {
  using T = CypherType;
  static const std::vector<FnSignature> table = {
      {"toBoolean", T::boolean(), {T::integer()}},
      {"toBoolean", T::boolean(), {T::string()}},
      {"toBoolean", T::boolean(), {T::boolean()}},
      {"toInteger", T::integer(), {T::real()}},
      {"toInteger", T::integer(), {T::string()}},
      {"toInteger", T::integer(), {T::integer()}},
      {"toInteger", T::integer(), {T::boolean()}},
      {"toFloat", T::real(), {T::integer()}},
      {"toFloat", T::real(), {T::string()}},
      {"toFloat", T::real(), {T::real()}},
      {"toString", T::string(), {T::integer()}},
      {"toString", T::string(), {T::real()}},
      {"toString", T::string(), {T::boolean()}},
      {"toString", T::string(), {T::string()}},
      {"size", T::integer(), {T::string()}},
      {"size", T::integer(), {T::list(T::any())}},
      {"id", T::integer(), {T::node()}},
      {"id", T::integer(), {T::relationship()}},
      {"type", T::string(), {T::relationship()}},
      {"labels", T::list(T::string()), {T::node()}},
      {"keys", T::list(T::string()), {T::node()}},
      {"keys", T::list(T::string()), {T::relationship()}},
      {"keys", T::list(T::string()), {T::map()}},
      {"range", T::list(T::integer()), {T::integer(), T::integer()}},
  };
  return table;
}

bool is_aggregate_fn(const std::string& name) {
  return name == "collect" || name == "count" || name == "sum";
}

bool is_known_fn(const std::string& name) {
  if (is_aggregate_fn(name) || name == "head" || name == "last" ||
      name == "coalesce")
    return true;
  const auto& table = builtin_signatures();
  return std::any_of(table.begin(), table.end(),
                     [&](const FnSignature& s) { return s.name == name; });
}

std::optional<CypherType> check_call(const std::string& name,
                                     const std::vector<CypherType>& args) {
  if (name == "head" || name == "last") {
    if (args.size() != 1) return std::nullopt;
    if (args[0].is_list()) return args[0].element();
    if (args[0].kind() == CypherType::Kind::Null) return CypherType::null();
    if (args[0].kind() == CypherType::Kind::Any) return CypherType::any();
    return std::nullopt;
  }
  if (name == "coalesce") {
    if (args.size() < 1) return std::nullopt;
    CypherType common = args[0];
    for (const auto& a : args) {
      if (!a.unifies_with(common)) return std::nullopt;
      if (common.kind() == CypherType::Kind::Null) common = a;
    }
    return common;
  }
  if (name == "collect") {
    if (args.size() != 1) return std::nullopt;
    return CypherType::list(args[0]);
  }
  if (name == "count") {
    if (args.size() != 1) return std::nullopt;
    return CypherType::integer();
  }
  if (name == "sum") {
    if (args.size() != 1) return std::nullopt;
    if (args[0].is_numeric()) return args[0];
    if (args[0].kind() == CypherType::Kind::Null) return CypherType::integer();
    if (args[0].kind() == CypherType::Kind::Any) return CypherType::any();
    return std::nullopt;
  }
  for (const auto& sig : builtin_signatures()) {
    if (sig.name != name || sig.args.size() != args.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (!args[i].unifies_with(sig.args[i])) {
        ok = false;
        break;
      }
    if (ok) return sig.ret;
  }
  return std::nullopt;
}

}  // namespace cypherforge
