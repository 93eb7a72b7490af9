#pragma once

// Built-in function allowlist with type signatures. The generator draws
// calls from this table and the validator checks calls against it; sharing
// the table keeps the two sides honest about the same signatures while the
// scope/state logic stays independently implemented.

#include <optional>
#include <string>
#include <vector>

#include "cypherforge/types.hpp"

namespace cypherforge {

struct FnSignature {
  std::string name;
  CypherType ret;
  std::vector<CypherType> args;
};

// Concrete (non-generic) signatures.
const std::vector<FnSignature>& builtin_signatures();

// head/last/coalesce are generic; collect/count/sum aggregate.
bool is_known_fn(const std::string& name);
bool is_aggregate_fn(const std::string& name);

// Result type of `name` applied to `arg_types`, or nullopt when no
// signature matches. Typing is gradual: Null and Any arguments are
// compatible with every parameter, so only known-kind mismatches reject.
std::optional<CypherType> check_call(const std::string& name,
                                     const std::vector<CypherType>& arg_types);

}  // namespace cypherforge
