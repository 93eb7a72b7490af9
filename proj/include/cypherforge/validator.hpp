#pragma once

// Static validation, independent of the generation-state module: the
// validator re-derives visibility with its own environment chain and its own
// shadow schema, so a scope bug in one side cannot hide in the other. The
// reference list it produces doubles as a cross-check: its size must match
// the dependency count the state module reports for the same query.

#include <cstddef>
#include <string>
#include <vector>

#include "cypherforge/ast.hpp"

namespace cypherforge {

enum class ViolationKind {
  UnboundVariable,
  OutOfScopeReference,
  DuplicateBinding,
  TypeMismatch,
  IllegalClausePosition,
  UnionColumnMismatch,
  ForeachIllegalBody,
  MissingTerminalReturn,
};

const char* to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  std::string message;          // names the offending element
  std::size_t clause_index = 0;  // top-level clause being validated
};

// A use that resolved to an earlier declaration (variables) or an earlier
// introduction (labels, relationship types, property keys).
struct ResolvedRef {
  enum class Kind { Variable, NodeLabel, RelType, PropertyKey };
  Kind kind;
  std::string name;
  std::size_t clause_index = 0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<ResolvedRef> references;

  bool clean() const { return violations.empty(); }
  std::size_t context_refs() const;
  std::size_t schema_refs() const;
};

// Walks the whole query even when violations pile up, so the reference list
// is complete for any input.
ValidationReport validate(const Query& q);

std::vector<ResolvedRef> resolve_references(const Query& q);

}  // namespace cypherforge
