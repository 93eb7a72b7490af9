#pragma once

// Clause-level reduction: walk the clauses front to back, trying deletion
// first and strictly-simpler replacements second; restart from the first
// clause after every accepted step; stop when a full pass changes nothing.
// The result still triggers the predicate and is 1-minimal under
// single-clause deletion with repair.

#include <cstddef>
#include <functional>
#include <vector>

#include "cypherforge/ast.hpp"

namespace cypherforge {

using TriggerPredicate = std::function<bool(const Query&)>;

struct ReduceStep {
  enum class Action { Delete, Replace };
  Action action = Action::Delete;
  std::size_t clause_index = 0;  // top-level clause the step targeted
  bool accepted = false;
  std::size_t clauses_after = 0;  // candidate's total clause count
};

struct ReduceResult {
  Query query;
  bool minimal = true;  // false: the predicate went flaky, best effort kept
  std::size_t predicate_calls = 0;  // actual predicate invocations
  std::size_t memo_hits = 0;        // candidates answered from the text memo
  std::vector<ReduceStep> steps;
};

// Deterministic, strictly-simpler alternatives for one clause: subqueries
// hoist each contained clause (and drop body clauses one at a time), MERGE
// weakens to CREATE, OPTIONAL MATCH to MATCH, DETACH DELETE to DELETE,
// WHERE/ORDER BY drop, and expression slots collapse to typed constants.
std::vector<Clause> replacements_for(const Clause& c);

// Rebuilds structural invariants after a clause was deleted or replaced:
// dangling variable references become constants of the expression's static
// type, DELETE/SET/REMOVE items naming dead variables are dropped (the
// clause too once empty), dead CALL imports are dropped, and a query left
// without a terminal clause gets RETURN 0 appended.
Query repair(Query q);

// Throws ContractError when the predicate rejects the input query.
ReduceResult reduce(const Query& q, const TriggerPredicate& triggers);

}  // namespace cypherforge
