#pragma once

// Generation-state tracking: which variables are visible (and their types and
// scopes) and which labels, relationship types, and property keys the query
// has introduced so far. The generator consults this state to produce
// references that resolve; the validator re-derives the same information
// independently as a cross-check.
//
// Walk order (shared contract with the validator and dependency counter):
// clauses left to right; within a pattern, node/rel elements left to right,
// and per element: binding, label names, then properties (key, then value
// expression); projection expressions before the projection replacement;
// ORDER BY and WHERE of a projection clause after the replacement; subquery
// bodies between scope entry and scope exit.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cypherforge/ast.hpp"

namespace cypherforge {

struct ScopeId {
  std::uint32_t value = 0;
  auto operator<=>(const ScopeId&) const = default;
};

class QueryContext {
 public:
  struct Entry {
    std::string name;
    CypherType type;
    ScopeId scope;
  };

  static QueryContext empty();

  // Opens a nested scope. A barrier scope hides all outer entries (subquery
  // bodies with explicit imports); a plain scope keeps them visible.
  ScopeId enter_scope(bool barrier = false);

  // Closes `scope`, dropping every entry declared in it. Contract: `scope`
  // is the innermost open scope and not the root.
  // Returns the names removed, in declaration order.
  std::vector<std::string> close_scope(ScopeId scope);

  // Declares a new entry in the innermost scope. Contract: `name` is not
  // currently visible.
  void declare(const std::string& name, CypherType type);

  // Drops every currently visible entry, then declares `columns` in the
  // innermost scope (projection semantics of WITH / RETURN).
  void replace_visible(const std::vector<Entry>& columns);

  ScopeId innermost_scope() const;
  bool visible(const std::string& name) const;
  const Entry* find(const std::string& name) const;

  // Visible entries in declaration order.
  std::vector<Entry> visible_entries() const;

  std::size_t scope_depth() const { return frames_.size(); }

 private:
  struct Frame {
    ScopeId id;
    bool barrier = false;
  };

  bool frame_visible(ScopeId scope) const;

  std::vector<Entry> entries_;
  std::vector<Frame> frames_;
  std::uint32_t next_scope_ = 0;
};

struct GraphSchema {
  std::set<std::string> node_labels;
  std::set<std::string> rel_types;
  std::map<std::string, CypherType> properties;

  bool operator==(const GraphSchema&) const = default;

  // Present-or-add helpers; an existing property key keeps its first type.
  void add_node_label(const std::string& name) { node_labels.insert(name); }
  void add_rel_type(const std::string& name) { rel_types.insert(name); }
  void add_property(const std::string& key, CypherType type);

  const CypherType* property_type(const std::string& key) const;
};

// Type bound to an iteration variable over a value of `list_type`
// (UNWIND alias, FOREACH loop variable).
CypherType list_element_type(const CypherType& list_type);

// ─── clause effects ──────────────────────────────────────────────────────────

enum class Effect { None, Add, Remove, AddRemove };

struct ClauseEffect {
  Effect context = Effect::None;
  Effect labels = Effect::None;
  Effect properties = Effect::None;
  bool opens_scope = false;
};

// Effect row for a clause kind; aliases share their base kind's row.
ClauseEffect clause_effect(ClauseKind kind);

// ─── clause application ──────────────────────────────────────────────────────

struct StateObserver {
  virtual ~StateObserver() = default;
  virtual void on_scope_entered(ClauseKind, ScopeId, const QueryContext&,
                                const GraphSchema&) {}
  virtual void on_clause_applied(const Clause&, const QueryContext&,
                                 const GraphSchema&) {}
  virtual void on_scope_closed(ClauseKind, ScopeId,
                               const std::vector<std::string>& removed,
                               const QueryContext&, const GraphSchema&) {}
};

// Advances context and schema over one clause (recursing into subqueries).
// The observer, when given, sees every nested step.
void apply_clause(QueryContext& ctx, GraphSchema& schema, const Clause& c,
                  StateObserver* observer = nullptr);

// Applies every clause of `q`, reporting each top-level clause as well.
void apply_query(QueryContext& ctx, GraphSchema& schema, const Query& q,
                 StateObserver* observer = nullptr);

// ─── dependency counting ─────────────────────────────────────────────────────

struct DependencyCount {
  std::size_t context = 0;  // variable uses resolving to an earlier binding
  std::size_t schema = 0;   // label/type/key uses resolving to an earlier
                            // introduction
  std::size_t total() const { return context + schema; }
};

DependencyCount count_dependencies(const Query& q);

}  // namespace cypherforge
