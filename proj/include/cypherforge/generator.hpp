#pragma once

// State-aware query generation. Clauses are produced in a do-while loop:
// each iteration picks a position-legal clause kind by weight, builds the
// clause against the live context/schema (so references resolve and reuse is
// possible by construction), and the loop continues with `continue_prob`
// until the clause budget runs out or a terminal clause is emitted.
//
// Every decision goes through the RandomSource with a stable tag, so a
// scripted source can force a specific generation path.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cypherforge/ast.hpp"
#include "cypherforge/config.hpp"
#include "cypherforge/random.hpp"
#include "cypherforge/state.hpp"

namespace cypherforge {

// Where a clause is being generated; constrains the legal kind set.
struct GenPosition {
  bool top_level = true;
  bool inside_foreach = false;
  std::size_t index = 0;        // clause index within the current body
  bool last_slot = false;       // final slot of the top-level budget
};

// Observation hooks for generation traces.
struct GenTrace {
  virtual ~GenTrace() = default;
  virtual void on_kind_selected(ClauseKind) {}
  virtual void on_clause_generated(const Clause&, const QueryContext&,
                                   const GraphSchema&) {}
  virtual void on_scope_cleaned(ClauseKind,
                                const std::vector<std::string>& removed) {}
};

// Clause kinds the generator may draw at `pos` given the current context.
// Order is fixed (stable across runs); weights come from the config.
std::vector<ClauseKind> legal_clause_kinds(const QueryContext& ctx,
                                           const GenConfig& cfg,
                                           const GenPosition& pos,
                                           unsigned subquery_depth);

// Kinds a query may legally end with (no RETURN needs to follow).
bool terminal_kind(ClauseKind k);

class Generator {
 public:
  Generator(const GenConfig& cfg, RandomSource& rng, GenTrace* trace = nullptr);
  // Resumes from an existing state (used by the single-clause entry point).
  Generator(const GenConfig& cfg, RandomSource& rng, QueryContext ctx,
            GraphSchema schema, GenTrace* trace = nullptr);

  Query query();

  Clause clause(std::optional<ClauseKind> requested, const GenPosition& pos);

  ExprPtr expression(const CypherType& want, unsigned budget);

  Pattern pattern_for(ClauseKind kind);

  const QueryContext& context() const { return ctx_; }
  const GraphSchema& schema() const { return schema_; }

 private:
  ClauseKind pick_kind(const GenPosition& pos);

  Clause gen_match(bool optional);
  Clause gen_create();
  Clause gen_merge();
  Clause gen_delete(std::optional<bool> forced_detach);
  Clause gen_remove();
  Clause gen_set();
  Clause gen_unwind();
  Clause gen_with();
  // forced_names: right arm of a UNION reproduces the left arm's columns.
  // force_alias: CALL trailing returns alias every column with a fresh name
  // so no returned column collides with an outer binding.
  Clause gen_return(bool aliases_required, bool force_alias,
                    bool allow_order_by,
                    const std::vector<std::string>* forced_names);
  Clause gen_foreach();
  Clause gen_call();
  Clause gen_union();

  std::vector<Clause> gen_body(unsigned max_len, const char* continue_tag);

  enum class PatternMode { Read, Write };
  Pattern gen_pattern(PatternMode mode);
  LabelExprPtr gen_label_expr_read(bool rel_position);
  std::string pick_label_name(bool rel_position, bool introduce,
                              const std::vector<std::string>& excluded);
  std::string pick_property_key(const std::vector<std::string>& excluded);
  PropertyList gen_properties(PatternMode mode);

  std::vector<Projection> gen_projections(bool aliases_required,
                                          bool force_alias,
                                          const char* keep_tag,
                                          const char* count_tag,
                                          const char* aggregate_tag);
  std::vector<OrderItem> gen_order_by(const std::vector<Projection>& items);

  CypherType pick_type(bool allow_container);
  CypherType pick_elem_type();
  ExprPtr gen_constant(const CypherType& want);
  ExprPtr gen_binary(const CypherType& want, unsigned budget);
  ExprPtr gen_fn_call(const CypherType& want, unsigned budget);
  ExprPtr gen_subquery_expr(bool count_form);
  ExprPtr gen_aggregate();

  std::string fresh_variable();
  std::string fresh_label();
  std::string fresh_property_key();

  bool pattern_var_visible() const;
  std::size_t pick(std::size_t n, const char* tag);
  std::int64_t spread(std::int64_t lo, std::int64_t hi, const char* tag);

  const GenConfig& cfg_;
  RandomSource& rng_;
  GenTrace* trace_;
  QueryContext ctx_;
  GraphSchema schema_;
  std::set<std::string> used_vars_;
  std::set<std::string> used_labels_;
  std::set<std::string> used_props_;
  unsigned subquery_depth_ = 0;
};

// Full-query generation (Generator convenience wrappers).
Query gen_query(const GenConfig& cfg, RandomSource& rng,
                GenTrace* trace = nullptr);

// The query at campaign position (seed, index): deterministic and
// independent of any other index.
Query gen_query_at(const GenConfig& cfg, std::uint64_t seed,
                   std::uint64_t index);

// Single-clause entry point used by property tests: copies the states in,
// generates one clause of `requested` kind (or a drawn kind), and writes the
// advanced states back.
Clause gen_clause(QueryContext& ctx, GraphSchema& schema,
                  std::optional<ClauseKind> requested, const GenConfig& cfg,
                  RandomSource& rng);

// Expression entry point used by tests (EXISTS/COUNT effect checks).
ExprPtr gen_expression(QueryContext& ctx, GraphSchema& schema,
                       const CypherType& want, const GenConfig& cfg,
                       RandomSource& rng);

}  // namespace cypherforge
