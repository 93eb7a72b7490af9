#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cypherforge/generator.hpp"
#include "cypherforge/render.hpp"
#include "cypherforge/validator.hpp"
#include "golden.hpp"

using namespace cypherforge;

namespace {

std::vector<std::pair<std::string, CypherType::Kind>> visible_of(
    const QueryContext& ctx) {
  std::vector<std::pair<std::string, CypherType::Kind>> out;
  for (const auto& e : ctx.visible_entries())
    out.emplace_back(e.name, e.type.kind());
  return out;
}

struct GenRecorder : GenTrace {
  std::vector<ClauseKind> kinds;
  std::vector<std::string> clause_texts;
  std::vector<std::vector<std::pair<std::string, CypherType::Kind>>> contexts;
  std::vector<GraphSchema> schemas;
  std::vector<std::pair<ClauseKind, std::vector<std::string>>> cleaned;

  void on_kind_selected(ClauseKind k) override { kinds.push_back(k); }
  void on_clause_generated(const Clause& c, const QueryContext& ctx,
                           const GraphSchema& s) override {
    clause_texts.push_back(render(c));
    contexts.push_back(visible_of(ctx));
    schemas.push_back(s);
  }
  void on_scope_cleaned(ClauseKind k,
                        const std::vector<std::string>& removed) override {
    cleaned.emplace_back(k, removed);
  }
};

// The decision script that builds the golden CALL-subquery pipeline from an
// empty state: subquery first, a projection binding x, a write introducing
// relationship type A and key n0 through x, the barrier dropping x, then a
// read reusing n0 against fresh labels, and a bare RETURN 0.
ScriptedRandom call_subquery_script() {
  ScriptedRandom s;
  s.unit_step("clause-kind", 0.9)      // top level: CALL
      .unit_step("clause-kind", 0.7)   // body: WITH
      .draw_step("with-new-count", 0)  // one fresh column
      .draw_step("expr-type", 0)       // integer
      .draw_step("expr-form", 0)       // constant
      .draw_step("const-int", 0)       // 0 AS x
      .unit_step("with-aggregate", 0.9)
      .unit_step("with-orderby", 0.9)
      .unit_step("with-where", 0.9)
      .unit_step("call-continue", 0.3)  // body continues
      .unit_step("clause-kind", 0.3)    // body: CREATE
      .draw_step("pattern-rels", 1)     // one relationship
      .unit_step("node-binding", 0.9)   // anonymous node
      .draw_step("node-label-count", 0)
      .draw_step("prop-count", 0)
      .unit_step("rel-binding", 0.9)
      .draw_step("rel-direction", 0)  // ->, fresh type A (no draw)
      .draw_step("prop-count", 1)     // fresh key n0 (no draw)
      .unit_step("expr-reuse", 0.3)   // value: reuse x (sole candidate)
      .unit_step("node-binding", 0.9)
      .draw_step("node-label-count", 0)
      .draw_step("prop-count", 0)
      .unit_step("call-continue", 0.9)  // body stops after the write
      .unit_step("call-return", 0.9)    // CREATE already closes the body
      .unit_step("continue", 0.5)
      .unit_step("clause-kind", 0.05)  // top level: MATCH
      .draw_step("pattern-rels", 1)
      .unit_step("node-binding", 0.9)
      .draw_step("node-label-form", 0)  // unlabeled
      .draw_step("prop-count", 0)
      .unit_step("rel-binding", 0.9)
      .draw_step("rel-direction", 0)
      .draw_step("rel-type-form", 3)   // conjunction
      .unit_step("label-reuse", 0.9)   // fresh B
      .unit_step("label-reuse", 0.9)   // fresh C
      .draw_step("prop-count", 1)
      .unit_step("prop-key-reuse", 0.3)  // reuse n0 (sole candidate)
      .draw_step("expr-form", 0)
      .draw_step("const-int", 0)
      .unit_step("node-binding", 0.9)
      .draw_step("node-label-form", 4)  // negated conjunction: fresh D, E
      .draw_step("prop-count", 0)
      .unit_step("match-where", 0.9)
      .unit_step("continue", 0.5)
      .unit_step("clause-kind", 0.73)  // top level: RETURN
      .draw_step("return-new-count", 0)
      .draw_step("expr-type", 0)
      .draw_step("expr-form", 0)
      .draw_step("const-int", 0)
      .unit_step("return-aggregate", 0.9)
      .unit_step("return-orderby", 0.9);
  return s;
}

}  // namespace

TEST_CASE("scripted construction of the golden subquery pipeline") {
  ScriptedRandom script = call_subquery_script();
  GenConfig cfg;
  GenRecorder rec;
  Query q = gen_query(cfg, script, &rec);

  // The script is consumed exactly; every decision was accounted for.
  CHECK(script.exhausted());

  // Step 1-2: from an empty state, the subquery kind is drawn first.
  REQUIRE(rec.kinds.size() == 5);
  CHECK(rec.kinds[0] == ClauseKind::Call);

  // Step 3: the body projection declares x.
  CHECK(rec.kinds[1] == ClauseKind::With);
  REQUIRE(rec.contexts.size() == 5);
  CHECK(rec.clause_texts[0] == "WITH 0 AS x");
  CHECK(rec.contexts[0] ==
        std::vector<std::pair<std::string, CypherType::Kind>>{
            {"x", CypherType::Kind::Integer}});
  CHECK(rec.schemas[0] == GraphSchema{});

  // Step 4: the write consumes x and introduces schema entries.
  CHECK(rec.kinds[2] == ClauseKind::Create);
  CHECK(rec.clause_texts[1] == "CREATE ()-[:A {n0:x}]->()");
  GraphSchema written;
  written.add_rel_type("A");
  written.add_property("n0", CypherType::integer());
  CHECK(rec.schemas[1] == written);

  // Step 5: closing the barrier removes x; the schema survives.
  REQUIRE(rec.cleaned.size() == 1);
  CHECK(rec.cleaned[0].first == ClauseKind::Call);
  CHECK(rec.cleaned[0].second == std::vector<std::string>{"x"});
  CHECK(rec.contexts[2].empty());
  CHECK(rec.schemas[2] == written);

  // Step 6: the read reuses n0 against the emptied context, then RETURN
  // finishes the query.
  CHECK(rec.kinds[3] == ClauseKind::Match);
  CHECK(rec.clause_texts[3] == "MATCH ()-[:(B&C) {n0:0}]->(:!(D&E))");
  CHECK(rec.kinds[4] == ClauseKind::Return);
  CHECK(rec.clause_texts[4] == "RETURN 0");

  CHECK(render(q) == golden::kCallSubqueryText);
  CHECK(equal(q, golden::call_subquery_query()));
}

TEST_CASE("scripted fallback appends RETURN 0 after a non-terminal ending") {
  ScriptedRandom s;
  s.unit_step("clause-kind", 0.0)  // MATCH
      .draw_step("pattern-rels", 0)
      .unit_step("node-binding", 0.9)
      .draw_step("node-label-form", 0)
      .draw_step("prop-count", 0)
      .unit_step("match-where", 0.9)
      .unit_step("continue", 0.99)  // stop; MATCH cannot close a query
      .draw_step("return-new-count", 0)
      .draw_step("expr-type", 0)
      .draw_step("expr-form", 0)
      .draw_step("const-int", 0)
      .unit_step("return-aggregate", 0.9)
      .unit_step("return-orderby", 0.9);
  GenConfig cfg;
  Query q = gen_query(cfg, s);
  CHECK(s.exhausted());
  CHECK(render(q) == "MATCH ()\nRETURN 0");
}

TEST_CASE("terminal kinds") {
  for (ClauseKind k :
       {ClauseKind::Return, ClauseKind::Create, ClauseKind::Merge,
        ClauseKind::Delete, ClauseKind::DetachDelete, ClauseKind::Set,
        ClauseKind::Remove, ClauseKind::Foreach, ClauseKind::Union})
    CHECK(terminal_kind(k));
  for (ClauseKind k : {ClauseKind::Match, ClauseKind::OptionalMatch,
                       ClauseKind::Unwind, ClauseKind::With, ClauseKind::Call})
    CHECK_FALSE(terminal_kind(k));
}

TEST_CASE("legal clause kinds by position") {
  GenConfig cfg;
  QueryContext no_entity = QueryContext::empty();
  QueryContext with_entity = QueryContext::empty();
  with_entity.declare("a", CypherType::node());
  using K = ClauseKind;

  GenPosition top;  // top_level, index 0
  CHECK(legal_clause_kinds(no_entity, cfg, top, 0) ==
        std::vector<K>{K::Match, K::OptionalMatch, K::Create, K::Merge,
                       K::Unwind, K::With, K::Return, K::Foreach, K::Call,
                       K::Union});
  CHECK(legal_clause_kinds(with_entity, cfg, top, 0) ==
        std::vector<K>{K::Match, K::OptionalMatch, K::Create, K::Merge,
                       K::Delete, K::Remove, K::Set, K::Unwind, K::With,
                       K::Return, K::Foreach, K::Call, K::Union});

  // UNION only leads a top-level query outside any subquery.
  GenPosition top1 = top;
  top1.index = 1;
  auto at1 = legal_clause_kinds(with_entity, cfg, top1, 0);
  CHECK(std::find(at1.begin(), at1.end(), K::Union) == at1.end());
  auto nested = legal_clause_kinds(with_entity, cfg, top, 1);
  CHECK(std::find(nested.begin(), nested.end(), K::Union) == nested.end());

  // Subquery depth exhausts FOREACH and CALL.
  auto deep = legal_clause_kinds(no_entity, cfg, top, cfg.max_subquery_depth);
  CHECK(std::find(deep.begin(), deep.end(), K::Foreach) == deep.end());
  CHECK(std::find(deep.begin(), deep.end(), K::Call) == deep.end());

  // RETURN stays top-level.
  GenPosition body = top;
  body.top_level = false;
  auto inner = legal_clause_kinds(no_entity, cfg, body, 1);
  CHECK(std::find(inner.begin(), inner.end(), K::Return) == inner.end());

  // FOREACH bodies only update.
  GenPosition foreach_pos = body;
  foreach_pos.inside_foreach = true;
  CHECK(legal_clause_kinds(no_entity, cfg, foreach_pos, 1) ==
        std::vector<K>{K::Create, K::Merge, K::Foreach});
  CHECK(legal_clause_kinds(with_entity, cfg, foreach_pos, 1) ==
        std::vector<K>{K::Create, K::Merge, K::Delete, K::Remove, K::Set,
                       K::Foreach});
  CHECK(legal_clause_kinds(with_entity, cfg, foreach_pos,
                           cfg.max_subquery_depth) ==
        std::vector<K>{K::Create, K::Merge, K::Delete, K::Remove, K::Set});

  // The final budget slot only admits closing kinds.
  GenPosition last = top;
  last.last_slot = true;
  CHECK(legal_clause_kinds(no_entity, cfg, last, 0) ==
        std::vector<K>{K::Create, K::Merge, K::Return, K::Foreach, K::Union});

  // Zero weight disables a kind (and its alias).
  GenConfig muted = cfg;
  muted.clause_weights[K::Match] = 0.0;
  auto no_match = legal_clause_kinds(no_entity, muted, top, 0);
  CHECK(std::find(no_match.begin(), no_match.end(), K::Match) ==
        no_match.end());
  CHECK(std::find(no_match.begin(), no_match.end(), K::OptionalMatch) ==
        no_match.end());

  // When nothing else is legal the fallback is RETURN.
  GenConfig bare = cfg;
  bare.clause_weights[K::Create] = 0.0;
  bare.clause_weights[K::Merge] = 0.0;
  bare.clause_weights[K::Foreach] = 0.0;
  CHECK(legal_clause_kinds(no_entity, bare, foreach_pos, 0) ==
        std::vector<K>{K::Return});
}

TEST_CASE("generation is deterministic per (seed, index)") {
  GenConfig cfg;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Query a = gen_query_at(cfg, 42, i);
    Query b = gen_query_at(cfg, 42, i);
    CHECK(equal(a, b));
    CHECK(render(a) == render(b));
  }
  CHECK(render(gen_query_at(cfg, 42, 0)) != render(gen_query_at(cfg, 42, 1)));
  CHECK(render(gen_query_at(cfg, 42, 0)) != render(gen_query_at(cfg, 43, 0)));
}

TEST_CASE("generated queries close with a terminal clause within budget") {
  GenConfig cfg;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Query q = gen_query_at(cfg, 7, i);
    REQUIRE_FALSE(q.clauses.empty());
    CHECK(q.clauses.size() <= cfg.max_clauses);
    CHECK(terminal_kind(q.clauses.back().kind()));
  }
}

// ─── effect conformance ──────────────────────────────────────────────────────

namespace {

struct StatePair {
  QueryContext ctx = QueryContext::empty();
  GraphSchema schema;
};

// Mixed starting states so every kind is generable and reuse paths fire.
StatePair seeded_state(std::uint64_t i) {
  StatePair s;
  s.ctx.declare("a", CypherType::node());
  if (i % 2) s.ctx.declare("r", CypherType::relationship());
  if (i % 3 == 0) s.ctx.declare("v", CypherType::integer());
  if (i % 5 == 0) s.ctx.declare("w", CypherType::list(CypherType::string()));
  if (i % 2) s.schema.add_node_label("A");
  if (i % 3 == 0) s.schema.add_rel_type("R");
  if (i % 4 == 0) s.schema.add_property("n0", CypherType::integer());
  if (i % 7 == 0) s.schema.add_property("n1", CypherType::string());
  return s;
}

template <typename Set>
bool subset(const Set& small, const Set& big) {
  for (const auto& x : small)
    if (!big.count(x)) return false;
  return true;
}

bool keys_subset(const std::map<std::string, CypherType>& small,
                 const std::map<std::string, CypherType>& big) {
  for (const auto& [k, v] : small)
    if (!big.count(k)) return false;
  return true;
}

bool entries_subset(const QueryContext& before, const QueryContext& after) {
  for (const auto& [name, kind] : visible_of(before)) {
    const auto* found = after.find(name);
    if (!found || found->type.kind() != kind) return false;
  }
  return true;
}

// The state transition a generated clause of this kind is permitted to make.
void check_effect_row(ClauseKind kind, const Clause& c,
                      const StatePair& before, const StatePair& after) {
  CAPTURE(to_string(kind));
  ClauseEffect row = clause_effect(kind);

  switch (row.context) {
    case Effect::None:
      CHECK(visible_of(before.ctx) == visible_of(after.ctx));
      break;
    case Effect::Add:
      if (base_kind(kind) == ClauseKind::With ||
          base_kind(kind) == ClauseKind::Return) {
        // Projection replacement: afterwards exactly the aliased columns and
        // kept variables are visible.
        const std::vector<Projection>* items = nullptr;
        if (const auto* w = std::get_if<WithClause>(&c.node))
          items = &w->items;
        else
          items = &std::get<ReturnClause>(c.node).items;
        std::vector<std::string> expect;
        for (const auto& item : *items)
          if (item.alias ||
              std::holds_alternative<Expression::VarRef>(item.expr->node))
            expect.push_back(item.column_name());
        std::vector<std::string> got;
        for (const auto& [name, k2] : visible_of(after.ctx))
          got.push_back(name);
        CHECK(expect == got);
      } else {
        CHECK(entries_subset(before.ctx, after.ctx));
      }
      break;
    case Effect::AddRemove:
      if (base_kind(kind) == ClauseKind::Call) {
        // Imports and returned columns add; outer bindings survive.
        CHECK(entries_subset(before.ctx, after.ctx));
      } else {
        // FOREACH / UNION: inner bindings are cleaned on scope exit.
        CHECK(visible_of(before.ctx) == visible_of(after.ctx));
      }
      break;
    case Effect::Remove:
      CHECK(entries_subset(after.ctx, before.ctx));
      break;
  }

  auto check_labels = [&](Effect e) {
    switch (e) {
      case Effect::None:
        CHECK(before.schema.node_labels == after.schema.node_labels);
        CHECK(before.schema.rel_types == after.schema.rel_types);
        break;
      case Effect::Add:
        CHECK(subset(before.schema.node_labels, after.schema.node_labels));
        CHECK(subset(before.schema.rel_types, after.schema.rel_types));
        break;
      case Effect::Remove:
        CHECK(subset(after.schema.node_labels, before.schema.node_labels));
        CHECK(subset(after.schema.rel_types, before.schema.rel_types));
        break;
      case Effect::AddRemove:
        break;  // both directions permitted
    }
  };
  auto check_props = [&](Effect e) {
    switch (e) {
      case Effect::None:
        CHECK(before.schema.properties == after.schema.properties);
        break;
      case Effect::Add:
        CHECK(keys_subset(before.schema.properties, after.schema.properties));
        break;
      case Effect::Remove:
        CHECK(keys_subset(after.schema.properties, before.schema.properties));
        break;
      case Effect::AddRemove:
        break;
    }
  };
  check_labels(row.labels);
  check_props(row.properties);
}

}  // namespace

TEST_CASE("generated clauses respect the effect matrix and match the state "
          "walker") {
  GenConfig cfg;
  const std::vector<ClauseKind> clause_kinds = {
      ClauseKind::Match,  ClauseKind::Create, ClauseKind::Merge,
      ClauseKind::Delete, ClauseKind::Remove, ClauseKind::Set,
      ClauseKind::Unwind, ClauseKind::With,   ClauseKind::Return,
      ClauseKind::Foreach, ClauseKind::Call,  ClauseKind::Union};
  const int cases = 60;

  for (std::size_t ki = 0; ki < clause_kinds.size(); ++ki) {
    ClauseKind kind = clause_kinds[ki];
    for (int i = 0; i < cases; ++i) {
      StatePair before = seeded_state(static_cast<std::uint64_t>(i));
      StatePair gen_side = before;
      Pcg rng = stream_for(1000 + ki, static_cast<std::uint64_t>(i));
      Clause c = gen_clause(gen_side.ctx, gen_side.schema, kind, cfg, rng);
      CHECK(base_kind(c.kind()) == kind);

      // Replaying the clause through the state walker reproduces the
      // generator's own bookkeeping.
      StatePair walk_side = before;
      apply_clause(walk_side.ctx, walk_side.schema, c);
      CHECK(visible_of(gen_side.ctx) == visible_of(walk_side.ctx));
      CHECK(gen_side.schema == walk_side.schema);

      check_effect_row(kind, c, before, walk_side);
      CHECK(walk_side.ctx.scope_depth() == 1);
    }
  }
}

TEST_CASE("subquery expressions leave the outer state untouched") {
  GenConfig cfg;
  int exists_seen = 0, count_seen = 0;
  for (std::uint64_t i = 0; exists_seen < 60 || count_seen < 60; ++i) {
    REQUIRE(i < 20000);  // the forms keep coming up at this want/weight mix
    QueryContext ctx = QueryContext::empty();
    GraphSchema schema;
    Pcg rng = stream_for(2000, i);
    bool want_bool = i % 2 == 0;
    ExprPtr e = gen_expression(
        ctx, schema, want_bool ? CypherType::boolean() : CypherType::integer(),
        cfg, rng);
    CHECK(ctx.visible_entries().empty());
    CHECK(ctx.scope_depth() == 1);
    CHECK(schema == GraphSchema{});
    if (std::holds_alternative<Expression::ExistsSub>(e->node)) ++exists_seen;
    if (std::holds_alternative<Expression::CountSub>(e->node)) ++count_seen;
  }
}
