#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <utility>
#include <vector>

#include "cypherforge/state.hpp"
#include "golden.hpp"

using namespace cypherforge;

namespace {

bool same_effect(ClauseEffect a, ClauseEffect b) {
  return a.context == b.context && a.labels == b.labels &&
         a.properties == b.properties && a.opens_scope == b.opens_scope;
}

std::vector<std::pair<std::string, CypherType::Kind>> visible_of(
    const QueryContext& ctx) {
  std::vector<std::pair<std::string, CypherType::Kind>> out;
  for (const auto& e : ctx.visible_entries())
    out.emplace_back(e.name, e.type.kind());
  return out;
}

struct Event {
  enum class What { Enter, Apply, Close };
  What what;
  ClauseKind kind;
  std::vector<std::string> removed;
  std::vector<std::pair<std::string, CypherType::Kind>> visible;
  GraphSchema schema;
};

struct Recorder : StateObserver {
  std::vector<Event> events;

  void on_scope_entered(ClauseKind k, ScopeId, const QueryContext& ctx,
                        const GraphSchema& s) override {
    events.push_back({Event::What::Enter, k, {}, visible_of(ctx), s});
  }
  void on_clause_applied(const Clause& c, const QueryContext& ctx,
                         const GraphSchema& s) override {
    events.push_back({Event::What::Apply, c.kind(), {}, visible_of(ctx), s});
  }
  void on_scope_closed(ClauseKind k, ScopeId,
                       const std::vector<std::string>& removed,
                       const QueryContext& ctx,
                       const GraphSchema& s) override {
    events.push_back({Event::What::Close, k, removed, visible_of(ctx), s});
  }
};

}  // namespace

TEST_CASE("clause effect matrix") {
  auto expect = [](ClauseKind k, Effect c, Effect l, Effect p, bool scope) {
    CAPTURE(to_string(k));
    CHECK(same_effect(clause_effect(k), ClauseEffect{c, l, p, scope}));
  };
  expect(ClauseKind::Match, Effect::Add, Effect::None, Effect::None, false);
  expect(ClauseKind::Create, Effect::Add, Effect::Add, Effect::Add, false);
  expect(ClauseKind::Merge, Effect::Add, Effect::Add, Effect::Add, false);
  expect(ClauseKind::Delete, Effect::None, Effect::None, Effect::None, false);
  expect(ClauseKind::Remove, Effect::None, Effect::Remove, Effect::Remove,
         false);
  expect(ClauseKind::Set, Effect::None, Effect::AddRemove, Effect::AddRemove,
         false);
  expect(ClauseKind::Unwind, Effect::Add, Effect::None, Effect::None, false);
  expect(ClauseKind::With, Effect::Add, Effect::None, Effect::None, false);
  expect(ClauseKind::Return, Effect::Add, Effect::None, Effect::None, false);
  for (ClauseKind k : {ClauseKind::Foreach, ClauseKind::Call,
                       ClauseKind::Union, ClauseKind::Exists,
                       ClauseKind::Count})
    expect(k, Effect::AddRemove, Effect::AddRemove, Effect::AddRemove, true);

  // Aliases share their base row.
  CHECK(same_effect(clause_effect(ClauseKind::OptionalMatch),
                    clause_effect(ClauseKind::Match)));
  CHECK(same_effect(clause_effect(ClauseKind::DetachDelete),
                    clause_effect(ClauseKind::Delete)));
}

TEST_CASE("query context: declaration and lookup") {
  QueryContext ctx = QueryContext::empty();
  CHECK(ctx.scope_depth() == 1);
  CHECK(ctx.visible_entries().empty());
  CHECK_FALSE(ctx.visible("x"));
  CHECK(ctx.find("x") == nullptr);

  ctx.declare("x", CypherType::node());
  CHECK(ctx.visible("x"));
  REQUIRE(ctx.find("x") != nullptr);
  CHECK(ctx.find("x")->type == CypherType::node());
  CHECK_THROWS_AS(ctx.declare("x", CypherType::integer()), ContractError);
}

TEST_CASE("query context: plain scopes keep outer entries visible") {
  QueryContext ctx = QueryContext::empty();
  ctx.declare("outer", CypherType::integer());
  ScopeId inner = ctx.enter_scope(false);
  CHECK(ctx.visible("outer"));
  ctx.declare("a", CypherType::node());
  ctx.declare("b", CypherType::relationship());
  auto removed = ctx.close_scope(inner);
  CHECK(removed == std::vector<std::string>{"a", "b"});
  CHECK(ctx.visible("outer"));
  CHECK_FALSE(ctx.visible("a"));
}

TEST_CASE("query context: barrier scopes hide outer entries") {
  QueryContext ctx = QueryContext::empty();
  ctx.declare("outer", CypherType::integer());
  ScopeId inner = ctx.enter_scope(true);
  CHECK_FALSE(ctx.visible("outer"));
  CHECK(ctx.visible_entries().empty());
  // A masked name may be redeclared inside the barrier.
  ctx.declare("outer", CypherType::string());
  CHECK(ctx.find("outer")->type == CypherType::string());
  ctx.close_scope(inner);
  CHECK(ctx.find("outer")->type == CypherType::integer());
}

TEST_CASE("query context: scope closing contracts") {
  QueryContext ctx = QueryContext::empty();
  CHECK_THROWS_AS(ctx.close_scope(ctx.innermost_scope()), ContractError);
  ScopeId a = ctx.enter_scope(false);
  ctx.enter_scope(false);
  CHECK_THROWS_AS(ctx.close_scope(a), ContractError);
}

TEST_CASE("query context: projection replacement respects barriers") {
  QueryContext ctx = QueryContext::empty();
  ctx.declare("outer", CypherType::integer());
  ScopeId inner = ctx.enter_scope(true);
  ctx.declare("tmp", CypherType::integer());
  ctx.replace_visible({{"col", CypherType::string(), ScopeId{}}});
  CHECK(visible_of(ctx) ==
        std::vector<std::pair<std::string, CypherType::Kind>>{
            {"col", CypherType::Kind::String}});
  ctx.close_scope(inner);
  // The replacement only consumed entries inside the barrier.
  CHECK(ctx.visible("outer"));
}

TEST_CASE("graph schema keeps the first type of a property key") {
  GraphSchema s;
  CHECK(s.property_type("n0") == nullptr);
  s.add_property("n0", CypherType::integer());
  s.add_property("n0", CypherType::string());
  REQUIRE(s.property_type("n0") != nullptr);
  CHECK(*s.property_type("n0") == CypherType::integer());
  s.add_node_label("A");
  s.add_rel_type("A");
  CHECK(s.node_labels.count("A") == 1);
  CHECK(s.rel_types.count("A") == 1);
}

TEST_CASE("list_element_type") {
  CHECK(list_element_type(CypherType::list(CypherType::integer())) ==
        CypherType::integer());
  CHECK(list_element_type(CypherType::list(CypherType::any())) ==
        CypherType::null());
  CHECK(list_element_type(CypherType::null()) == CypherType::null());
  CHECK(list_element_type(CypherType::integer()) == CypherType::null());
}

TEST_CASE("subquery walk reports the staged state transitions") {
  QueryContext ctx = QueryContext::empty();
  GraphSchema schema;
  Recorder rec;
  apply_query(ctx, schema, golden::call_subquery_query(), &rec);

  REQUIRE(rec.events.size() == 7);
  using W = Event::What;
  const auto& e = rec.events;

  // Entering the CALL body: nothing visible, nothing introduced.
  CHECK(e[0].what == W::Enter);
  CHECK(e[0].kind == ClauseKind::Call);
  CHECK(e[0].visible.empty());
  CHECK(e[0].schema == GraphSchema{});

  // WITH 0 AS x binds x inside the body.
  CHECK(e[1].what == W::Apply);
  CHECK(e[1].kind == ClauseKind::With);
  CHECK(e[1].visible ==
        std::vector<std::pair<std::string, CypherType::Kind>>{
            {"x", CypherType::Kind::Integer}});
  CHECK(e[1].schema == GraphSchema{});

  // CREATE introduces the relationship type and the property key.
  GraphSchema created;
  created.add_rel_type("A");
  created.add_property("n0", CypherType::integer());
  CHECK(e[2].what == W::Apply);
  CHECK(e[2].kind == ClauseKind::Create);
  CHECK(e[2].visible ==
        std::vector<std::pair<std::string, CypherType::Kind>>{
            {"x", CypherType::Kind::Integer}});
  CHECK(e[2].schema == created);

  // Closing the barrier removes x; the schema survives.
  CHECK(e[3].what == W::Close);
  CHECK(e[3].kind == ClauseKind::Call);
  CHECK(e[3].removed == std::vector<std::string>{"x"});
  CHECK(e[3].visible.empty());
  CHECK(e[3].schema == created);

  // The CALL clause itself, then MATCH and RETURN, leave the state alone.
  CHECK(e[4].what == W::Apply);
  CHECK(e[4].kind == ClauseKind::Call);
  CHECK(e[5].what == W::Apply);
  CHECK(e[5].kind == ClauseKind::Match);
  CHECK(e[6].what == W::Apply);
  CHECK(e[6].kind == ClauseKind::Return);
  for (int i = 4; i <= 6; ++i) {
    CHECK(e[i].visible.empty());
    CHECK(e[i].schema == created);
  }

  CHECK(ctx.scope_depth() == 1);
  CHECK(schema == created);
}

TEST_CASE("foreach walk opens a plain scope and cleans the loop variable") {
  QueryContext ctx = QueryContext::empty();
  GraphSchema schema;
  Recorder rec;
  apply_query(ctx, schema, golden::projection_pipeline_query(), &rec);

  std::vector<Event> foreach_events;
  for (const auto& ev : rec.events)
    if ((ev.what == Event::What::Enter || ev.what == Event::What::Close) &&
        ev.kind == ClauseKind::Foreach)
      foreach_events.push_back(ev);
  REQUIRE(foreach_events.size() == 2);
  // The outer projection and the CALL's returned column both stay visible
  // inside the plain scope.
  CHECK(foreach_events[0].visible ==
        std::vector<std::pair<std::string, CypherType::Kind>>{
            {"n0", CypherType::Kind::List},
            {"n3", CypherType::Kind::Integer}});
  CHECK(foreach_events[1].removed == std::vector<std::string>{"n4"});
  CHECK(ctx.scope_depth() == 1);
  CHECK(ctx.visible("n3"));
}

TEST_CASE("union walk runs both arms in barrier scopes") {
  UnionClause u;
  u.left = golden::unit_query();
  u.right = golden::unit_query();
  Query q;
  q.clauses.push_back(Clause{std::move(u)});

  QueryContext ctx = QueryContext::empty();
  ctx.declare("outer", CypherType::integer());
  GraphSchema schema;
  Recorder rec;
  apply_query(ctx, schema, q, &rec);

  int enters = 0, closes = 0;
  for (const auto& ev : rec.events) {
    if (ev.kind != ClauseKind::Union) continue;
    if (ev.what == Event::What::Enter) {
      ++enters;
      CHECK(ev.visible.empty());  // barrier hides the outer binding
    }
    if (ev.what == Event::What::Close) ++closes;
  }
  CHECK(enters == 2);
  CHECK(closes == 2);
  CHECK(ctx.visible("outer"));
  CHECK(ctx.scope_depth() == 1);
}

TEST_CASE("unwind binds the element type of its list") {
  UnwindClause u;
  u.list = expr::list({expr::int_lit(1)},
                      CypherType::list(CypherType::integer()));
  u.alias = "i";
  QueryContext ctx = QueryContext::empty();
  GraphSchema schema;
  apply_clause(ctx, schema, Clause{std::move(u)});
  CHECK(ctx.find("i")->type == CypherType::integer());

  UnwindClause n;
  n.list = expr::null_lit();
  n.alias = "j";
  apply_clause(ctx, schema, Clause{std::move(n)});
  CHECK(ctx.find("j")->type == CypherType::null());
}

TEST_CASE("dependency counts for the golden queries") {
  DependencyCount d = count_dependencies(golden::merge_reuse_query());
  // Three rebindings of x in the MERGE chain, DELETE y, x in CREATE, and a
  // second DELETE y (deletion does not revoke visibility).
  CHECK(d.context == 6);
  // Two reuses of relationship type A after its introduction.
  CHECK(d.schema == 2);
  CHECK(d.total() == 8);

  d = count_dependencies(golden::unit_query());
  CHECK(d.context == 0);
  CHECK(d.schema == 0);

  // x inside the CALL body, plus the MATCH reading the introduced key n0.
  d = count_dependencies(golden::call_subquery_query());
  CHECK(d.context == 1);
  CHECK(d.schema == 1);

  // x in the second UNWIND, n2 in the body RETURN, n3 inside the FOREACH.
  d = count_dependencies(golden::projection_pipeline_query());
  CHECK(d.context == 3);
  CHECK(d.schema == 0);

  // The existential pattern reads the property key the MERGE introduced.
  d = count_dependencies(golden::merge_exists_query());
  CHECK(d.context == 0);
  CHECK(d.schema == 1);
}
