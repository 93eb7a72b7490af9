#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cypherforge/ast.hpp"
#include "cypherforge/render.hpp"
#include "golden.hpp"

using namespace cypherforge;

TEST_CASE("golden queries render to their canonical bytes") {
  CHECK(render(golden::unit_query()) == golden::kUnitText);
  CHECK(render(golden::merge_reuse_query()) == golden::kMergeReuseText);
  CHECK(render(golden::call_subquery_query()) == golden::kCallSubqueryText);
  CHECK(render(golden::unwind_fn_query()) == golden::kUnwindFnText);
  CHECK(render(golden::merge_exists_query()) == golden::kMergeExistsText);
  CHECK(render(golden::projection_pipeline_query()) ==
        golden::kProjectionPipelineText);
}

TEST_CASE("byte_size matches the frozen sizes") {
  CHECK(byte_size(golden::unit_query()) == 8);
  CHECK(byte_size(golden::merge_exists_query()) == 60);
  CHECK(byte_size(golden::projection_pipeline_query()) == 153);
}

TEST_CASE("clause_count walks nested bodies") {
  CHECK(clause_count(golden::unit_query()) == 1);
  CHECK(clause_count(golden::merge_reuse_query()) == 4);
  // CALL + two body clauses + MATCH + RETURN.
  CHECK(clause_count(golden::call_subquery_query()) == 5);
  // WITH + CALL(4 body) + FOREACH(1 body).
  CHECK(clause_count(golden::projection_pipeline_query()) == 8);

  UnionClause u;
  u.left = golden::unit_query();
  u.right = golden::unit_query();
  Query q;
  q.clauses.push_back(Clause{std::move(u)});
  CHECK(clause_count(q) == 3);
}

TEST_CASE("structural equality ignores pointer identity") {
  Query a = golden::call_subquery_query();
  Query b = golden::call_subquery_query();
  CHECK(equal(a, b));

  Query c = golden::unit_query();
  CHECK_FALSE(equal(a, c));

  CHECK(equal(*expr::int_lit(3), *expr::int_lit(3)));
  CHECK_FALSE(equal(*expr::int_lit(3), *expr::int_lit(4)));
  CHECK_FALSE(equal(*expr::int_lit(0), *expr::float_lit(0.0)));
}

TEST_CASE("base_kind folds the aliases") {
  CHECK(base_kind(ClauseKind::OptionalMatch) == ClauseKind::Match);
  CHECK(base_kind(ClauseKind::DetachDelete) == ClauseKind::Delete);
  CHECK(base_kind(ClauseKind::Merge) == ClauseKind::Merge);
  CHECK(effect_kinds().size() == 14);
}

TEST_CASE("clause kind names") {
  CHECK(std::string(to_string(ClauseKind::OptionalMatch)) ==
        "OPTIONAL MATCH");
  CHECK(std::string(to_string(ClauseKind::DetachDelete)) == "DETACH DELETE");
  CHECK(std::string(to_string(ClauseKind::Foreach)) == "FOREACH");
}

TEST_CASE("float formatting is deterministic and round-trippable") {
  CHECK(format_float(0.5) == "0.5");
  CHECK(format_float(-0.5) == "-0.5");
  CHECK(format_float(2.0) == "2.0");
  CHECK(format_float(1.5) == "1.5");
  CHECK(format_float(0.0) == "0.0");
}

TEST_CASE("string quoting escapes") {
  CHECK(quote_string("ab") == "'ab'");
  CHECK(quote_string("") == "''");
  CHECK(quote_string("a'b") == "'a\\'b'");
  CHECK(quote_string("a\\b") == "'a\\\\b'");
  CHECK(quote_string("a\nb") == "'a\\nb'");
  CHECK(quote_string("a\tb") == "'a\\tb'");
}

TEST_CASE("expression rendering forms") {
  auto x = expr::var("x", CypherType::integer());
  CHECK(render(*expr::unary(UnaryOp::Minus, x, CypherType::integer())) ==
        "(-x)");
  CHECK(render(*expr::unary(UnaryOp::Not, expr::bool_lit(true),
                            CypherType::boolean())) == "(NOT true)");
  CHECK(render(*expr::binary(BinaryOp::Neq, x, expr::int_lit(1),
                             CypherType::boolean())) == "(x <> 1)");
  CHECK(render(*expr::list({expr::int_lit(1), expr::int_lit(2)},
                           CypherType::list(CypherType::integer()))) ==
        "[1, 2]");
  CHECK(render(*expr::map({{"k0", expr::int_lit(1)}})) == "{k0:1}");
  CHECK(render(*expr::map({})) == "{}");
  CHECK(render(*expr::fn("coalesce", {x, expr::int_lit(0)},
                         CypherType::integer())) == "coalesce(x, 0)");
  CHECK(render(*expr::prop(x, "n0", CypherType::any())) == "x.n0");
  CHECK(render(*expr::case_when({{expr::bool_lit(false), expr::int_lit(1)}},
                                expr::int_lit(2), CypherType::integer())) ==
        "CASE WHEN false THEN 1 ELSE 2 END");
  CHECK(render(*expr::null_lit()) == "null");
  CHECK(render(*expr::string_lit("ab")) == "'ab'");

  Pattern p;
  p.nodes.push_back(golden::node());
  CHECK(render(*expr::count(std::move(p))) == "COUNT {()}");
}

TEST_CASE("label expression rendering by position") {
  auto conj = LabelExpr::conj(LabelExpr::leaf("A"), LabelExpr::leaf("B"));
  // Relationship-type position parenthesizes composites.
  CHECK(render_label_expr(*conj, true) == "(A&B)");
  // Node-label position does not.
  CHECK(render_label_expr(*conj, false) == "A&B");
  CHECK(render_label_expr(*LabelExpr::leaf("A"), true) == "A");
  CHECK(render_label_expr(*LabelExpr::negation(LabelExpr::leaf("A")), true) ==
        "!A");
  CHECK(render_label_expr(*LabelExpr::negation(conj), false) == "!(A&B)");

  CHECK(conj->names() == std::vector<std::string>{"A", "B"});
  CHECK(LabelExpr::negation(conj)->names() ==
        std::vector<std::string>{"A", "B"});
}

TEST_CASE("pattern rendering covers binding/label/property combinations") {
  Pattern p;
  p.nodes.push_back(golden::node("a", LabelExpr::leaf("A"),
                                 {{"n0", expr::int_lit(1)}}));
  p.nodes.push_back(golden::node());
  p.rels.push_back(golden::rel(Direction::Left, LabelExpr::leaf("R"), "r"));
  CHECK(render(p) == "(a:A {n0:1})<-[r:R]-()");

  Pattern broken;
  broken.nodes.push_back(golden::node());
  broken.rels.push_back(golden::rel(Direction::Right));
  CHECK_THROWS_AS(broken.check(), ContractError);
  CHECK_THROWS_AS(Pattern{}.check(), ContractError);
}

TEST_CASE("clause rendering corners") {
  DeleteClause d;
  d.targets = {"a", "b"};
  d.detach = true;
  CHECK(render(Clause{d}) == "DETACH DELETE a, b");

  RemoveClause rm;
  rm.items.push_back(RemoveItem{"a", "n0", std::nullopt});
  rm.items.push_back(RemoveItem{"a", std::nullopt, "A"});
  CHECK(render(Clause{rm}) == "REMOVE a.n0, a:A");

  SetClause s;
  SetItem sp;
  sp.form = SetItem::Form::Property;
  sp.variable = "a";
  sp.key = "n0";
  sp.value = expr::int_lit(1);
  SetItem sl;
  sl.form = SetItem::Form::Label;
  sl.variable = "a";
  sl.key = "A";
  SetItem so;
  so.form = SetItem::Form::Overwrite;
  so.variable = "a";
  so.map = {{"n1", expr::int_lit(2)}};
  s.items = {sp, sl, so};
  CHECK(render(Clause{s}) == "SET a.n0 = 1, a:A, a = {n1:2}");

  MatchClause m;
  m.optional = true;
  m.pattern.nodes.push_back(golden::node("a"));
  m.where = expr::bool_lit(true);
  CHECK(render(Clause{m}) == "OPTIONAL MATCH (a) WHERE true");

  WithClause w;
  w.items.push_back(Projection{expr::var("a", CypherType::node()),
                               std::nullopt});
  w.order_by.push_back(OrderItem{expr::int_lit(0), true});
  w.where = expr::bool_lit(false);
  CHECK(render(Clause{w}) == "WITH a ORDER BY 0 DESC WHERE false");

  UnionClause u;
  u.left = golden::unit_query();
  u.right = golden::unit_query();
  u.all = true;
  CHECK(render(Clause{u}) == "RETURN 0\nUNION ALL\nRETURN 0");

  CallClause call;
  call.imports = {"a", "b"};
  call.body = golden::unit_query();
  CHECK(render(Clause{call}) == "CALL {\nWITH a, b\nRETURN 0\n}");
}

TEST_CASE("projection column names") {
  Projection aliased{expr::int_lit(0), "x"};
  CHECK(aliased.column_name() == "x");
  Projection plain{expr::var("y", CypherType::integer()), std::nullopt};
  CHECK(plain.column_name() == "y");
  Projection rendered{expr::int_lit(7), std::nullopt};
  CHECK(rendered.column_name() == "7");
}

TEST_CASE("constant_of produces the canonical zero value per type") {
  CHECK(render(*expr::constant_of(CypherType::integer())) == "0");
  CHECK(render(*expr::constant_of(CypherType::real())) == "0.0");
  CHECK(render(*expr::constant_of(CypherType::string())) == "''");
  CHECK(render(*expr::constant_of(CypherType::boolean())) == "false");
  CHECK(render(*expr::constant_of(
            CypherType::list(CypherType::integer()))) == "[]");
  CHECK(render(*expr::constant_of(CypherType::map())) == "{}");
  CHECK(render(*expr::constant_of(CypherType::node())) == "null");
  CHECK(render(*expr::constant_of(CypherType::null())) == "null");
}

TEST_CASE("result_columns follows the terminal clause") {
  CHECK(result_columns(golden::unit_query()) == 1);
  CHECK(result_columns(golden::call_subquery_query()) == 1);
  // A FOREACH-terminated query returns nothing.
  CHECK(result_columns(golden::projection_pipeline_query()) == 0);

  ReturnClause r;
  r.items.push_back(Projection{expr::int_lit(0), "a"});
  r.items.push_back(Projection{expr::int_lit(1), "b"});
  Query two;
  two.clauses.push_back(Clause{std::move(r)});
  CHECK(result_columns(two) == 2);

  UnionClause u;
  u.left = two;
  u.right = two;
  Query uq;
  uq.clauses.push_back(Clause{std::move(u)});
  CHECK(result_columns(uq) == 2);
}

TEST_CASE("age_wrap embeds the render with a matching column list") {
  CHECK(age_wrap(golden::unit_query(), "g") ==
        "SELECT * FROM cypher('g', $$\nRETURN 0\n$$) AS (c0 agtype);");
  // Zero result columns fall back to a single placeholder column.
  CHECK(age_wrap_text("CREATE ()", "g", 0) ==
        "SELECT * FROM cypher('g', $$\nCREATE ()\n$$) AS (result agtype);");
  CHECK(age_wrap_text("RETURN 0, 1", "g", 2) ==
        "SELECT * FROM cypher('g', $$\nRETURN 0, 1\n$$) AS (c0 agtype, c1 "
        "agtype);");
}

TEST_CASE("types: unification and element access") {
  CHECK(CypherType::null().unifies_with(CypherType::integer()));
  CHECK(CypherType::integer().unifies_with(CypherType::null()));
  CHECK(CypherType::any().unifies_with(CypherType::map()));
  CHECK_FALSE(CypherType::integer().unifies_with(CypherType::string()));
  CHECK(CypherType::list(CypherType::integer())
            .unifies_with(CypherType::list(CypherType::any())));
  CHECK_FALSE(CypherType::list(CypherType::integer())
                  .unifies_with(CypherType::list(CypherType::string())));
  CHECK(CypherType::list(CypherType::integer()).element() ==
        CypherType::integer());
  CHECK_THROWS_AS(CypherType::integer().element(), ContractError);
  CHECK(CypherType::node().is_graph_entity());
  CHECK_FALSE(CypherType::map().is_graph_entity());
}
