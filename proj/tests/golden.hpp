#pragma once

// Hand-built queries shared by the test binaries, each frozen next to its
// canonical render. Together they cover subquery scoping, read/write label
// forms, projection aliasing, and the renderer's literal conventions.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cypherforge/ast.hpp"

namespace cypherforge::golden {

inline NodePattern node(std::optional<std::string> binding = std::nullopt,
                        LabelExprPtr labels = nullptr,
                        PropertyList props = {}) {
  NodePattern n;
  n.binding = std::move(binding);
  n.labels = std::move(labels);
  n.properties = std::move(props);
  return n;
}

inline RelPattern rel(Direction dir, LabelExprPtr types = nullptr,
                      std::optional<std::string> binding = std::nullopt,
                      PropertyList props = {}) {
  RelPattern r;
  r.binding = std::move(binding);
  r.direction = dir;
  r.types = std::move(types);
  r.properties = std::move(props);
  return r;
}

// RETURN 0 — the smallest complete query (8 bytes).
inline Query unit_query() {
  ReturnClause r;
  r.items.push_back(Projection{expr::int_lit(0), std::nullopt});
  Query q;
  q.clauses.push_back(Clause{std::move(r)});
  return q;
}

inline const char* const kUnitText = "RETURN 0";

// A MERGE chain that rebinds one variable three times and reuses one
// relationship type twice, then keeps referencing a deleted variable.
// Dependency golden: six context reuses, two schema reuses.
inline Query merge_reuse_query() {
  Pattern mp;
  for (int i = 0; i < 4; ++i) mp.nodes.push_back(node("x"));
  for (int i = 0; i < 3; ++i)
    mp.rels.push_back(rel(Direction::Left, LabelExpr::leaf("A"),
                          i == 2 ? std::optional<std::string>("y")
                                 : std::nullopt));
  Pattern cp;
  cp.nodes.push_back(node("x"));
  cp.nodes.push_back(node());
  cp.rels.push_back(rel(Direction::Left, LabelExpr::leaf("B")));
  Query q;
  q.clauses.push_back(Clause{MergeClause{std::move(mp)}});
  q.clauses.push_back(Clause{DeleteClause{{"y"}, false}});
  q.clauses.push_back(Clause{CreateClause{std::move(cp)}});
  q.clauses.push_back(Clause{DeleteClause{{"y"}, false}});
  return q;
}

inline const char* const kMergeReuseText =
    "MERGE (x)<-[:A]-(x)<-[:A]-(x)<-[y:A]-(x)\n"
    "DELETE y\n"
    "CREATE (x)<-[:B]-()\n"
    "DELETE y";

// A CALL subquery whose body declares a variable, writes schema through it,
// and then loses the variable at the barrier while the schema survives.
inline Query call_subquery_query() {
  WithClause w;
  w.items.push_back(Projection{expr::int_lit(0), "x"});

  Pattern cp;
  cp.nodes.push_back(node());
  cp.nodes.push_back(node());
  cp.rels.push_back(rel(Direction::Right, LabelExpr::leaf("A"), std::nullopt,
                        {{"n0", expr::var("x", CypherType::integer())}}));

  CallClause call;
  call.body.clauses.push_back(Clause{std::move(w)});
  call.body.clauses.push_back(Clause{CreateClause{std::move(cp)}});

  Pattern mpat;
  mpat.nodes.push_back(node());
  mpat.rels.push_back(rel(
      Direction::Right,
      LabelExpr::conj(LabelExpr::leaf("B"), LabelExpr::leaf("C")),
      std::nullopt, {{"n0", expr::int_lit(0)}}));
  mpat.nodes.push_back(node(std::nullopt,
                            LabelExpr::negation(LabelExpr::conj(
                                LabelExpr::leaf("D"), LabelExpr::leaf("E")))));
  MatchClause m;
  m.pattern = std::move(mpat);

  ReturnClause r;
  r.items.push_back(Projection{expr::int_lit(0), std::nullopt});

  Query q;
  q.clauses.push_back(Clause{std::move(call)});
  q.clauses.push_back(Clause{std::move(m)});
  q.clauses.push_back(Clause{std::move(r)});
  return q;
}

inline const char* const kCallSubqueryText =
    "CALL {\n"
    "WITH 0 AS x\n"
    "CREATE ()-[:A {n0:x}]->()\n"
    "}\n"
    "MATCH ()-[:(B&C) {n0:0}]->(:!(D&E))\n"
    "RETURN 0";

// UNWIND over a list expression, then a function call on the element.
inline Query unwind_fn_query() {
  CypherType li = CypherType::list(CypherType::integer());
  UnwindClause u;
  u.list = expr::binary(BinaryOp::Add, expr::list({expr::int_lit(0)}, li),
                        expr::list({}, li), li);
  u.alias = "i";
  ReturnClause r;
  r.items.push_back(Projection{
      expr::fn("toBoolean", {expr::var("i", CypherType::integer())},
               CypherType::boolean()),
      std::nullopt});
  Query q;
  q.clauses.push_back(Clause{std::move(u)});
  q.clauses.push_back(Clause{std::move(r)});
  return q;
}

inline const char* const kUnwindFnText =
    "UNWIND ([0] + []) AS i\n"
    "RETURN toBoolean(i)";

// A write clause followed by an existential subquery over fresh labels
// (60 bytes).
inline Query merge_exists_query() {
  Pattern mp;
  mp.nodes.push_back(node());
  mp.nodes.push_back(node(std::nullopt, nullptr, {{"x", expr::int_lit(0)}}));
  mp.rels.push_back(rel(Direction::Right, LabelExpr::leaf("A")));

  Pattern ep;
  ep.nodes.push_back(node(std::nullopt,
                          LabelExpr::negation(LabelExpr::conj(
                              LabelExpr::leaf("B"), LabelExpr::leaf("C")))));
  ep.nodes.push_back(node());
  ep.rels.push_back(rel(Direction::Right, nullptr, std::nullopt,
                        {{"x", expr::int_lit(0)}}));

  ReturnClause r;
  r.items.push_back(Projection{expr::exists(std::move(ep)), std::nullopt});

  Query q;
  q.clauses.push_back(Clause{MergeClause{std::move(mp)}});
  q.clauses.push_back(Clause{std::move(r)});
  return q;
}

inline const char* const kMergeExistsText =
    "MERGE ()-[:A]->({x:0})\n"
    "RETURN EXISTS {(:!(B&C))-[{x:0}]->()}";

// Sorted projections feeding a CALL body whose returned column outlives the
// barrier and is consumed inside a FOREACH (153 bytes).
inline Query projection_pipeline_query() {
  CypherType lany = CypherType::list(CypherType::any());
  auto sorted_with = [&](const char* alias) {
    WithClause w;
    w.items.push_back(Projection{expr::list({}, lany), alias});
    w.order_by.push_back(OrderItem{expr::null_lit(), false});
    return w;
  };

  CallClause call;
  call.body.clauses.push_back(Clause{sorted_with("n1")});
  UnwindClause u1;
  u1.list = expr::list({expr::int_lit(0)},
                       CypherType::list(CypherType::integer()));
  u1.alias = "x";
  call.body.clauses.push_back(Clause{std::move(u1)});
  UnwindClause u2;
  u2.list = expr::list({expr::var("x", CypherType::integer())},
                       CypherType::list(CypherType::integer()));
  u2.alias = "n2";
  call.body.clauses.push_back(Clause{std::move(u2)});
  ReturnClause r;
  r.items.push_back(
      Projection{expr::var("n2", CypherType::integer()), "n3"});
  call.body.clauses.push_back(Clause{std::move(r)});

  Pattern fp;
  fp.nodes.push_back(node(std::nullopt, nullptr,
                          {{"key", expr::var("n3", CypherType::integer())}}));
  ForeachClause f;
  f.variable = "n4";
  f.list = expr::null_lit();
  f.body.push_back(Clause{MergeClause{std::move(fp)}});

  Query q;
  q.clauses.push_back(Clause{sorted_with("n0")});
  q.clauses.push_back(Clause{std::move(call)});
  q.clauses.push_back(Clause{std::move(f)});
  return q;
}

inline const char* const kProjectionPipelineText =
    "WITH [] AS n0 ORDER BY null\n"
    "CALL {\n"
    "WITH [] AS n1 ORDER BY null\n"
    "UNWIND [0] AS x\n"
    "UNWIND [x] AS n2\n"
    "RETURN n2 AS n3\n"
    "}\n"
    "FOREACH (n4 IN null | MERGE ({key:n3}))";

}  // namespace cypherforge::golden
