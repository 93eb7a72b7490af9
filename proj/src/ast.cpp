#include "cypherforge/ast.hpp"

#include <algorithm>

namespace cypherforge {

ClauseKind base_kind(ClauseKind k) {
  switch (k) {
    case ClauseKind::OptionalMatch: return ClauseKind::Match;
    case ClauseKind::DetachDelete: return ClauseKind::Delete;
    default: return k;
  }
}

const char* to_string(ClauseKind k) {
  switch (k) {
    case ClauseKind::Match: return "MATCH";
    case ClauseKind::OptionalMatch: return "OPTIONAL MATCH";
    case ClauseKind::Create: return "CREATE";
    case ClauseKind::Merge: return "MERGE";
    case ClauseKind::Delete: return "DELETE";
    case ClauseKind::DetachDelete: return "DETACH DELETE";
    case ClauseKind::Remove: return "REMOVE";
    case ClauseKind::Set: return "SET";
    case ClauseKind::Unwind: return "UNWIND";
    case ClauseKind::With: return "WITH";
    case ClauseKind::Return: return "RETURN";
    case ClauseKind::Foreach: return "FOREACH";
    case ClauseKind::Call: return "CALL";
    case ClauseKind::Union: return "UNION";
    case ClauseKind::Exists: return "EXISTS";
    case ClauseKind::Count: return "COUNT";
  }
  return "?";
}

const std::vector<ClauseKind>& effect_kinds() {
  static const std::vector<ClauseKind> kinds = {
      ClauseKind::Match,  ClauseKind::Create, ClauseKind::Merge,
      ClauseKind::Delete, ClauseKind::Remove, ClauseKind::Set,
      ClauseKind::Unwind, ClauseKind::With,   ClauseKind::Return,
      ClauseKind::Foreach, ClauseKind::Call,  ClauseKind::Union,
      ClauseKind::Exists, ClauseKind::Count};
  return kinds;
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::And: return "AND";
    case BinaryOp::Or: return "OR";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Neq: return "<>";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

const char* to_string(UnaryOp op) {
  switch (op) {
    case UnaryOp::Not: return "NOT";
    case UnaryOp::Minus: return "-";
  }
  return "?";
}

// ─── label expressions ───────────────────────────────────────────────────────

LabelExprPtr LabelExpr::leaf(std::string name) {
  return std::make_shared<LabelExpr>(LabelExpr{Leaf{std::move(name)}});
}

LabelExprPtr LabelExpr::conj(LabelExprPtr lhs, LabelExprPtr rhs) {
  return std::make_shared<LabelExpr>(
      LabelExpr{And{std::move(lhs), std::move(rhs)}});
}

LabelExprPtr LabelExpr::negation(LabelExprPtr operand) {
  return std::make_shared<LabelExpr>(LabelExpr{Not{std::move(operand)}});
}

static void collect_names(const LabelExpr& e, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LabelExpr::Leaf>) {
          out.push_back(n.name);
        } else if constexpr (std::is_same_v<T, LabelExpr::And>) {
          collect_names(*n.lhs, out);
          collect_names(*n.rhs, out);
        } else {
          collect_names(*n.operand, out);
        }
      },
      e.node);
}

std::vector<std::string> LabelExpr::names() const {
  std::vector<std::string> out;
  collect_names(*this, out);
  return out;
}

// ─── expression factories ────────────────────────────────────────────────────

namespace expr {

static ExprPtr make(Expression::Node node, CypherType type) {
  auto e = std::make_shared<Expression>();
  e->node = std::move(node);
  e->type = std::move(type);
  return e;
}

ExprPtr int_lit(std::int64_t v) {
  return make(Expression::IntLit{v}, CypherType::integer());
}
ExprPtr float_lit(double v) {
  return make(Expression::FloatLit{v}, CypherType::real());
}
ExprPtr string_lit(std::string v) {
  return make(Expression::StringLit{std::move(v)}, CypherType::string());
}
ExprPtr bool_lit(bool v) {
  return make(Expression::BoolLit{v}, CypherType::boolean());
}
ExprPtr null_lit() { return make(Expression::NullLit{}, CypherType::null()); }
ExprPtr var(std::string name, CypherType type) {
  return make(Expression::VarRef{std::move(name)}, std::move(type));
}
ExprPtr prop(ExprPtr object, std::string key, CypherType type) {
  return make(Expression::PropAccess{std::move(object), std::move(key)},
              std::move(type));
}
ExprPtr unary(UnaryOp op, ExprPtr operand, CypherType type) {
  return make(Expression::Unary{op, std::move(operand)}, std::move(type));
}
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, CypherType type) {
  return make(Expression::Binary{op, std::move(lhs), std::move(rhs)},
              std::move(type));
}
ExprPtr list(std::vector<ExprPtr> items, CypherType type) {
  return make(Expression::ListLit{std::move(items)}, std::move(type));
}
ExprPtr map(std::vector<std::pair<std::string, ExprPtr>> entries) {
  return make(Expression::MapLit{std::move(entries)}, CypherType::map());
}
ExprPtr fn(std::string name, std::vector<ExprPtr> args, CypherType type) {
  return make(Expression::FnCall{std::move(name), std::move(args)},
              std::move(type));
}
ExprPtr case_when(std::vector<std::pair<ExprPtr, ExprPtr>> whens,
                  ExprPtr otherwise, CypherType type) {
  return make(Expression::Case{std::move(whens), std::move(otherwise)},
              std::move(type));
}
ExprPtr exists(Pattern pattern) {
  pattern.check();
  return make(
      Expression::ExistsSub{std::make_shared<Pattern>(std::move(pattern))},
      CypherType::boolean());
}
ExprPtr count(Pattern pattern) {
  pattern.check();
  return make(
      Expression::CountSub{std::make_shared<Pattern>(std::move(pattern))},
      CypherType::integer());
}

ExprPtr constant_of(const CypherType& type) {
  switch (type.kind()) {
    case CypherType::Kind::Integer: return int_lit(0);
    case CypherType::Kind::Float: return float_lit(0.0);
    case CypherType::Kind::String: return string_lit("");
    case CypherType::Kind::Boolean: return bool_lit(false);
    case CypherType::Kind::List: return list({}, type);
    case CypherType::Kind::Map: return map({});
    default: return null_lit();
  }
}

}  // namespace expr

// ─── patterns / clauses ──────────────────────────────────────────────────────

void Pattern::check() const {
  if (nodes.empty() || nodes.size() != rels.size() + 1)
    throw ContractError("pattern chain must have one more node than rels");
}

ClauseKind Clause::kind() const {
  return std::visit(
      [](const auto& c) -> ClauseKind {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, MatchClause>)
          return c.optional ? ClauseKind::OptionalMatch : ClauseKind::Match;
        else if constexpr (std::is_same_v<T, CreateClause>)
          return ClauseKind::Create;
        else if constexpr (std::is_same_v<T, MergeClause>)
          return ClauseKind::Merge;
        else if constexpr (std::is_same_v<T, DeleteClause>)
          return c.detach ? ClauseKind::DetachDelete : ClauseKind::Delete;
        else if constexpr (std::is_same_v<T, RemoveClause>)
          return ClauseKind::Remove;
        else if constexpr (std::is_same_v<T, SetClause>)
          return ClauseKind::Set;
        else if constexpr (std::is_same_v<T, UnwindClause>)
          return ClauseKind::Unwind;
        else if constexpr (std::is_same_v<T, WithClause>)
          return ClauseKind::With;
        else if constexpr (std::is_same_v<T, ReturnClause>)
          return ClauseKind::Return;
        else if constexpr (std::is_same_v<T, ForeachClause>)
          return ClauseKind::Foreach;
        else if constexpr (std::is_same_v<T, CallClause>)
          return ClauseKind::Call;
        else
          return ClauseKind::Union;
      },
      node);
}

std::size_t clause_count(const Clause& c) {
  std::size_t n = 1;
  if (auto* f = std::get_if<ForeachClause>(&c.node)) {
    for (const auto& sub : f->body) n += clause_count(sub);
  } else if (auto* call = std::get_if<CallClause>(&c.node)) {
    n += clause_count(call->body);
  } else if (auto* u = std::get_if<UnionClause>(&c.node)) {
    n += clause_count(u->left) + clause_count(u->right);
  }
  return n;
}

std::size_t clause_count(const Query& q) {
  std::size_t n = 0;
  for (const auto& c : q.clauses) n += clause_count(c);
  return n;
}

// ─── structural equality ─────────────────────────────────────────────────────

static bool equal_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

static bool equal_label(const LabelExprPtr& a, const LabelExprPtr& b) {
  if (!a || !b) return !a && !b;
  if (a->node.index() != b->node.index()) return false;
  if (auto* l = std::get_if<LabelExpr::Leaf>(&a->node))
    return l->name == std::get<LabelExpr::Leaf>(b->node).name;
  if (auto* c = std::get_if<LabelExpr::And>(&a->node)) {
    const auto& o = std::get<LabelExpr::And>(b->node);
    return equal_label(c->lhs, o.lhs) && equal_label(c->rhs, o.rhs);
  }
  return equal_label(std::get<LabelExpr::Not>(a->node).operand,
                     std::get<LabelExpr::Not>(b->node).operand);
}

static bool equal_props(const PropertyList& a, const PropertyList& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || !equal_ptr(a[i].second, b[i].second))
      return false;
  return true;
}

bool equal(const Expression& a, const Expression& b) {
  if (a.node.index() != b.node.index()) return false;
  if (a.type != b.type) return false;
  using E = Expression;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, E::IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, E::FloatLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, E::StringLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, E::BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, E::NullLit>) {
          return true;
        } else if constexpr (std::is_same_v<T, E::VarRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, E::PropAccess>) {
          return x.key == y.key && equal_ptr(x.object, y.object);
        } else if constexpr (std::is_same_v<T, E::Unary>) {
          return x.op == y.op && equal_ptr(x.operand, y.operand);
        } else if constexpr (std::is_same_v<T, E::Binary>) {
          return x.op == y.op && equal_ptr(x.lhs, y.lhs) &&
                 equal_ptr(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, E::ListLit>) {
          if (x.items.size() != y.items.size()) return false;
          for (std::size_t i = 0; i < x.items.size(); ++i)
            if (!equal_ptr(x.items[i], y.items[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, E::MapLit>) {
          return equal_props(x.entries, y.entries);
        } else if constexpr (std::is_same_v<T, E::FnCall>) {
          if (x.name != y.name || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!equal_ptr(x.args[i], y.args[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, E::Case>) {
          if (x.whens.size() != y.whens.size()) return false;
          for (std::size_t i = 0; i < x.whens.size(); ++i)
            if (!equal_ptr(x.whens[i].first, y.whens[i].first) ||
                !equal_ptr(x.whens[i].second, y.whens[i].second))
              return false;
          return equal_ptr(x.otherwise, y.otherwise);
        } else if constexpr (std::is_same_v<T, E::ExistsSub>) {
          return equal(*x.pattern, *y.pattern);
        } else {
          return equal(*x.pattern, *y.pattern);
        }
      },
      a.node);
}

bool equal(const Pattern& a, const Pattern& b) {
  if (a.nodes.size() != b.nodes.size() || a.rels.size() != b.rels.size())
    return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    if (a.nodes[i].binding != b.nodes[i].binding) return false;
    if (!equal_label(a.nodes[i].labels, b.nodes[i].labels)) return false;
    if (!equal_props(a.nodes[i].properties, b.nodes[i].properties))
      return false;
  }
  for (std::size_t i = 0; i < a.rels.size(); ++i) {
    if (a.rels[i].binding != b.rels[i].binding) return false;
    if (a.rels[i].direction != b.rels[i].direction) return false;
    if (!equal_label(a.rels[i].types, b.rels[i].types)) return false;
    if (!equal_props(a.rels[i].properties, b.rels[i].properties)) return false;
  }
  return true;
}

static bool equal_projections(const std::vector<Projection>& a,
                              const std::vector<Projection>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].alias != b[i].alias || !equal_ptr(a[i].expr, b[i].expr))
      return false;
  return true;
}

static bool equal_order(const std::vector<OrderItem>& a,
                        const std::vector<OrderItem>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].descending != b[i].descending || !equal_ptr(a[i].expr, b[i].expr))
      return false;
  return true;
}

bool equal(const Clause& a, const Clause& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, MatchClause>) {
          return x.optional == y.optional && equal(x.pattern, y.pattern) &&
                 equal_ptr(x.where, y.where);
        } else if constexpr (std::is_same_v<T, CreateClause> ||
                             std::is_same_v<T, MergeClause>) {
          return equal(x.pattern, y.pattern);
        } else if constexpr (std::is_same_v<T, DeleteClause>) {
          return x.detach == y.detach && x.targets == y.targets;
        } else if constexpr (std::is_same_v<T, RemoveClause>) {
          if (x.items.size() != y.items.size()) return false;
          for (std::size_t i = 0; i < x.items.size(); ++i)
            if (x.items[i].variable != y.items[i].variable ||
                x.items[i].property != y.items[i].property ||
                x.items[i].label != y.items[i].label)
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, SetClause>) {
          if (x.items.size() != y.items.size()) return false;
          for (std::size_t i = 0; i < x.items.size(); ++i) {
            const auto& p = x.items[i];
            const auto& q = y.items[i];
            if (p.form != q.form || p.variable != q.variable ||
                p.key != q.key || !equal_ptr(p.value, q.value) ||
                !equal_props(p.map, q.map))
              return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, UnwindClause>) {
          return x.alias == y.alias && equal_ptr(x.list, y.list);
        } else if constexpr (std::is_same_v<T, WithClause>) {
          return equal_projections(x.items, y.items) &&
                 equal_order(x.order_by, y.order_by) &&
                 equal_ptr(x.where, y.where);
        } else if constexpr (std::is_same_v<T, ReturnClause>) {
          return equal_projections(x.items, y.items) &&
                 equal_order(x.order_by, y.order_by);
        } else if constexpr (std::is_same_v<T, ForeachClause>) {
          if (x.variable != y.variable || !equal_ptr(x.list, y.list) ||
              x.body.size() != y.body.size())
            return false;
          for (std::size_t i = 0; i < x.body.size(); ++i)
            if (!equal(x.body[i], y.body[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, CallClause>) {
          return x.imports == y.imports && equal(x.body, y.body);
        } else {
          return x.all == y.all && equal(x.left, y.left) &&
                 equal(x.right, y.right);
        }
      },
      a.node);
}

bool equal(const Query& a, const Query& b) {
  if (a.clauses.size() != b.clauses.size()) return false;
  for (std::size_t i = 0; i < a.clauses.size(); ++i)
    if (!equal(a.clauses[i], b.clauses[i])) return false;
  return true;
}

}  // namespace cypherforge
