#include "cypherforge/validator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <variant>

#include "cypherforge/functions.hpp"

namespace cypherforge {

const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::UnboundVariable:
      return "unbound-variable";
    case ViolationKind::OutOfScopeReference:
      return "out-of-scope-reference";
    case ViolationKind::DuplicateBinding:
      return "duplicate-binding";
    case ViolationKind::TypeMismatch:
      return "type-mismatch";
    case ViolationKind::IllegalClausePosition:
      return "illegal-clause-position";
    case ViolationKind::UnionColumnMismatch:
      return "union-column-mismatch";
    case ViolationKind::ForeachIllegalBody:
      return "foreach-illegal-body";
    case ViolationKind::MissingTerminalReturn:
      return "missing-terminal-return";
  }
  return "?";
}

std::size_t ValidationReport::context_refs() const {
  return static_cast<std::size_t>(
      std::count_if(references.begin(), references.end(), [](const auto& r) {
        return r.kind == ResolvedRef::Kind::Variable;
      }));
}

std::size_t ValidationReport::schema_refs() const {
  return references.size() - context_refs();
}

namespace {

bool entity_compat(const CypherType& t) {
  switch (t.kind()) {
    case CypherType::Kind::Node:
    case CypherType::Kind::Relationship:
    case CypherType::Kind::Null:
    case CypherType::Kind::Any:
      return true;
    default:
      return false;
  }
}

bool updating_kind(ClauseKind k) {
  switch (base_kind(k)) {
    case ClauseKind::Create:
    case ClauseKind::Merge:
    case ClauseKind::Delete:
    case ClauseKind::Set:
    case ClauseKind::Remove:
    case ClauseKind::Foreach:
      return true;
    default:
      return false;
  }
}

// Kinds a query (or CALL body / UNION arm) may legally end on.
bool closes_query(ClauseKind k) {
  return updating_kind(k) || base_kind(k) == ClauseKind::Return ||
         base_kind(k) == ClauseKind::Union;
}

bool contains_negation(const LabelExpr& e) {
  if (std::holds_alternative<LabelExpr::Not>(e.node)) return true;
  if (auto* a = std::get_if<LabelExpr::And>(&e.node))
    return contains_negation(*a->lhs) || contains_negation(*a->rhs);
  return false;
}

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void run(const Query& q) {
    envs_.push_back({/*barrier=*/true, {}});
    top_query(q);
  }

 private:
  struct Binding {
    std::string name;
    CypherType type;
    bool dropped = false;  // removed by a projection replacement
  };
  struct Env {
    bool barrier;
    std::vector<Binding> bindings;
  };

  enum class Mode { Read, Write };

  // ── reporting ──────────────────────────────────────────────────────────────

  void violation(ViolationKind kind, std::string message) {
    report_.violations.push_back({kind, std::move(message), cur_clause_});
  }

  void reference(ResolvedRef::Kind kind, const std::string& name) {
    report_.references.push_back({kind, name, cur_clause_});
  }

  // ── environment chain ──────────────────────────────────────────────────────

  Binding* find_visible(const std::string& name, bool* masked) {
    bool crossed = false;
    for (auto env = envs_.rbegin(); env != envs_.rend(); ++env) {
      for (auto b = env->bindings.rbegin(); b != env->bindings.rend(); ++b) {
        if (b->dropped || b->name != name) continue;
        if (crossed) {
          if (masked) *masked = true;
          return nullptr;
        }
        return &*b;
      }
      if (env->barrier) crossed = true;
    }
    return nullptr;
  }

  // A variable use. Returns the resolved type (Any when unresolved).
  CypherType use(const std::string& name) {
    bool masked = false;
    if (Binding* b = find_visible(name, &masked)) {
      reference(ResolvedRef::Kind::Variable, name);
      return b->type;
    }
    if (masked || ever_declared_.count(name))
      violation(ViolationKind::OutOfScopeReference, name + " is not in scope");
    else
      violation(ViolationKind::UnboundVariable, name + " is not defined");
    return CypherType::any();
  }

  void bind(const std::string& name, CypherType type) {
    if (find_visible(name, nullptr)) {
      violation(ViolationKind::DuplicateBinding,
                name + " is already declared");
      return;
    }
    envs_.back().bindings.push_back({name, std::move(type), false});
    ever_declared_.insert(name);
  }

  // Projection semantics: every visible binding is dropped, the columns
  // become the innermost bindings.
  void replace_visible(const std::vector<std::pair<std::string, CypherType>>&
                           columns) {
    for (auto env = envs_.rbegin(); env != envs_.rend(); ++env) {
      for (auto& b : env->bindings) b.dropped = true;
      if (env->barrier) break;
    }
    for (const auto& [name, type] : columns) bind(name, type);
  }

  std::vector<std::pair<std::string, CypherType>> visible_columns() {
    std::vector<std::pair<std::string, CypherType>> out;
    std::size_t first = envs_.size();
    while (first > 0 && !envs_[first - 1].barrier) --first;
    if (first > 0) --first;  // include the barrier env itself
    for (std::size_t i = first; i < envs_.size(); ++i)
      for (const auto& b : envs_[i].bindings)
        if (!b.dropped) out.emplace_back(b.name, b.type);
    return out;
  }

  // ── shadow schema ──────────────────────────────────────────────────────────

  void label_occurrence(const std::string& name, Mode mode) {
    if (labels_.count(name)) reference(ResolvedRef::Kind::NodeLabel, name);
    if (mode == Mode::Write) labels_.insert(name);
  }

  void rel_type_occurrence(const std::string& name, Mode mode) {
    if (rel_types_.count(name)) reference(ResolvedRef::Kind::RelType, name);
    if (mode == Mode::Write) rel_types_.insert(name);
  }

  void key_occurrence(const std::string& key) {
    if (props_.count(key)) reference(ResolvedRef::Kind::PropertyKey, key);
  }

  // ── expressions ────────────────────────────────────────────────────────────

  CypherType arith_result(const CypherType& lhs, const CypherType& rhs) {
    using K = CypherType::Kind;
    if (lhs.kind() == K::Integer && rhs.kind() == K::Integer)
      return CypherType::integer();
    if (lhs.is_numeric() && rhs.is_numeric()) return CypherType::real();
    return CypherType::any();
  }

  CypherType infer(const Expression& e, bool aggregates_ok) {
    using E = Expression;
    return std::visit(
        [&](const auto& n) -> CypherType {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, E::IntLit>) {
            return CypherType::integer();
          } else if constexpr (std::is_same_v<T, E::FloatLit>) {
            return CypherType::real();
          } else if constexpr (std::is_same_v<T, E::StringLit>) {
            return CypherType::string();
          } else if constexpr (std::is_same_v<T, E::BoolLit>) {
            return CypherType::boolean();
          } else if constexpr (std::is_same_v<T, E::NullLit>) {
            return CypherType::null();
          } else if constexpr (std::is_same_v<T, E::VarRef>) {
            return use(n.name);
          } else if constexpr (std::is_same_v<T, E::PropAccess>) {
            CypherType object = infer(*n.object, aggregates_ok);
            if (!entity_compat(object) &&
                object.kind() != CypherType::Kind::Map)
              violation(ViolationKind::TypeMismatch,
                        "property access on " + object.to_string());
            key_occurrence(n.key);
            auto it = props_.find(n.key);
            return it == props_.end() ? CypherType::any() : it->second;
          } else if constexpr (std::is_same_v<T, E::Unary>) {
            CypherType operand = infer(*n.operand, aggregates_ok);
            if (n.op == UnaryOp::Not) {
              if (!operand.unifies_with(CypherType::boolean()))
                violation(ViolationKind::TypeMismatch,
                          "NOT applied to " + operand.to_string());
              return CypherType::boolean();
            }
            if (!operand.is_numeric() &&
                !operand.unifies_with(CypherType::integer()))
              violation(ViolationKind::TypeMismatch,
                        "unary minus applied to " + operand.to_string());
            return operand.is_numeric() ? operand : CypherType::any();
          } else if constexpr (std::is_same_v<T, E::Binary>) {
            CypherType lhs = infer(*n.lhs, aggregates_ok);
            CypherType rhs = infer(*n.rhs, aggregates_ok);
            return binary_result(n.op, lhs, rhs);
          } else if constexpr (std::is_same_v<T, E::ListLit>) {
            CypherType elem = CypherType::null();
            for (const auto& item : n.items) {
              CypherType t = infer(*item, aggregates_ok);
              if (elem.kind() == CypherType::Kind::Null)
                elem = t;
              else if (!t.unifies_with(elem))
                elem = CypherType::any();
            }
            return CypherType::list(elem);
          } else if constexpr (std::is_same_v<T, E::MapLit>) {
            for (const auto& [key, value] : n.entries)
              infer(*value, aggregates_ok);
            return CypherType::map();
          } else if constexpr (std::is_same_v<T, E::FnCall>) {
            bool aggregate = is_aggregate_fn(n.name);
            if (aggregate && !aggregates_ok)
              violation(ViolationKind::IllegalClausePosition,
                        n.name + "() used outside a projection");
            std::vector<CypherType> args;
            for (const auto& arg : n.args)
              args.push_back(infer(*arg, aggregates_ok && !aggregate));
            auto ret = check_call(n.name, args);
            if (!ret) {
              violation(ViolationKind::TypeMismatch,
                        "no signature of " + n.name + " matches");
              return CypherType::any();
            }
            return *ret;
          } else if constexpr (std::is_same_v<T, E::Case>) {
            CypherType result = CypherType::null();
            for (const auto& [cond, value] : n.whens) {
              CypherType ct = infer(*cond, aggregates_ok);
              if (!ct.unifies_with(CypherType::boolean()))
                violation(ViolationKind::TypeMismatch,
                          "CASE condition is " + ct.to_string());
              CypherType vt = infer(*value, aggregates_ok);
              result = result.kind() == CypherType::Kind::Null ? vt : result;
            }
            if (n.otherwise) {
              CypherType ot = infer(*n.otherwise, aggregates_ok);
              if (result.kind() == CypherType::Kind::Null) result = ot;
            }
            return result;
          } else if constexpr (std::is_same_v<T, E::ExistsSub> ||
                               std::is_same_v<T, E::CountSub>) {
            envs_.push_back({/*barrier=*/false, {}});
            pattern(*n.pattern, Mode::Read);
            envs_.pop_back();
            return std::is_same_v<T, E::CountSub> ? CypherType::integer()
                                                  : CypherType::boolean();
          }
        },
        e.node);
  }

  CypherType binary_result(BinaryOp op, const CypherType& lhs,
                           const CypherType& rhs) {
    using K = CypherType::Kind;
    auto loose = [](const CypherType& t) {
      return t.kind() == K::Null || t.kind() == K::Any;
    };
    switch (op) {
      case BinaryOp::Add: {
        if (loose(lhs) || loose(rhs)) return CypherType::any();
        if (lhs.is_numeric() && rhs.is_numeric())
          return arith_result(lhs, rhs);
        if (lhs.kind() == K::String && rhs.kind() == K::String)
          return CypherType::string();
        if (lhs.is_list() && rhs.is_list())
          return rhs.element().unifies_with(lhs.element())
                     ? lhs
                     : CypherType::list(CypherType::any());
        violation(ViolationKind::TypeMismatch,
                  "cannot add " + lhs.to_string() + " and " + rhs.to_string());
        return CypherType::any();
      }
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::Mod: {
        if (loose(lhs) || loose(rhs)) return CypherType::any();
        if (lhs.is_numeric() && rhs.is_numeric())
          return arith_result(lhs, rhs);
        violation(ViolationKind::TypeMismatch,
                  "arithmetic on " + lhs.to_string() + " and " +
                      rhs.to_string());
        return CypherType::any();
      }
      case BinaryOp::And:
      case BinaryOp::Or: {
        if (!lhs.unifies_with(CypherType::boolean()))
          violation(ViolationKind::TypeMismatch,
                    "boolean operator on " + lhs.to_string());
        if (!rhs.unifies_with(CypherType::boolean()))
          violation(ViolationKind::TypeMismatch,
                    "boolean operator on " + rhs.to_string());
        return CypherType::boolean();
      }
      default:
        // Comparisons are defined (possibly as null) for every value pair.
        return CypherType::boolean();
    }
  }

  void check_boolean(const ExprPtr& e, const char* where, bool aggregates_ok) {
    if (!e) return;
    CypherType t = infer(*e, aggregates_ok);
    if (!t.unifies_with(CypherType::boolean()))
      violation(ViolationKind::TypeMismatch,
                std::string(where) + " is " + t.to_string());
  }

  // ── patterns ───────────────────────────────────────────────────────────────

  void label_expr(const LabelExprPtr& e, bool rel_position, Mode mode) {
    if (!e) return;
    if (mode == Mode::Write && contains_negation(*e))
      violation(ViolationKind::TypeMismatch,
                "negated label in a write pattern");
    for (const auto& name : e->names()) {
      if (rel_position)
        rel_type_occurrence(name, mode);
      else
        label_occurrence(name, mode);
    }
  }

  void properties(const PropertyList& props, Mode mode) {
    std::set<std::string> seen;
    for (const auto& [key, value] : props) {
      if (!seen.insert(key).second)
        violation(ViolationKind::DuplicateBinding,
                  "duplicate property key " + key);
      key_occurrence(key);
      CypherType t = infer(*value, false);
      if (mode == Mode::Write) props_.try_emplace(key, t);
    }
  }

  void pattern(const Pattern& p, Mode mode) {
    if (p.nodes.empty() || p.nodes.size() != p.rels.size() + 1) {
      violation(ViolationKind::TypeMismatch, "malformed pattern chain");
      return;
    }
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      const NodePattern& n = p.nodes[i];
      if (n.binding) {
        if (find_visible(*n.binding, nullptr)) {
          CypherType t = use(*n.binding);
          if (!t.unifies_with(CypherType::node()))
            violation(ViolationKind::TypeMismatch,
                      *n.binding + " is " + t.to_string() +
                          ", not a node");
        } else {
          bind(*n.binding, CypherType::node());
        }
      }
      label_expr(n.labels, false, mode);
      properties(n.properties, mode);
      if (i < p.rels.size()) {
        const RelPattern& r = p.rels[i];
        if (r.binding) {
          if (find_visible(*r.binding, nullptr)) {
            CypherType t = use(*r.binding);
            if (!t.unifies_with(CypherType::relationship()))
              violation(ViolationKind::TypeMismatch,
                        *r.binding + " is " + t.to_string() +
                            ", not a relationship");
          } else {
            bind(*r.binding, CypherType::relationship());
          }
        }
        if (mode == Mode::Write && (!r.types || !r.types->is_leaf()))
          violation(ViolationKind::TypeMismatch,
                    "write pattern needs exactly one relationship type");
        label_expr(r.types, true, mode);
        properties(r.properties, mode);
      }
    }
  }

  // ── clauses ────────────────────────────────────────────────────────────────

  void projection(const std::vector<Projection>& items,
                  const std::vector<OrderItem>& order_by, const ExprPtr& where,
                  bool top_level_return) {
    std::vector<std::pair<std::string, CypherType>> columns;
    std::set<std::string> names;
    for (const auto& item : items) {
      CypherType t = infer(*item.expr, true);
      if (!item.alias && !top_level_return &&
          !std::holds_alternative<Expression::VarRef>(item.expr->node))
        violation(ViolationKind::TypeMismatch,
                  "projection item needs an alias");
      std::string name = item.column_name();
      if (!names.insert(name).second) {
        violation(ViolationKind::DuplicateBinding,
                  "duplicate column " + name);
        continue;
      }
      // Unaliased constant columns (RETURN 0) bind nothing.
      if (item.alias ||
          std::holds_alternative<Expression::VarRef>(item.expr->node))
        columns.emplace_back(std::move(name), std::move(t));
    }
    replace_visible(columns);
    for (const auto& item : order_by) infer(*item.expr, true);
    check_boolean(where, "WHERE", false);
  }

  void clause(const Clause& c) {
    std::visit([&](const auto& n) { handle(n); }, c.node);
  }

  void handle(const MatchClause& c) {
    pattern(c.pattern, Mode::Read);
    check_boolean(c.where, "WHERE", false);
  }

  void handle(const CreateClause& c) { pattern(c.pattern, Mode::Write); }
  void handle(const MergeClause& c) { pattern(c.pattern, Mode::Write); }

  void handle(const DeleteClause& c) {
    for (const auto& name : c.targets) {
      CypherType t = use(name);
      if (!entity_compat(t))
        violation(ViolationKind::TypeMismatch,
                  "DELETE target " + name + " is " + t.to_string());
    }
  }

  void handle(const RemoveClause& c) {
    for (const auto& item : c.items) {
      CypherType t = use(item.variable);
      if (item.label) {
        if (!t.unifies_with(CypherType::node()))
          violation(ViolationKind::TypeMismatch,
                    "REMOVE label from " + item.variable);
        if (labels_.count(*item.label))
          reference(ResolvedRef::Kind::NodeLabel, *item.label);
        labels_.erase(*item.label);
      } else if (item.property) {
        if (!entity_compat(t))
          violation(ViolationKind::TypeMismatch,
                    "REMOVE property from " + item.variable);
        key_occurrence(*item.property);
        props_.erase(*item.property);
      }
    }
  }

  void handle(const SetClause& c) {
    for (const auto& item : c.items) {
      CypherType t = use(item.variable);
      switch (item.form) {
        case SetItem::Form::Property: {
          if (!entity_compat(t))
            violation(ViolationKind::TypeMismatch,
                      "SET property on " + item.variable);
          key_occurrence(item.key);
          CypherType vt = infer(*item.value, false);
          props_.try_emplace(item.key, vt);
          break;
        }
        case SetItem::Form::Label:
          if (!t.unifies_with(CypherType::node()))
            violation(ViolationKind::TypeMismatch,
                      "SET label on " + item.variable);
          label_occurrence(item.key, Mode::Write);
          break;
        case SetItem::Form::Overwrite: {
          if (!entity_compat(t))
            violation(ViolationKind::TypeMismatch,
                      "SET map on " + item.variable);
          std::set<std::string> seen;
          for (const auto& [key, value] : item.map) {
            if (!seen.insert(key).second)
              violation(ViolationKind::DuplicateBinding,
                        "duplicate property key " + key);
            key_occurrence(key);
            CypherType vt = infer(*value, false);
            props_.try_emplace(key, vt);
          }
          break;
        }
      }
    }
  }

  void handle(const UnwindClause& c) {
    CypherType t = infer(*c.list, false);
    CypherType elem = CypherType::null();
    if (t.is_list()) {
      elem = t.element().kind() == CypherType::Kind::Any ? CypherType::null()
                                                         : t.element();
    } else if (t.kind() != CypherType::Kind::Null &&
               t.kind() != CypherType::Kind::Any) {
      violation(ViolationKind::TypeMismatch,
                "UNWIND over " + t.to_string());
    }
    bind(c.alias, elem);
  }

  void handle(const WithClause& c) {
    projection(c.items, c.order_by, c.where, false);
  }

  void handle(const ReturnClause& c) {
    projection(c.items, c.order_by, nullptr, top_level_return_);
  }

  void handle(const ForeachClause& c) {
    CypherType t = infer(*c.list, false);
    CypherType elem = CypherType::null();
    if (t.is_list()) {
      elem = t.element().kind() == CypherType::Kind::Any ? CypherType::null()
                                                         : t.element();
    } else if (t.kind() != CypherType::Kind::Null &&
               t.kind() != CypherType::Kind::Any) {
      violation(ViolationKind::TypeMismatch,
                "FOREACH over " + t.to_string());
    }
    envs_.push_back({/*barrier=*/false, {}});
    bind(c.variable, elem);
    for (const auto& sub : c.body) {
      if (!updating_kind(sub.kind()))
        violation(ViolationKind::ForeachIllegalBody,
                  std::string(to_string(sub.kind())) +
                      " inside FOREACH");
      bool saved = top_level_return_;
      top_level_return_ = false;
      clause(sub);
      top_level_return_ = saved;
    }
    envs_.pop_back();
  }

  void handle(const CallClause& c) {
    std::vector<std::pair<std::string, CypherType>> imports;
    std::set<std::string> seen;
    for (const auto& name : c.imports) {
      CypherType t = use(name);
      if (!seen.insert(name).second)
        violation(ViolationKind::DuplicateBinding,
                  "duplicate import " + name);
      else
        imports.emplace_back(name, std::move(t));
    }
    envs_.push_back({/*barrier=*/true, {}});
    for (auto& [name, type] : imports) bind(name, std::move(type));
    body(c.body, "CALL body");
    std::vector<std::pair<std::string, CypherType>> columns;
    if (!c.body.clauses.empty() &&
        c.body.clauses.back().kind() == ClauseKind::Return)
      columns = visible_columns();
    envs_.pop_back();
    for (auto& [name, type] : columns) bind(name, std::move(type));
  }

  void handle(const UnionClause& c) {
    std::vector<std::string> left = arm(c.left);
    std::vector<std::string> right = arm(c.right);
    if (left != right)
      violation(ViolationKind::UnionColumnMismatch,
                "arms return different columns");
  }

  std::vector<std::string> arm(const Query& q) {
    envs_.push_back({/*barrier=*/true, {}});
    body(q, "UNION arm");
    std::vector<std::string> names;
    if (!q.clauses.empty() && q.clauses.back().kind() == ClauseKind::Return)
      for (const auto& [name, type] : visible_columns())
        names.push_back(name);
    else
      violation(ViolationKind::MissingTerminalReturn,
                "UNION arm does not end with RETURN");
    envs_.pop_back();
    return names;
  }

  // Shared walk for CALL bodies and UNION arms; RETURN may only close the
  // body, and the body must close on a returning or updating clause.
  void body(const Query& q, const char* what) {
    if (q.clauses.empty()) {
      violation(ViolationKind::MissingTerminalReturn,
                std::string(what) + " is empty");
      return;
    }
    for (std::size_t i = 0; i < q.clauses.size(); ++i) {
      ClauseKind k = q.clauses[i].kind();
      if (base_kind(k) == ClauseKind::Return && i + 1 != q.clauses.size())
        violation(ViolationKind::IllegalClausePosition,
                  std::string("RETURN before the end of a ") + what);
      if (base_kind(k) == ClauseKind::Union)
        violation(ViolationKind::IllegalClausePosition,
                  std::string("UNION inside a ") + what);
      bool saved = top_level_return_;
      top_level_return_ = false;
      clause(q.clauses[i]);
      top_level_return_ = saved;
    }
    ClauseKind last = q.clauses.back().kind();
    if (!closes_query(last) || base_kind(last) == ClauseKind::Union)
      violation(ViolationKind::MissingTerminalReturn,
                std::string(what) + " ends with " + to_string(last));
  }

  void top_query(const Query& q) {
    if (q.clauses.empty()) {
      violation(ViolationKind::MissingTerminalReturn, "query is empty");
      return;
    }
    for (std::size_t i = 0; i < q.clauses.size(); ++i) {
      cur_clause_ = i;
      ClauseKind k = q.clauses[i].kind();
      if (base_kind(k) == ClauseKind::Return && i + 1 != q.clauses.size())
        violation(ViolationKind::IllegalClausePosition,
                  "RETURN before the end of the query");
      if (base_kind(k) == ClauseKind::Union && i != 0)
        violation(ViolationKind::IllegalClausePosition,
                  "UNION after other clauses");
      if (base_kind(k) == ClauseKind::Union && i + 1 != q.clauses.size())
        violation(ViolationKind::IllegalClausePosition,
                  "clauses after UNION");
      top_level_return_ = true;
      clause(q.clauses[i]);
    }
    cur_clause_ = q.clauses.size() - 1;
    if (!closes_query(q.clauses.back().kind()))
      violation(ViolationKind::MissingTerminalReturn,
                std::string("query ends with ") +
                    to_string(q.clauses.back().kind()));
  }

  ValidationReport& report_;
  std::vector<Env> envs_;
  std::set<std::string> ever_declared_;
  std::set<std::string> labels_;
  std::set<std::string> rel_types_;
  std::map<std::string, CypherType> props_;
  std::size_t cur_clause_ = 0;
  bool top_level_return_ = true;
};

}  // namespace

ValidationReport validate(const Query& q) {
  ValidationReport report;
  Checker(report).run(q);
  return report;
}

std::vector<ResolvedRef> resolve_references(const Query& q) {
  return validate(q).references;
}

}  // namespace cypherforge
