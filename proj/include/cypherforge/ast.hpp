#pragma once

// Abstract syntax for the Cypher subset the generator emits.
//
// Expressions are immutable and shared via ExprPtr, so copying a Query is
// cheap and rewritten queries (reduction) can share unchanged subtrees.
// Every expression carries its static CypherType, assigned at construction.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cypherforge/types.hpp"

namespace cypherforge {

// ─── clause kinds ────────────────────────────────────────────────────────────

enum class ClauseKind {
  Match,
  OptionalMatch,
  Create,
  Merge,
  Delete,
  DetachDelete,
  Remove,
  Set,
  Unwind,
  With,
  Return,
  Foreach,
  Call,
  Union,
  Exists,
  Count,
};

// OPTIONAL MATCH and DETACH DELETE share the effect row of their base kind.
ClauseKind base_kind(ClauseKind k);
const char* to_string(ClauseKind k);

// The 14 distinct rows of the clause-effect table (aliases folded in).
const std::vector<ClauseKind>& effect_kinds();

// ─── label expressions ───────────────────────────────────────────────────────

// Label / relationship-type expression: a name, a conjunction, or a negation.
// Writing clauses use plain names or conjunctions; reading clauses may use
// the full form (e.g. !(B&C)).
struct LabelExpr;
using LabelExprPtr = std::shared_ptr<const LabelExpr>;

struct LabelExpr {
  struct Leaf {
    std::string name;
  };
  struct And {
    LabelExprPtr lhs;
    LabelExprPtr rhs;
  };
  struct Not {
    LabelExprPtr operand;
  };

  std::variant<Leaf, And, Not> node;

  static LabelExprPtr leaf(std::string name);
  static LabelExprPtr conj(LabelExprPtr lhs, LabelExprPtr rhs);
  static LabelExprPtr negation(LabelExprPtr operand);

  bool is_leaf() const { return std::holds_alternative<Leaf>(node); }
  // All names mentioned anywhere in the expression, in left-to-right order.
  std::vector<std::string> names() const;
};

// ─── expressions ─────────────────────────────────────────────────────────────

struct Expression;
using ExprPtr = std::shared_ptr<const Expression>;

enum class BinaryOp {
  Add,
  Sub,
  Mul,
  Div,
  Mod,
  And,
  Or,
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
};

enum class UnaryOp {
  Not,
  Minus,
};

const char* to_string(BinaryOp op);
const char* to_string(UnaryOp op);

struct Pattern;

struct Expression {
  struct IntLit {
    std::int64_t value;
  };
  struct FloatLit {
    double value;
  };
  struct StringLit {
    std::string value;
  };
  struct BoolLit {
    bool value;
  };
  struct NullLit {};
  struct VarRef {
    std::string name;
  };
  struct PropAccess {
    ExprPtr object;
    std::string key;
  };
  struct Unary {
    UnaryOp op;
    ExprPtr operand;
  };
  struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
  };
  struct ListLit {
    std::vector<ExprPtr> items;
  };
  struct MapLit {
    std::vector<std::pair<std::string, ExprPtr>> entries;
  };
  struct FnCall {
    std::string name;
    std::vector<ExprPtr> args;
  };
  struct Case {
    std::vector<std::pair<ExprPtr, ExprPtr>> whens;  // (condition, result)
    ExprPtr otherwise;
  };
  // EXISTS { <pattern> } / COUNT { <pattern> }; pattern bindings are local.
  struct ExistsSub {
    std::shared_ptr<const Pattern> pattern;
  };
  struct CountSub {
    std::shared_ptr<const Pattern> pattern;
  };

  using Node = std::variant<IntLit, FloatLit, StringLit, BoolLit, NullLit,
                            VarRef, PropAccess, Unary, Binary, ListLit, MapLit,
                            FnCall, Case, ExistsSub, CountSub>;

  Node node;
  CypherType type;
};

// Factory helpers; they assign the static type.
namespace expr {
ExprPtr int_lit(std::int64_t v);
ExprPtr float_lit(double v);
ExprPtr string_lit(std::string v);
ExprPtr bool_lit(bool v);
ExprPtr null_lit();
ExprPtr var(std::string name, CypherType type);
ExprPtr prop(ExprPtr object, std::string key, CypherType type);
ExprPtr unary(UnaryOp op, ExprPtr operand, CypherType type);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, CypherType type);
ExprPtr list(std::vector<ExprPtr> items, CypherType type);
ExprPtr map(std::vector<std::pair<std::string, ExprPtr>> entries);
ExprPtr fn(std::string name, std::vector<ExprPtr> args, CypherType type);
ExprPtr case_when(std::vector<std::pair<ExprPtr, ExprPtr>> whens,
                  ExprPtr otherwise, CypherType type);
ExprPtr exists(Pattern pattern);
ExprPtr count(Pattern pattern);

// A canonical constant of the given type (0, 0.0, '', false, null, [], {}).
ExprPtr constant_of(const CypherType& type);
}  // namespace expr

// ─── patterns ────────────────────────────────────────────────────────────────

enum class Direction { Left, Right };

using PropertyList = std::vector<std::pair<std::string, ExprPtr>>;

struct NodePattern {
  std::optional<std::string> binding;
  LabelExprPtr labels;  // null when unlabeled
  PropertyList properties;
};

struct RelPattern {
  std::optional<std::string> binding;
  Direction direction = Direction::Right;
  LabelExprPtr types;  // null when untyped (reading patterns only)
  PropertyList properties;
};

// A linear chain: nodes.size() == rels.size() + 1.
struct Pattern {
  std::vector<NodePattern> nodes;
  std::vector<RelPattern> rels;

  void check() const;  // throws ContractError when the chain shape is broken
};

// ─── clauses ─────────────────────────────────────────────────────────────────

struct Clause;

struct Query {
  std::vector<Clause> clauses;
};

struct MatchClause {
  Pattern pattern;
  ExprPtr where;  // null when absent
  bool optional = false;
};

struct CreateClause {
  Pattern pattern;
};

struct MergeClause {
  Pattern pattern;
};

struct DeleteClause {
  std::vector<std::string> targets;  // visible node/relationship variables
  bool detach = false;
};

struct RemoveItem {
  // Exactly one of the two forms: `var.key` or `var:Label`.
  std::string variable;
  std::optional<std::string> property;
  std::optional<std::string> label;
};

struct RemoveClause {
  std::vector<RemoveItem> items;
};

struct SetItem {
  enum class Form { Property, Label, Overwrite };
  Form form = Form::Property;
  std::string variable;
  std::string key;     // Property: property key; Label: label name
  ExprPtr value;       // Property only
  PropertyList map;    // Overwrite only: `var = {..}`
};

struct SetClause {
  std::vector<SetItem> items;
};

struct UnwindClause {
  ExprPtr list;
  std::string alias;
};

struct Projection {
  ExprPtr expr;
  std::optional<std::string> alias;

  // Column name: the alias when present, otherwise the rendered expression
  // text (the name engines give an unaliased column).
  std::string column_name() const;
};

struct OrderItem {
  ExprPtr expr;
  bool descending = false;
};

struct WithClause {
  std::vector<Projection> items;
  std::vector<OrderItem> order_by;
  ExprPtr where;  // null when absent; evaluated on the projected columns
};

struct ReturnClause {
  std::vector<Projection> items;
  std::vector<OrderItem> order_by;
};

struct ForeachClause {
  std::string variable;
  ExprPtr list;
  std::vector<Clause> body;  // updating clauses only
};

struct CallClause {
  std::vector<std::string> imports;  // outer variables named by a leading WITH
  Query body;
};

struct UnionClause {
  Query left;
  Query right;
  bool all = false;
};

struct Clause {
  using Node =
      std::variant<MatchClause, CreateClause, MergeClause, DeleteClause,
                   RemoveClause, SetClause, UnwindClause, WithClause,
                   ReturnClause, ForeachClause, CallClause, UnionClause>;
  Node node;

  ClauseKind kind() const;
};

// Total number of clause nodes, counting nested bodies and union arms.
std::size_t clause_count(const Query& q);
std::size_t clause_count(const Clause& c);

// Structural equality (ignores shared_ptr identity).
bool equal(const Expression& a, const Expression& b);
bool equal(const Pattern& a, const Pattern& b);
bool equal(const Clause& a, const Clause& b);
bool equal(const Query& a, const Query& b);

}  // namespace cypherforge
