#include "cypherforge/reducer.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "cypherforge/generator.hpp"
#include "cypherforge/render.hpp"
#include "cypherforge/types.hpp"
#include "cypherforge/validator.hpp"

namespace cypherforge {
namespace {

// ─── well-founded progress measure ───────────────────────────────────────────
//
// Accepted steps must strictly decrease (clauses, nodes, rank). Pattern
// elements cost 2 so RETURN 0 undercuts every one-clause write, and the rank
// component lets same-size weakenings (MERGE→CREATE) count as progress.

std::size_t expr_nodes(const ExprPtr& e);

std::size_t label_nodes(const LabelExprPtr& e) {
  if (!e) return 0;
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LabelExpr::Leaf>)
          return 1;
        else if constexpr (std::is_same_v<T, LabelExpr::And>)
          return 1 + label_nodes(n.lhs) + label_nodes(n.rhs);
        else
          return 1 + label_nodes(n.operand);
      },
      e->node);
}

std::size_t props_nodes(const PropertyList& props) {
  std::size_t total = 0;
  for (const auto& [key, value] : props) total += 1 + expr_nodes(value);
  return total;
}

std::size_t pattern_nodes(const Pattern& p) {
  std::size_t total = 0;
  for (const auto& node : p.nodes)
    total += 2 + label_nodes(node.labels) + props_nodes(node.properties);
  for (const auto& rel : p.rels)
    total += 2 + label_nodes(rel.types) + props_nodes(rel.properties);
  return total;
}

std::size_t expr_nodes(const ExprPtr& e) {
  if (!e) return 0;
  using E = Expression;
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, E::PropAccess>) {
          return 1 + expr_nodes(n.object);
        } else if constexpr (std::is_same_v<T, E::Unary>) {
          return 1 + expr_nodes(n.operand);
        } else if constexpr (std::is_same_v<T, E::Binary>) {
          return 1 + expr_nodes(n.lhs) + expr_nodes(n.rhs);
        } else if constexpr (std::is_same_v<T, E::ListLit>) {
          std::size_t total = 1;
          for (const auto& item : n.items) total += expr_nodes(item);
          return total;
        } else if constexpr (std::is_same_v<T, E::MapLit>) {
          std::size_t total = 1;
          for (const auto& [key, value] : n.entries)
            total += 1 + expr_nodes(value);
          return total;
        } else if constexpr (std::is_same_v<T, E::FnCall>) {
          std::size_t total = 1;
          for (const auto& arg : n.args) total += expr_nodes(arg);
          return total;
        } else if constexpr (std::is_same_v<T, E::Case>) {
          std::size_t total = 1 + expr_nodes(n.otherwise);
          for (const auto& [cond, value] : n.whens)
            total += expr_nodes(cond) + expr_nodes(value);
          return total;
        } else if constexpr (std::is_same_v<T, E::ExistsSub> ||
                             std::is_same_v<T, E::CountSub>) {
          return 1 + pattern_nodes(*n.pattern);
        } else {
          return 1;
        }
      },
      e->node);
}

std::size_t query_nodes(const Query& q);

std::size_t clause_nodes(const Clause& c) {
  return std::visit(
      [](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, MatchClause>) {
          return 1 + pattern_nodes(n.pattern) + expr_nodes(n.where);
        } else if constexpr (std::is_same_v<T, CreateClause> ||
                             std::is_same_v<T, MergeClause>) {
          return 1 + pattern_nodes(n.pattern);
        } else if constexpr (std::is_same_v<T, DeleteClause>) {
          return 1 + n.targets.size();
        } else if constexpr (std::is_same_v<T, RemoveClause>) {
          return 1 + n.items.size();
        } else if constexpr (std::is_same_v<T, SetClause>) {
          std::size_t total = 1;
          for (const auto& item : n.items)
            total += 1 + expr_nodes(item.value) + props_nodes(item.map);
          return total;
        } else if constexpr (std::is_same_v<T, UnwindClause>) {
          return 1 + expr_nodes(n.list);
        } else if constexpr (std::is_same_v<T, WithClause>) {
          std::size_t total = 1 + expr_nodes(n.where);
          for (const auto& item : n.items) total += 1 + expr_nodes(item.expr);
          for (const auto& item : n.order_by)
            total += 1 + expr_nodes(item.expr);
          return total;
        } else if constexpr (std::is_same_v<T, ReturnClause>) {
          std::size_t total = 1;
          for (const auto& item : n.items) total += 1 + expr_nodes(item.expr);
          for (const auto& item : n.order_by)
            total += 1 + expr_nodes(item.expr);
          return total;
        } else if constexpr (std::is_same_v<T, ForeachClause>) {
          std::size_t total = 2 + expr_nodes(n.list);
          for (const auto& sub : n.body) total += clause_nodes(sub);
          return total;
        } else if constexpr (std::is_same_v<T, CallClause>) {
          return 1 + n.imports.size() + query_nodes(n.body);
        } else {
          return 1 + query_nodes(n.left) + query_nodes(n.right);
        }
      },
      c.node);
}

std::size_t query_nodes(const Query& q) {
  std::size_t total = 0;
  for (const auto& c : q.clauses) total += clause_nodes(c);
  return total;
}

std::size_t kind_rank(ClauseKind k) {
  switch (k) {
    case ClauseKind::Merge:
    case ClauseKind::OptionalMatch:
    case ClauseKind::DetachDelete:
      return 1;
    default:
      return 0;
  }
}

std::size_t rank_sum(const Query& q);

std::size_t rank_sum(const Clause& c) {
  std::size_t total = kind_rank(c.kind());
  if (const auto* f = std::get_if<ForeachClause>(&c.node))
    for (const auto& sub : f->body) total += rank_sum(sub);
  if (const auto* call = std::get_if<CallClause>(&c.node))
    total += rank_sum(call->body);
  if (const auto* u = std::get_if<UnionClause>(&c.node))
    total += rank_sum(u->left) + rank_sum(u->right);
  return total;
}

std::size_t rank_sum(const Query& q) {
  std::size_t total = 0;
  for (const auto& c : q.clauses) total += rank_sum(c);
  return total;
}

struct Measure {
  std::size_t clauses = 0;
  std::size_t nodes = 0;
  std::size_t rank = 0;

  auto operator<=>(const Measure&) const = default;
};

Measure measure_of(const Query& q) {
  return {clause_count(q), query_nodes(q), rank_sum(q)};
}

// ─── structural repair ───────────────────────────────────────────────────────

Clause return_zero() {
  ReturnClause r;
  r.items.push_back(Projection{expr::int_lit(0), std::nullopt});
  return Clause{std::move(r)};
}

// Visibility mirror of the validator's environment chain, but rewriting:
// dangling references are replaced instead of reported.
class Repairer {
 public:
  Query run(Query q) {
    envs_.push_back({true, {}});
    Query out;
    for (Clause& c : q.clauses)
      if (auto fixed = fix_clause(std::move(c)))
        out.clauses.push_back(std::move(*fixed));
    if (out.clauses.empty() || !terminal_kind(out.clauses.back().kind()))
      out.clauses.push_back(return_zero());
    return out;
  }

 private:
  struct Bind {
    std::string name;
    bool dropped = false;
  };
  struct Env {
    bool barrier;
    std::vector<Bind> binds;
  };

  bool visible(const std::string& name) const {
    bool crossed = false;
    for (auto env = envs_.rbegin(); env != envs_.rend(); ++env) {
      for (auto b = env->binds.rbegin(); b != env->binds.rend(); ++b)
        if (!b->dropped && b->name == name) return !crossed;
      if (env->barrier) crossed = true;
    }
    return false;
  }

  void bind(const std::string& name) {
    if (visible(name)) return;
    envs_.back().binds.push_back({name, false});
  }

  void replace_visible(const std::vector<std::string>& columns) {
    for (auto env = envs_.rbegin(); env != envs_.rend(); ++env) {
      for (auto& b : env->binds) b.dropped = true;
      if (env->barrier) break;
    }
    for (const auto& name : columns) bind(name);
  }

  std::vector<std::string> visible_columns() const {
    std::vector<std::string> out;
    std::size_t first = envs_.size();
    while (first > 0 && !envs_[first - 1].barrier) --first;
    if (first > 0) --first;
    for (std::size_t i = first; i < envs_.size(); ++i)
      for (const auto& b : envs_[i].binds)
        if (!b.dropped) out.push_back(b.name);
    return out;
  }

  static ExprPtr rebuild(const ExprPtr& orig, Expression::Node node) {
    auto p = std::make_shared<Expression>();
    p->node = std::move(node);
    p->type = orig->type;
    return p;
  }

  ExprPtr fix(const ExprPtr& e) {
    if (!e) return e;
    using E = Expression;
    return std::visit(
        [&](const auto& n) -> ExprPtr {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, E::VarRef>) {
            return visible(n.name) ? e : expr::constant_of(e->type);
          } else if constexpr (std::is_same_v<T, E::PropAccess>) {
            ExprPtr object = fix(n.object);
            if (object == n.object) return e;
            return rebuild(e, E::PropAccess{std::move(object), n.key});
          } else if constexpr (std::is_same_v<T, E::Unary>) {
            ExprPtr operand = fix(n.operand);
            if (operand == n.operand) return e;
            return rebuild(e, E::Unary{n.op, std::move(operand)});
          } else if constexpr (std::is_same_v<T, E::Binary>) {
            ExprPtr lhs = fix(n.lhs);
            ExprPtr rhs = fix(n.rhs);
            if (lhs == n.lhs && rhs == n.rhs) return e;
            return rebuild(e, E::Binary{n.op, std::move(lhs), std::move(rhs)});
          } else if constexpr (std::is_same_v<T, E::ListLit>) {
            bool changed = false;
            std::vector<ExprPtr> items;
            items.reserve(n.items.size());
            for (const auto& item : n.items) {
              items.push_back(fix(item));
              changed = changed || items.back() != item;
            }
            if (!changed) return e;
            return rebuild(e, E::ListLit{std::move(items)});
          } else if constexpr (std::is_same_v<T, E::MapLit>) {
            bool changed = false;
            auto entries = n.entries;
            for (auto& [key, value] : entries) {
              ExprPtr f = fix(value);
              changed = changed || f != value;
              value = std::move(f);
            }
            if (!changed) return e;
            return rebuild(e, E::MapLit{std::move(entries)});
          } else if constexpr (std::is_same_v<T, E::FnCall>) {
            bool changed = false;
            std::vector<ExprPtr> args;
            args.reserve(n.args.size());
            for (const auto& arg : n.args) {
              args.push_back(fix(arg));
              changed = changed || args.back() != arg;
            }
            if (!changed) return e;
            return rebuild(e, E::FnCall{n.name, std::move(args)});
          } else if constexpr (std::is_same_v<T, E::Case>) {
            bool changed = false;
            auto whens = n.whens;
            for (auto& [cond, value] : whens) {
              ExprPtr fc = fix(cond);
              ExprPtr fv = fix(value);
              changed = changed || fc != cond || fv != value;
              cond = std::move(fc);
              value = std::move(fv);
            }
            ExprPtr otherwise = fix(n.otherwise);
            changed = changed || otherwise != n.otherwise;
            if (!changed) return e;
            return rebuild(e, E::Case{std::move(whens), std::move(otherwise)});
          } else if constexpr (std::is_same_v<T, E::ExistsSub> ||
                               std::is_same_v<T, E::CountSub>) {
            Pattern p = *n.pattern;
            envs_.push_back({false, {}});
            bool changed = fix_pattern(p);
            envs_.pop_back();
            if (!changed) return e;
            auto shared = std::make_shared<Pattern>(std::move(p));
            if constexpr (std::is_same_v<T, E::ExistsSub>)
              return rebuild(e, E::ExistsSub{std::move(shared)});
            else
              return rebuild(e, E::CountSub{std::move(shared)});
          } else {
            return e;
          }
        },
        e->node);
  }

  bool fix_props(PropertyList& props) {
    bool changed = false;
    for (auto& [key, value] : props) {
      ExprPtr f = fix(value);
      changed = changed || f != value;
      value = std::move(f);
    }
    return changed;
  }

  // Pattern bindings need no substitution: a name whose binder died simply
  // becomes a fresh binding here.
  bool fix_pattern(Pattern& p) {
    bool changed = false;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      NodePattern& node = p.nodes[i];
      if (node.binding) bind(*node.binding);
      changed = fix_props(node.properties) || changed;
      if (i < p.rels.size()) {
        RelPattern& rel = p.rels[i];
        if (rel.binding) bind(*rel.binding);
        changed = fix_props(rel.properties) || changed;
      }
    }
    return changed;
  }

  void fix_projection(std::vector<Projection>& items) {
    for (auto& item : items) {
      if (!item.alias) {
        if (const auto* v =
                std::get_if<Expression::VarRef>(&item.expr->node)) {
          if (!visible(v->name)) {
            // Keep the column name alive for downstream references.
            item.alias = v->name;
            item.expr = expr::constant_of(item.expr->type);
            continue;
          }
        }
      }
      item.expr = fix(item.expr);
    }
  }

  void project(const std::vector<Projection>& items) {
    std::vector<std::string> columns;
    for (const auto& item : items)
      if (item.alias ||
          std::holds_alternative<Expression::VarRef>(item.expr->node))
        columns.push_back(item.column_name());
    replace_visible(columns);
  }

  void fix_arm(Query& q) {
    envs_.push_back({true, {}});
    std::vector<Clause> body;
    for (Clause& sub : q.clauses)
      if (auto fixed = fix_clause(std::move(sub)))
        body.push_back(std::move(*fixed));
    q.clauses = std::move(body);
    envs_.pop_back();
  }

  std::optional<Clause> fix_clause(Clause c) {
    bool keep = true;
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, MatchClause>) {
            fix_pattern(n.pattern);
            n.where = fix(n.where);
          } else if constexpr (std::is_same_v<T, CreateClause> ||
                               std::is_same_v<T, MergeClause>) {
            fix_pattern(n.pattern);
          } else if constexpr (std::is_same_v<T, DeleteClause>) {
            std::erase_if(n.targets, [&](const std::string& t) {
              return !visible(t);
            });
            keep = !n.targets.empty();
          } else if constexpr (std::is_same_v<T, RemoveClause>) {
            std::erase_if(n.items, [&](const RemoveItem& item) {
              return !visible(item.variable);
            });
            keep = !n.items.empty();
          } else if constexpr (std::is_same_v<T, SetClause>) {
            std::erase_if(n.items, [&](const SetItem& item) {
              return !visible(item.variable);
            });
            for (auto& item : n.items) {
              if (item.value) item.value = fix(item.value);
              fix_props(item.map);
            }
            keep = !n.items.empty();
          } else if constexpr (std::is_same_v<T, UnwindClause>) {
            n.list = fix(n.list);
            bind(n.alias);
          } else if constexpr (std::is_same_v<T, WithClause>) {
            fix_projection(n.items);
            project(n.items);
            for (auto& item : n.order_by) item.expr = fix(item.expr);
            n.where = fix(n.where);
          } else if constexpr (std::is_same_v<T, ReturnClause>) {
            fix_projection(n.items);
            project(n.items);
            for (auto& item : n.order_by) item.expr = fix(item.expr);
          } else if constexpr (std::is_same_v<T, ForeachClause>) {
            n.list = fix(n.list);
            envs_.push_back({false, {}});
            bind(n.variable);
            std::vector<Clause> body;
            for (Clause& sub : n.body)
              if (auto fixed = fix_clause(std::move(sub)))
                body.push_back(std::move(*fixed));
            envs_.pop_back();
            n.body = std::move(body);
            keep = !n.body.empty();
          } else if constexpr (std::is_same_v<T, CallClause>) {
            std::erase_if(n.imports, [&](const std::string& v) {
              return !visible(v);
            });
            envs_.push_back({true, {}});
            for (const auto& v : n.imports) bind(v);
            std::vector<Clause> body;
            for (Clause& sub : n.body.clauses)
              if (auto fixed = fix_clause(std::move(sub)))
                body.push_back(std::move(*fixed));
            n.body.clauses = std::move(body);
            std::vector<std::string> columns;
            if (!n.body.clauses.empty() &&
                n.body.clauses.back().kind() == ClauseKind::Return)
              columns = visible_columns();
            envs_.pop_back();
            if (n.body.clauses.empty() ||
                !terminal_kind(n.body.clauses.back().kind())) {
              keep = false;
            } else {
              for (const auto& col : columns) bind(col);
            }
          } else if constexpr (std::is_same_v<T, UnionClause>) {
            fix_arm(n.left);
            fix_arm(n.right);
          }
        },
        c.node);
    if (!keep) return std::nullopt;
    return c;
  }

  std::vector<Env> envs_;
};

// ─── replacement rules ───────────────────────────────────────────────────────

ExprPtr simpler_constant(const ExprPtr& e) {
  if (!e) return nullptr;
  ExprPtr k = expr::constant_of(e->type);
  if (equal(*k, *e)) return nullptr;
  return k;
}

template <typename PatternClause>
void pattern_constant_variants(const PatternClause& base,
                               std::vector<Clause>& out) {
  const Pattern& p = base.pattern;
  for (std::size_t ni = 0; ni < p.nodes.size(); ++ni)
    for (std::size_t pi = 0; pi < p.nodes[ni].properties.size(); ++pi)
      if (ExprPtr k = simpler_constant(p.nodes[ni].properties[pi].second)) {
        PatternClause v = base;
        v.pattern.nodes[ni].properties[pi].second = std::move(k);
        out.push_back(Clause{std::move(v)});
      }
  for (std::size_t ri = 0; ri < p.rels.size(); ++ri)
    for (std::size_t pi = 0; pi < p.rels[ri].properties.size(); ++pi)
      if (ExprPtr k = simpler_constant(p.rels[ri].properties[pi].second)) {
        PatternClause v = base;
        v.pattern.rels[ri].properties[pi].second = std::move(k);
        out.push_back(Clause{std::move(v)});
      }
}

template <typename ProjectionClause>
void projection_variants(const ProjectionClause& base,
                         std::vector<Clause>& out) {
  if (!base.order_by.empty()) {
    ProjectionClause v = base;
    v.order_by.clear();
    out.push_back(Clause{std::move(v)});
  }
  for (std::size_t j = 0; j < base.items.size(); ++j)
    if (ExprPtr k = simpler_constant(base.items[j].expr)) {
      ProjectionClause v = base;
      if (!v.items[j].alias &&
          std::holds_alternative<Expression::VarRef>(base.items[j].expr->node))
        v.items[j].alias = base.items[j].column_name();
      v.items[j].expr = std::move(k);
      out.push_back(Clause{std::move(v)});
    }
}

}  // namespace

Query repair(Query q) { return Repairer().run(std::move(q)); }

std::vector<Clause> replacements_for(const Clause& c) {
  std::vector<Clause> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CallClause>) {
          for (const Clause& sub : n.body.clauses) out.push_back(sub);
          if (n.body.clauses.size() > 1)
            for (std::size_t j = 0; j < n.body.clauses.size(); ++j) {
              CallClause v = n;
              v.body.clauses.erase(v.body.clauses.begin() +
                                   static_cast<std::ptrdiff_t>(j));
              if (terminal_kind(v.body.clauses.back().kind()))
                out.push_back(Clause{std::move(v)});
            }
        } else if constexpr (std::is_same_v<T, ForeachClause>) {
          for (const Clause& sub : n.body) out.push_back(sub);
          if (n.body.size() > 1)
            for (std::size_t j = 0; j < n.body.size(); ++j) {
              ForeachClause v = n;
              v.body.erase(v.body.begin() + static_cast<std::ptrdiff_t>(j));
              out.push_back(Clause{std::move(v)});
            }
          if (ExprPtr k = simpler_constant(n.list)) {
            ForeachClause v = n;
            v.list = std::move(k);
            out.push_back(Clause{std::move(v)});
          }
        } else if constexpr (std::is_same_v<T, UnionClause>) {
          for (const Clause& sub : n.left.clauses) out.push_back(sub);
          for (const Clause& sub : n.right.clauses) out.push_back(sub);
        } else if constexpr (std::is_same_v<T, MergeClause>) {
          out.push_back(Clause{CreateClause{n.pattern}});
          pattern_constant_variants(n, out);
        } else if constexpr (std::is_same_v<T, CreateClause>) {
          pattern_constant_variants(n, out);
        } else if constexpr (std::is_same_v<T, MatchClause>) {
          if (n.optional) {
            MatchClause v = n;
            v.optional = false;
            out.push_back(Clause{std::move(v)});
          }
          if (n.where) {
            MatchClause v = n;
            v.where = nullptr;
            out.push_back(Clause{std::move(v)});
          }
          pattern_constant_variants(n, out);
        } else if constexpr (std::is_same_v<T, DeleteClause>) {
          if (n.detach) {
            DeleteClause v = n;
            v.detach = false;
            out.push_back(Clause{std::move(v)});
          }
        } else if constexpr (std::is_same_v<T, SetClause>) {
          for (std::size_t j = 0; j < n.items.size(); ++j) {
            const SetItem& item = n.items[j];
            if (item.form == SetItem::Form::Property) {
              if (ExprPtr k = simpler_constant(item.value)) {
                SetClause v = n;
                v.items[j].value = std::move(k);
                out.push_back(Clause{std::move(v)});
              }
            } else if (item.form == SetItem::Form::Overwrite) {
              for (std::size_t m = 0; m < item.map.size(); ++m)
                if (ExprPtr k = simpler_constant(item.map[m].second)) {
                  SetClause v = n;
                  v.items[j].map[m].second = std::move(k);
                  out.push_back(Clause{std::move(v)});
                }
            }
          }
        } else if constexpr (std::is_same_v<T, UnwindClause>) {
          if (ExprPtr k = simpler_constant(n.list)) {
            UnwindClause v = n;
            v.list = std::move(k);
            out.push_back(Clause{std::move(v)});
          }
        } else if constexpr (std::is_same_v<T, WithClause>) {
          if (n.where) {
            WithClause v = n;
            v.where = nullptr;
            out.push_back(Clause{std::move(v)});
          }
          projection_variants(n, out);
        } else if constexpr (std::is_same_v<T, ReturnClause>) {
          projection_variants(n, out);
        }
      },
      c.node);
  return out;
}

ReduceResult reduce(const Query& q0, const TriggerPredicate& triggers) {
  ReduceResult result;
  std::map<std::string, bool> memo;
  auto memoized = [&](const Query& q) {
    std::string text = render(q);
    auto it = memo.find(text);
    if (it != memo.end()) {
      ++result.memo_hits;
      return it->second;
    }
    ++result.predicate_calls;
    bool r = triggers(q);
    memo.emplace(std::move(text), r);
    return r;
  };

  if (!memoized(q0))
    throw ContractError("reduction input does not trigger the predicate");
  const bool require_clean = validate(q0).clean();

  Query cur = q0;
  Measure cur_m = measure_of(cur);
  bool flaky = false;

  auto attempt = [&](Query cand, ReduceStep::Action action, std::size_t i) {
    cand = repair(std::move(cand));
    Measure m = measure_of(cand);
    bool ok = m < cur_m && (!require_clean || validate(cand).clean()) &&
              memoized(cand);
    result.steps.push_back({action, i, ok, clause_count(cand)});
    if (!ok) return false;
    // Fresh probe past the memo: a deterministic predicate must agree.
    ++result.predicate_calls;
    if (!triggers(cand)) flaky = true;
    cur = std::move(cand);
    cur_m = m;
    return true;
  };

  for (;;) {
    bool progress = false;
    for (std::size_t i = 0; i < cur.clauses.size() && !progress; ++i) {
      Query del = cur;
      del.clauses.erase(del.clauses.begin() + static_cast<std::ptrdiff_t>(i));
      progress = attempt(std::move(del), ReduceStep::Action::Delete, i);
      if (progress) break;
      for (const Clause& alt : replacements_for(cur.clauses[i])) {
        Query cand = cur;
        cand.clauses[i] = alt;
        if (attempt(std::move(cand), ReduceStep::Action::Replace, i)) {
          progress = true;
          break;
        }
      }
    }
    if (!progress || flaky) break;
  }

  result.minimal = !flaky;
  result.query = std::move(cur);
  return result;
}

}  // namespace cypherforge
