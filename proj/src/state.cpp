#include "cypherforge/state.hpp"

#include <algorithm>

namespace cypherforge {

// ─── QueryContext ────────────────────────────────────────────────────────────

QueryContext QueryContext::empty() {
  QueryContext ctx;
  ctx.frames_.push_back({ScopeId{0}, false});
  ctx.next_scope_ = 1;
  return ctx;
}

ScopeId QueryContext::enter_scope(bool barrier) {
  ScopeId id{next_scope_++};
  frames_.push_back({id, barrier});
  return id;
}

std::vector<std::string> QueryContext::close_scope(ScopeId scope) {
  if (frames_.size() <= 1)
    throw ContractError("close_scope: root scope cannot be closed");
  if (frames_.back().id != scope)
    throw ContractError("close_scope: scope is not innermost");
  std::vector<std::string> removed;
  std::erase_if(entries_, [&](const Entry& e) {
    if (e.scope == scope) {
      removed.push_back(e.name);
      return true;
    }
    return false;
  });
  frames_.pop_back();
  return removed;
}

void QueryContext::declare(const std::string& name, CypherType type) {
  if (visible(name))
    throw ContractError("declare: name already visible: " + name);
  entries_.push_back({name, std::move(type), frames_.back().id});
}

void QueryContext::replace_visible(const std::vector<Entry>& columns) {
  std::erase_if(entries_,
                [&](const Entry& e) { return frame_visible(e.scope); });
  for (const auto& col : columns) declare(col.name, col.type);
}

ScopeId QueryContext::innermost_scope() const { return frames_.back().id; }

bool QueryContext::frame_visible(ScopeId scope) const {
  // Scopes from the top of the stack down to the nearest barrier (inclusive)
  // are visible; everything below a barrier is hidden.
  for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
    if (it->id == scope) return true;
    if (it->barrier) return false;
  }
  return false;
}

bool QueryContext::visible(const std::string& name) const {
  return find(name) != nullptr;
}

const QueryContext::Entry* QueryContext::find(const std::string& name) const {
  for (const auto& e : entries_)
    if (e.name == name && frame_visible(e.scope)) return &e;
  return nullptr;
}

std::vector<QueryContext::Entry> QueryContext::visible_entries() const {
  std::vector<Entry> out;
  for (const auto& e : entries_)
    if (frame_visible(e.scope)) out.push_back(e);
  return out;
}

// ─── GraphSchema ─────────────────────────────────────────────────────────────

void GraphSchema::add_property(const std::string& key, CypherType type) {
  properties.try_emplace(key, std::move(type));
}

const CypherType* GraphSchema::property_type(const std::string& key) const {
  auto it = properties.find(key);
  return it == properties.end() ? nullptr : &it->second;
}

// ─── clause effects ──────────────────────────────────────────────────────────

ClauseEffect clause_effect(ClauseKind kind) {
  switch (base_kind(kind)) {
    case ClauseKind::Match:
    case ClauseKind::Unwind:
    case ClauseKind::With:
    case ClauseKind::Return:
      return {Effect::Add, Effect::None, Effect::None, false};
    case ClauseKind::Create:
    case ClauseKind::Merge:
      return {Effect::Add, Effect::Add, Effect::Add, false};
    case ClauseKind::Delete:
      return {Effect::None, Effect::None, Effect::None, false};
    case ClauseKind::Remove:
      return {Effect::None, Effect::Remove, Effect::Remove, false};
    case ClauseKind::Set:
      return {Effect::None, Effect::AddRemove, Effect::AddRemove, false};
    case ClauseKind::Foreach:
    case ClauseKind::Call:
    case ClauseKind::Union:
    case ClauseKind::Exists:
    case ClauseKind::Count:
      return {Effect::AddRemove, Effect::AddRemove, Effect::AddRemove, true};
    default:
      throw ContractError("clause_effect: unknown kind");
  }
}

CypherType list_element_type(const CypherType& list_type) {
  if (list_type.is_list()) {
    if (list_type.element().kind() == CypherType::Kind::Any)
      return CypherType::null();
    return list_type.element();
  }
  return CypherType::null();
}

// ─── state walker ────────────────────────────────────────────────────────────

namespace {

// Shared walk that advances (ctx, schema) and optionally tallies reference
// occurrences that resolve to earlier declarations / introductions.
class Walker {
 public:
  Walker(QueryContext& ctx, GraphSchema& schema, StateObserver* obs,
         DependencyCount* deps)
      : ctx_(ctx), schema_(schema), obs_(obs), deps_(deps) {}

  void clause(const Clause& c) {
    std::visit([&](const auto& n) { handle(n); }, c.node);
    if (obs_) obs_->on_clause_applied(c, ctx_, schema_);
  }

 private:
  enum class PatternMode { Read, Write };

  void use_var(const std::string& name) {
    if (deps_ && ctx_.find(name)) ++deps_->context;
  }

  void key_occurrence(const std::string& key, bool introduce,
                      const CypherType& type) {
    if (deps_ && schema_.property_type(key)) ++deps_->schema;
    if (introduce) schema_.add_property(key, type);
  }

  void node_label_occurrence(const std::string& name, bool introduce) {
    if (deps_ && schema_.node_labels.count(name)) ++deps_->schema;
    if (introduce) schema_.add_node_label(name);
  }

  void rel_type_occurrence(const std::string& name, bool introduce) {
    if (deps_ && schema_.rel_types.count(name)) ++deps_->schema;
    if (introduce) schema_.add_rel_type(name);
  }

  void expression(const Expression& e) {
    using E = Expression;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, E::VarRef>) {
            use_var(n.name);
          } else if constexpr (std::is_same_v<T, E::PropAccess>) {
            expression(*n.object);
            key_occurrence(n.key, false, CypherType::any());
          } else if constexpr (std::is_same_v<T, E::Unary>) {
            expression(*n.operand);
          } else if constexpr (std::is_same_v<T, E::Binary>) {
            expression(*n.lhs);
            expression(*n.rhs);
          } else if constexpr (std::is_same_v<T, E::ListLit>) {
            for (const auto& item : n.items) expression(*item);
          } else if constexpr (std::is_same_v<T, E::MapLit>) {
            for (const auto& [key, value] : n.entries) expression(*value);
          } else if constexpr (std::is_same_v<T, E::FnCall>) {
            for (const auto& arg : n.args) expression(*arg);
          } else if constexpr (std::is_same_v<T, E::Case>) {
            for (const auto& [cond, result] : n.whens) {
              expression(*cond);
              expression(*result);
            }
            if (n.otherwise) expression(*n.otherwise);
          } else if constexpr (std::is_same_v<T, E::ExistsSub> ||
                               std::is_same_v<T, E::CountSub>) {
            ScopeId id = ctx_.enter_scope(false);
            pattern(*n.pattern, PatternMode::Read);
            ctx_.close_scope(id);
          }
        },
        e.node);
  }

  void properties(const PropertyList& props, PatternMode mode) {
    for (const auto& [key, value] : props) {
      bool introduce = mode == PatternMode::Write;
      // Occurrence check precedes the value walk; the introduction lands
      // after the element completes, so later elements see it.
      if (deps_ && schema_.property_type(key)) ++deps_->schema;
      expression(*value);
      if (introduce) schema_.add_property(key, value->type);
    }
  }

  void label_names(const LabelExprPtr& labels, bool rel_position,
                   PatternMode mode) {
    if (!labels) return;
    for (const auto& name : labels->names()) {
      bool introduce = mode == PatternMode::Write;
      if (rel_position)
        rel_type_occurrence(name, introduce);
      else
        node_label_occurrence(name, introduce);
    }
  }

  void pattern(const Pattern& p, PatternMode mode) {
    p.check();
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      const NodePattern& n = p.nodes[i];
      if (n.binding) {
        if (ctx_.visible(*n.binding))
          use_var(*n.binding);
        else
          ctx_.declare(*n.binding, CypherType::node());
      }
      label_names(n.labels, false, mode);
      properties(n.properties, mode);
      if (i < p.rels.size()) {
        const RelPattern& r = p.rels[i];
        if (r.binding) {
          if (ctx_.visible(*r.binding))
            use_var(*r.binding);
          else
            ctx_.declare(*r.binding, CypherType::relationship());
        }
        label_names(r.types, true, mode);
        properties(r.properties, mode);
      }
    }
  }

  void project(const std::vector<Projection>& items,
               const std::vector<OrderItem>& order_by,
               const ExprPtr& where) {
    for (const auto& item : items) expression(*item.expr);
    // Only aliased items and plain variables become referenceable bindings;
    // an unaliased constant column (RETURN 0) binds nothing.
    std::vector<QueryContext::Entry> columns;
    for (const auto& item : items)
      if (item.alias ||
          std::holds_alternative<Expression::VarRef>(item.expr->node))
        columns.push_back({item.column_name(), item.expr->type, ScopeId{}});
    ctx_.replace_visible(columns);
    for (const auto& item : order_by) expression(*item.expr);
    if (where) expression(*where);
  }

  void handle(const MatchClause& c) {
    pattern(c.pattern, PatternMode::Read);
    if (c.where) expression(*c.where);
  }

  void handle(const CreateClause& c) { pattern(c.pattern, PatternMode::Write); }
  void handle(const MergeClause& c) { pattern(c.pattern, PatternMode::Write); }

  void handle(const DeleteClause& c) {
    for (const auto& name : c.targets) use_var(name);
  }

  void handle(const RemoveClause& c) {
    for (const auto& item : c.items) {
      use_var(item.variable);
      if (item.property) {
        if (deps_ && schema_.property_type(*item.property)) ++deps_->schema;
        schema_.properties.erase(*item.property);
      } else if (item.label) {
        if (deps_ && schema_.node_labels.count(*item.label)) ++deps_->schema;
        schema_.node_labels.erase(*item.label);
      }
    }
  }

  void handle(const SetClause& c) {
    for (const auto& item : c.items) {
      use_var(item.variable);
      switch (item.form) {
        case SetItem::Form::Property:
          if (deps_ && schema_.property_type(item.key)) ++deps_->schema;
          expression(*item.value);
          schema_.add_property(item.key, item.value->type);
          break;
        case SetItem::Form::Label:
          node_label_occurrence(item.key, true);
          break;
        case SetItem::Form::Overwrite:
          for (const auto& [key, value] : item.map) {
            if (deps_ && schema_.property_type(key)) ++deps_->schema;
            expression(*value);
            schema_.add_property(key, value->type);
          }
          break;
      }
    }
  }

  void handle(const UnwindClause& c) {
    expression(*c.list);
    ctx_.declare(c.alias, list_element_type(c.list->type));
  }

  void handle(const WithClause& c) { project(c.items, c.order_by, c.where); }
  void handle(const ReturnClause& c) { project(c.items, c.order_by, nullptr); }

  void handle(const ForeachClause& c) {
    expression(*c.list);
    ScopeId id = ctx_.enter_scope(false);
    if (obs_) obs_->on_scope_entered(ClauseKind::Foreach, id, ctx_, schema_);
    ctx_.declare(c.variable, list_element_type(c.list->type));
    for (const auto& sub : c.body) clause(sub);
    auto removed = ctx_.close_scope(id);
    if (obs_)
      obs_->on_scope_closed(ClauseKind::Foreach, id, removed, ctx_, schema_);
  }

  void handle(const CallClause& c) {
    std::vector<QueryContext::Entry> imports;
    for (const auto& name : c.imports) {
      use_var(name);
      const auto* entry = ctx_.find(name);
      imports.push_back(
          {name, entry ? entry->type : CypherType::null(), ScopeId{}});
    }
    ScopeId id = ctx_.enter_scope(true);
    if (obs_) obs_->on_scope_entered(ClauseKind::Call, id, ctx_, schema_);
    for (const auto& imp : imports) ctx_.declare(imp.name, imp.type);
    for (const auto& sub : c.body.clauses) clause(sub);
    // A trailing RETURN leaves exactly its columns visible inside the
    // barrier; those become bindings of the enclosing scope.
    std::vector<QueryContext::Entry> columns;
    if (!c.body.clauses.empty() &&
        c.body.clauses.back().kind() == ClauseKind::Return)
      columns = ctx_.visible_entries();
    auto removed = ctx_.close_scope(id);
    if (obs_)
      obs_->on_scope_closed(ClauseKind::Call, id, removed, ctx_, schema_);
    for (const auto& col : columns) ctx_.declare(col.name, col.type);
  }

  void handle(const UnionClause& c) {
    for (const Query* arm : {&c.left, &c.right}) {
      ScopeId id = ctx_.enter_scope(true);
      if (obs_) obs_->on_scope_entered(ClauseKind::Union, id, ctx_, schema_);
      for (const auto& sub : arm->clauses) clause(sub);
      auto removed = ctx_.close_scope(id);
      if (obs_)
        obs_->on_scope_closed(ClauseKind::Union, id, removed, ctx_, schema_);
    }
  }

  QueryContext& ctx_;
  GraphSchema& schema_;
  StateObserver* obs_;
  DependencyCount* deps_;
};

}  // namespace

void apply_clause(QueryContext& ctx, GraphSchema& schema, const Clause& c,
                  StateObserver* observer) {
  Walker(ctx, schema, observer, nullptr).clause(c);
}

void apply_query(QueryContext& ctx, GraphSchema& schema, const Query& q,
                 StateObserver* observer) {
  for (const auto& c : q.clauses) apply_clause(ctx, schema, c, observer);
}

DependencyCount count_dependencies(const Query& q) {
  QueryContext ctx = QueryContext::empty();
  GraphSchema schema;
  DependencyCount deps;
  Walker walker(ctx, schema, nullptr, &deps);
  for (const auto& c : q.clauses) walker.clause(c);
  return deps;
}

}  // namespace cypherforge
