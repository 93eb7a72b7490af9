#include "cypherforge/generator.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "cypherforge/functions.hpp"

namespace cypherforge {

namespace {

// Fine-grained shape probabilities. The campaign-level knobs (continue
// probability, reuse probabilities, weights, depth caps) live in GenConfig;
// these only shade how individual clauses look.
constexpr double kWhereProb = 0.3;
constexpr double kNodeBindingProb = 0.35;
constexpr double kRelBindingProb = 0.25;
constexpr double kDetachProb = 0.85;
constexpr double kKeepProb = 0.7;
constexpr double kOrderByProb = 0.2;
constexpr double kOrderDescProb = 0.3;
constexpr double kProjWhereProb = 0.2;
constexpr double kAggregateProb = 0.2;
constexpr double kCallImportProb = 0.35;
constexpr double kCallReturnProb = 0.5;
constexpr double kInnerContinueProb = 0.5;
constexpr double kUnionAllProb = 0.5;
constexpr unsigned kCallBodyCap = 4;
constexpr unsigned kUnionBodyCap = 3;

bool is_entity(const CypherType& t) { return t.is_graph_entity(); }

bool has_entity(const QueryContext& ctx) {
  for (const auto& entry : ctx.visible_entries())
    if (is_entity(entry.type)) return true;
  return false;
}

bool has_visible_of(const QueryContext& ctx, const CypherType& t) {
  for (const auto& entry : ctx.visible_entries())
    if (entry.type == t) return true;
  return false;
}

bool scalar_kind(const CypherType& t) {
  switch (t.kind()) {
    case CypherType::Kind::Integer:
    case CypherType::Kind::Float:
    case CypherType::Kind::String:
    case CypherType::Kind::Boolean:
      return true;
    default:
      return false;
  }
}

// Calls that can produce `want`. Generic functions are instantiated at the
// wanted type; signatures with graph-entity arguments only qualify when a
// variable of that type is visible (a literal argument cannot supply one).
std::vector<FnSignature> fn_candidates(const CypherType& want,
                                       const QueryContext& ctx) {
  std::vector<FnSignature> out;
  for (const auto& sig : builtin_signatures()) {
    if (!sig.ret.unifies_with(want)) continue;
    bool feasible = true;
    for (const auto& arg : sig.args)
      if (arg.is_graph_entity() && !has_visible_of(ctx, arg)) feasible = false;
    if (feasible) out.push_back(sig);
  }
  if (scalar_kind(want)) {
    out.push_back({"head", want, {CypherType::list(want)}});
    out.push_back({"last", want, {CypherType::list(want)}});
  }
  if (scalar_kind(want) || want.is_list() || want == CypherType::map())
    out.push_back({"coalesce", want, {want, want}});
  return out;
}

enum class Form {
  Constant,
  Null,
  Unary,
  Binary,
  Fn,
  Case,
  ListLit,
  MapLit,
  Exists,
  CountSub,
};

}  // namespace

bool terminal_kind(ClauseKind k) {
  switch (base_kind(k)) {
    case ClauseKind::Return:
    case ClauseKind::Create:
    case ClauseKind::Merge:
    case ClauseKind::Delete:
    case ClauseKind::Set:
    case ClauseKind::Remove:
    case ClauseKind::Foreach:
    case ClauseKind::Union:
      return true;
    default:
      return false;
  }
}

std::vector<ClauseKind> legal_clause_kinds(const QueryContext& ctx,
                                           const GenConfig& cfg,
                                           const GenPosition& pos,
                                           unsigned subquery_depth) {
  const bool entity = has_entity(ctx);
  const bool depth_ok = subquery_depth < cfg.max_subquery_depth;
  std::vector<ClauseKind> out;
  auto add = [&](ClauseKind k) {
    if (cfg.weight(k) > 0.0) out.push_back(k);
  };
  static const std::array<ClauseKind, 13> order = {
      ClauseKind::Match,  ClauseKind::OptionalMatch, ClauseKind::Create,
      ClauseKind::Merge,  ClauseKind::Delete,        ClauseKind::Remove,
      ClauseKind::Set,    ClauseKind::Unwind,        ClauseKind::With,
      ClauseKind::Return, ClauseKind::Foreach,       ClauseKind::Call,
      ClauseKind::Union,
  };
  for (ClauseKind k : order) {
    if (pos.inside_foreach) {
      switch (k) {
        case ClauseKind::Create:
        case ClauseKind::Merge:
          break;
        case ClauseKind::Delete:
        case ClauseKind::Remove:
        case ClauseKind::Set:
          if (!entity) continue;
          break;
        case ClauseKind::Foreach:
          if (!depth_ok) continue;
          break;
        default:
          continue;
      }
      add(k);
      continue;
    }
    switch (k) {
      case ClauseKind::Delete:
      case ClauseKind::Remove:
      case ClauseKind::Set:
        if (!entity) continue;
        break;
      case ClauseKind::Return:
        if (!pos.top_level) continue;
        break;
      case ClauseKind::Foreach:
      case ClauseKind::Call:
        if (!depth_ok) continue;
        break;
      case ClauseKind::Union:
        if (!pos.top_level || pos.index != 0 || subquery_depth != 0) continue;
        break;
      default:
        break;
    }
    add(k);
  }
  if (pos.last_slot)
    std::erase_if(out, [](ClauseKind k) { return !terminal_kind(k); });
  if (out.empty()) out.push_back(ClauseKind::Return);
  return out;
}

Generator::Generator(const GenConfig& cfg, RandomSource& rng, GenTrace* trace)
    : Generator(cfg, rng, QueryContext::empty(), GraphSchema{}, trace) {}

Generator::Generator(const GenConfig& cfg, RandomSource& rng, QueryContext ctx,
                     GraphSchema schema, GenTrace* trace)
    : cfg_(cfg),
      rng_(rng),
      trace_(trace),
      ctx_(std::move(ctx)),
      schema_(std::move(schema)) {
  cfg_.check();
  for (const auto& entry : ctx_.visible_entries()) used_vars_.insert(entry.name);
  used_labels_.insert(schema_.node_labels.begin(), schema_.node_labels.end());
  used_labels_.insert(schema_.rel_types.begin(), schema_.rel_types.end());
  for (const auto& [key, type] : schema_.properties) used_props_.insert(key);
}

std::size_t Generator::pick(std::size_t n, const char* tag) {
  if (n == 0) throw ContractError("pick over an empty option set");
  return n == 1 ? 0 : rng_.index(n, tag);
}

std::int64_t Generator::spread(std::int64_t lo, std::int64_t hi,
                               const char* tag) {
  return lo == hi ? lo : rng_.between(lo, hi, tag);
}

bool Generator::pattern_var_visible() const { return has_entity(ctx_); }

std::string Generator::fresh_variable() {
  for (const auto& lead : cfg_.pools.variable_leads)
    if (used_vars_.insert(lead).second) return lead;
  for (std::uint64_t i = 0;; ++i) {
    std::string name = cfg_.pools.variable_prefix + std::to_string(i);
    if (used_vars_.insert(name).second) return name;
  }
}

std::string Generator::fresh_label() {
  for (char c : cfg_.pools.label_alphabet) {
    std::string name(1, c);
    if (used_labels_.insert(name).second) return name;
  }
  for (std::uint64_t i = 0;; ++i) {
    std::string name = cfg_.pools.label_overflow_prefix + std::to_string(i);
    if (used_labels_.insert(name).second) return name;
  }
}

std::string Generator::fresh_property_key() {
  for (std::uint64_t i = 0;; ++i) {
    std::string name = cfg_.pools.property_prefix + std::to_string(i);
    if (used_props_.insert(name).second) return name;
  }
}

// ─── clause selection ────────────────────────────────────────────────────────

ClauseKind Generator::pick_kind(const GenPosition& pos) {
  auto legal = legal_clause_kinds(ctx_, cfg_, pos, subquery_depth_);
  if (legal.empty()) throw ContractError("no legal clause kind here");
  if (legal.size() == 1) return legal[0];
  double total = 0.0;
  for (ClauseKind k : legal) total += cfg_.weight(k);
  double u = rng_.unit("clause-kind") * total;
  for (ClauseKind k : legal) {
    u -= cfg_.weight(k);
    if (u < 0.0) return k;
  }
  return legal.back();
}

Clause Generator::clause(std::optional<ClauseKind> requested,
                         const GenPosition& pos) {
  ClauseKind kind = requested ? *requested : pick_kind(pos);
  if (trace_) trace_->on_kind_selected(kind);
  Clause c = [&]() -> Clause {
    switch (kind) {
      case ClauseKind::Match:
        return gen_match(false);
      case ClauseKind::OptionalMatch:
        return gen_match(true);
      case ClauseKind::Create:
        return gen_create();
      case ClauseKind::Merge:
        return gen_merge();
      case ClauseKind::Delete:
        return gen_delete(std::nullopt);
      case ClauseKind::DetachDelete:
        return gen_delete(true);
      case ClauseKind::Remove:
        return gen_remove();
      case ClauseKind::Set:
        return gen_set();
      case ClauseKind::Unwind:
        return gen_unwind();
      case ClauseKind::With:
        return gen_with();
      case ClauseKind::Return:
        return gen_return(!pos.top_level, false, true, nullptr);
      case ClauseKind::Foreach:
        return gen_foreach();
      case ClauseKind::Call:
        return gen_call();
      case ClauseKind::Union:
        return gen_union();
      case ClauseKind::Exists:
      case ClauseKind::Count:
        throw ContractError("expression-level kind requested as a clause");
    }
    throw ContractError("unknown clause kind");
  }();
  if (trace_) trace_->on_clause_generated(c, ctx_, schema_);
  return c;
}

Query Generator::query() {
  Query q;
  while (true) {
    GenPosition pos;
    pos.top_level = true;
    pos.index = q.clauses.size();
    pos.last_slot = q.clauses.size() + 1 >= cfg_.max_clauses;
    Clause c = clause(std::nullopt, pos);
    ClauseKind k = base_kind(c.kind());
    q.clauses.push_back(std::move(c));
    if (k == ClauseKind::Return || k == ClauseKind::Union) break;
    if (q.clauses.size() >= cfg_.max_clauses) break;
    if (!rng_.chance(cfg_.continue_prob, "continue")) break;
  }
  if (!terminal_kind(q.clauses.back().kind())) {
    GenPosition pos;
    pos.top_level = true;
    pos.index = q.clauses.size();
    pos.last_slot = true;
    q.clauses.push_back(clause(ClauseKind::Return, pos));
  }
  return q;
}

// ─── patterns ────────────────────────────────────────────────────────────────

std::string Generator::pick_label_name(bool rel_position, bool introduce,
                                       const std::vector<std::string>& excluded) {
  const auto& pool = rel_position ? schema_.rel_types : schema_.node_labels;
  std::vector<std::string> candidates;
  for (const auto& name : pool)
    if (std::find(excluded.begin(), excluded.end(), name) == excluded.end())
      candidates.push_back(name);
  std::string name;
  if (!candidates.empty() &&
      rng_.chance(cfg_.schema_reuse_prob, "label-reuse"))
    name = candidates[pick(candidates.size(), "label-pick")];
  else
    name = fresh_label();
  if (introduce) {
    if (rel_position)
      schema_.add_rel_type(name);
    else
      schema_.add_node_label(name);
  }
  return name;
}

std::string Generator::pick_property_key(
    const std::vector<std::string>& excluded) {
  std::vector<std::string> candidates;
  for (const auto& [key, type] : schema_.properties)
    if (std::find(excluded.begin(), excluded.end(), key) == excluded.end())
      candidates.push_back(key);
  if (!candidates.empty() &&
      rng_.chance(cfg_.schema_reuse_prob, "prop-key-reuse"))
    return candidates[pick(candidates.size(), "prop-key-pick")];
  return fresh_property_key();
}

PropertyList Generator::gen_properties(PatternMode mode) {
  PropertyList out;
  const unsigned budget = std::min(2u, cfg_.max_expr_depth);
  auto count = pick(3, "prop-count");
  std::vector<std::string> taken;
  for (std::size_t i = 0; i < count; ++i) {
    std::string key = pick_property_key(taken);
    taken.push_back(key);
    const CypherType* known = schema_.property_type(key);
    ExprPtr value =
        expression(known ? *known : CypherType::any(), budget);
    if (mode == PatternMode::Write) schema_.add_property(key, value->type);
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

LabelExprPtr Generator::gen_label_expr_read(bool rel_position) {
  const char* tag = rel_position ? "rel-type-form" : "node-label-form";
  auto name = [&](const std::vector<std::string>& excluded) {
    return pick_label_name(rel_position, false, excluded);
  };
  switch (pick(5, tag)) {
    case 0:
      return nullptr;
    case 1:
      return LabelExpr::leaf(name({}));
    case 2:
      return LabelExpr::negation(LabelExpr::leaf(name({})));
    case 3: {
      std::string a = name({});
      std::string b = name({a});
      return LabelExpr::conj(LabelExpr::leaf(a), LabelExpr::leaf(b));
    }
    default: {
      std::string a = name({});
      std::string b = name({a});
      return LabelExpr::negation(
          LabelExpr::conj(LabelExpr::leaf(a), LabelExpr::leaf(b)));
    }
  }
}

Pattern Generator::gen_pattern(PatternMode mode) {
  Pattern p;
  auto rels = static_cast<std::size_t>(
      spread(0, static_cast<std::int64_t>(cfg_.max_pattern_length) - 1,
             "pattern-rels"));
  for (std::size_t i = 0; i <= rels; ++i) {
    NodePattern node;
    std::vector<std::string> reusable;
    for (const auto& entry : ctx_.visible_entries())
      if (entry.type == CypherType::node()) reusable.push_back(entry.name);
    if (!reusable.empty() &&
        rng_.chance(cfg_.var_reuse_prob, "node-reuse")) {
      // A rebound variable stays bare: write clauses may only extend it, and
      // a bare node is legal in every pattern position.
      node.binding = reusable[pick(reusable.size(), "node-reuse-pick")];
    } else {
      if (rng_.chance(kNodeBindingProb, "node-binding")) {
        node.binding = fresh_variable();
        ctx_.declare(*node.binding, CypherType::node());
      }
      if (mode == PatternMode::Write) {
        auto labels = pick(3, "node-label-count");
        std::vector<std::string> taken;
        LabelExprPtr chain;
        for (std::size_t j = 0; j < labels; ++j) {
          std::string name = pick_label_name(false, true, taken);
          taken.push_back(name);
          LabelExprPtr leaf = LabelExpr::leaf(name);
          chain = chain ? LabelExpr::conj(chain, leaf) : leaf;
        }
        node.labels = chain;
      } else {
        node.labels = gen_label_expr_read(false);
      }
      node.properties = gen_properties(mode);
    }
    p.nodes.push_back(std::move(node));
    if (i < rels) {
      RelPattern rel;
      if (rng_.chance(kRelBindingProb, "rel-binding")) {
        rel.binding = fresh_variable();
        ctx_.declare(*rel.binding, CypherType::relationship());
      }
      rel.direction =
          pick(2, "rel-direction") == 0 ? Direction::Right : Direction::Left;
      if (mode == PatternMode::Write)
        rel.types = LabelExpr::leaf(pick_label_name(true, true, {}));
      else
        rel.types = gen_label_expr_read(true);
      rel.properties = gen_properties(mode);
      p.rels.push_back(std::move(rel));
    }
  }
  return p;
}

Pattern Generator::pattern_for(ClauseKind kind) {
  switch (base_kind(kind)) {
    case ClauseKind::Match:
    case ClauseKind::Exists:
    case ClauseKind::Count:
      return gen_pattern(PatternMode::Read);
    case ClauseKind::Create:
    case ClauseKind::Merge:
      return gen_pattern(PatternMode::Write);
    default:
      throw ContractError("clause kind has no pattern");
  }
}

// ─── expressions ─────────────────────────────────────────────────────────────

CypherType Generator::pick_elem_type() {
  switch (pick(4, "elem-type")) {
    case 0:
      return CypherType::integer();
    case 1:
      return CypherType::real();
    case 2:
      return CypherType::string();
    default:
      return CypherType::boolean();
  }
}

CypherType Generator::pick_type(bool allow_container) {
  switch (pick(allow_container ? 6 : 4, "expr-type")) {
    case 0:
      return CypherType::integer();
    case 1:
      return CypherType::real();
    case 2:
      return CypherType::string();
    case 3:
      return CypherType::boolean();
    case 4:
      return CypherType::list(pick_elem_type());
    default:
      return CypherType::map();
  }
}

ExprPtr Generator::gen_constant(const CypherType& want) {
  switch (want.kind()) {
    case CypherType::Kind::Integer: {
      static const std::array<std::int64_t, 6> pool = {0, 1, 2, 3, 7, -1};
      return expr::int_lit(pool[pick(pool.size(), "const-int")]);
    }
    case CypherType::Kind::Float: {
      static const std::array<double, 4> pool = {0.5, 1.5, -0.5, 2.0};
      return expr::float_lit(pool[pick(pool.size(), "const-float")]);
    }
    case CypherType::Kind::String: {
      static const std::array<const char*, 4> pool = {"", "a", "b", "ab"};
      return expr::string_lit(pool[pick(pool.size(), "const-string")]);
    }
    case CypherType::Kind::Boolean:
      return expr::bool_lit(pick(2, "const-bool") == 1);
    case CypherType::Kind::List:
      return expr::list({}, want);
    case CypherType::Kind::Map:
      return expr::map({});
    default:
      return expr::null_lit();
  }
}

ExprPtr Generator::gen_binary(const CypherType& want, unsigned budget) {
  using K = CypherType::Kind;
  switch (want.kind()) {
    case K::Integer:
    case K::Float: {
      static const std::array<BinaryOp, 5> ops = {
          BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
          BinaryOp::Mod};
      BinaryOp op = ops[pick(ops.size(), "binary-op")];
      ExprPtr lhs = expression(want, budget - 1);
      ExprPtr rhs;
      bool guard = cfg_.guard_division &&
                   (op == BinaryOp::Div || op == BinaryOp::Mod);
      if (guard && want.kind() == K::Integer) {
        static const std::array<std::int64_t, 4> pool = {1, 2, 3, 7};
        rhs = expr::int_lit(pool[pick(pool.size(), "const-int-nonzero")]);
      } else if (guard) {
        static const std::array<double, 3> pool = {0.5, 1.5, 2.0};
        rhs = expr::float_lit(pool[pick(pool.size(), "const-float-nonzero")]);
      } else {
        rhs = expression(want, budget - 1);
      }
      return expr::binary(op, std::move(lhs), std::move(rhs), want);
    }
    case K::String:
      return expr::binary(BinaryOp::Add, expression(want, budget - 1),
                          expression(want, budget - 1), want);
    case K::List:
      return expr::binary(BinaryOp::Add, expression(want, budget - 1),
                          expression(want, budget - 1), want);
    case K::Boolean: {
      static const std::array<BinaryOp, 8> ops = {
          BinaryOp::And, BinaryOp::Or, BinaryOp::Eq, BinaryOp::Neq,
          BinaryOp::Lt,  BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge};
      BinaryOp op = ops[pick(ops.size(), "binary-op")];
      CypherType operand = CypherType::boolean();
      if (op != BinaryOp::And && op != BinaryOp::Or) {
        bool equality = op == BinaryOp::Eq || op == BinaryOp::Neq;
        switch (pick(equality ? 4 : 3, "cmp-operand-type")) {
          case 0:
            operand = CypherType::integer();
            break;
          case 1:
            operand = CypherType::real();
            break;
          case 2:
            operand = CypherType::string();
            break;
          default:
            operand = CypherType::boolean();
            break;
        }
      }
      return expr::binary(op, expression(operand, budget - 1),
                          expression(operand, budget - 1),
                          CypherType::boolean());
    }
    default:
      throw ContractError("no binary form for the wanted type");
  }
}

ExprPtr Generator::gen_fn_call(const CypherType& want, unsigned budget) {
  auto candidates = fn_candidates(want, ctx_);
  const FnSignature& sig = candidates[pick(candidates.size(), "expr-fn")];
  std::vector<ExprPtr> args;
  for (const auto& arg : sig.args) args.push_back(expression(arg, budget - 1));
  return expr::fn(sig.name, std::move(args), sig.ret);
}

ExprPtr Generator::gen_subquery_expr(bool count_form) {
  ++subquery_depth_;
  ScopeId id = ctx_.enter_scope(false);
  Pattern p = gen_pattern(PatternMode::Read);
  ctx_.close_scope(id);
  --subquery_depth_;
  return count_form ? expr::count(std::move(p)) : expr::exists(std::move(p));
}

ExprPtr Generator::expression(const CypherType& want0, unsigned budget) {
  if (want0.kind() == CypherType::Kind::Null) return expr::null_lit();

  std::vector<ExprPtr> leaves;
  for (const auto& entry : ctx_.visible_entries())
    if (entry.type.unifies_with(want0))
      leaves.push_back(expr::var(entry.name, entry.type));
  for (const auto& entry : ctx_.visible_entries())
    if (is_entity(entry.type))
      for (const auto& [key, type] : schema_.properties)
        if (type.unifies_with(want0))
          leaves.push_back(
              expr::prop(expr::var(entry.name, entry.type), key, type));
  if (!leaves.empty() && rng_.chance(cfg_.var_reuse_prob, "expr-reuse"))
    return leaves[pick(leaves.size(), "expr-reuse-pick")];

  CypherType want = want0;
  if (want.kind() == CypherType::Kind::Any)
    want = pick_type(true);
  else if (want.is_list() &&
           want.element().kind() == CypherType::Kind::Any)
    want = CypherType::list(pick_elem_type());

  using K = CypherType::Kind;
  std::vector<Form> forms = {Form::Constant, Form::Null};
  if (budget > 0) {
    bool subquery_ok = subquery_depth_ < cfg_.max_subquery_depth;
    switch (want.kind()) {
      case K::Integer:
        forms.insert(forms.end(), {Form::Unary, Form::Binary, Form::Fn,
                                   Form::Case});
        if (subquery_ok && cfg_.weight(ClauseKind::Count) > 0.0)
          forms.push_back(Form::CountSub);
        break;
      case K::Float:
        forms.insert(forms.end(),
                     {Form::Unary, Form::Binary, Form::Fn, Form::Case});
        break;
      case K::String:
        forms.insert(forms.end(), {Form::Binary, Form::Fn, Form::Case});
        break;
      case K::Boolean:
        forms.insert(forms.end(),
                     {Form::Unary, Form::Binary, Form::Fn, Form::Case});
        if (subquery_ok && cfg_.weight(ClauseKind::Exists) > 0.0)
          forms.push_back(Form::Exists);
        break;
      case K::List:
        if (!fn_candidates(want, ctx_).empty())
          forms.insert(forms.end(),
                       {Form::Binary, Form::Fn, Form::Case, Form::ListLit});
        else
          forms.insert(forms.end(),
                       {Form::Binary, Form::Case, Form::ListLit});
        break;
      case K::Map:
        forms.insert(forms.end(), {Form::Case, Form::MapLit});
        break;
      default:
        break;
    }
  }

  switch (forms[pick(forms.size(), "expr-form")]) {
    case Form::Constant:
      return gen_constant(want);
    case Form::Null:
      return expr::null_lit();
    case Form::Unary:
      if (want.kind() == K::Boolean)
        return expr::unary(UnaryOp::Not, expression(want, budget - 1), want);
      return expr::unary(UnaryOp::Minus, expression(want, budget - 1), want);
    case Form::Binary:
      return gen_binary(want, budget);
    case Form::Fn:
      return gen_fn_call(want, budget);
    case Form::Case: {
      ExprPtr cond = expression(CypherType::boolean(), budget - 1);
      ExprPtr result = expression(want, budget - 1);
      ExprPtr otherwise = expression(want, budget - 1);
      return expr::case_when({{std::move(cond), std::move(result)}},
                             std::move(otherwise), want);
    }
    case Form::ListLit: {
      auto n = spread(0, 2, "list-len");
      std::vector<ExprPtr> items;
      for (std::int64_t i = 0; i < n; ++i)
        items.push_back(expression(want.element(), budget - 1));
      return expr::list(std::move(items), want);
    }
    case Form::MapLit: {
      auto n = spread(0, 2, "map-len");
      std::vector<std::pair<std::string, ExprPtr>> entries;
      for (std::int64_t i = 0; i < n; ++i)
        entries.emplace_back("k" + std::to_string(i),
                             expression(CypherType::any(), budget - 1));
      return expr::map(std::move(entries));
    }
    case Form::Exists:
      return gen_subquery_expr(false);
    case Form::CountSub:
      return gen_subquery_expr(true);
  }
  throw ContractError("unknown expression form");
}

ExprPtr Generator::gen_aggregate() {
  auto vars = ctx_.visible_entries();
  // Statically numeric (or null) only: an Any-typed variable would pass
  // unification but can hold a non-numeric value at run time.
  std::vector<QueryContext::Entry> numeric;
  for (const auto& entry : vars) {
    auto k = entry.type.kind();
    if (k == CypherType::Kind::Integer || k == CypherType::Kind::Float ||
        k == CypherType::Kind::Null)
      numeric.push_back(entry);
  }
  switch (pick(3, "agg-fn")) {
    case 0: {  // collect
      ExprPtr arg;
      if (vars.empty()) {
        arg = gen_constant(CypherType::integer());
      } else {
        const auto& entry = vars[pick(vars.size(), "agg-arg-pick")];
        arg = expr::var(entry.name, entry.type);
      }
      CypherType ret = CypherType::list(arg->type);
      return expr::fn("collect", {std::move(arg)}, std::move(ret));
    }
    case 1: {  // count
      ExprPtr arg;
      if (vars.empty()) {
        arg = gen_constant(CypherType::integer());
      } else {
        const auto& entry = vars[pick(vars.size(), "agg-arg-pick")];
        arg = expr::var(entry.name, entry.type);
      }
      return expr::fn("count", {std::move(arg)}, CypherType::integer());
    }
    default: {  // sum
      ExprPtr arg;
      if (numeric.empty()) {
        arg = gen_constant(CypherType::integer());
      } else {
        const auto& entry = numeric[pick(numeric.size(), "agg-arg-pick")];
        arg = expr::var(entry.name, entry.type);
      }
      CypherType ret = arg->type.is_numeric() ? arg->type
                                              : CypherType::integer();
      return expr::fn("sum", {std::move(arg)}, ret);
    }
  }
}

// ─── clauses ─────────────────────────────────────────────────────────────────

Clause Generator::gen_match(bool optional) {
  MatchClause m;
  m.optional = optional;
  m.pattern = gen_pattern(PatternMode::Read);
  if (rng_.chance(kWhereProb, "match-where"))
    m.where = expression(CypherType::boolean(), cfg_.max_expr_depth);
  return Clause{std::move(m)};
}

Clause Generator::gen_create() {
  return Clause{CreateClause{gen_pattern(PatternMode::Write)}};
}

Clause Generator::gen_merge() {
  return Clause{MergeClause{gen_pattern(PatternMode::Write)}};
}

Clause Generator::gen_delete(std::optional<bool> forced_detach) {
  std::vector<QueryContext::Entry> eligible;
  for (const auto& entry : ctx_.visible_entries())
    if (is_entity(entry.type)) eligible.push_back(entry);
  if (eligible.empty())
    throw ContractError("DELETE needs a visible node or relationship");
  DeleteClause d;
  auto count = static_cast<std::size_t>(
      spread(1, static_cast<std::int64_t>(std::min<std::size_t>(
                    2, eligible.size())),
             "delete-count"));
  bool has_node = false;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t idx = pick(eligible.size(), "delete-pick");
    has_node |= eligible[idx].type == CypherType::node();
    d.targets.push_back(eligible[idx].name);
    eligible.erase(eligible.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  if (forced_detach)
    d.detach = *forced_detach;
  else
    d.detach = has_node && rng_.chance(kDetachProb, "delete-detach");
  return Clause{std::move(d)};
}

Clause Generator::gen_remove() {
  std::vector<QueryContext::Entry> eligible;
  for (const auto& entry : ctx_.visible_entries())
    if (is_entity(entry.type)) eligible.push_back(entry);
  if (eligible.empty())
    throw ContractError("REMOVE needs a visible node or relationship");
  RemoveClause r;
  auto count = spread(1, 2, "remove-count");
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& entry = eligible[pick(eligible.size(), "remove-var-pick")];
    RemoveItem item;
    item.variable = entry.name;
    bool label_form = entry.type == CypherType::node() &&
                      pick(2, "remove-form") == 1;
    if (label_form) {
      item.label = pick_label_name(false, false, {});
      schema_.node_labels.erase(*item.label);
    } else {
      item.property = pick_property_key({});
      schema_.properties.erase(*item.property);
    }
    r.items.push_back(std::move(item));
  }
  return Clause{std::move(r)};
}

Clause Generator::gen_set() {
  std::vector<QueryContext::Entry> eligible;
  for (const auto& entry : ctx_.visible_entries())
    if (is_entity(entry.type)) eligible.push_back(entry);
  if (eligible.empty())
    throw ContractError("SET needs a visible node or relationship");
  SetClause s;
  const unsigned budget = std::min(2u, cfg_.max_expr_depth);
  auto count = spread(1, 2, "set-count");
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& entry = eligible[pick(eligible.size(), "set-var-pick")];
    SetItem item;
    item.variable = entry.name;
    bool node = entry.type == CypherType::node();
    switch (pick(node ? 3 : 2, "set-form")) {
      case 0: {
        item.form = SetItem::Form::Property;
        item.key = pick_property_key({});
        const CypherType* known = schema_.property_type(item.key);
        item.value = expression(known ? *known : CypherType::any(), budget);
        schema_.add_property(item.key, item.value->type);
        break;
      }
      case 1: {
        if (node) {
          item.form = SetItem::Form::Label;
          item.key = pick_label_name(false, true, {});
          break;
        }
        [[fallthrough]];
      }
      default: {
        item.form = SetItem::Form::Overwrite;
        auto len = spread(1, 2, "overwrite-len");
        std::vector<std::string> taken;
        for (std::int64_t j = 0; j < len; ++j) {
          std::string key = pick_property_key(taken);
          taken.push_back(key);
          const CypherType* known = schema_.property_type(key);
          ExprPtr value =
              expression(known ? *known : CypherType::any(), budget);
          schema_.add_property(key, value->type);
          item.map.emplace_back(std::move(key), std::move(value));
        }
        break;
      }
    }
    s.items.push_back(std::move(item));
  }
  return Clause{std::move(s)};
}

Clause Generator::gen_unwind() {
  UnwindClause u;
  u.list = expression(CypherType::list(CypherType::any()),
                      cfg_.max_expr_depth);
  u.alias = fresh_variable();
  ctx_.declare(u.alias, list_element_type(u.list->type));
  return Clause{std::move(u)};
}

std::vector<Projection> Generator::gen_projections(bool aliases_required,
                                                   bool force_alias,
                                                   const char* keep_tag,
                                                   const char* count_tag,
                                                   const char* aggregate_tag) {
  std::vector<Projection> out;
  std::set<std::string> names;
  auto push = [&](ExprPtr e) {
    Projection p{std::move(e), std::nullopt};
    bool needs_alias = force_alias;
    if (!needs_alias && aliases_required &&
        !std::holds_alternative<Expression::VarRef>(p.expr->node))
      needs_alias = true;
    if (!needs_alias && names.count(p.column_name())) needs_alias = true;
    if (needs_alias) p.alias = fresh_variable();
    names.insert(p.column_name());
    out.push_back(std::move(p));
  };
  for (const auto& entry : ctx_.visible_entries())
    if (rng_.chance(kKeepProb, keep_tag))
      push(expr::var(entry.name, entry.type));
  auto fresh = spread(out.empty() ? 1 : 0, 2, count_tag);
  for (std::int64_t i = 0; i < fresh; ++i)
    push(expression(CypherType::any(), cfg_.max_expr_depth));
  if (rng_.chance(kAggregateProb, aggregate_tag)) push(gen_aggregate());
  return out;
}

std::vector<OrderItem> Generator::gen_order_by(
    const std::vector<Projection>& items) {
  // Sort keys name projected columns; only aliased items and plain variables
  // have referenceable names.
  std::vector<const Projection*> cols;
  for (const auto& item : items)
    if (item.alias ||
        std::holds_alternative<Expression::VarRef>(item.expr->node))
      cols.push_back(&item);
  OrderItem item;
  auto idx = pick(cols.size() + 1, "orderby-pick");
  if (idx < cols.size())
    item.expr = expr::var(cols[idx]->column_name(), cols[idx]->expr->type);
  else
    item.expr = expr::int_lit(0);
  item.descending = rng_.chance(kOrderDescProb, "orderby-desc");
  return {std::move(item)};
}

Clause Generator::gen_with() {
  WithClause w;
  w.items = gen_projections(true, false, "with-keep", "with-new-count",
                            "with-aggregate");
  std::vector<QueryContext::Entry> columns;
  for (const auto& item : w.items)
    columns.push_back({item.column_name(), item.expr->type, ScopeId{}});
  ctx_.replace_visible(columns);
  if (rng_.chance(kOrderByProb, "with-orderby"))
    w.order_by = gen_order_by(w.items);
  if (rng_.chance(kProjWhereProb, "with-where"))
    w.where = expression(CypherType::boolean(), cfg_.max_expr_depth);
  return Clause{std::move(w)};
}

Clause Generator::gen_return(bool aliases_required, bool force_alias,
                             bool allow_order_by,
                             const std::vector<std::string>* forced_names) {
  ReturnClause r;
  if (forced_names) {
    for (const auto& name : *forced_names) {
      Projection p{expression(CypherType::any(), cfg_.max_expr_depth), name};
      r.items.push_back(std::move(p));
    }
  } else {
    r.items = gen_projections(aliases_required, force_alias, "return-keep",
                              "return-new-count", "return-aggregate");
  }
  // Unaliased constant columns (top-level RETURN 0) bind nothing.
  std::vector<QueryContext::Entry> columns;
  for (const auto& item : r.items)
    if (item.alias ||
        std::holds_alternative<Expression::VarRef>(item.expr->node))
      columns.push_back({item.column_name(), item.expr->type, ScopeId{}});
  ctx_.replace_visible(columns);
  if (allow_order_by && rng_.chance(kOrderByProb, "return-orderby"))
    r.order_by = gen_order_by(r.items);
  return Clause{std::move(r)};
}

std::vector<Clause> Generator::gen_body(unsigned max_len,
                                        const char* continue_tag) {
  std::vector<Clause> out;
  while (true) {
    GenPosition pos;
    pos.top_level = false;
    pos.index = out.size();
    out.push_back(clause(std::nullopt, pos));
    if (out.size() >= max_len) break;
    if (!rng_.chance(kInnerContinueProb, continue_tag)) break;
  }
  return out;
}

Clause Generator::gen_foreach() {
  ForeachClause f;
  f.list = expression(CypherType::list(CypherType::any()),
                      std::min(2u, cfg_.max_expr_depth));
  ScopeId id = ctx_.enter_scope(false);
  f.variable = fresh_variable();
  ctx_.declare(f.variable, list_element_type(f.list->type));
  ++subquery_depth_;
  auto len = spread(1, 2, "foreach-body-len");
  for (std::int64_t i = 0; i < len; ++i) {
    GenPosition pos;
    pos.top_level = false;
    pos.inside_foreach = true;
    pos.index = static_cast<std::size_t>(i);
    f.body.push_back(clause(std::nullopt, pos));
  }
  --subquery_depth_;
  auto removed = ctx_.close_scope(id);
  if (trace_) trace_->on_scope_cleaned(ClauseKind::Foreach, removed);
  return Clause{std::move(f)};
}

Clause Generator::gen_call() {
  CallClause c;
  std::vector<QueryContext::Entry> imports;
  for (const auto& entry : ctx_.visible_entries())
    if (rng_.chance(kCallImportProb, "call-import")) {
      c.imports.push_back(entry.name);
      imports.push_back(entry);
    }
  ScopeId id = ctx_.enter_scope(true);
  for (const auto& imp : imports) ctx_.declare(imp.name, imp.type);
  ++subquery_depth_;
  c.body.clauses = gen_body(kCallBodyCap, "call-continue");
  // A body must close on a returning or updating clause.
  bool trailing = rng_.chance(kCallReturnProb, "call-return");
  if (trailing || !terminal_kind(c.body.clauses.back().kind()))
    c.body.clauses.push_back(gen_return(true, true, true, nullptr));
  --subquery_depth_;
  std::vector<QueryContext::Entry> columns;
  if (!c.body.clauses.empty() &&
      c.body.clauses.back().kind() == ClauseKind::Return)
    columns = ctx_.visible_entries();
  auto removed = ctx_.close_scope(id);
  if (trace_) trace_->on_scope_cleaned(ClauseKind::Call, removed);
  for (const auto& col : columns) ctx_.declare(col.name, col.type);
  return Clause{std::move(c)};
}

Clause Generator::gen_union() {
  UnionClause u;
  u.all = rng_.chance(kUnionAllProb, "union-all");
  ++subquery_depth_;
  std::vector<std::string> names;
  {
    ScopeId id = ctx_.enter_scope(true);
    u.left.clauses = gen_body(kUnionBodyCap, "union-arm-continue");
    Clause ret = gen_return(true, false, false, nullptr);
    for (const auto& item : std::get<ReturnClause>(ret.node).items)
      names.push_back(item.column_name());
    u.left.clauses.push_back(std::move(ret));
    auto removed = ctx_.close_scope(id);
    if (trace_) trace_->on_scope_cleaned(ClauseKind::Union, removed);
  }
  {
    ScopeId id = ctx_.enter_scope(true);
    u.right.clauses = gen_body(kUnionBodyCap, "union-arm-continue");
    u.right.clauses.push_back(gen_return(true, false, false, &names));
    auto removed = ctx_.close_scope(id);
    if (trace_) trace_->on_scope_cleaned(ClauseKind::Union, removed);
  }
  --subquery_depth_;
  return Clause{std::move(u)};
}

// ─── entry points ────────────────────────────────────────────────────────────

Query gen_query(const GenConfig& cfg, RandomSource& rng, GenTrace* trace) {
  Generator g(cfg, rng, trace);
  return g.query();
}

Query gen_query_at(const GenConfig& cfg, std::uint64_t seed,
                   std::uint64_t index) {
  Pcg rng = stream_for(seed, index);
  Generator g(cfg, rng);
  return g.query();
}

Clause gen_clause(QueryContext& ctx, GraphSchema& schema,
                  std::optional<ClauseKind> requested, const GenConfig& cfg,
                  RandomSource& rng) {
  Generator g(cfg, rng, ctx, schema);
  Clause c = g.clause(requested, GenPosition{});
  ctx = g.context();
  schema = g.schema();
  return c;
}

ExprPtr gen_expression(QueryContext& ctx, GraphSchema& schema,
                       const CypherType& want, const GenConfig& cfg,
                       RandomSource& rng) {
  Generator g(cfg, rng, ctx, schema);
  ExprPtr e = g.expression(want, cfg.max_expr_depth);
  ctx = g.context();
  schema = g.schema();
  return e;
}

}  // namespace cypherforge
