#include "cypherforge/render.hpp"

#include <charconv>
#include <sstream>

namespace cypherforge {

std::string format_float(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string quote_string(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "'";
  return out;
}

// Composite label expressions are parenthesized in relationship-type position
// (`[:(B&C)]`) but not at the top level of a node label (`(:A&B)`). A negation
// always parenthesizes a composite operand (`!(B&C)`).
std::string render_label_expr(const LabelExpr& e, bool parenthesize_composite) {
  std::string body = std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LabelExpr::Leaf>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, LabelExpr::And>) {
          return render_label_expr(*n.lhs, false) + "&" +
                 render_label_expr(*n.rhs, false);
        } else {
          return "!" + render_label_expr(*n.operand, true);
        }
      },
      e.node);
  if (parenthesize_composite && !e.is_leaf() &&
      !std::holds_alternative<LabelExpr::Not>(e.node))
    return "(" + body + ")";
  return body;
}

static std::string render_properties(const PropertyList& props) {
  std::string out = "{";
  bool first = true;
  for (const auto& [key, value] : props) {
    if (!first) out += ",";
    first = false;
    out += key + ":" + render(*value);
  }
  out += "}";
  return out;
}

static std::string render_node(const NodePattern& n) {
  std::string inner;
  if (n.binding) inner += *n.binding;
  if (n.labels) inner += ":" + render_label_expr(*n.labels, false);
  if (!n.properties.empty()) {
    if (!inner.empty()) inner += " ";
    inner += render_properties(n.properties);
  }
  return "(" + inner + ")";
}

static std::string render_rel(const RelPattern& r) {
  std::string inner;
  if (r.binding) inner += *r.binding;
  if (r.types) inner += ":" + render_label_expr(*r.types, true);
  if (!r.properties.empty()) {
    if (!inner.empty()) inner += " ";
    inner += render_properties(r.properties);
  }
  std::string body = "[" + inner + "]";
  return r.direction == Direction::Right ? "-" + body + "->"
                                         : "<-" + body + "-";
}

std::string render(const Pattern& p) {
  p.check();
  std::string out = render_node(p.nodes[0]);
  for (std::size_t i = 0; i < p.rels.size(); ++i) {
    out += render_rel(p.rels[i]);
    out += render_node(p.nodes[i + 1]);
  }
  return out;
}

std::string render(const Expression& e) {
  using E = Expression;
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, E::IntLit>) {
          return std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, E::FloatLit>) {
          return format_float(n.value);
        } else if constexpr (std::is_same_v<T, E::StringLit>) {
          return quote_string(n.value);
        } else if constexpr (std::is_same_v<T, E::BoolLit>) {
          return n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, E::NullLit>) {
          return "null";
        } else if constexpr (std::is_same_v<T, E::VarRef>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, E::PropAccess>) {
          return render(*n.object) + "." + n.key;
        } else if constexpr (std::is_same_v<T, E::Unary>) {
          std::string op = to_string(n.op);
          if (n.op == UnaryOp::Not) op += " ";
          return "(" + op + render(*n.operand) + ")";
        } else if constexpr (std::is_same_v<T, E::Binary>) {
          return "(" + render(*n.lhs) + " " + to_string(n.op) + " " +
                 render(*n.rhs) + ")";
        } else if constexpr (std::is_same_v<T, E::ListLit>) {
          std::string out = "[";
          for (std::size_t i = 0; i < n.items.size(); ++i) {
            if (i) out += ", ";
            out += render(*n.items[i]);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, E::MapLit>) {
          return render_properties(n.entries);
        } else if constexpr (std::is_same_v<T, E::FnCall>) {
          std::string out = n.name + "(";
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ", ";
            out += render(*n.args[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, E::Case>) {
          std::string out = "CASE";
          for (const auto& [cond, result] : n.whens)
            out += " WHEN " + render(*cond) + " THEN " + render(*result);
          if (n.otherwise) out += " ELSE " + render(*n.otherwise);
          return out + " END";
        } else if constexpr (std::is_same_v<T, E::ExistsSub>) {
          return "EXISTS {" + render(*n.pattern) + "}";
        } else {
          return "COUNT {" + render(*n.pattern) + "}";
        }
      },
      e.node);
}

static std::string render_projections(const std::vector<Projection>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += render(*items[i].expr);
    if (items[i].alias) out += " AS " + *items[i].alias;
  }
  return out;
}

std::string Projection::column_name() const {
  if (alias) return *alias;
  if (auto* v = std::get_if<Expression::VarRef>(&expr->node)) return v->name;
  return render(*expr);
}

static std::string render_order(const std::vector<OrderItem>& order) {
  if (order.empty()) return "";
  std::string out = " ORDER BY ";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ", ";
    out += render(*order[i].expr);
    if (order[i].descending) out += " DESC";
  }
  return out;
}

std::string render(const Clause& c) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, MatchClause>) {
          std::string out = n.optional ? "OPTIONAL MATCH " : "MATCH ";
          out += render(n.pattern);
          if (n.where) out += " WHERE " + render(*n.where);
          return out;
        } else if constexpr (std::is_same_v<T, CreateClause>) {
          return "CREATE " + render(n.pattern);
        } else if constexpr (std::is_same_v<T, MergeClause>) {
          return "MERGE " + render(n.pattern);
        } else if constexpr (std::is_same_v<T, DeleteClause>) {
          std::string out = n.detach ? "DETACH DELETE " : "DELETE ";
          for (std::size_t i = 0; i < n.targets.size(); ++i) {
            if (i) out += ", ";
            out += n.targets[i];
          }
          return out;
        } else if constexpr (std::is_same_v<T, RemoveClause>) {
          std::string out = "REMOVE ";
          for (std::size_t i = 0; i < n.items.size(); ++i) {
            if (i) out += ", ";
            const auto& item = n.items[i];
            out += item.variable;
            if (item.property) out += "." + *item.property;
            else out += ":" + *item.label;
          }
          return out;
        } else if constexpr (std::is_same_v<T, SetClause>) {
          std::string out = "SET ";
          for (std::size_t i = 0; i < n.items.size(); ++i) {
            if (i) out += ", ";
            const auto& item = n.items[i];
            switch (item.form) {
              case SetItem::Form::Property:
                out += item.variable + "." + item.key + " = " +
                       render(*item.value);
                break;
              case SetItem::Form::Label:
                out += item.variable + ":" + item.key;
                break;
              case SetItem::Form::Overwrite:
                out += item.variable + " = " + render_properties(item.map);
                break;
            }
          }
          return out;
        } else if constexpr (std::is_same_v<T, UnwindClause>) {
          return "UNWIND " + render(*n.list) + " AS " + n.alias;
        } else if constexpr (std::is_same_v<T, WithClause>) {
          std::string out = "WITH " + render_projections(n.items);
          out += render_order(n.order_by);
          if (n.where) out += " WHERE " + render(*n.where);
          return out;
        } else if constexpr (std::is_same_v<T, ReturnClause>) {
          return "RETURN " + render_projections(n.items) +
                 render_order(n.order_by);
        } else if constexpr (std::is_same_v<T, ForeachClause>) {
          std::string out =
              "FOREACH (" + n.variable + " IN " + render(*n.list) + " | ";
          for (std::size_t i = 0; i < n.body.size(); ++i) {
            if (i) out += " ";
            out += render(n.body[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, CallClause>) {
          std::string out = "CALL {";
          if (!n.imports.empty()) {
            out += "\nWITH ";
            for (std::size_t i = 0; i < n.imports.size(); ++i) {
              if (i) out += ", ";
              out += n.imports[i];
            }
          }
          for (const auto& sub : n.body.clauses) out += "\n" + render(sub);
          return out + "\n}";
        } else {
          return render(n.left) + (n.all ? "\nUNION ALL\n" : "\nUNION\n") +
                 render(n.right);
        }
      },
      c.node);
}

std::string render(const Query& q) {
  std::string out;
  for (std::size_t i = 0; i < q.clauses.size(); ++i) {
    if (i) out += "\n";
    out += render(q.clauses[i]);
  }
  return out;
}

std::size_t byte_size(const Query& q) { return render(q).size(); }

std::size_t result_columns(const Query& q) {
  if (q.clauses.empty()) return 0;
  const Clause& last = q.clauses.back();
  if (auto* r = std::get_if<ReturnClause>(&last.node)) return r->items.size();
  if (auto* u = std::get_if<UnionClause>(&last.node))
    return result_columns(u->left);
  return 0;
}

std::string age_wrap_text(const std::string& query_text,
                          const std::string& graph_name, std::size_t columns) {
  std::string column_list;
  if (columns == 0) {
    column_list = "result agtype";
  } else {
    for (std::size_t i = 0; i < columns; ++i) {
      if (i) column_list += ", ";
      column_list += "c" + std::to_string(i) + " agtype";
    }
  }
  return "SELECT * FROM cypher('" + graph_name + "', $$\n" + query_text +
         "\n$$) AS (" + column_list + ");";
}

std::string age_wrap(const Query& q, const std::string& graph_name) {
  return age_wrap_text(render(q), graph_name, result_columns(q));
}

}  // namespace cypherforge
