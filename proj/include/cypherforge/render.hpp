#pragma once

// Canonical text rendering. The renderer is the single source of truth for
// query bytes: one clause per line, uppercase keywords, no indentation, no
// trailing newline or semicolon. Identical ASTs render to identical bytes.

#include <string>

#include "cypherforge/ast.hpp"

namespace cypherforge {

std::string render(const Query& q);
std::string render(const Clause& c);
std::string render(const Pattern& p);
std::string render(const Expression& e);
std::string render_label_expr(const LabelExpr& e, bool parenthesize_composite);

// Length in bytes of the canonical render.
std::size_t byte_size(const Query& q);

// Deterministic literal formatting helpers (shared with the fingerprinter).
std::string format_float(double v);
std::string quote_string(const std::string& s);

// SQL wrapper used when submitting to an AGE endpoint. The column list arity
// matches the query's terminal RETURN (one fallback column for unit queries).
std::string age_wrap(const Query& q, const std::string& graph_name);
std::string age_wrap_text(const std::string& query_text,
                          const std::string& graph_name, std::size_t columns);
std::size_t result_columns(const Query& q);

}  // namespace cypherforge
