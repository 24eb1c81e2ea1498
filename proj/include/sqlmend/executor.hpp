#pragma once

#include "sqlmend/ast.hpp"
#include "sqlmend/relation.hpp"

namespace sqlmend {

/// Evaluates `q` over `db`. Pure and thread-safe over a shared Database.
///
/// Semantics: FROM tables form a cross product (leftmost table outermost),
/// each JOIN keeps combinations whose ON columns are equal, WHERE filters with
/// three-valued logic, then grouping. Groups appear in order of first row; a
/// bare column in a grouped query takes its value from the group's first row.
/// ORDER BY is a stable sort (NULL first ascending), DISTINCT keeps first
/// occurrences, LIMIT truncates, and a set operation combines whole rows with
/// deduplication while keeping the left operand's order.
///
/// Throws ExecutionError for unknown tables/columns, ambiguous columns,
/// incompatible comparison types, SUM/AVG over text and set-op arity mismatch.
Relation execute(const Query& q, const Database& db);

/// LIKE with `%` and `_` wildcards, ASCII case-insensitive.
bool like_match(std::string_view text, std::string_view pattern);

/// Result type of a select expression against the query's tables. Throws like execute.
ColumnType expression_type(const SelectExpr& e, const Query& q, const Schema& schema);

}  // namespace sqlmend
