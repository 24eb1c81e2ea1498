#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sqlmend/ast.hpp"

namespace sqlmend {

/// Parses one query of the supported subset. Keywords are case-insensitive,
/// identifiers are folded to lowercase, string literals keep their case.
/// Throws ParseError / UnsupportedConstruct.
Query parse(std::string_view text);

/// Query text whose literal positions may be `?` (terminal-free output of a
/// text-to-SQL model). Holes parse as NULL literals (LIMIT ? parses as 1);
/// `holes` lists their ordinals among all literal positions in source order.
struct HoleyQuery {
  Query query;
  std::vector<std::size_t> holes;
};

HoleyQuery parse_with_holes(std::string_view text);

/// Canonical text: uppercase keywords, lowercase identifiers, single spaces.
std::string print(const Query& q);

std::string print(const SelectExpr& e);
std::string print(const ColumnRef& c);
std::string print(const Predicate& p);

}  // namespace sqlmend
