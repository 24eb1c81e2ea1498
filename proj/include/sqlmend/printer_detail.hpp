#pragma once

#include <cstdint>
#include <string>

#include "sqlmend/ast.hpp"

namespace sqlmend {

/// Renders each constant position. With label_slots set, every constant is
/// printed as `#n` in source order instead, which yields the skeleton text.
struct ConstantPrinter {
  bool label_slots = false;
  bool in_having = false;
  int counter = 0;

  std::string column(const ColumnRef& c);
  std::string expr(const SelectExpr& e);
  std::string table(const TableName& t);
  std::string literal(const Value& v);
  std::string limit(std::int64_t n);
  std::string op(CompareOp o);
  std::string dir(SortDir d);

 private:
  std::string next_label();
};

void print_query(const Query& q, ConstantPrinter& cp, std::string& out);

}  // namespace sqlmend
