#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace sqlmend {

/// A single cell or SQL literal. monostate is NULL.
using Value = std::variant<std::monostate, std::int64_t, double, std::string>;

enum class ColumnType { Integer, Real, Text };

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }
inline bool is_numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}
inline bool is_text(const Value& v) { return std::holds_alternative<std::string>(v); }

double as_double(const Value& v);

/// Total order used for sorting, grouping and multiset operations:
/// NULL < numbers (int/real compared numerically) < text (bytewise).
int compare_values(const Value& a, const Value& b);

/// Equality under the same total order, so 1 == 1.0 and NULL == NULL.
inline bool values_equal(const Value& a, const Value& b) { return compare_values(a, b) == 0; }

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare_values(a, b) < 0; }
};

using Row = std::vector<Value>;

struct RowLess {
  bool operator()(const Row& a, const Row& b) const;
};

/// SQL literal text: 42, 1.5, 'it''s', NULL.
std::string to_sql_literal(const Value& v);

/// Plain rendering used for CSV cells and reports (no quoting, NULL -> "").
std::string to_display(const Value& v);

std::string to_string(ColumnType t);
ColumnType column_type_from_string(const std::string& s);

}  // namespace sqlmend
