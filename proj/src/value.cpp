#include "sqlmend/value.hpp"

#include <charconv>
#include <stdexcept>

namespace sqlmend {

namespace {

int rank(const Value& v) {
  if (is_null(v)) return 0;
  if (is_numeric(v)) return 1;
  return 2;
}

std::string format_real(double d) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

double as_double(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (auto d = std::get_if<double>(&v)) return *d;
  throw std::logic_error("as_double on non-numeric value");
}

int compare_values(const Value& a, const Value& b) {
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (ra) {
    case 0:
      return 0;
    case 1: {
      auto ia = std::get_if<std::int64_t>(&a);
      auto ib = std::get_if<std::int64_t>(&b);
      if (ia && ib) return *ia < *ib ? -1 : (*ia > *ib ? 1 : 0);
      double da = as_double(a), db = as_double(b);
      return da < db ? -1 : (da > db ? 1 : 0);
    }
    default: {
      int c = std::get<std::string>(a).compare(std::get<std::string>(b));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
  }
}

bool RowLess::operator()(const Row& a, const Row& b) const {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare_values(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return a.size() < b.size();
}

std::string to_sql_literal(const Value& v) {
  if (is_null(v)) return "NULL";
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto d = std::get_if<double>(&v)) return format_real(*d);
  const auto& s = std::get<std::string>(v);
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

std::string to_display(const Value& v) {
  if (is_null(v)) return "";
  if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto d = std::get_if<double>(&v)) return format_real(*d);
  return std::get<std::string>(v);
}

std::string to_string(ColumnType t) {
  switch (t) {
    case ColumnType::Integer: return "integer";
    case ColumnType::Real: return "real";
    case ColumnType::Text: return "text";
  }
  return "text";
}

ColumnType column_type_from_string(const std::string& s) {
  std::string l;
  for (char c : s) l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (l == "integer" || l == "int" || l == "number") return ColumnType::Integer;
  if (l == "real" || l == "float" || l == "double") return ColumnType::Real;
  if (l == "text" || l == "string" || l == "varchar") return ColumnType::Text;
  throw std::invalid_argument("unknown column type '" + s + "'");
}

}  // namespace sqlmend
