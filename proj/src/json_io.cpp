#include "sqlmend/json_io.hpp"

namespace sqlmend {

nlohmann::json value_to_json(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return *i;
  if (auto d = std::get_if<double>(&v)) return *d;
  if (auto s = std::get_if<std::string>(&v)) return *s;
  return nullptr;
}

Value value_from_json(const nlohmann::json& j) {
  if (j.is_null()) return Value{};
  if (j.is_number_integer()) return Value{j.get<std::int64_t>()};
  if (j.is_number()) return Value{j.get<double>()};
  if (j.is_string()) return Value{j.get<std::string>()};
  if (j.is_boolean()) return Value{static_cast<std::int64_t>(j.get<bool>())};
  throw nlohmann::json::type_error::create(302, "cell must be null, number or string", &j);
}

nlohmann::json relation_to_json(const Relation& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& v : row) cells.push_back(value_to_json(v));
    rows.push_back(std::move(cells));
  }
  return {{"columns", r.columns}, {"rows", std::move(rows)}, {"ordered", r.ordered}};
}

Relation relation_from_json(const nlohmann::json& j) {
  Relation r;
  r.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& row : j.at("rows")) {
    Row cells;
    for (const auto& c : row) cells.push_back(value_from_json(c));
    r.rows.push_back(std::move(cells));
  }
  r.ordered = j.value("ordered", false);
  return r;
}

nlohmann::json schema_to_json(const Schema& s) {
  nlohmann::json tables = nlohmann::json::array();
  for (const auto& t : s.tables) {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& c : t.columns) cols.push_back({{"name", c.name}, {"type", to_string(c.type)}});
    tables.push_back({{"name", t.name}, {"columns", std::move(cols)}});
  }
  nlohmann::json fks = nlohmann::json::array();
  for (const auto& fk : s.foreign_keys)
    fks.push_back({{"from", fk.from_table + "." + fk.from_column}, {"to", fk.to_table + "." + fk.to_column}});
  return {{"tables", std::move(tables)}, {"foreign_keys", std::move(fks)}};
}

}  // namespace sqlmend
