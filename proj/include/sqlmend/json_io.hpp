#pragma once

#include <nlohmann/json.hpp>

#include "sqlmend/relation.hpp"

namespace sqlmend {

nlohmann::json value_to_json(const Value& v);
Value value_from_json(const nlohmann::json& j);

/// {"columns": [...], "rows": [[...]], "ordered": bool}
nlohmann::json relation_to_json(const Relation& r);
Relation relation_from_json(const nlohmann::json& j);

/// Same layout as schema.json.
nlohmann::json schema_to_json(const Schema& s);

}  // namespace sqlmend
