#include "sqlmend/relation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sqlmend/errors.hpp"

namespace sqlmend {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<std::string, std::string> split_qualified(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) throw LoadError("foreign key endpoint '" + s + "' is not table.column");
  return {s.substr(0, dot), s.substr(dot + 1)};
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

Value typed_cell(const std::string& raw, ColumnType type, const std::string& where) {
  switch (type) {
    case ColumnType::Text:
      return Value{raw};
    case ColumnType::Integer: {
      if (raw.empty()) return Value{};
      if (auto i = parse_int(raw)) return Value{*i};
      throw LoadError(where + ": '" + raw + "' is not an integer");
    }
    case ColumnType::Real: {
      if (raw.empty()) return Value{};
      if (auto d = parse_real(raw)) return Value{*d};
      throw LoadError(where + ": '" + raw + "' is not a real number");
    }
  }
  return Value{};
}

Value untyped_cell(const std::string& raw) {
  if (raw.empty()) return Value{};
  if (auto i = parse_int(raw)) return Value{*i};
  if (auto d = parse_real(raw)) return Value{*d};
  return Value{raw};
}

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::optional<std::size_t> TableDef::column_index(const std::string& column) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == column) return i;
  return std::nullopt;
}

const TableDef* Schema::find(const std::string& table) const {
  for (const auto& t : tables)
    if (t.name == table) return &t;
  return nullptr;
}

const Relation& Database::table(const std::string& name) const {
  auto it = contents.find(name);
  if (it == contents.end()) throw LoadError("no contents for table " + name);
  return it->second;
}

void validate(const Database& db) {
  std::set<std::string> names;
  for (const auto& t : db.schema.tables) {
    if (!names.insert(t.name).second) throw LoadError("duplicate table " + t.name);
    std::set<std::string> cols;
    for (const auto& c : t.columns)
      if (!cols.insert(c.name).second) throw LoadError("duplicate column " + t.name + "." + c.name);
    auto it = db.contents.find(t.name);
    if (it == db.contents.end()) throw LoadError("missing contents for table " + t.name);
    const Relation& rel = it->second;
    if (rel.columns.size() != t.columns.size()) throw LoadError("column count mismatch in " + t.name);
    for (const auto& row : rel.rows) {
      if (row.size() != t.columns.size()) throw LoadError("row arity mismatch in " + t.name);
      for (std::size_t i = 0; i < row.size(); ++i) {
        const Value& v = row[i];
        if (is_null(v)) continue;
        bool ok = false;
        switch (t.columns[i].type) {
          case ColumnType::Integer: ok = std::holds_alternative<std::int64_t>(v); break;
          case ColumnType::Real: ok = is_numeric(v); break;
          case ColumnType::Text: ok = is_text(v); break;
        }
        if (!ok) throw LoadError("type mismatch in " + t.name + "." + t.columns[i].name);
      }
    }
  }
  for (const auto& fk : db.schema.foreign_keys) {
    const TableDef* a = db.schema.find(fk.from_table);
    const TableDef* b = db.schema.find(fk.to_table);
    if (!a || !b || !a->column_index(fk.from_column) || !b->column_index(fk.to_column))
      throw LoadError("foreign key " + fk.from_table + "." + fk.from_column + " -> " + fk.to_table +
                      "." + fk.to_column + " names an unknown column");
  }
}

bool outputs_match(const Relation& actual, const Relation& expected) {
  if (actual.column_count() != expected.column_count()) return false;
  if (actual.row_count() != expected.row_count()) return false;
  auto rows_equal = [](const Row& a, const Row& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!values_equal(a[i], b[i])) return false;
    return true;
  };
  if (expected.ordered) {
    for (std::size_t i = 0; i < actual.rows.size(); ++i)
      if (!rows_equal(actual.rows[i], expected.rows[i])) return false;
    return true;
  }
  std::vector<Row> a = actual.rows, b = expected.rows;
  std::sort(a.begin(), a.end(), RowLess{});
  std::sort(b.begin(), b.end(), RowLess{});
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!rows_equal(a[i], b[i])) return false;
  return true;
}

std::vector<Value> multiset_values(const Relation& rel) {
  std::vector<Value> out;
  for (const auto& row : rel.rows) out.insert(out.end(), row.begin(), row.end());
  std::sort(out.begin(), out.end(), ValueLess{});
  return out;
}

Schema load_schema(const std::filesystem::path& schema_json) {
  Schema schema;
  try {
    auto j = nlohmann::json::parse(read_file(schema_json));
    for (const auto& t : j.at("tables")) {
      TableDef def;
      // Identifiers are case-insensitive, as in the parser.
      def.name = lowercase(t.at("name").get<std::string>());
      for (const auto& c : t.at("columns"))
        def.columns.push_back(
            {lowercase(c.at("name").get<std::string>()), column_type_from_string(c.at("type").get<std::string>())});
      schema.tables.push_back(std::move(def));
    }
    if (j.contains("foreign_keys")) {
      for (const auto& fk : j.at("foreign_keys")) {
        auto [ft, fc] = split_qualified(lowercase(fk.at("from").get<std::string>()));
        auto [tt, tc] = split_qualified(lowercase(fk.at("to").get<std::string>()));
        schema.foreign_keys.push_back({ft, fc, tt, tc});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(schema_json.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw LoadError(schema_json.string() + ": " + e.what());
  }
  return schema;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;       // inside a quoted field
  bool was_quoted = false;   // current field began with a quote
  bool any = false;          // current record has content
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    any = false;
  };
  while (i < n) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw LoadError("malformed CSV: text after closing quote at byte " + std::to_string(i));
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == '"') {
      if (!field.empty() || was_quoted) throw LoadError("malformed CSV: stray quote at byte " + std::to_string(i));
      quoted = true;
      was_quoted = true;
      any = true;
      ++i;
      continue;
    }
    if (c == ',') {
      any = true;
      end_field();
      ++i;
      continue;
    }
    if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
      ++i;
      if (any || !field.empty() || !record.empty()) end_record();
      continue;
    }
    field += c;
    any = true;
    ++i;
  }
  if (quoted) throw LoadError("malformed CSV: unterminated quoted field");
  if (any || !field.empty() || !record.empty()) end_record();
  return records;
}

std::string write_csv(const Relation& rel) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < rel.columns.size(); ++i) {
    if (i) out += ',';
    out += cell(rel.columns[i]);
  }
  out += '\n';
  for (const auto& row : rel.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell(to_display(row[i]));
    }
    out += '\n';
  }
  return out;
}

Database load_database(const std::filesystem::path& dir) {
  Database db;
  db.schema = load_schema(dir / "schema.json");
  for (const auto& t : db.schema.tables) {
    Relation rel;
    for (const auto& c : t.columns) rel.columns.push_back(c.name);
    auto file = dir / (t.name + ".csv");
    if (std::filesystem::exists(file)) {
      auto records = read_csv(read_file(file));
      if (records.empty()) throw LoadError(file.string() + ": missing header row");
      std::vector<std::string> header;
      for (const auto& h : records.front()) header.push_back(lowercase(h));
      for (const auto& h : header)
        if (!t.column_index(h)) throw LoadError(file.string() + ": column " + h + " is not in the schema");
      // Map header order onto schema order.
      std::vector<std::size_t> source(t.columns.size());
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        auto it = std::find(header.begin(), header.end(), t.columns[i].name);
        if (it == header.end()) throw LoadError(file.string() + ": header lacks column " + t.columns[i].name);
        source[i] = static_cast<std::size_t>(it - header.begin());
      }
      for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size())
          throw LoadError(file.string() + ": record " + std::to_string(r) + " has " + std::to_string(rec.size()) +
                          " fields, expected " + std::to_string(header.size()));
        Row row;
        for (std::size_t i = 0; i < t.columns.size(); ++i)
          row.push_back(typed_cell(rec[source[i]], t.columns[i].type,
                                   file.string() + " record " + std::to_string(r)));
        rel.rows.push_back(std::move(row));
      }
    }
    db.contents.emplace(t.name, std::move(rel));
  }
  validate(db);
  return db;
}

Relation relation_from_csv_text(const std::string& text, bool ordered) {
  auto records = read_csv(text);
  if (records.empty()) throw LoadError("expected-output CSV lacks a header row");
  Relation rel;
  rel.ordered = ordered;
  rel.columns = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != rel.columns.size())
      throw LoadError("expected-output CSV record " + std::to_string(r) + " has wrong field count");
    Row row;
    for (const auto& f : records[r]) row.push_back(untyped_cell(f));
    rel.rows.push_back(std::move(row));
  }
  return rel;
}

Relation load_relation_csv(const std::filesystem::path& file, bool ordered) {
  return relation_from_csv_text(read_file(file), ordered);
}

}  // namespace sqlmend
