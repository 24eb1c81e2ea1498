#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqlmend/value.hpp"

namespace sqlmend {

struct Relation {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  /// Set when the producing query had ORDER BY; row order then matters.
  bool ordered = false;

  std::size_t row_count() const { return rows.size(); }
  std::size_t column_count() const { return columns.size(); }
};

struct ColumnDef {
  std::string name;
  ColumnType type = ColumnType::Text;
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;

  std::optional<std::size_t> column_index(const std::string& column) const;
};

struct ForeignKey {
  std::string from_table, from_column, to_table, to_column;
};

struct Schema {
  std::vector<TableDef> tables;
  std::vector<ForeignKey> foreign_keys;

  const TableDef* find(const std::string& table) const;
};

/// Immutable after construction; safe to share across threads.
struct Database {
  Schema schema;
  std::map<std::string, Relation> contents;

  const Relation& table(const std::string& name) const;
};

/// Checks unique table/column names and that every stored row matches its
/// table's arity and column types. Throws LoadError.
void validate(const Database& db);

/// True iff same column count and, if `expected.ordered`, equal row
/// sequences, otherwise equal row multisets. Column names are ignored and
/// integer/real cells compare numerically.
bool outputs_match(const Relation& actual, const Relation& expected);

/// Every cell of every row, flattened and sorted by the value order.
std::vector<Value> multiset_values(const Relation& rel);

// --- loading -------------------------------------------------------------

/// Schema file: {"tables":[{"name":..,"columns":[{"name":..,"type":"integer|real|text"}]}],
///               "foreign_keys":[{"from":"t.c","to":"t.c"}]}
Schema load_schema(const std::filesystem::path& schema_json);

/// RFC-4180 CSV with a header row naming the columns.
std::vector<std::vector<std::string>> read_csv(const std::string& text);
std::string write_csv(const Relation& rel);

/// Directory holding schema.json plus <table>.csv per table. Empty fields are
/// NULL for non-text columns; missing CSV files load as empty tables.
Database load_database(const std::filesystem::path& dir);

/// CSV with header; cells typed by shape (integer, real, else text; empty -> NULL).
Relation load_relation_csv(const std::filesystem::path& file, bool ordered);
Relation relation_from_csv_text(const std::string& text, bool ordered);

}  // namespace sqlmend
