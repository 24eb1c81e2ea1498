#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sqlmend/ast.hpp"

namespace sqlmend {

/// Keyword context of a placeholder, numbered like the mutation-type table:
/// 1 SELECT/GROUP BY/ORDER BY, 2 FROM, 3 JOIN, 4 WHERE/EXCEPT/HAVING, 5 LIMIT.
enum class SlotContext { Projection = 1, From = 2, Join = 3, Filter = 4, Limit = 5 };

enum class ValueKind { Column, Aggregate, Table, Literal, Operator, Direction };

/// Where in the query a placeholder sits.
enum class SlotRole {
  SelectItem,
  GroupBy,
  OrderExpr,
  OrderDir,
  FromTable,
  JoinTable,
  JoinColumn,
  PredicateLhs,
  PredicateOp,
  PredicateRhsColumn,
  PredicateRhsLiteral,
  Limit
};

/// A constant that can fill a placeholder. LIMIT counts are integer Values.
using Constant = std::variant<ColumnRef, SelectExpr, TableName, Value, CompareOp, SortDir>;

struct PlaceholderSlot {
  int id = 0;
  SlotContext context = SlotContext::Projection;
  ValueKind kind = ValueKind::Column;
  SlotRole role = SlotRole::SelectItem;
  /// 0 for the outer query, 1 for the set-operation arm.
  int scope = 0;
  bool in_having = false;
  /// Predicate slots: id of the comparison's left-hand-side and operator slots.
  int lhs_slot = 0;
  int op_slot = 0;
  /// Comparison sits below an odd number of NOTs.
  bool negated = false;

  bool operator==(const PlaceholderSlot&) const = default;
};

/// Query skeleton with every constant abstracted into a numbered slot.
/// Slots are numbered 1..n in source order; `assignment` may leave freshly
/// added slots unassigned.
struct QueryStructure {
  Query skeleton;
  std::vector<PlaceholderSlot> slots;
  std::map<int, Constant> assignment;

  const PlaceholderSlot& slot(int id) const { return slots.at(static_cast<std::size_t>(id - 1)); }
  bool fully_assigned() const { return assignment.size() == slots.size(); }
};

/// True when `kind` may occupy a slot of keyword context `ctx`.
bool kind_allowed(SlotContext ctx, ValueKind kind);

/// True when the constant's alternative matches the slot's value kind
/// (and, for LIMIT slots, is a positive integer).
bool constant_fits(const PlaceholderSlot& slot, const Constant& c);

QueryStructure extract_structure(const Query& q);

/// Skeleton equality: keyword shape plus slot kinds, ignoring assignments.
bool structures_equal(const QueryStructure& a, const QueryStructure& b);

/// Throws StructureError on a missing slot or a kind mismatch.
Query instantiate(const QueryStructure& structure, const std::map<int, Constant>& assignment);
Query instantiate(const QueryStructure& structure);

/// `SELECT #1, #2 FROM #3 ...`
std::string print_skeleton(const QueryStructure& s);

std::string to_string(const Constant& c);
std::string to_string(ValueKind k);
std::string to_string(SlotRole r);
ValueKind value_kind_of(const Constant& c);

/// Number of constant positions in `q`, in traversal order.
int count_slots(const Query& q);

}  // namespace sqlmend
