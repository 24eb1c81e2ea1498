#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqlmend/relation.hpp"
#include "sqlmend/structure.hpp"

namespace sqlmend {

/// Read-only inputs shared by every domain computation of one repair task.
/// Column value pools are precomputed, so a context may be shared by threads.
class MutationContext {
 public:
  MutationContext(const Database& db, std::vector<Value> question_literals);

  const Database& db() const { return *db_; }
  const std::vector<Value>& question_literals() const { return question_literals_; }
  /// LIMIT candidates run 1..max_limit: max(10, largest integer in the question).
  std::int64_t max_limit() const { return max_limit_; }
  /// Distinct non-null values of table.column in ascending order.
  const std::vector<Value>& column_values(const std::string& table, const std::string& column) const;

 private:
  const Database* db_;
  std::vector<Value> question_literals_;
  std::int64_t max_limit_ = 10;
  std::map<std::pair<std::string, std::string>, std::vector<Value>> pools_;
  std::vector<Value> empty_;
};

/// Numbers and quoted spans ('...' or "...") in question text, in order of
/// appearance, deduplicated.
std::vector<Value> question_literals(const std::string& question);

/// Exclusive bounds on the admissible values of one integer WHERE constant.
struct WhereBounds {
  std::optional<std::int64_t> lower;  // admissible values are > lower
  std::optional<std::int64_t> upper;  // admissible values are < upper

  bool admits(std::int64_t v) const;
  /// No integer lies strictly between the bounds.
  bool empty() const;
  bool operator==(const WhereBounds&) const = default;
};

/// Per-slot bounds learned from the row counts of already executed mutants.
struct WhereHistory {
  std::map<int, WhereBounds> bounds;

  bool admits(int slot_id, const Constant& c) const;
};

/// Whether the output row count of `structure` is monotone in the integer
/// constant of `slot_id`, so that history bounds are sound for it: an outer
/// WHERE comparison `column {<,<=,>,>=} integer` not under NOT, in a query
/// without HAVING.
bool history_applies(const QueryStructure& structure, int slot_id);

/// Narrows the bounds of `slot_id` after `tried` produced `observed` rows
/// while `expected` rows were wanted. For `<`/`<=` too few rows excludes every
/// value <= tried, too many excludes every value >= tried; `>`/`>=` mirror it.
/// Equal counts, or slots where history does not apply, leave it unchanged.
WhereHistory update_history(const WhereHistory& history, const QueryStructure& structure, int slot_id,
                            const Constant& tried, std::size_t observed, std::size_t expected);

/// Kind-compatible replacement values for one slot, in deterministic order,
/// never containing the slot's current value. Tables follow schema order,
/// columns schema order within tables, integer pools ascending.
/// An empty result means the slot cannot repair the query on its own.
std::vector<Constant> candidate_domain(const PlaceholderSlot& slot, const QueryStructure& structure,
                                       const MutationContext& ctx, const WhereHistory& history);

enum class StructuralVariant {
  AddExcept,
  AddWhereClause,
  ExtendWhereConjunct,
  ExtendWhereDisjunct,
  AddSelectColumn,
  RemoveSelectColumn
};

std::string to_string(StructuralVariant v);

/// A modified skeleton. `structure` carries the original constants under
/// their new ids; `fresh` lists the new slots, which start unassigned.
struct StructuralEdit {
  StructuralVariant variant = StructuralVariant::AddWhereClause;
  QueryStructure structure;
  std::vector<int> fresh;
};

/// Shape-gated variants of `structure` (which must be fully assigned):
///  - column counts differ: add fresh SELECT columns or drop columns until they match;
///  - otherwise, more rows than expected: an EXCEPT arm cloning the outer
///    projection and tables, with a fresh WHERE comparison;
///  - otherwise, row counts differ: a fresh WHERE comparison, or the existing
///    WHERE extended by AND / OR with one.
/// Returns nothing when the shapes already agree.
std::vector<StructuralEdit> structural_variants(const QueryStructure& structure, const Relation& actual,
                                                const Relation& expected);

/// Calls `visit` with every complete assignment of the edit's fresh slots, in
/// deterministic order (fresh ids ascending, each over its candidate_domain).
/// Stops early when `visit` returns false.
void enumerate_fills(const StructuralEdit& edit, const MutationContext& ctx,
                     const std::function<bool(const std::map<int, Constant>&)>& visit);

enum class MutationKind { Constant, Structural };

struct Mutation {
  MutationKind kind = MutationKind::Constant;
  // Constant mutations.
  int slot_id = 0;
  Constant old_value;
  Constant new_value;
  // Structural mutations: the edit plus values for its fresh slots.
  std::shared_ptr<const StructuralEdit> edit;
  std::map<int, Constant> fills;

  static Mutation constant(int slot_id, Constant old_value, Constant new_value);
  static Mutation structural(std::shared_ptr<const StructuralEdit> edit, std::map<int, Constant> fills);
};

/// Constant kind: reassigns the slot and instantiates. Structural kind:
/// instantiates the edit's structure with its fills. Throws StructureError on
/// a kind mismatch, an unknown slot, or an unfilled fresh slot.
Query apply_mutation(const QueryStructure& structure, const Mutation& m);

std::string describe(const Mutation& m);

}  // namespace sqlmend
