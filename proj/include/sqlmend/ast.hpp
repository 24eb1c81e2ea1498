#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqlmend/value.hpp"

namespace sqlmend {

enum class Aggregate { None, Count, Sum, Avg, Min, Max };
enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge, Like, In };
enum class SortDir { Asc, Desc };
enum class SetOpKind { Except, Union, Intersect };

/// `table.column`, `column`, or `*` (column == "*").
struct ColumnRef {
  std::string table;
  std::string column;

  bool is_star() const { return column == "*"; }
  bool operator==(const ColumnRef&) const = default;
};

/// Column with an optional aggregate: `name`, `COUNT(*)`, `COUNT(DISTINCT t.c)`.
struct SelectExpr {
  Aggregate agg = Aggregate::None;
  bool distinct = false;
  ColumnRef column;

  bool operator==(const SelectExpr&) const = default;
};

struct TableName {
  std::string name;
  bool operator==(const TableName&) const = default;
};

struct Comparison {
  SelectExpr lhs;
  CompareOp op = CompareOp::Eq;
  enum class RhsKind { Literal, Column, List };
  RhsKind rhs_kind = RhsKind::Literal;
  Value literal;
  ColumnRef column;
  std::vector<Value> list;

  bool operator==(const Comparison&) const;
};

/// Predicate tree. And/Or are binary, Not is unary.
struct Predicate {
  enum class Kind { Compare, And, Or, Not };
  Kind kind = Kind::Compare;
  Comparison cmp;
  std::vector<Predicate> children;

  static Predicate compare(Comparison c);
  static Predicate both(Predicate l, Predicate r);
  static Predicate either(Predicate l, Predicate r);
  static Predicate negate(Predicate p);

  bool operator==(const Predicate&) const;
};

struct Join {
  TableName table;
  ColumnRef left;
  ColumnRef right;
  bool operator==(const Join&) const = default;
};

struct OrderItem {
  SelectExpr expr;
  SortDir dir = SortDir::Asc;
  bool operator==(const OrderItem&) const = default;
};

/// Heap-allocated value with deep-copy semantics, for the recursive set-op arm.
template <class T>
class Box {
 public:
  Box(T v) : ptr_(std::make_unique<T>(std::move(v))) {}
  Box(const Box& o) : ptr_(std::make_unique<T>(*o.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& o) {
    if (this != &o) ptr_ = std::make_unique<T>(*o.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  bool operator==(const Box& o) const { return *ptr_ == *o.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Query;

struct SetOperation {
  SetOpKind kind = SetOpKind::Except;
  Box<Query> arm;
  bool operator==(const SetOperation&) const = default;
};

/// Abstract syntax tree for the supported SELECT subset.
struct Query {
  bool distinct = false;
  std::vector<SelectExpr> select;
  std::vector<TableName> from;
  std::vector<Join> joins;
  std::optional<Predicate> where;
  std::vector<ColumnRef> group_by;
  std::optional<Predicate> having;
  std::vector<OrderItem> order_by;
  std::optional<std::int64_t> limit;
  std::optional<SetOperation> set_op;

  bool operator==(const Query&) const;

  /// Tables visible to column references: FROM list then JOIN tables.
  std::vector<std::string> scope_tables() const;
};

const char* to_string(Aggregate a);
const char* to_string(CompareOp op);
const char* to_string(SortDir d);
const char* to_string(SetOpKind k);

bool is_aggregate(const SelectExpr& e);
bool has_aggregate(const Query& q);

}  // namespace sqlmend
