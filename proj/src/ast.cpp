#include "sqlmend/ast.hpp"

namespace sqlmend {

bool Comparison::operator==(const Comparison& o) const {
  if (!(lhs == o.lhs) || op != o.op || rhs_kind != o.rhs_kind) return false;
  // Literal equality is exact here (type and value), not SQL equality.
  switch (rhs_kind) {
    case RhsKind::Literal: return literal == o.literal;
    case RhsKind::Column: return column == o.column;
    case RhsKind::List: return list == o.list;
  }
  return false;
}

Predicate Predicate::compare(Comparison c) {
  Predicate p;
  p.kind = Kind::Compare;
  p.cmp = std::move(c);
  return p;
}

Predicate Predicate::both(Predicate l, Predicate r) {
  Predicate p;
  p.kind = Kind::And;
  p.children.push_back(std::move(l));
  p.children.push_back(std::move(r));
  return p;
}

Predicate Predicate::either(Predicate l, Predicate r) {
  Predicate p;
  p.kind = Kind::Or;
  p.children.push_back(std::move(l));
  p.children.push_back(std::move(r));
  return p;
}

Predicate Predicate::negate(Predicate inner) {
  Predicate p;
  p.kind = Kind::Not;
  p.children.push_back(std::move(inner));
  return p;
}

bool Predicate::operator==(const Predicate& o) const {
  if (kind != o.kind) return false;
  if (kind == Kind::Compare) return cmp == o.cmp;
  return children == o.children;
}

bool Query::operator==(const Query& o) const {
  return distinct == o.distinct && select == o.select && from == o.from && joins == o.joins &&
         where == o.where && group_by == o.group_by && having == o.having &&
         order_by == o.order_by && limit == o.limit && set_op == o.set_op;
}

std::vector<std::string> Query::scope_tables() const {
  std::vector<std::string> out;
  for (const auto& t : from) out.push_back(t.name);
  for (const auto& j : joins) out.push_back(j.table.name);
  return out;
}

const char* to_string(Aggregate a) {
  switch (a) {
    case Aggregate::None: return "";
    case Aggregate::Count: return "COUNT";
    case Aggregate::Sum: return "SUM";
    case Aggregate::Avg: return "AVG";
    case Aggregate::Min: return "MIN";
    case Aggregate::Max: return "MAX";
  }
  return "";
}

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    case CompareOp::Like: return "LIKE";
    case CompareOp::In: return "IN";
  }
  return "=";
}

const char* to_string(SortDir d) { return d == SortDir::Asc ? "ASC" : "DESC"; }

const char* to_string(SetOpKind k) {
  switch (k) {
    case SetOpKind::Except: return "EXCEPT";
    case SetOpKind::Union: return "UNION";
    case SetOpKind::Intersect: return "INTERSECT";
  }
  return "EXCEPT";
}

bool is_aggregate(const SelectExpr& e) { return e.agg != Aggregate::None; }

bool has_aggregate(const Query& q) {
  for (const auto& s : q.select)
    if (is_aggregate(s)) return true;
  for (const auto& o : q.order_by)
    if (is_aggregate(o.expr)) return true;
  return q.having.has_value();
}

}  // namespace sqlmend
