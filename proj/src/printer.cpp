#include "sqlmend/printer_detail.hpp"

#include "sqlmend/parser.hpp"

namespace sqlmend {

std::string ConstantPrinter::column(const ColumnRef& c) {
  if (label_slots) return next_label();
  return print(c);
}
std::string ConstantPrinter::expr(const SelectExpr& e) {
  if (label_slots) return next_label();
  return print(e);
}
std::string ConstantPrinter::table(const TableName& t) {
  if (label_slots) return next_label();
  return t.name;
}
std::string ConstantPrinter::literal(const Value& v) {
  if (label_slots) return next_label();
  return to_sql_literal(v);
}
std::string ConstantPrinter::limit(std::int64_t n) {
  if (label_slots) return next_label();
  return std::to_string(n);
}
std::string ConstantPrinter::op(CompareOp o) {
  if (label_slots) return next_label();
  return to_string(o);
}
std::string ConstantPrinter::dir(SortDir d) {
  if (label_slots) return next_label();
  return to_string(d);
}
std::string ConstantPrinter::next_label() { return "#" + std::to_string(++counter); }

namespace {

// Operator precedence for parenthesization: NOT binds tighter than AND, AND tighter than OR.
void print_predicate(const Predicate& p, ConstantPrinter& cp, std::string& out);

void print_child(const Predicate& parent, const Predicate& child, bool right, ConstantPrinter& cp,
                 std::string& out) {
  bool parens = false;
  if (child.kind == Predicate::Kind::Or && parent.kind != Predicate::Kind::Or) parens = true;
  if (child.kind == Predicate::Kind::And && parent.kind == Predicate::Kind::Not) parens = true;
  if (child.kind == Predicate::Kind::Or && parent.kind == Predicate::Kind::Not) parens = true;
  // Binary nodes parse left-associative; a same-kind right child needs parens to round-trip.
  if (right && child.kind == parent.kind) parens = true;
  if (parens) out += '(';
  print_predicate(child, cp, out);
  if (parens) out += ')';
}

void print_comparison(const Comparison& c, ConstantPrinter& cp, std::string& out, bool having) {
  out += having ? cp.expr(c.lhs) : cp.column(c.lhs.column);
  out += ' ';
  out += cp.op(c.op);
  out += ' ';
  switch (c.rhs_kind) {
    case Comparison::RhsKind::Literal:
      out += cp.literal(c.literal);
      break;
    case Comparison::RhsKind::Column:
      out += cp.column(c.column);
      break;
    case Comparison::RhsKind::List: {
      out += '(';
      for (std::size_t i = 0; i < c.list.size(); ++i) {
        if (i) out += ", ";
        out += cp.literal(c.list[i]);
      }
      out += ')';
      break;
    }
  }
}

void print_predicate(const Predicate& p, ConstantPrinter& cp, std::string& out) {
  switch (p.kind) {
    case Predicate::Kind::Compare:
      print_comparison(p.cmp, cp, out, cp.in_having);
      break;
    case Predicate::Kind::Not:
      out += "NOT ";
      print_child(p, p.children[0], false, cp, out);
      break;
    case Predicate::Kind::And:
    case Predicate::Kind::Or:
      print_child(p, p.children[0], false, cp, out);
      out += p.kind == Predicate::Kind::And ? " AND " : " OR ";
      print_child(p, p.children[1], true, cp, out);
      break;
  }
}

}  // namespace

void print_query(const Query& q, ConstantPrinter& cp, std::string& out) {
  out += "SELECT ";
  if (q.distinct) out += "DISTINCT ";
  for (std::size_t i = 0; i < q.select.size(); ++i) {
    if (i) out += ", ";
    out += cp.expr(q.select[i]);
  }
  out += " FROM ";
  for (std::size_t i = 0; i < q.from.size(); ++i) {
    if (i) out += ", ";
    out += cp.table(q.from[i]);
  }
  for (const auto& j : q.joins) {
    out += " JOIN ";
    out += cp.table(j.table);
    out += " ON ";
    out += cp.column(j.left);
    out += " = ";
    out += cp.column(j.right);
  }
  if (q.where) {
    out += " WHERE ";
    cp.in_having = false;
    print_predicate(*q.where, cp, out);
  }
  if (!q.group_by.empty()) {
    out += " GROUP BY ";
    for (std::size_t i = 0; i < q.group_by.size(); ++i) {
      if (i) out += ", ";
      out += cp.column(q.group_by[i]);
    }
  }
  if (q.having) {
    out += " HAVING ";
    cp.in_having = true;
    print_predicate(*q.having, cp, out);
    cp.in_having = false;
  }
  if (!q.order_by.empty()) {
    out += " ORDER BY ";
    for (std::size_t i = 0; i < q.order_by.size(); ++i) {
      if (i) out += ", ";
      out += cp.expr(q.order_by[i].expr);
      out += ' ';
      out += cp.dir(q.order_by[i].dir);
    }
  }
  if (q.limit) {
    out += " LIMIT ";
    out += cp.limit(*q.limit);
  }
  if (q.set_op) {
    out += ' ';
    out += to_string(q.set_op->kind);
    out += ' ';
    print_query(*q.set_op->arm, cp, out);
  }
}

std::string print(const Query& q) {
  ConstantPrinter cp;
  std::string out;
  print_query(q, cp, out);
  return out;
}

std::string print(const ColumnRef& c) { return c.table.empty() ? c.column : c.table + "." + c.column; }

std::string print(const SelectExpr& e) {
  if (e.agg == Aggregate::None) return print(e.column);
  std::string out = to_string(e.agg);
  out += '(';
  if (e.distinct) out += "DISTINCT ";
  out += print(e.column);
  out += ')';
  return out;
}

std::string print(const Predicate& p) {
  ConstantPrinter cp;
  cp.in_having = true;  // print lhs with aggregates if any
  std::string out;
  print_predicate(p, cp, out);
  return out;
}

}  // namespace sqlmend
