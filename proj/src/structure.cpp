#include "sqlmend/structure.hpp"

#include "sqlmend/errors.hpp"
#include "sqlmend/parser.hpp"
#include "sqlmend/printer_detail.hpp"

namespace sqlmend {

namespace {

using ConstantRef = std::variant<ColumnRef*, SelectExpr*, TableName*, Value*, CompareOp*, SortDir*,
                                 std::int64_t*>;

// Walks every constant position in source order, assigning slot metadata.
// The order here must match print_query, which labels `#n` in the same walk.
class SlotWalker {
 public:
  using Callback = std::function<void(const PlaceholderSlot&, ConstantRef)>;
  explicit SlotWalker(Callback cb) : cb_(std::move(cb)) {}

  void walk(Query& q, int scope = 0) {
    SlotContext proj = scope == 0 ? SlotContext::Projection : SlotContext::Filter;
    for (auto& s : q.select) emit(slot(proj, ValueKind::Aggregate, SlotRole::SelectItem, scope), &s);
    for (auto& t : q.from) emit(slot(SlotContext::From, ValueKind::Table, SlotRole::FromTable, scope), &t);
    for (auto& j : q.joins) {
      emit(slot(SlotContext::Join, ValueKind::Table, SlotRole::JoinTable, scope), &j.table);
      emit(slot(SlotContext::Join, ValueKind::Column, SlotRole::JoinColumn, scope), &j.left);
      emit(slot(SlotContext::Join, ValueKind::Column, SlotRole::JoinColumn, scope), &j.right);
    }
    if (q.where) walk_predicate(*q.where, scope, false, false);
    for (auto& g : q.group_by) emit(slot(proj, ValueKind::Column, SlotRole::GroupBy, scope), &g);
    if (q.having) walk_predicate(*q.having, scope, true, false);
    for (auto& o : q.order_by) {
      emit(slot(proj, ValueKind::Aggregate, SlotRole::OrderExpr, scope), &o.expr);
      emit(slot(proj, ValueKind::Direction, SlotRole::OrderDir, scope), &o.dir);
    }
    if (q.limit) emit(slot(SlotContext::Limit, ValueKind::Literal, SlotRole::Limit, scope), &*q.limit);
    if (q.set_op) walk(*q.set_op->arm, scope + 1);
  }

  int count() const { return next_id_ - 1; }

 private:
  Callback cb_;
  int next_id_ = 1;

  PlaceholderSlot slot(SlotContext ctx, ValueKind kind, SlotRole role, int scope) {
    PlaceholderSlot s;
    s.context = ctx;
    s.kind = kind;
    s.role = role;
    s.scope = scope;
    return s;
  }

  int emit(PlaceholderSlot s, ConstantRef ref) {
    s.id = next_id_++;
    if (cb_) cb_(s, ref);
    return s.id;
  }

  void walk_predicate(Predicate& p, int scope, bool having, bool negated) {
    switch (p.kind) {
      case Predicate::Kind::Not:
        walk_predicate(p.children[0], scope, having, !negated);
        return;
      case Predicate::Kind::And:
      case Predicate::Kind::Or:
        walk_predicate(p.children[0], scope, having, negated);
        walk_predicate(p.children[1], scope, having, negated);
        return;
      case Predicate::Kind::Compare:
        break;
    }
    Comparison& c = p.cmp;
    auto base = [&](ValueKind kind, SlotRole role) {
      PlaceholderSlot s = slot(SlotContext::Filter, kind, role, scope);
      s.in_having = having;
      s.negated = negated;
      return s;
    };
    int lhs = having ? emit(base(ValueKind::Aggregate, SlotRole::PredicateLhs), &c.lhs)
                     : emit(base(ValueKind::Column, SlotRole::PredicateLhs), &c.lhs.column);
    PlaceholderSlot op = base(ValueKind::Operator, SlotRole::PredicateOp);
    op.lhs_slot = lhs;
    int op_id = emit(op, &c.op);
    auto rhs = [&](ValueKind kind, SlotRole role) {
      PlaceholderSlot s = base(kind, role);
      s.lhs_slot = lhs;
      s.op_slot = op_id;
      return s;
    };
    switch (c.rhs_kind) {
      case Comparison::RhsKind::Literal:
        emit(rhs(ValueKind::Literal, SlotRole::PredicateRhsLiteral), &c.literal);
        break;
      case Comparison::RhsKind::Column:
        emit(rhs(ValueKind::Column, SlotRole::PredicateRhsColumn), &c.column);
        break;
      case Comparison::RhsKind::List:
        for (auto& v : c.list) emit(rhs(ValueKind::Literal, SlotRole::PredicateRhsLiteral), &v);
        break;
    }
  }
};

struct Reader {
  Constant operator()(ColumnRef* p) const { return *p; }
  Constant operator()(SelectExpr* p) const { return *p; }
  Constant operator()(TableName* p) const { return *p; }
  Constant operator()(Value* p) const { return *p; }
  Constant operator()(CompareOp* p) const { return *p; }
  Constant operator()(SortDir* p) const { return *p; }
  Constant operator()(std::int64_t* p) const { return Value{*p}; }
};

struct Blanker {
  void operator()(ColumnRef* p) const { *p = ColumnRef{}; }
  void operator()(SelectExpr* p) const { *p = SelectExpr{}; }
  void operator()(TableName* p) const { *p = TableName{}; }
  void operator()(Value* p) const { *p = Value{}; }
  void operator()(CompareOp* p) const { *p = CompareOp::Eq; }
  void operator()(SortDir* p) const { *p = SortDir::Asc; }
  void operator()(std::int64_t* p) const { *p = 1; }
};

template <class T>
bool write_as(T* dst, const Constant& c) {
  if (auto v = std::get_if<T>(&c)) {
    *dst = *v;
    return true;
  }
  return false;
}

bool write_constant(ConstantRef ref, const Constant& c) {
  return std::visit(
      [&](auto* p) -> bool {
        using T = std::remove_pointer_t<decltype(p)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          auto v = std::get_if<Value>(&c);
          if (!v) return false;
          auto i = std::get_if<std::int64_t>(v);
          if (!i || *i < 1) return false;
          *p = *i;
          return true;
        } else {
          return write_as(p, c);
        }
      },
      ref);
}

}  // namespace

bool kind_allowed(SlotContext ctx, ValueKind kind) {
  switch (ctx) {
    case SlotContext::Projection:
      return kind == ValueKind::Column || kind == ValueKind::Aggregate || kind == ValueKind::Direction;
    case SlotContext::From:
      return kind == ValueKind::Table;
    case SlotContext::Join:
      return kind == ValueKind::Table || kind == ValueKind::Column;
    case SlotContext::Filter:
      return kind != ValueKind::Table;
    case SlotContext::Limit:
      return kind == ValueKind::Literal;
  }
  return false;
}

ValueKind value_kind_of(const Constant& c) {
  switch (c.index()) {
    case 0: return ValueKind::Column;
    case 1: return ValueKind::Aggregate;
    case 2: return ValueKind::Table;
    case 3: return ValueKind::Literal;
    case 4: return ValueKind::Operator;
    default: return ValueKind::Direction;
  }
}

bool constant_fits(const PlaceholderSlot& slot, const Constant& c) {
  if (value_kind_of(c) != slot.kind) return false;
  if (slot.role == SlotRole::Limit) {
    auto i = std::get_if<std::int64_t>(&std::get<Value>(c));
    return i && *i >= 1;
  }
  return true;
}

QueryStructure extract_structure(const Query& q) {
  QueryStructure s;
  s.skeleton = q;
  SlotWalker walker([&](const PlaceholderSlot& slot, ConstantRef ref) {
    s.slots.push_back(slot);
    s.assignment.emplace(slot.id, std::visit(Reader{}, ref));
    std::visit(Blanker{}, ref);
  });
  walker.walk(s.skeleton);
  return s;
}

bool structures_equal(const QueryStructure& a, const QueryStructure& b) {
  return a.slots == b.slots && a.skeleton == b.skeleton;
}

Query instantiate(const QueryStructure& structure, const std::map<int, Constant>& assignment) {
  Query out = structure.skeleton;
  SlotWalker walker([&](const PlaceholderSlot& slot, ConstantRef ref) {
    auto it = assignment.find(slot.id);
    if (it == assignment.end())
      throw StructureError(StructureError::Kind::MissingSlot, "slot #" + std::to_string(slot.id) + " is unassigned");
    if (!constant_fits(slot, it->second) || !write_constant(ref, it->second))
      throw StructureError(StructureError::Kind::KindMismatch,
                           "slot #" + std::to_string(slot.id) + " expects " + to_string(slot.kind) +
                               ", got " + to_string(it->second));
  });
  walker.walk(out);
  for (const auto& [id, value] : assignment) {
    if (id < 1 || id > walker.count())
      throw StructureError(StructureError::Kind::UnknownSlot, "no slot #" + std::to_string(id));
  }
  // IN takes a literal list and no other operator does.
  std::function<void(const Predicate&)> check = [&](const Predicate& p) {
    if (p.kind != Predicate::Kind::Compare) {
      for (const auto& c : p.children) check(c);
      return;
    }
    bool list = p.cmp.rhs_kind == Comparison::RhsKind::List;
    if (list != (p.cmp.op == CompareOp::In))
      throw StructureError(StructureError::Kind::KindMismatch, "operator IN requires a literal list");
  };
  for (const Query* q = &out; q; q = q->set_op ? &*q->set_op->arm : nullptr) {
    if (q->where) check(*q->where);
    if (q->having) check(*q->having);
  }
  return out;
}

Query instantiate(const QueryStructure& structure) { return instantiate(structure, structure.assignment); }

std::string print_skeleton(const QueryStructure& s) {
  ConstantPrinter cp;
  cp.label_slots = true;
  std::string out;
  print_query(s.skeleton, cp, out);
  return out;
}

int count_slots(const Query& q) {
  Query copy = q;
  SlotWalker walker(nullptr);
  walker.walk(copy);
  return walker.count();
}

std::string to_string(const Constant& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ColumnRef>) return print(v);
        else if constexpr (std::is_same_v<T, SelectExpr>) return print(v);
        else if constexpr (std::is_same_v<T, TableName>) return v.name;
        else if constexpr (std::is_same_v<T, Value>) return to_sql_literal(v);
        else return to_string(v);
      },
      c);
}

std::string to_string(ValueKind k) {
  switch (k) {
    case ValueKind::Column: return "column";
    case ValueKind::Aggregate: return "aggregate";
    case ValueKind::Table: return "table";
    case ValueKind::Literal: return "literal";
    case ValueKind::Operator: return "operator";
    case ValueKind::Direction: return "direction";
  }
  return "column";
}

std::string to_string(SlotRole r) {
  switch (r) {
    case SlotRole::SelectItem: return "select";
    case SlotRole::GroupBy: return "group-by";
    case SlotRole::OrderExpr: return "order-by";
    case SlotRole::OrderDir: return "order-direction";
    case SlotRole::FromTable: return "from";
    case SlotRole::JoinTable: return "join-table";
    case SlotRole::JoinColumn: return "join-column";
    case SlotRole::PredicateLhs: return "predicate-lhs";
    case SlotRole::PredicateOp: return "predicate-op";
    case SlotRole::PredicateRhsColumn: return "predicate-rhs-column";
    case SlotRole::PredicateRhsLiteral: return "predicate-rhs-literal";
    case SlotRole::Limit: return "limit";
  }
  return "select";
}

}  // namespace sqlmend
