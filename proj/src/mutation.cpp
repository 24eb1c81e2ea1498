#include "sqlmend/mutation.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "sqlmend/errors.hpp"
#include "sqlmend/parser.hpp"

namespace sqlmend {

namespace {

bool same_constant(const Constant& a, const Constant& b) {
  if (a.index() != b.index()) return false;
  if (auto va = std::get_if<Value>(&a)) {
    const Value& vb = std::get<Value>(b);
    return va->index() == vb.index() && *va == vb;
  }
  return a == b;
}

void push_unique(std::vector<Constant>& out, Constant c) {
  for (const auto& e : out)
    if (same_constant(e, c)) return;
  out.push_back(std::move(c));
}

/// Tables assigned to the FROM/JOIN slots of one scope, in slot order.
std::vector<const TableDef*> scope_tables(const QueryStructure& s, int scope, const Schema& schema,
                                          int up_to_slot = 0) {
  std::vector<const TableDef*> out;
  for (const auto& slot : s.slots) {
    if (slot.scope != scope) continue;
    if (slot.role != SlotRole::FromTable && slot.role != SlotRole::JoinTable) continue;
    if (up_to_slot && slot.id >= up_to_slot) continue;
    auto it = s.assignment.find(slot.id);
    if (it == s.assignment.end()) continue;
    if (const TableDef* t = schema.find(std::get<TableName>(it->second).name)) out.push_back(t);
  }
  return out;
}

std::optional<ColumnType> column_type(const ColumnRef& ref, const std::vector<const TableDef*>& tables) {
  std::optional<ColumnType> found;
  int hits = 0;
  for (const auto* t : tables) {
    if (!ref.table.empty() && t->name != ref.table) continue;
    if (auto c = t->column_index(ref.column)) {
      found = t->columns[*c].type;
      ++hits;
    }
  }
  if (hits != 1) return std::nullopt;
  return found;
}

std::optional<ColumnType> expr_type(const SelectExpr& e, const std::vector<const TableDef*>& tables) {
  if (e.column.is_star()) return e.agg == Aggregate::Count ? std::optional(ColumnType::Integer) : std::nullopt;
  auto t = column_type(e.column, tables);
  if (!t) return std::nullopt;
  switch (e.agg) {
    case Aggregate::Count: return ColumnType::Integer;
    case Aggregate::Avg: return *t == ColumnType::Text ? std::nullopt : std::optional(ColumnType::Real);
    case Aggregate::Sum: return *t == ColumnType::Text ? std::nullopt : t;
    default: return t;
  }
}

/// Table owning an (unqualified or qualified) reference, when unique.
const TableDef* owner(const ColumnRef& ref, const std::vector<const TableDef*>& tables) {
  const TableDef* found = nullptr;
  int hits = 0;
  for (const auto* t : tables) {
    if (!ref.table.empty() && t->name != ref.table) continue;
    if (t->column_index(ref.column)) {
      found = t;
      ++hits;
    }
  }
  return hits == 1 ? found : nullptr;
}

bool wants_qualified(const std::optional<Constant>& current, std::size_t table_count) {
  if (current) {
    if (auto c = std::get_if<ColumnRef>(&*current)) return !c->table.empty();
    if (auto e = std::get_if<SelectExpr>(&*current))
      return e->column.is_star() ? table_count > 1 : !e->column.table.empty();
  }
  return table_count > 1;
}

std::vector<ColumnRef> column_candidates(const std::vector<const TableDef*>& tables, bool qualified) {
  std::vector<ColumnRef> out;
  std::set<std::string> seen;
  for (const auto* t : tables) {
    for (const auto& c : t->columns) {
      if (qualified) {
        out.push_back({t->name, c.name});
      } else if (seen.insert(c.name).second) {
        out.push_back({"", c.name});
      }
    }
  }
  return out;
}

std::vector<SelectExpr> expression_candidates(const std::vector<const TableDef*>& tables, bool qualified) {
  std::vector<SelectExpr> out;
  for (const auto& ref : column_candidates(tables, qualified)) {
    auto type = column_type(ref, tables);
    if (!type) continue;  // ambiguous unqualified name
    out.push_back({Aggregate::None, false, ref});
    out.push_back({Aggregate::Count, false, ref});
    out.push_back({Aggregate::Count, true, ref});
    if (*type != ColumnType::Text) {
      out.push_back({Aggregate::Sum, false, ref});
      out.push_back({Aggregate::Avg, false, ref});
    }
    out.push_back({Aggregate::Min, false, ref});
    out.push_back({Aggregate::Max, false, ref});
  }
  out.push_back({Aggregate::Count, false, {"", "*"}});
  return out;
}

bool literal_fits(ColumnType t, const Value& v) {
  if (t == ColumnType::Text) return is_text(v);
  if (t == ColumnType::Integer) return std::holds_alternative<std::int64_t>(v);
  return is_numeric(v);
}

std::optional<Constant> current_value(const QueryStructure& s, int id) {
  auto it = s.assignment.find(id);
  if (it == s.assignment.end()) return std::nullopt;
  return it->second;
}

/// Result type of a comparison's left-hand side.
std::optional<ColumnType> lhs_type(const PlaceholderSlot& slot, const QueryStructure& s,
                                   const std::vector<const TableDef*>& tables) {
  auto lhs = current_value(s, slot.role == SlotRole::PredicateLhs ? slot.id : slot.lhs_slot);
  if (!lhs) return std::nullopt;
  if (auto c = std::get_if<ColumnRef>(&*lhs)) return column_type(*c, tables);
  if (auto e = std::get_if<SelectExpr>(&*lhs)) return expr_type(*e, tables);
  return std::nullopt;
}

std::string wrap_like(const std::string& s) {
  if (s.find('%') != std::string::npos || s.find('_') != std::string::npos) return s;
  return "%" + s + "%";
}

/// Literal pool for a comparison's right-hand side.
std::vector<Constant> literal_pool(const PlaceholderSlot& slot, const QueryStructure& s, const MutationContext& ctx,
                                   const std::vector<const TableDef*>& tables) {
  std::vector<Constant> out;
  auto type = lhs_type(slot, s, tables);
  if (!type) return out;
  auto op_value = current_value(s, slot.op_slot);
  CompareOp op = op_value ? std::get<CompareOp>(*op_value) : CompareOp::Eq;

  // DB values of the column the comparison targets (none for COUNT).
  std::vector<Value> db_values;
  auto lhs = current_value(s, slot.lhs_slot);
  const ColumnRef* target = nullptr;
  bool count_like = false;
  if (lhs) {
    if (auto c = std::get_if<ColumnRef>(&*lhs)) target = c;
    if (auto e = std::get_if<SelectExpr>(&*lhs)) {
      if (e->agg == Aggregate::Count) count_like = true;
      else if (!e->column.is_star()) target = &e->column;
    }
  }
  if (target) {
    if (const TableDef* t = owner(*target, tables)) db_values = ctx.column_values(t->name, target->column);
  }
  if (count_like) {
    for (std::int64_t i = 0; i <= ctx.max_limit(); ++i) db_values.push_back(Value{i});
  }

  if (op == CompareOp::Like) {
    for (const auto& q : ctx.question_literals())
      if (is_text(q)) push_unique(out, Value{wrap_like(std::get<std::string>(q))});
    for (const auto& v : db_values)
      if (is_text(v)) push_unique(out, Value{wrap_like(std::get<std::string>(v))});
    return out;
  }
  if (*type == ColumnType::Text) {
    for (const auto& q : ctx.question_literals())
      if (is_text(q)) push_unique(out, q);
    for (const auto& v : db_values)
      if (is_text(v)) push_unique(out, v);
    return out;
  }
  // Numeric pools are ascending.
  std::vector<Value> nums;
  for (const auto& q : ctx.question_literals())
    if (literal_fits(*type, q)) nums.push_back(q);
  for (const auto& v : db_values)
    if (literal_fits(*type, v)) nums.push_back(v);
  std::stable_sort(nums.begin(), nums.end(), [](const Value& a, const Value& b) {
    int c = compare_values(a, b);
    if (c != 0) return c < 0;
    return a.index() < b.index();
  });
  for (auto& v : nums) push_unique(out, v);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- context

MutationContext::MutationContext(const Database& db, std::vector<Value> question_literals)
    : db_(&db), question_literals_(std::move(question_literals)) {
  for (const auto& v : question_literals_)
    if (auto i = std::get_if<std::int64_t>(&v)) max_limit_ = std::max(max_limit_, *i);
  for (const auto& t : db.schema.tables) {
    const Relation& rel = db.table(t.name);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      std::set<Value, ValueLess> uniq;
      for (const auto& row : rel.rows)
        if (!is_null(row[c])) uniq.insert(row[c]);
      pools_[{t.name, t.columns[c].name}] = std::vector<Value>(uniq.begin(), uniq.end());
    }
  }
}

const std::vector<Value>& MutationContext::column_values(const std::string& table, const std::string& column) const {
  auto it = pools_.find({table, column});
  return it == pools_.end() ? empty_ : it->second;
}

std::vector<Value> question_literals(const std::string& question) {
  std::vector<Value> out;
  auto add = [&](Value v) {
    for (const auto& e : out)
      if (e.index() == v.index() && e == v) return;
    out.push_back(std::move(v));
  };
  static const std::regex token(R"re('([^']*)'|"([^"]*)"|(-?\b\d+(?:\.\d+)?\b))re");
  for (auto it = std::sregex_iterator(question.begin(), question.end(), token); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[1].matched) add(Value{m[1].str()});
    else if (m[2].matched) add(Value{m[2].str()});
    else {
      std::string num = m[3].str();
      if (num.find('.') != std::string::npos) add(Value{std::stod(num)});
      else {
        try {
          add(Value{static_cast<std::int64_t>(std::stoll(num))});
        } catch (const std::out_of_range&) {
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- history

bool WhereBounds::admits(std::int64_t v) const {
  if (lower && v <= *lower) return false;
  if (upper && v >= *upper) return false;
  return true;
}

bool WhereBounds::empty() const { return lower && upper && *upper - *lower <= 1; }

bool WhereHistory::admits(int slot_id, const Constant& c) const {
  auto it = bounds.find(slot_id);
  if (it == bounds.end()) return true;
  auto v = std::get_if<Value>(&c);
  if (!v) return true;
  auto i = std::get_if<std::int64_t>(v);
  return !i || it->second.admits(*i);
}

bool history_applies(const QueryStructure& s, int slot_id) {
  if (slot_id < 1 || static_cast<std::size_t>(slot_id) > s.slots.size()) return false;
  const auto& slot = s.slot(slot_id);
  if (slot.role != SlotRole::PredicateRhsLiteral || slot.in_having || slot.scope != 0 || slot.negated) return false;
  if (s.skeleton.having) return false;
  auto op = current_value(s, slot.op_slot);
  if (!op) return false;
  CompareOp o = std::get<CompareOp>(*op);
  return o == CompareOp::Lt || o == CompareOp::Le || o == CompareOp::Gt || o == CompareOp::Ge;
}

WhereHistory update_history(const WhereHistory& history, const QueryStructure& s, int slot_id, const Constant& tried,
                            std::size_t observed, std::size_t expected) {
  WhereHistory out = history;
  if (observed == expected || !history_applies(s, slot_id)) return out;
  auto v = std::get_if<Value>(&tried);
  if (!v) return out;
  auto t = std::get_if<std::int64_t>(v);
  if (!t) return out;
  CompareOp op = std::get<CompareOp>(*current_value(s, s.slot(slot_id).op_slot));
  bool increasing = op == CompareOp::Lt || op == CompareOp::Le;  // rows grow with the threshold
  bool raise_lower = (observed < expected) == increasing;
  WhereBounds& b = out.bounds[slot_id];
  if (raise_lower)
    b.lower = b.lower ? std::max(*b.lower, *t) : *t;
  else
    b.upper = b.upper ? std::min(*b.upper, *t) : *t;
  return out;
}

// ---------------------------------------------------------------- domains

std::vector<Constant> candidate_domain(const PlaceholderSlot& slot, const QueryStructure& s,
                                       const MutationContext& ctx, const WhereHistory& history) {
  const Schema& schema = ctx.db().schema;
  std::vector<Constant> out;
  const auto current = current_value(s, slot.id);
  auto tables = scope_tables(s, slot.scope, schema);
  const bool qualified = wants_qualified(current, tables.size());

  switch (slot.role) {
    case SlotRole::SelectItem:
    case SlotRole::OrderExpr:
      for (auto& e : expression_candidates(tables, qualified)) out.emplace_back(e);
      break;
    case SlotRole::PredicateLhs:
      if (slot.kind == ValueKind::Aggregate) {
        for (auto& e : expression_candidates(tables, qualified)) out.emplace_back(e);
      } else {
        // Keep the comparison well-typed against its current right-hand side.
        std::optional<ColumnType> want;
        bool like = false;
        for (const auto& other : s.slots) {
          if (other.lhs_slot != slot.id) continue;
          auto v = current_value(s, other.id);
          if (!v) continue;
          if (other.role == SlotRole::PredicateOp) like = std::get<CompareOp>(*v) == CompareOp::Like;
          if (other.role == SlotRole::PredicateRhsLiteral) {
            const Value& lit = std::get<Value>(*v);
            if (!is_null(lit)) want = is_text(lit) ? ColumnType::Text : ColumnType::Real;
          }
          if (other.role == SlotRole::PredicateRhsColumn) {
            auto t = column_type(std::get<ColumnRef>(*v), tables);
            if (t) want = *t == ColumnType::Text ? ColumnType::Text : ColumnType::Real;
          }
        }
        for (auto& c : column_candidates(tables, qualified)) {
          auto t = column_type(c, tables);
          if (!t) continue;
          bool text = *t == ColumnType::Text;
          if (want && text != (*want == ColumnType::Text)) continue;
          if (like && !text) continue;
          out.emplace_back(c);
        }
      }
      break;
    case SlotRole::GroupBy:
    case SlotRole::JoinColumn:
      for (auto& c : column_candidates(tables, qualified)) out.emplace_back(c);
      break;
    case SlotRole::PredicateRhsColumn: {
      auto lt = lhs_type(slot, s, tables);
      for (auto& c : column_candidates(tables, qualified)) {
        auto t = column_type(c, tables);
        if (!t) continue;
        if (lt && ((*t == ColumnType::Text) != (*lt == ColumnType::Text))) continue;
        out.emplace_back(c);
      }
      break;
    }
    case SlotRole::FromTable:
    case SlotRole::JoinTable: {
      std::set<std::string> in_scope;
      for (const auto* t : tables) in_scope.insert(t->name);
      std::vector<const TableDef*> preceding;
      if (slot.role == SlotRole::JoinTable) preceding = scope_tables(s, slot.scope, schema, slot.id);
      for (const auto& t : schema.tables) {
        if (in_scope.count(t.name)) continue;  // current value or a duplicate
        if (slot.role == SlotRole::JoinTable) {
          // Inner joins over tables with no shared column name produce nothing.
          bool shares = false;
          for (const auto* p : preceding)
            for (const auto& c : t.columns)
              if (p->column_index(c.name)) shares = true;
          if (!shares) continue;
        }
        out.emplace_back(TableName{t.name});
      }
      break;
    }
    case SlotRole::PredicateOp: {
      if (current && std::get<CompareOp>(*current) == CompareOp::In) break;
      auto t = lhs_type(slot, s, tables);
      if (!t) break;
      // The operator set must fit the current right-hand side.
      bool rhs_column = false;
      for (const auto& other : s.slots)
        if (other.op_slot == slot.id && other.role == SlotRole::PredicateRhsColumn) rhs_column = true;
      if (*t == ColumnType::Text) {
        for (auto op : {CompareOp::Eq, CompareOp::Ne, CompareOp::Like}) out.emplace_back(op);
      } else {
        for (auto op : {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le, CompareOp::Gt, CompareOp::Ge})
          out.emplace_back(op);
      }
      (void)rhs_column;
      break;
    }
    case SlotRole::PredicateRhsLiteral:
      out = literal_pool(slot, s, ctx, tables);
      break;
    case SlotRole::Limit:
      for (std::int64_t i = 1; i <= ctx.max_limit(); ++i) out.emplace_back(Value{i});
      break;
    case SlotRole::OrderDir:
      out.emplace_back(SortDir::Asc);
      out.emplace_back(SortDir::Desc);
      break;
  }

  std::vector<Constant> filtered;
  const bool use_history = history_applies(s, slot.id);
  for (auto& c : out) {
    if (current && same_constant(c, *current)) continue;
    if (!constant_fits(slot, c)) continue;
    if (use_history && !history.admits(slot.id, c)) continue;
    filtered.push_back(std::move(c));
  }
  return filtered;
}

// ---------------------------------------------------------------- structural edits

std::string to_string(StructuralVariant v) {
  switch (v) {
    case StructuralVariant::AddExcept: return "add-except";
    case StructuralVariant::AddWhereClause: return "add-where-clause";
    case StructuralVariant::ExtendWhereConjunct: return "extend-where-conjunct";
    case StructuralVariant::ExtendWhereDisjunct: return "extend-where-disjunct";
    case StructuralVariant::AddSelectColumn: return "add-select-column";
    case StructuralVariant::RemoveSelectColumn: return "remove-select-column";
  }
  return "unknown";
}

namespace {

Predicate fresh_comparison() {
  Comparison c;
  c.rhs_kind = Comparison::RhsKind::Literal;
  return Predicate::compare(std::move(c));
}

Query prefix_through_joins(Query q) {
  q.where.reset();
  q.group_by.clear();
  q.having.reset();
  q.order_by.clear();
  q.limit.reset();
  q.set_op.reset();
  return q;
}

Query prefix_through_where(Query q) {
  q.group_by.clear();
  q.having.reset();
  q.order_by.clear();
  q.limit.reset();
  q.set_op.reset();
  return q;
}

StructuralEdit make_edit(StructuralVariant variant, const Query& edited, std::vector<int> fresh) {
  StructuralEdit e;
  e.variant = variant;
  e.structure = extract_structure(edited);
  for (int id : fresh) e.structure.assignment.erase(id);
  e.fresh = std::move(fresh);
  return e;
}

void combinations(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<StructuralEdit> structural_variants(const QueryStructure& structure, const Relation& actual,
                                                const Relation& expected) {
  std::vector<StructuralEdit> out;
  const Query q = instantiate(structure);
  const auto acols = static_cast<int>(actual.column_count());
  const auto ecols = static_cast<int>(expected.column_count());

  if (acols != ecols) {
    for (const auto& s : q.select)
      if (s.column.is_star() && s.agg == Aggregate::None) return out;  // `*` arity is schema-dependent
    if (acols != static_cast<int>(q.select.size())) return out;
    if (ecols > acols) {
      const int add = ecols - acols;
      Query edited = q;
      std::vector<int> fresh;
      const int n_outer = static_cast<int>(q.select.size());
      for (int i = 0; i < add; ++i) {
        edited.select.push_back(SelectExpr{});
        fresh.push_back(n_outer + i + 1);
      }
      if (edited.set_op) {
        Query& arm = *edited.set_op->arm;
        const int arm_base = count_slots(prefix_through_joins(edited)) == 0 ? 0 : 0;
        (void)arm_base;
        Query outer_only = edited;
        outer_only.set_op.reset();
        const int offset = count_slots(outer_only);
        const int n_arm = static_cast<int>(arm.select.size());
        for (int i = 0; i < add; ++i) {
          arm.select.push_back(SelectExpr{});
          fresh.push_back(offset + n_arm + i + 1);
        }
      }
      out.push_back(make_edit(StructuralVariant::AddSelectColumn, edited, std::move(fresh)));
    } else {
      const int remove = acols - ecols;
      if (ecols < 1) return out;
      std::vector<std::vector<int>> combos;
      std::vector<int> cur;
      combinations(acols, remove, 0, cur, combos);
      for (const auto& drop : combos) {
        Query edited = q;
        auto erase = [&](std::vector<SelectExpr>& items) {
          for (auto it = drop.rbegin(); it != drop.rend(); ++it) items.erase(items.begin() + *it);
        };
        erase(edited.select);
        if (edited.set_op) {
          if (static_cast<int>(edited.set_op->arm->select.size()) != acols) continue;
          erase(edited.set_op->arm->select);
        }
        out.push_back(make_edit(StructuralVariant::RemoveSelectColumn, edited, {}));
      }
    }
    return out;
  }

  const auto arows = actual.row_count(), erows = expected.row_count();
  if (arows == erows) return out;

  if (arows > erows && !q.set_op) {
    Query edited = q;
    Query arm = prefix_through_joins(q);
    arm.distinct = q.distinct;
    arm.where = fresh_comparison();
    // Aggregating queries need the grouping in the arm too for rows to line up.
    arm.group_by = q.group_by;
    edited.set_op = SetOperation{SetOpKind::Except, Box<Query>(std::move(arm))};
    const int total = count_slots(edited);
    const int group_slots = static_cast<int>(q.group_by.size());
    std::vector<int> fresh = {total - group_slots - 2, total - group_slots - 1, total - group_slots};
    out.push_back(make_edit(StructuralVariant::AddExcept, edited, std::move(fresh)));
  }

  if (!q.where) {
    Query edited = q;
    edited.where = fresh_comparison();
    const int base = count_slots(prefix_through_joins(q));
    out.push_back(make_edit(StructuralVariant::AddWhereClause, edited, {base + 1, base + 2, base + 3}));
  } else {
    const int base = count_slots(prefix_through_where(q));
    for (auto variant : {StructuralVariant::ExtendWhereConjunct, StructuralVariant::ExtendWhereDisjunct}) {
      Query edited = q;
      edited.where = variant == StructuralVariant::ExtendWhereConjunct
                         ? Predicate::both(*q.where, fresh_comparison())
                         : Predicate::either(*q.where, fresh_comparison());
      out.push_back(make_edit(variant, edited, {base + 1, base + 2, base + 3}));
    }
  }
  return out;
}

void enumerate_fills(const StructuralEdit& edit, const MutationContext& ctx,
                     const std::function<bool(const std::map<int, Constant>&)>& visit) {
  QueryStructure work = edit.structure;
  std::map<int, Constant> fills;
  const WhereHistory none;
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == edit.fresh.size()) return visit(fills);
    const int id = edit.fresh[k];
    for (auto& c : candidate_domain(work.slot(id), work, ctx, none)) {
      work.assignment[id] = c;
      fills[id] = c;
      if (!rec(k + 1)) return false;
    }
    work.assignment.erase(id);
    fills.erase(id);
    return true;
  };
  rec(0);
}

// ---------------------------------------------------------------- mutations

Mutation Mutation::constant(int slot_id, Constant old_value, Constant new_value) {
  Mutation m;
  m.kind = MutationKind::Constant;
  m.slot_id = slot_id;
  m.old_value = std::move(old_value);
  m.new_value = std::move(new_value);
  return m;
}

Mutation Mutation::structural(std::shared_ptr<const StructuralEdit> edit, std::map<int, Constant> fills) {
  Mutation m;
  m.kind = MutationKind::Structural;
  m.edit = std::move(edit);
  m.fills = std::move(fills);
  return m;
}

Query apply_mutation(const QueryStructure& structure, const Mutation& m) {
  if (m.kind == MutationKind::Constant) {
    if (m.slot_id < 1 || static_cast<std::size_t>(m.slot_id) > structure.slots.size())
      throw StructureError(StructureError::Kind::UnknownSlot, "no slot #" + std::to_string(m.slot_id));
    if (!constant_fits(structure.slot(m.slot_id), m.new_value))
      throw StructureError(StructureError::Kind::KindMismatch,
                           "slot #" + std::to_string(m.slot_id) + " expects " +
                               to_string(structure.slot(m.slot_id).kind) + ", got " + to_string(m.new_value));
    auto assignment = structure.assignment;
    assignment[m.slot_id] = m.new_value;
    return instantiate(structure, assignment);
  }
  if (!m.edit) throw StructureError(StructureError::Kind::MissingSlot, "structural mutation without an edit");
  auto assignment = m.edit->structure.assignment;
  for (int id : m.edit->fresh) {
    auto it = m.fills.find(id);
    if (it == m.fills.end())
      throw StructureError(StructureError::Kind::MissingSlot, "fresh slot #" + std::to_string(id) + " is unfilled");
    assignment[id] = it->second;
  }
  return instantiate(m.edit->structure, assignment);
}

std::string describe(const Mutation& m) {
  if (m.kind == MutationKind::Constant)
    return "#" + std::to_string(m.slot_id) + ": " + to_string(m.old_value) + " -> " + to_string(m.new_value);
  std::string out = m.edit ? to_string(m.edit->variant) : "structural";
  if (!m.fills.empty()) {
    out += " {";
    bool first = true;
    for (const auto& [id, c] : m.fills) {
      if (!first) out += ", ";
      first = false;
      out += "#" + std::to_string(id) + "=" + to_string(c);
    }
    out += "}";
  }
  return out;
}

}  // namespace sqlmend
