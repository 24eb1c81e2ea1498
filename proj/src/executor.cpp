#include "sqlmend/executor.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "sqlmend/errors.hpp"
#include "sqlmend/parser.hpp"

namespace sqlmend {

namespace {

using Err = ExecutionError::Kind;

struct BoundColumn {
  int table = -1;
  int col = -1;
  ColumnType type = ColumnType::Text;
};

struct BoundExpr {
  Aggregate agg = Aggregate::None;
  bool distinct = false;
  bool star = false;  // COUNT(*)
  BoundColumn col;
  ColumnType type = ColumnType::Integer;
};

struct BoundComparison {
  BoundExpr lhs;
  CompareOp op = CompareOp::Eq;
  Comparison::RhsKind rhs_kind = Comparison::RhsKind::Literal;
  Value literal;
  BoundColumn rhs_col;
  std::vector<Value> list;
};

struct BoundPredicate {
  Predicate::Kind kind = Predicate::Kind::Compare;
  BoundComparison cmp;
  std::vector<BoundPredicate> children;
};

enum class Tri { False, True, Unknown };

bool compatible(ColumnType a, ColumnType b) {
  bool na = a != ColumnType::Text, nb = b != ColumnType::Text;
  return na == nb;
}

bool literal_compatible(ColumnType t, const Value& v) {
  if (is_null(v)) return true;
  return t == ColumnType::Text ? is_text(v) : is_numeric(v);
}

// Tables visible to one SELECT block plus column resolution against them.
class Scope {
 public:
  Scope(const Query& q, const Database& db) : db_(db) {
    for (const auto& name : q.scope_tables()) {
      const TableDef* def = db.schema.find(name);
      if (!def) throw ExecutionError(Err::UnknownTable, "unknown table " + name);
      for (const auto* t : defs_)
        if (t->name == name) throw ExecutionError(Err::Unsupported, "table " + name + " appears twice (self-join needs an alias)");
      defs_.push_back(def);
      rels_.push_back(&db.table(name));
    }
  }

  BoundColumn resolve(const ColumnRef& ref) const {
    if (ref.is_star()) throw ExecutionError(Err::UnknownColumn, "'*' is not a column here");
    if (!ref.table.empty()) {
      for (std::size_t t = 0; t < defs_.size(); ++t) {
        if (defs_[t]->name != ref.table) continue;
        auto c = defs_[t]->column_index(ref.column);
        if (!c) throw ExecutionError(Err::UnknownColumn, "unknown column " + print(ref));
        return {static_cast<int>(t), static_cast<int>(*c), defs_[t]->columns[*c].type};
      }
      if (db_.schema.find(ref.table))
        throw ExecutionError(Err::UnknownColumn, "table " + ref.table + " is not in scope for " + print(ref));
      throw ExecutionError(Err::UnknownTable, "unknown table " + ref.table + " in " + print(ref));
    }
    BoundColumn found;
    int hits = 0;
    for (std::size_t t = 0; t < defs_.size(); ++t) {
      if (auto c = defs_[t]->column_index(ref.column)) {
        found = {static_cast<int>(t), static_cast<int>(*c), defs_[t]->columns[*c].type};
        ++hits;
      }
    }
    if (hits == 0) throw ExecutionError(Err::UnknownColumn, "unknown column " + ref.column);
    if (hits > 1) throw ExecutionError(Err::AmbiguousColumn, "ambiguous column " + ref.column);
    return found;
  }

  BoundExpr bind(const SelectExpr& e) const {
    BoundExpr b;
    b.agg = e.agg;
    b.distinct = e.distinct;
    if (e.column.is_star()) {
      if (e.agg != Aggregate::Count) throw ExecutionError(Err::Unsupported, "'*' outside COUNT(*)");
      b.star = true;
      b.type = ColumnType::Integer;
      return b;
    }
    b.col = resolve(e.column);
    switch (e.agg) {
      case Aggregate::None:
      case Aggregate::Min:
      case Aggregate::Max:
        b.type = b.col.type;
        break;
      case Aggregate::Count:
        b.type = ColumnType::Integer;
        break;
      case Aggregate::Sum:
      case Aggregate::Avg:
        if (b.col.type == ColumnType::Text)
          throw ExecutionError(Err::TypeError, std::string(to_string(e.agg)) + " over text column " + print(e.column));
        b.type = e.agg == Aggregate::Avg ? ColumnType::Real : b.col.type;
        break;
    }
    return b;
  }

  BoundPredicate bind(const Predicate& p) const {
    BoundPredicate b;
    b.kind = p.kind;
    if (p.kind != Predicate::Kind::Compare) {
      for (const auto& c : p.children) b.children.push_back(bind(c));
      return b;
    }
    const Comparison& c = p.cmp;
    BoundComparison& bc = b.cmp;
    bc.lhs = bind(c.lhs);
    bc.op = c.op;
    bc.rhs_kind = c.rhs_kind;
    const ColumnType lt = bc.lhs.type;
    auto type_error = [&](const std::string& what) {
      throw ExecutionError(Err::TypeError, "type error: " + print(c.lhs) + " " + to_string(c.op) + " " + what);
    };
    switch (c.rhs_kind) {
      case Comparison::RhsKind::Literal:
        bc.literal = c.literal;
        if (!literal_compatible(lt, c.literal)) type_error(to_sql_literal(c.literal));
        if (c.op == CompareOp::Like && (lt != ColumnType::Text || !(is_text(c.literal) || is_null(c.literal))))
          type_error(to_sql_literal(c.literal));
        break;
      case Comparison::RhsKind::Column:
        bc.rhs_col = resolve(c.column);
        if (!compatible(lt, bc.rhs_col.type)) type_error(print(c.column));
        if (c.op == CompareOp::Like && (lt != ColumnType::Text)) type_error(print(c.column));
        break;
      case Comparison::RhsKind::List:
        bc.list = c.list;
        for (const auto& v : c.list)
          if (!literal_compatible(lt, v)) type_error(to_sql_literal(v));
        break;
    }
    return b;
  }

  std::size_t size() const { return defs_.size(); }
  const TableDef& def(std::size_t t) const { return *defs_[t]; }
  const Relation& rel(std::size_t t) const { return *rels_[t]; }

 private:
  const Database& db_;
  std::vector<const TableDef*> defs_;
  std::vector<const Relation*> rels_;
};

// Row combinations: one row index per scope table, stored with a fixed stride.
struct Combos {
  std::size_t stride = 0;
  std::vector<std::uint32_t> idx;
  std::size_t size() const { return stride ? idx.size() / stride : 0; }
  const std::uint32_t* at(std::size_t i) const { return idx.data() + i * stride; }
};

class BlockEvaluator {
 public:
  BlockEvaluator(const Query& q, const Database& db) : q_(q), scope_(q, db) {}

  Relation run() {
    bind_all();
    Combos combos = enumerate_rows();
    std::vector<std::uint32_t> kept;
    kept.reserve(combos.size());
    for (std::size_t i = 0; i < combos.size(); ++i) {
      if (!where_ || eval(*where_, combos.at(i)) == Tri::True) kept.push_back(static_cast<std::uint32_t>(i));
    }
    auto groups = make_groups(combos, kept);

    // HAVING
    if (having_) {
      std::vector<std::vector<std::uint32_t>> filtered;
      for (auto& g : groups)
        if (eval_group(*having_, combos, g) == Tri::True) filtered.push_back(std::move(g));
      groups = std::move(filtered);
    }

    Relation out;
    out.columns = column_names();
    out.ordered = !q_.order_by.empty();
    std::vector<Row> rows;
    std::vector<Row> keys;
    rows.reserve(groups.size());
    for (const auto& g : groups) {
      rows.push_back(project(combos, g));
      if (!order_.empty()) {
        Row key;
        for (const auto& o : order_) key.push_back(eval_expr(o, combos, g));
        keys.push_back(std::move(key));
      }
    }
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!order_.empty()) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        for (std::size_t k = 0; k < order_.size(); ++k) {
          int c = compare_values(keys[a][k], keys[b][k]);
          if (c != 0) return q_.order_by[k].dir == SortDir::Asc ? c < 0 : c > 0;
        }
        return false;
      });
    }
    std::set<Row, RowLess> seen;
    for (std::size_t i : order) {
      if (q_.limit && out.rows.size() >= static_cast<std::size_t>(*q_.limit)) break;
      if (q_.distinct && !seen.insert(rows[i]).second) continue;
      out.rows.push_back(std::move(rows[i]));
    }
    return out;
  }

 private:
  const Query& q_;
  Scope scope_;
  // Projection: either a bound expression or, for `*`, a (table, column) pair.
  struct OutputColumn {
    BoundExpr expr;
  };
  std::vector<OutputColumn> outputs_;
  std::vector<std::string> output_names_;
  std::optional<BoundPredicate> where_, having_;
  std::vector<BoundColumn> group_by_;
  std::vector<BoundExpr> order_;
  std::vector<std::pair<BoundColumn, BoundColumn>> joins_;
  bool grouped_ = false;

  void bind_all() {
    for (const auto& s : q_.select) {
      if (s.column.is_star() && s.agg == Aggregate::None) {
        for (std::size_t t = 0; t < scope_.size(); ++t) {
          const auto& def = scope_.def(t);
          for (std::size_t c = 0; c < def.columns.size(); ++c) {
            BoundExpr b;
            b.col = {static_cast<int>(t), static_cast<int>(c), def.columns[c].type};
            b.type = def.columns[c].type;
            outputs_.push_back({b});
            output_names_.push_back(def.columns[c].name);
          }
        }
        continue;
      }
      outputs_.push_back({scope_.bind(s)});
      output_names_.push_back(print(s));
    }
    for (std::size_t j = 0; j < q_.joins.size(); ++j) {
      const auto& join = q_.joins[j];
      BoundColumn l = scope_.resolve(join.left), r = scope_.resolve(join.right);
      const int limit = static_cast<int>(q_.from.size() + j);
      if (l.table > limit || r.table > limit)
        throw ExecutionError(Err::UnknownColumn, "join condition " + print(join.left) + " = " + print(join.right) +
                                                     " names a table joined later");
      if (!compatible(l.type, r.type))
        throw ExecutionError(Err::TypeError, "type error in join " + print(join.left) + " = " + print(join.right));
      joins_.emplace_back(l, r);
    }
    if (q_.where) where_ = scope_.bind(*q_.where);
    for (const auto& g : q_.group_by) group_by_.push_back(scope_.resolve(g));
    if (q_.having) having_ = scope_.bind(*q_.having);
    for (const auto& o : q_.order_by) order_.push_back(scope_.bind(o.expr));
    grouped_ = !q_.group_by.empty() || has_aggregate(q_);
  }

  const Value& cell(const std::uint32_t* combo, const BoundColumn& c) const {
    return scope_.rel(static_cast<std::size_t>(c.table)).rows[combo[c.table]][static_cast<std::size_t>(c.col)];
  }

  Combos enumerate_rows() const {
    Combos out;
    out.stride = scope_.size();
    const std::size_t nfrom = q_.from.size();
    // Cross product of FROM tables, leftmost outermost.
    std::vector<std::uint32_t> cur(out.stride, 0);
    std::vector<std::uint32_t> acc;
    std::function<void(std::size_t)> cross = [&](std::size_t t) {
      if (t == nfrom) {
        acc.insert(acc.end(), cur.begin(), cur.end());
        return;
      }
      const auto n = scope_.rel(t).rows.size();
      for (std::uint32_t r = 0; r < n; ++r) {
        cur[t] = r;
        cross(t + 1);
      }
    };
    cross(0);
    // Each JOIN extends every combination with the matching rows of its table.
    for (std::size_t j = 0; j < joins_.size(); ++j) {
      const std::size_t t = nfrom + j;
      const auto& [l, r] = joins_[j];
      const auto n = scope_.rel(t).rows.size();
      std::vector<std::uint32_t> next;
      for (std::size_t i = 0; i + out.stride <= acc.size(); i += out.stride) {
        std::copy(acc.begin() + static_cast<std::ptrdiff_t>(i),
                  acc.begin() + static_cast<std::ptrdiff_t>(i + out.stride), cur.begin());
        for (std::uint32_t row = 0; row < n; ++row) {
          cur[t] = row;
          const Value& a = cell(cur.data(), l);
          const Value& b = cell(cur.data(), r);
          if (is_null(a) || is_null(b) || !values_equal(a, b)) continue;
          next.insert(next.end(), cur.begin(), cur.end());
        }
      }
      acc = std::move(next);
    }
    out.idx = std::move(acc);
    return out;
  }

  std::vector<std::vector<std::uint32_t>> make_groups(const Combos& combos, const std::vector<std::uint32_t>& kept) const {
    std::vector<std::vector<std::uint32_t>> groups;
    if (!grouped_) {
      groups.reserve(kept.size());
      for (auto i : kept) groups.push_back({i});
      return groups;
    }
    if (group_by_.empty()) {
      groups.push_back(kept);
      return groups;
    }
    std::map<Row, std::size_t, RowLess> index;
    for (auto i : kept) {
      Row key;
      for (const auto& g : group_by_) key.push_back(cell(combos.at(i), g));
      auto [it, inserted] = index.emplace(std::move(key), groups.size());
      if (inserted) groups.emplace_back();
      groups[it->second].push_back(i);
    }
    return groups;
  }

  Value eval_expr(const BoundExpr& e, const Combos& combos, const std::vector<std::uint32_t>& group) const {
    if (e.agg == Aggregate::None) {
      if (group.empty()) return Value{};
      return cell(combos.at(group.front()), e.col);
    }
    if (e.star) return Value{static_cast<std::int64_t>(group.size())};
    std::vector<Value> vals;
    vals.reserve(group.size());
    for (auto i : group) {
      const Value& v = cell(combos.at(i), e.col);
      if (!is_null(v)) vals.push_back(v);
    }
    if (e.distinct) {
      std::vector<Value> uniq;
      std::set<Value, ValueLess> seen;
      for (auto& v : vals)
        if (seen.insert(v).second) uniq.push_back(v);
      vals = std::move(uniq);
    }
    switch (e.agg) {
      case Aggregate::Count:
        return Value{static_cast<std::int64_t>(vals.size())};
      case Aggregate::Sum: {
        if (vals.empty()) return Value{};
        if (e.col.type == ColumnType::Integer) {
          std::int64_t s = 0;
          for (const auto& v : vals) s += std::get<std::int64_t>(v);
          return Value{s};
        }
        double s = 0;
        for (const auto& v : vals) s += as_double(v);
        return Value{s};
      }
      case Aggregate::Avg: {
        if (vals.empty()) return Value{};
        double s = 0;
        for (const auto& v : vals) s += as_double(v);
        return Value{s / static_cast<double>(vals.size())};
      }
      case Aggregate::Min:
      case Aggregate::Max: {
        if (vals.empty()) return Value{};
        const Value* best = &vals.front();
        for (const auto& v : vals) {
          int c = compare_values(v, *best);
          if (e.agg == Aggregate::Min ? c < 0 : c > 0) best = &v;
        }
        return *best;
      }
      case Aggregate::None:
        break;
    }
    return Value{};
  }

  static Tri compare(const Value& a, CompareOp op, const Value& b) {
    if (is_null(a) || is_null(b)) return Tri::Unknown;
    if (op == CompareOp::Like) return like_match(std::get<std::string>(a), std::get<std::string>(b)) ? Tri::True : Tri::False;
    int c = compare_values(a, b);
    bool r = false;
    switch (op) {
      case CompareOp::Eq: r = c == 0; break;
      case CompareOp::Ne: r = c != 0; break;
      case CompareOp::Lt: r = c < 0; break;
      case CompareOp::Le: r = c <= 0; break;
      case CompareOp::Gt: r = c > 0; break;
      case CompareOp::Ge: r = c >= 0; break;
      default: break;
    }
    return r ? Tri::True : Tri::False;
  }

  static Tri in_list(const Value& a, const std::vector<Value>& list) {
    if (is_null(a)) return Tri::Unknown;
    bool unknown = false;
    for (const auto& v : list) {
      if (is_null(v)) {
        unknown = true;
        continue;
      }
      if (values_equal(a, v)) return Tri::True;
    }
    return unknown ? Tri::Unknown : Tri::False;
  }

  Tri combine(const BoundPredicate& p, Tri a, Tri b) const {
    if (p.kind == Predicate::Kind::And) {
      if (a == Tri::False || b == Tri::False) return Tri::False;
      if (a == Tri::True && b == Tri::True) return Tri::True;
      return Tri::Unknown;
    }
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::False && b == Tri::False) return Tri::False;
    return Tri::Unknown;
  }

  static Tri negate(Tri t) { return t == Tri::True ? Tri::False : t == Tri::False ? Tri::True : Tri::Unknown; }

  Tri eval(const BoundPredicate& p, const std::uint32_t* combo) const {
    switch (p.kind) {
      case Predicate::Kind::Not:
        return negate(eval(p.children[0], combo));
      case Predicate::Kind::And:
      case Predicate::Kind::Or:
        return combine(p, eval(p.children[0], combo), eval(p.children[1], combo));
      case Predicate::Kind::Compare:
        break;
    }
    const auto& c = p.cmp;
    const Value& lhs = cell(combo, c.lhs.col);
    switch (c.rhs_kind) {
      case Comparison::RhsKind::Literal: return compare(lhs, c.op, c.literal);
      case Comparison::RhsKind::Column: return compare(lhs, c.op, cell(combo, c.rhs_col));
      case Comparison::RhsKind::List: return in_list(lhs, c.list);
    }
    return Tri::Unknown;
  }

  Tri eval_group(const BoundPredicate& p, const Combos& combos, const std::vector<std::uint32_t>& g) const {
    switch (p.kind) {
      case Predicate::Kind::Not:
        return negate(eval_group(p.children[0], combos, g));
      case Predicate::Kind::And:
      case Predicate::Kind::Or:
        return combine(p, eval_group(p.children[0], combos, g), eval_group(p.children[1], combos, g));
      case Predicate::Kind::Compare:
        break;
    }
    const auto& c = p.cmp;
    Value lhs = eval_expr(c.lhs, combos, g);
    switch (c.rhs_kind) {
      case Comparison::RhsKind::Literal: return compare(lhs, c.op, c.literal);
      case Comparison::RhsKind::Column: {
        Value rhs = g.empty() ? Value{} : cell(combos.at(g.front()), c.rhs_col);
        return compare(lhs, c.op, rhs);
      }
      case Comparison::RhsKind::List: return in_list(lhs, c.list);
    }
    return Tri::Unknown;
  }

  Row project(const Combos& combos, const std::vector<std::uint32_t>& g) const {
    Row row;
    row.reserve(outputs_.size());
    for (const auto& o : outputs_) row.push_back(eval_expr(o.expr, combos, g));
    return row;
  }

  std::vector<std::string> column_names() const { return output_names_; }
};

Relation combine_set(SetOpKind kind, Relation left, const Relation& right) {
  if (left.column_count() != right.column_count())
    throw ExecutionError(Err::ArityMismatch, std::string(to_string(kind)) + " operands have different column counts");
  std::set<Row, RowLess> rhs(right.rows.begin(), right.rows.end());
  std::set<Row, RowLess> seen;
  Relation out;
  out.columns = left.columns;
  out.ordered = left.ordered;
  for (auto& row : left.rows) {
    bool in_right = rhs.count(row) > 0;
    bool keep = kind == SetOpKind::Union || (kind == SetOpKind::Except ? !in_right : in_right);
    if (keep && seen.insert(row).second) out.rows.push_back(std::move(row));
  }
  if (kind == SetOpKind::Union) {
    for (const auto& row : right.rows)
      if (seen.insert(row).second) out.rows.push_back(row);
  }
  return out;
}

}  // namespace

bool like_match(std::string_view text, std::string_view pattern) {
  // Iterative wildcard match with backtracking to the last '%'.
  auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
  std::size_t t = 0, p = 0, star_p = std::string_view::npos, star_t = 0;
  while (t < text.size()) {
    if (p < pattern.size() && pattern[p] == '%') {
      star_p = p++;
      star_t = t;
    } else if (p < pattern.size() && (pattern[p] == '_' || lower(pattern[p]) == lower(text[t]))) {
      ++p;
      ++t;
    } else if (star_p != std::string_view::npos) {
      p = star_p + 1;
      t = ++star_t;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '%') ++p;
  return p == pattern.size();
}

Relation execute(const Query& q, const Database& db) {
  Relation left = BlockEvaluator(q, db).run();
  if (!q.set_op) return left;
  Relation right = execute(*q.set_op->arm, db);
  return combine_set(q.set_op->kind, std::move(left), right);
}

ColumnType expression_type(const SelectExpr& e, const Query& q, const Schema& schema) {
  Database shell;
  shell.schema = schema;
  for (const auto& t : schema.tables) shell.contents.emplace(t.name, Relation{});
  Scope scope(q, shell);
  return scope.bind(e).type;
}

}  // namespace sqlmend
