#include "oracle.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>

namespace oracle {

using namespace sqlmend;

std::size_t edit_distance_dp(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
  return d[a.size()][b.size()];
}

double jaccard_bruteforce(const std::vector<Value>& m, const std::vector<Value>& u) {
  if (m.empty() && u.empty()) return 1.0;
  std::vector<Value> rest = u;
  std::size_t common = 0;
  for (const auto& v : m) {
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (compare_values(v, rest[i]) == 0) {
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        ++common;
        break;
      }
    }
  }
  return static_cast<double>(common) / static_cast<double>(m.size() + u.size() - common);
}

bool same_relation(const Relation& a, const Relation& b) {
  if (a.columns.size() != b.columns.size() || a.rows.size() != b.rows.size() || a.ordered != b.ordered) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i)
    if (a.rows[i] != b.rows[i]) return false;
  return true;
}

namespace {

// ---- naive evaluator -----------------------------------------------------

struct Ref {
  std::size_t table = 0, col = 0;
  ColumnType type = ColumnType::Text;
};

using Combo = std::vector<const Row*>;
using Group = std::vector<const Combo*>;

enum class Truth { No, Yes, Maybe };

bool lower_eq(char a, char b) {
  return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
}

// Recursive wildcard match.
bool like(const std::string& s, std::size_t i, const std::string& p, std::size_t j) {
  if (j == p.size()) return i == s.size();
  if (p[j] == '%') {
    for (std::size_t k = i; k <= s.size(); ++k)
      if (like(s, k, p, j + 1)) return true;
    return false;
  }
  if (i == s.size()) return false;
  if (p[j] == '_' || lower_eq(s[i], p[j])) return like(s, i + 1, p, j + 1);
  return false;
}

bool rows_equal(const Row& a, const Row& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (compare_values(a[i], b[i]) != 0) return false;
  return true;
}

bool contains(const std::vector<Row>& rows, const Row& r) {
  for (const auto& x : rows)
    if (rows_equal(x, r)) return true;
  return false;
}

class Naive {
 public:
  Naive(const Query& q, const Database& db) : q_(q), db_(db) {
    for (const auto& t : q.from) tables_.push_back(t.name);
    for (const auto& j : q.joins) tables_.push_back(j.table.name);
    for (const auto& t : tables_)
      if (!db.schema.find(t)) throw std::runtime_error("unknown table " + t);
  }

  Relation run() {
    std::vector<Combo> combos;
    Combo cur;
    cross(0, cur, combos);
    for (std::size_t j = 0; j < q_.joins.size(); ++j) {
      Ref l = resolve(q_.joins[j].left), r = resolve(q_.joins[j].right);
      std::vector<Combo> next;
      for (const auto& c : combos) {
        for (const auto& row : db_.table(q_.joins[j].table.name).rows) {
          Combo e = c;
          e.push_back(&row);
          const Value& a = (*e[l.table])[l.col];
          const Value& b = (*e[r.table])[r.col];
          if (!is_null(a) && !is_null(b) && compare_values(a, b) == 0) next.push_back(e);
        }
      }
      combos = next;
    }

    std::vector<const Combo*> kept;
    for (const auto& c : combos)
      if (!q_.where || test_row(*q_.where, c) == Truth::Yes) kept.push_back(&c);

    bool grouped = !q_.group_by.empty() || has_aggregate(q_);
    std::vector<Group> groups;
    if (!grouped) {
      for (auto* c : kept) groups.push_back({c});
    } else if (q_.group_by.empty()) {
      groups.push_back(kept);
    } else {
      std::vector<Row> keys;
      for (auto* c : kept) {
        Row key;
        for (const auto& g : q_.group_by) {
          Ref r = resolve(g);
          key.push_back((*(*c)[r.table])[r.col]);
        }
        std::size_t k = 0;
        while (k < keys.size() && !rows_equal(keys[k], key)) ++k;
        if (k == keys.size()) {
          keys.push_back(key);
          groups.emplace_back();
        }
        groups[k].push_back(c);
      }
    }
    if (q_.having) {
      std::vector<Group> kept_groups;
      for (auto& g : groups)
        if (test_group(*q_.having, g) == Truth::Yes) kept_groups.push_back(g);
      groups = kept_groups;
    }

    struct Out {
      Row row;
      Row key;
    };
    std::vector<Out> outs;
    for (const auto& g : groups) {
      Out o;
      for (const auto& s : q_.select) {
        if (s.column.is_star() && s.agg == Aggregate::None) {
          for (std::size_t t = 0; t < tables_.size(); ++t) {
            const TableDef* def = db_.schema.find(tables_[t]);
            for (std::size_t c = 0; c < def->columns.size(); ++c)
              o.row.push_back(g.empty() ? Value{} : (*(*g.front())[t])[c]);
          }
        } else {
          o.row.push_back(value_of(s, g));
        }
      }
      for (const auto& item : q_.order_by) o.key.push_back(value_of(item.expr, g));
      outs.push_back(o);
    }
    // Insertion sort: stable.
    auto before = [&](const Out& a, const Out& b) {
      for (std::size_t k = 0; k < q_.order_by.size(); ++k) {
        int c = compare_values(a.key[k], b.key[k]);
        if (c == 0) continue;
        return q_.order_by[k].dir == SortDir::Asc ? c < 0 : c > 0;
      }
      return false;
    };
    for (std::size_t i = 1; i < outs.size(); ++i) {
      std::size_t j = i;
      while (j > 0 && before(outs[i], outs[j - 1])) --j;
      std::rotate(outs.begin() + static_cast<std::ptrdiff_t>(j), outs.begin() + static_cast<std::ptrdiff_t>(i),
                  outs.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }

    Relation rel;
    rel.ordered = !q_.order_by.empty();
    rel.columns.assign(outs.empty() ? width() : outs.front().row.size(), "");
    for (auto& o : outs) {
      if (q_.limit && rel.rows.size() >= static_cast<std::size_t>(*q_.limit)) break;
      if (q_.distinct && contains(rel.rows, o.row)) continue;
      rel.rows.push_back(o.row);
    }
    return rel;
  }

 private:
  const Query& q_;
  const Database& db_;
  std::vector<std::string> tables_;

  std::size_t width() const {
    std::size_t n = 0;
    for (const auto& s : q_.select) {
      if (s.column.is_star() && s.agg == Aggregate::None) {
        for (const auto& t : tables_) n += db_.schema.find(t)->columns.size();
      } else {
        ++n;
      }
    }
    return n;
  }

  void cross(std::size_t t, Combo& cur, std::vector<Combo>& out) const {
    if (t == q_.from.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& row : db_.table(q_.from[t].name).rows) {
      cur.push_back(&row);
      cross(t + 1, cur, out);
      cur.pop_back();
    }
  }

  Ref resolve(const ColumnRef& c) const {
    std::optional<Ref> hit;
    for (std::size_t t = 0; t < tables_.size(); ++t) {
      if (!c.table.empty() && c.table != tables_[t]) continue;
      const TableDef* def = db_.schema.find(tables_[t]);
      for (std::size_t k = 0; k < def->columns.size(); ++k) {
        if (def->columns[k].name != c.column) continue;
        if (hit) throw std::runtime_error("ambiguous " + c.column);
        hit = Ref{t, k, def->columns[k].type};
      }
    }
    if (!hit) throw std::runtime_error("unbound " + c.column);
    return *hit;
  }

  Value value_of(const SelectExpr& e, const Group& g) const {
    if (e.agg == Aggregate::Count && e.column.is_star()) return Value{static_cast<std::int64_t>(g.size())};
    Ref r = resolve(e.column);
    if (e.agg == Aggregate::None) return g.empty() ? Value{} : (*(*g.front())[r.table])[r.col];
    std::vector<Value> vals;
    for (auto* c : g) {
      const Value& v = (*(*c)[r.table])[r.col];
      if (is_null(v)) continue;
      if (e.distinct) {
        bool dup = false;
        for (const auto& w : vals) dup = dup || compare_values(v, w) == 0;
        if (dup) continue;
      }
      vals.push_back(v);
    }
    if (e.agg == Aggregate::Count) return Value{static_cast<std::int64_t>(vals.size())};
    if (vals.empty()) return Value{};
    switch (e.agg) {
      case Aggregate::Sum:
        if (r.type == ColumnType::Integer) {
          std::int64_t s = 0;
          for (const auto& v : vals) s += std::get<std::int64_t>(v);
          return Value{s};
        } else {
          double s = 0;
          for (const auto& v : vals) s += as_double(v);
          return Value{s};
        }
      case Aggregate::Avg: {
        double s = 0;
        for (const auto& v : vals) s += as_double(v);
        return Value{s / static_cast<double>(vals.size())};
      }
      case Aggregate::Min:
      case Aggregate::Max: {
        Value best = vals.front();
        for (const auto& v : vals) {
          int c = compare_values(v, best);
          if ((e.agg == Aggregate::Min && c < 0) || (e.agg == Aggregate::Max && c > 0)) best = v;
        }
        return best;
      }
      default:
        return Value{};
    }
  }

  static Truth cmp(const Value& a, CompareOp op, const Value& b) {
    if (is_null(a) || is_null(b)) return Truth::Maybe;
    bool r = false;
    int c = op == CompareOp::Like ? 0 : compare_values(a, b);
    switch (op) {
      case CompareOp::Like: r = like(std::get<std::string>(a), 0, std::get<std::string>(b), 0); break;
      case CompareOp::Eq: r = c == 0; break;
      case CompareOp::Ne: r = c != 0; break;
      case CompareOp::Lt: r = c < 0; break;
      case CompareOp::Le: r = c <= 0; break;
      case CompareOp::Gt: r = c > 0; break;
      case CompareOp::Ge: r = c >= 0; break;
      case CompareOp::In: break;
    }
    return r ? Truth::Yes : Truth::No;
  }

  static Truth member(const Value& a, const std::vector<Value>& list) {
    if (is_null(a)) return Truth::Maybe;
    Truth t = Truth::No;
    for (const auto& v : list) {
      Truth x = cmp(a, CompareOp::Eq, v);
      if (x == Truth::Yes) return Truth::Yes;
      if (x == Truth::Maybe) t = Truth::Maybe;
    }
    return t;
  }

  template <class Leaf>
  static Truth logic(const Predicate& p, const Leaf& leaf) {
    switch (p.kind) {
      case Predicate::Kind::Compare:
        return leaf(p.cmp);
      case Predicate::Kind::Not: {
        Truth t = logic(p.children[0], leaf);
        return t == Truth::Maybe ? t : (t == Truth::Yes ? Truth::No : Truth::Yes);
      }
      case Predicate::Kind::And: {
        Truth a = logic(p.children[0], leaf), b = logic(p.children[1], leaf);
        if (a == Truth::No || b == Truth::No) return Truth::No;
        return a == Truth::Yes && b == Truth::Yes ? Truth::Yes : Truth::Maybe;
      }
      case Predicate::Kind::Or: {
        Truth a = logic(p.children[0], leaf), b = logic(p.children[1], leaf);
        if (a == Truth::Yes || b == Truth::Yes) return Truth::Yes;
        return a == Truth::No && b == Truth::No ? Truth::No : Truth::Maybe;
      }
    }
    return Truth::Maybe;
  }

  Truth test_row(const Predicate& p, const Combo& c) const {
    return logic(p, [&](const Comparison& k) {
      Ref l = resolve(k.lhs.column);
      const Value& a = (*c[l.table])[l.col];
      if (k.rhs_kind == Comparison::RhsKind::List) return member(a, k.list);
      if (k.rhs_kind == Comparison::RhsKind::Literal) return cmp(a, k.op, k.literal);
      Ref r = resolve(k.column);
      return cmp(a, k.op, (*c[r.table])[r.col]);
    });
  }

  Truth test_group(const Predicate& p, const Group& g) const {
    return logic(p, [&](const Comparison& k) {
      Value a = value_of(k.lhs, g);
      if (k.rhs_kind == Comparison::RhsKind::List) return member(a, k.list);
      if (k.rhs_kind == Comparison::RhsKind::Literal) return cmp(a, k.op, k.literal);
      SelectExpr bare{Aggregate::None, false, k.column};
      return cmp(a, k.op, value_of(bare, g));
    });
  }
};

Relation set_combine(SetOpKind kind, const Relation& l, const Relation& r) {
  if (l.columns.size() != r.columns.size()) throw std::runtime_error("arity");
  Relation out;
  out.columns = l.columns;
  out.ordered = l.ordered;
  for (const auto& row : l.rows) {
    bool in_r = contains(r.rows, row);
    bool keep = kind == SetOpKind::Union || (kind == SetOpKind::Intersect ? in_r : !in_r);
    if (keep && !contains(out.rows, row)) out.rows.push_back(row);
  }
  if (kind == SetOpKind::Union)
    for (const auto& row : r.rows)
      if (!contains(out.rows, row)) out.rows.push_back(row);
  return out;
}

// ---- random generation ---------------------------------------------------

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

const std::vector<std::string> kTexts = {"ab", "Ab", "b", "xa", "bab", "c", "a_b", "%"};

Value random_value(std::mt19937_64& rng, ColumnType t, bool nullable) {
  if (nullable && chance(rng, 0.15)) return Value{};
  switch (t) {
    case ColumnType::Integer: return Value{static_cast<std::int64_t>(uniform(rng, -2, 5))};
    case ColumnType::Real: return Value{0.5 * uniform(rng, -2, 6)};
    case ColumnType::Text: return Value{pick(rng, kTexts)};
  }
  return Value{};
}

Value random_literal(std::mt19937_64& rng, ColumnType t) {
  if (t == ColumnType::Text) return Value{pick(rng, kTexts)};
  if (chance(rng, 0.3)) return Value{0.5 * uniform(rng, -2, 8)};
  return Value{static_cast<std::int64_t>(uniform(rng, -2, 6))};
}

struct Col {
  std::string table, name;
  ColumnType type;
};

class QueryGen {
 public:
  QueryGen(std::mt19937_64& rng, const Database& db) : rng_(rng), db_(db) {}

  Query block(bool allow_set_op) {
    Query q;
    choose_tables(q);
    const bool grouped = chance(rng_, 0.35);
    if (grouped && chance(rng_, 0.7)) {
      q.group_by.push_back(ref(pick(rng_, cols_)));
      if (chance(rng_, 0.2)) q.group_by.push_back(ref(pick(rng_, cols_)));
    }
    const int nsel = uniform(rng_, 1, 3);
    if (!grouped && chance(rng_, 0.1)) {
      q.select.push_back(SelectExpr{Aggregate::None, false, ColumnRef{"", "*"}});
    } else {
      for (int i = 0; i < nsel; ++i) q.select.push_back(grouped ? group_expr(q) : SelectExpr{Aggregate::None, false, ref(pick(rng_, cols_))});
    }
    q.distinct = chance(rng_, 0.2);
    if (chance(rng_, 0.6)) q.where = predicate(2, false);
    if (grouped && chance(rng_, 0.4)) q.having = predicate(1, true);
    if (chance(rng_, 0.45)) {
      const int n = uniform(rng_, 1, 2);
      for (int i = 0; i < n; ++i) {
        OrderItem o;
        o.dir = chance(rng_, 0.5) ? SortDir::Asc : SortDir::Desc;
        o.expr = grouped ? group_expr(q) : SelectExpr{Aggregate::None, false, ref(pick(rng_, cols_))};
        q.order_by.push_back(o);
      }
    }
    if (chance(rng_, 0.3)) q.limit = uniform(rng_, 1, 5);
    if (allow_set_op && chance(rng_, 0.15)) {
      Query arm = block(false);
      SetOperation op{static_cast<SetOpKind>(uniform(rng_, 0, 2)), Box<Query>(arm)};
      // Match the arm's arity with plain columns of its first table.
      auto width = [&](const Query& x) {
        std::size_t n = 0;
        for (const auto& s : x.select) {
          if (s.column.is_star() && s.agg == Aggregate::None) {
            for (const auto& t : x.scope_tables()) n += db_.schema.find(t)->columns.size();
          } else {
            ++n;
          }
        }
        return n;
      };
      std::size_t want = width(q);
      Query& a = *op.arm;
      if (width(a) != want) {
        a.select.clear();
        a.order_by.clear();
        a.group_by.clear();
        a.having.reset();
        std::vector<Col> arm_cols;
        for (const auto& t : a.scope_tables())
          for (const auto& c : db_.schema.find(t)->columns) arm_cols.push_back({t, c.name, c.type});
        const bool qualify = a.scope_tables().size() > 1;
        for (std::size_t i = 0; i < want; ++i) {
          const Col& c = pick(rng_, arm_cols);
          a.select.push_back(SelectExpr{Aggregate::None, false, ColumnRef{qualify ? c.table : "", c.name}});
        }
      }
      q.set_op = std::move(op);
    }
    return q;
  }

 private:
  std::mt19937_64& rng_;
  const Database& db_;
  std::vector<Col> cols_;
  bool qualify_ = false;

  ColumnRef ref(const Col& c) const { return ColumnRef{qualify_ ? c.table : "", c.name}; }

  void choose_tables(Query& q) {
    std::vector<std::string> names;
    for (const auto& t : db_.schema.tables) names.push_back(t.name);
    std::shuffle(names.begin(), names.end(), rng_);
    q.from.push_back({names[0]});
    if (names.size() > 1) {
      int shape = uniform(rng_, 0, 9);
      if (shape < 2) {
        q.from.push_back({names[1]});
      } else if (shape < 5) {
        // Join on any numeric pair between an earlier table and the new one.
        std::vector<std::pair<Col, Col>> pairs;
        const TableDef* l = db_.schema.find(names[0]);
        const TableDef* r = db_.schema.find(names[1]);
        for (const auto& a : l->columns)
          for (const auto& b : r->columns)
            if ((a.type == ColumnType::Text) == (b.type == ColumnType::Text))
              pairs.push_back({{l->name, a.name, a.type}, {r->name, b.name, b.type}});
        if (!pairs.empty()) {
          const auto& [a, b] = pick(rng_, pairs);
          q.joins.push_back(Join{{names[1]}, ColumnRef{a.table, a.name}, ColumnRef{b.table, b.name}});
        }
      }
    }
    cols_.clear();
    for (const auto& t : q.scope_tables())
      for (const auto& c : db_.schema.find(t)->columns) cols_.push_back({t, c.name, c.type});
    qualify_ = q.scope_tables().size() > 1;
  }

  SelectExpr group_expr(const Query& q) {
    if (!q.group_by.empty() && chance(rng_, 0.35)) return SelectExpr{Aggregate::None, false, pick(rng_, q.group_by)};
    return aggregate_expr();
  }

  SelectExpr aggregate_expr() {
    if (chance(rng_, 0.2)) return SelectExpr{Aggregate::Count, false, ColumnRef{"", "*"}};
    const Col& c = pick(rng_, cols_);
    std::vector<Aggregate> aggs = {Aggregate::Count, Aggregate::Min, Aggregate::Max, Aggregate::None};
    if (c.type != ColumnType::Text) {
      aggs.push_back(Aggregate::Sum);
      aggs.push_back(Aggregate::Avg);
    }
    SelectExpr e{pick(rng_, aggs), false, ref(c)};
    e.distinct = e.agg != Aggregate::None && chance(rng_, 0.2);
    return e;
  }

  Predicate predicate(int depth, bool group) {
    if (depth > 0 && chance(rng_, 0.4)) {
      int k = uniform(rng_, 0, 2);
      if (k == 2) return Predicate::negate(predicate(depth - 1, group));
      Predicate l = predicate(depth - 1, group), r = predicate(depth - 1, group);
      return k == 0 ? Predicate::both(std::move(l), std::move(r)) : Predicate::either(std::move(l), std::move(r));
    }
    Comparison c;
    ColumnType lt;
    if (group) {
      c.lhs = aggregate_expr();
      if (c.lhs.agg == Aggregate::None) c.lhs.agg = Aggregate::Count;
      if (c.lhs.column.is_star()) {
        lt = ColumnType::Integer;
      } else {
        lt = type_of(c.lhs.column);
        if (c.lhs.agg == Aggregate::Count) lt = ColumnType::Integer;
        if (c.lhs.agg == Aggregate::Avg) lt = ColumnType::Real;
      }
    } else {
      const Col& col = pick(rng_, cols_);
      c.lhs = SelectExpr{Aggregate::None, false, ref(col)};
      lt = col.type;
    }
    const int shape = uniform(rng_, 0, 9);
    if (shape < 2) {
      c.op = CompareOp::In;
      c.rhs_kind = Comparison::RhsKind::List;
      const int n = uniform(rng_, 1, 3);
      for (int i = 0; i < n; ++i) c.list.push_back(chance(rng_, 0.1) ? Value{} : random_literal(rng_, lt));
    } else if (shape < 4 && !group) {
      std::vector<Col> same;
      for (const auto& x : cols_)
        if ((x.type == ColumnType::Text) == (lt == ColumnType::Text)) same.push_back(x);
      c.op = static_cast<CompareOp>(uniform(rng_, 0, 5));
      c.rhs_kind = Comparison::RhsKind::Column;
      c.column = ref(pick(rng_, same));
    } else if (lt == ColumnType::Text && chance(rng_, 0.5)) {
      c.op = CompareOp::Like;
      static const std::vector<std::string> pats = {"%b%", "a%", "_b", "%", "A_", "%a_b%", "x%a"};
      c.literal = Value{pick(rng_, pats)};
    } else {
      c.op = static_cast<CompareOp>(uniform(rng_, 0, 5));
      c.literal = random_literal(rng_, lt);
    }
    return Predicate::compare(c);
  }

  ColumnType type_of(const ColumnRef& r) const {
    for (const auto& c : cols_)
      if (c.name == r.column && (r.table.empty() || r.table == c.table)) return c.type;
    return ColumnType::Text;
  }
};

}  // namespace

Relation naive_execute(const Query& q, const Database& db) {
  Relation left = Naive(q, db).run();
  if (!q.set_op) return left;
  return set_combine(q.set_op->kind, left, naive_execute(*q.set_op->arm, db));
}

Database random_database(std::mt19937_64& rng, std::size_t max_rows) {
  Database db;
  const int ntables = uniform(rng, 2, 3);
  static const std::vector<std::pair<std::string, ColumnType>> pool = {
      {"k", ColumnType::Integer}, {"n", ColumnType::Integer}, {"r", ColumnType::Real},
      {"s", ColumnType::Text},    {"u", ColumnType::Text},    {"m", ColumnType::Integer}};
  for (int t = 0; t < ntables; ++t) {
    TableDef def;
    def.name = "t" + std::to_string(t);
    def.columns.push_back({"id", ColumnType::Integer});
    std::vector<std::pair<std::string, ColumnType>> cols = pool;
    std::shuffle(cols.begin(), cols.end(), rng);
    const int ncols = uniform(rng, 1, 3);
    for (int c = 0; c < ncols; ++c) def.columns.push_back({cols[static_cast<std::size_t>(c)].first, cols[static_cast<std::size_t>(c)].second});
    Relation rel;
    for (const auto& c : def.columns) rel.columns.push_back(c.name);
    const std::size_t nrows = std::uniform_int_distribution<std::size_t>(0, max_rows)(rng);
    for (std::size_t r = 0; r < nrows; ++r) {
      Row row;
      for (std::size_t c = 0; c < def.columns.size(); ++c)
        row.push_back(random_value(rng, def.columns[c].type, c > 0));
      rel.rows.push_back(row);
    }
    db.contents.emplace(def.name, rel);
    db.schema.tables.push_back(def);
  }
  return db;
}

Query random_query(std::mt19937_64& rng, const Database& db) { return QueryGen(rng, db).block(true); }

std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
  static const std::string alphabet = "abcde._xy";
  const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
  return s;
}

}  // namespace oracle
