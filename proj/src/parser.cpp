#include "sqlmend/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

#include "sqlmend/errors.hpp"

namespace sqlmend {

namespace {

enum class Tok { Ident, Keyword, Integer, Real, String, Symbol, Hole, End };

struct Token {
  Tok kind;
  std::string text;  // keywords uppercased, identifiers lowercased
  std::size_t pos;
};

const std::unordered_set<std::string>& keywords() {
  static const std::unordered_set<std::string> kw = {
      "SELECT", "DISTINCT", "FROM",  "WHERE", "GROUP",  "BY",      "HAVING",    "ORDER",
      "ASC",    "DESC",     "LIMIT", "JOIN",  "INNER",  "ON",      "AND",       "OR",
      "NOT",    "LIKE",     "IN",    "NULL",  "EXCEPT", "UNION",   "INTERSECT", "COUNT",
      "SUM",    "AVG",      "MIN",   "MAX",   "OUTER",  "LEFT",    "RIGHT",     "FULL",
      "CROSS",  "NATURAL",  "AS",    "WITH",  "OVER",   "BETWEEN", "IS",        "EXISTS",
      "CASE",   "ALL",      "INSERT", "UPDATE", "DELETE", "OFFSET", "USING"};
  return kw;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<Token> lex(std::string_view in, bool allow_holes) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = in.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(in[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < n && (std::isalnum(static_cast<unsigned char>(in[i])) || in[i] == '_')) ++i;
      std::string word(in.substr(start, i - start));
      std::string up = upper(word);
      if (keywords().count(up))
        out.push_back({Tok::Keyword, up, start});
      else
        out.push_back({Tok::Ident, lower(word), start});
      continue;
    }
    if (std::isdigit(c) || (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(in[i + 1])))) {
      bool real = false;
      while (i < n && std::isdigit(static_cast<unsigned char>(in[i]))) ++i;
      if (i < n && in[i] == '.') {
        real = true;
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(in[i]))) ++i;
      }
      if (i < n && (in[i] == 'e' || in[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (in[j] == '+' || in[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(in[j]))) {
          real = true;
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(in[i]))) ++i;
        }
      }
      if (i < n && (std::isalpha(static_cast<unsigned char>(in[i])) || in[i] == '_'))
        throw ParseError("malformed number", start);
      out.push_back({real ? Tok::Real : Tok::Integer, std::string(in.substr(start, i - start)), start});
      continue;
    }
    if (c == '\'' || c == '"') {
      char quote = static_cast<char>(c);
      std::string text;
      ++i;
      bool closed = false;
      while (i < n) {
        if (in[i] == quote) {
          if (i + 1 < n && in[i + 1] == quote) {
            text += quote;
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        if (in[i] == '\0') throw ParseError("NUL byte in string literal", i);
        text += in[i++];
      }
      if (!closed) throw ParseError("unterminated string literal", start);
      out.push_back({Tok::String, text, start});
      continue;
    }
    if (c == '?' && allow_holes) {
      out.push_back({Tok::Hole, "?", start});
      ++i;
      continue;
    }
    if (c == '`' || c == '[') throw UnsupportedConstruct("quoted identifier", start);
    static const std::string_view two[] = {"!=", "<>", "<=", ">="};
    bool matched = false;
    for (auto t : two) {
      if (in.substr(i, 2) == t) {
        out.push_back({Tok::Symbol, std::string(t == "<>" ? "!=" : t), start});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("(),.*=<>;-").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::Symbol, std::string(1, static_cast<char>(c)), start});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", start);
  }
  out.push_back({Tok::End, "", n});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  HoleyQuery run() {
    HoleyQuery out;
    out.query = parse_query(true);
    accept_symbol(";");
    if (peek().kind != Tok::End) fail_unexpected();
    out.holes = std::move(holes_);
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::size_t literal_ordinal_ = 0;
  std::vector<std::size_t> holes_;

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(at_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }

  bool is_kw(const char* kw, std::size_t k = 0) const {
    return peek(k).kind == Tok::Keyword && peek(k).text == kw;
  }
  bool is_sym(const char* s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Symbol && peek(k).text == s;
  }
  bool accept_kw(const char* kw) {
    if (!is_kw(kw)) return false;
    ++at_;
    return true;
  }
  bool accept_symbol(const char* s) {
    if (!is_sym(s)) return false;
    ++at_;
    return true;
  }
  void expect_kw(const char* kw) {
    if (!accept_kw(kw)) fail(std::string("expected ") + kw);
  }
  void expect_symbol(const char* s) {
    if (!accept_symbol(s)) fail(std::string("expected '") + s + "'");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    check_unsupported(t);
    std::string got = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(msg + ", got " + got, t.pos);
  }
  [[noreturn]] void fail_unexpected() const { fail("unexpected token"); }

  // Keywords that name constructs outside the subset get a dedicated error.
  void check_unsupported(const Token& t) const {
    if (t.kind != Tok::Keyword) return;
    static const std::unordered_map<std::string, std::string> names = {
        {"OUTER", "OUTER JOIN"},   {"LEFT", "LEFT JOIN"},        {"RIGHT", "RIGHT JOIN"},
        {"FULL", "FULL JOIN"},     {"CROSS", "CROSS JOIN"},      {"NATURAL", "NATURAL JOIN"},
        {"AS", "alias (AS)"},      {"WITH", "common table expression (WITH)"},
        {"OVER", "window function"}, {"BETWEEN", "BETWEEN"},     {"IS", "IS [NOT] NULL"},
        {"EXISTS", "EXISTS subquery"}, {"CASE", "CASE expression"}, {"ALL", "UNION ALL / ALL"},
        {"INSERT", "INSERT"},      {"UPDATE", "UPDATE"},         {"DELETE", "DELETE"},
        {"OFFSET", "OFFSET"},      {"USING", "JOIN ... USING"}};
    auto it = names.find(t.text);
    if (it != names.end()) throw UnsupportedConstruct(it->second, t.pos);
  }

  Query parse_query(bool allow_set_op) {
    if (!is_kw("SELECT")) {
      if (peek().kind == Tok::Symbol && peek().text == "(") throw UnsupportedConstruct("parenthesized query", peek().pos);
      fail("expected SELECT");
    }
    ++at_;
    Query q;
    q.distinct = accept_kw("DISTINCT");
    do {
      q.select.push_back(parse_select_expr());
    } while (accept_symbol(","));

    expect_kw("FROM");
    do {
      q.from.push_back(parse_table());
    } while (accept_symbol(","));

    while (is_kw("JOIN") || is_kw("INNER")) {
      if (accept_kw("INNER")) {
        if (!is_kw("JOIN")) fail("expected JOIN");
      }
      expect_kw("JOIN");
      Join j;
      j.table = parse_table();
      expect_kw("ON");
      j.left = parse_column(false);
      if (!accept_symbol("=")) fail("expected '=' in join condition");
      j.right = parse_column(false);
      if (is_kw("AND")) throw UnsupportedConstruct("multi-condition join", peek().pos);
      q.joins.push_back(std::move(j));
    }

    if (accept_kw("WHERE")) q.where = parse_predicate(false);
    if (accept_kw("GROUP")) {
      expect_kw("BY");
      do {
        q.group_by.push_back(parse_column(false));
      } while (accept_symbol(","));
    }
    if (accept_kw("HAVING")) q.having = parse_predicate(true);
    if (accept_kw("ORDER")) {
      expect_kw("BY");
      do {
        OrderItem item;
        item.expr = parse_select_expr();
        if (item.expr.column.is_star() && item.expr.agg == Aggregate::None)
          fail("'*' is not an ORDER BY expression");
        if (accept_kw("DESC"))
          item.dir = SortDir::Desc;
        else
          accept_kw("ASC");
        q.order_by.push_back(std::move(item));
      } while (accept_symbol(","));
    }
    if (accept_kw("LIMIT")) {
      std::size_t ordinal = literal_ordinal_++;
      const Token& t = peek();
      if (t.kind == Tok::Hole) {
        ++at_;
        holes_.push_back(ordinal);
        q.limit = 1;
      } else if (t.kind == Tok::Integer) {
        ++at_;
        std::int64_t v = parse_int(t);
        if (v < 1) throw ParseError("LIMIT must be at least 1", t.pos);
        q.limit = v;
      } else {
        fail("expected positive integer after LIMIT");
      }
      if (is_sym(",")) throw UnsupportedConstruct("LIMIT offset", peek().pos);
    }
    if (is_kw("EXCEPT") || is_kw("UNION") || is_kw("INTERSECT")) {
      const Token& t = next();
      if (!allow_set_op) throw UnsupportedConstruct("chained set operation", t.pos);
      if (is_kw("ALL")) throw UnsupportedConstruct("UNION ALL / ALL", peek().pos);
      SetOpKind kind = t.text == "EXCEPT" ? SetOpKind::Except
                       : t.text == "UNION" ? SetOpKind::Union
                                           : SetOpKind::Intersect;
      q.set_op = SetOperation{kind, Box<Query>(parse_query(false))};
    }
    return q;
  }

  std::int64_t parse_int(const Token& t) const {
    std::int64_t v = 0;
    auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc() || res.ptr != t.text.data() + t.text.size())
      throw ParseError("integer out of range", t.pos);
    return v;
  }

  TableName parse_table() {
    const Token& t = peek();
    if (t.kind == Tok::Symbol && t.text == "(") throw UnsupportedConstruct("subquery in FROM", t.pos);
    if (t.kind != Tok::Ident) fail("expected table name");
    ++at_;
    if (peek().kind == Tok::Ident) throw UnsupportedConstruct("table alias", peek().pos);
    check_unsupported(peek());
    return TableName{t.text};
  }

  ColumnRef parse_column(bool allow_star) {
    const Token& t = peek();
    if (allow_star && is_sym("*")) {
      ++at_;
      return ColumnRef{"", "*"};
    }
    if (t.kind != Tok::Ident) fail("expected column name");
    ++at_;
    if (accept_symbol(".")) {
      if (allow_star && accept_symbol("*")) throw UnsupportedConstruct("qualified star", t.pos);
      const Token& c = peek();
      if (c.kind != Tok::Ident) fail("expected column name after '.'");
      ++at_;
      return ColumnRef{t.text, c.text};
    }
    return ColumnRef{"", t.text};
  }

  static bool aggregate_keyword(const std::string& kw, Aggregate& out) {
    if (kw == "COUNT") out = Aggregate::Count;
    else if (kw == "SUM") out = Aggregate::Sum;
    else if (kw == "AVG") out = Aggregate::Avg;
    else if (kw == "MIN") out = Aggregate::Min;
    else if (kw == "MAX") out = Aggregate::Max;
    else return false;
    return true;
  }

  SelectExpr parse_select_expr() {
    SelectExpr e;
    const Token& t = peek();
    if (t.kind == Tok::Keyword && aggregate_keyword(t.text, e.agg)) {
      ++at_;
      expect_symbol("(");
      e.distinct = accept_kw("DISTINCT");
      e.column = parse_column(e.agg == Aggregate::Count && !e.distinct);
      expect_symbol(")");
    } else if (t.kind == Tok::Ident && peek(1).kind == Tok::Symbol && peek(1).text == "(") {
      throw UnsupportedConstruct("function call " + t.text, t.pos);
    } else {
      e.column = parse_column(true);
    }
    if (peek().kind == Tok::Ident) throw UnsupportedConstruct("column alias", peek().pos);
    check_unsupported(peek());
    if (is_sym("-") || is_sym("*")) {
      if (!(e.column.is_star() && e.agg == Aggregate::None)) throw UnsupportedConstruct("arithmetic expression", peek().pos);
    }
    return e;
  }

  Predicate parse_predicate(bool having) { return parse_or(having); }

  Predicate parse_or(bool having) {
    Predicate left = parse_and(having);
    while (accept_kw("OR")) left = Predicate::either(std::move(left), parse_and(having));
    return left;
  }

  Predicate parse_and(bool having) {
    Predicate left = parse_not(having);
    while (accept_kw("AND")) left = Predicate::both(std::move(left), parse_not(having));
    return left;
  }

  Predicate parse_not(bool having) {
    if (accept_kw("NOT")) return Predicate::negate(parse_not(having));
    if (is_sym("(")) {
      if (is_kw("SELECT", 1)) throw UnsupportedConstruct("subquery", peek(1).pos);
      ++at_;
      Predicate inner = parse_predicate(having);
      expect_symbol(")");
      return inner;
    }
    return parse_comparison(having);
  }

  Value parse_literal() {
    std::size_t ordinal = literal_ordinal_++;
    const Token& t = peek();
    if (t.kind == Tok::Hole) {
      ++at_;
      holes_.push_back(ordinal);
      return Value{};
    }
    bool negative = false;
    if (is_sym("-")) {
      negative = true;
      ++at_;
    }
    const Token& v = peek();
    if (v.kind == Tok::Integer) {
      ++at_;
      std::int64_t i = parse_int(v);
      return Value{negative ? -i : i};
    }
    if (v.kind == Tok::Real) {
      ++at_;
      double d = std::strtod(v.text.c_str(), nullptr);
      return Value{negative ? -d : d};
    }
    if (negative) fail("expected number after '-'");
    if (v.kind == Tok::String) {
      ++at_;
      return Value{v.text};
    }
    if (is_kw("NULL")) {
      ++at_;
      return Value{};
    }
    fail("expected literal");
  }

  bool at_literal() const {
    const auto& t = peek();
    return t.kind == Tok::Integer || t.kind == Tok::Real || t.kind == Tok::String ||
           t.kind == Tok::Hole || (t.kind == Tok::Keyword && t.text == "NULL") ||
           (t.kind == Tok::Symbol && t.text == "-");
  }

  Predicate parse_comparison(bool having) {
    Comparison c;
    std::size_t lhs_pos = peek().pos;
    c.lhs = parse_select_expr();
    if (c.lhs.column.is_star() && c.lhs.agg == Aggregate::None) throw ParseError("'*' is not a predicate operand", lhs_pos);
    if (!having && is_aggregate(c.lhs)) throw UnsupportedConstruct("aggregate in WHERE", lhs_pos);

    if (is_kw("NOT") && (is_kw("IN", 1) || is_kw("LIKE", 1))) {
      // `x NOT IN (...)` / `x NOT LIKE p` become NOT(x IN ...) / NOT(x LIKE p).
      ++at_;
      Predicate inner = parse_comparison_tail(std::move(c));
      return Predicate::negate(std::move(inner));
    }
    return parse_comparison_tail(std::move(c));
  }

  Predicate parse_comparison_tail(Comparison c) {
    const Token& t = peek();
    if (t.kind == Tok::Keyword && t.text == "IN") {
      ++at_;
      c.op = CompareOp::In;
      expect_symbol("(");
      if (is_kw("SELECT")) throw UnsupportedConstruct("subquery", peek().pos);
      c.rhs_kind = Comparison::RhsKind::List;
      do {
        c.list.push_back(parse_literal());
      } while (accept_symbol(","));
      expect_symbol(")");
      return Predicate::compare(std::move(c));
    }
    if (t.kind == Tok::Keyword && t.text == "LIKE") {
      c.op = CompareOp::Like;
    } else if (t.kind == Tok::Symbol && (t.text == "=" || t.text == "!=" || t.text == "<" ||
                                          t.text == "<=" || t.text == ">" || t.text == ">=")) {
      static const std::unordered_map<std::string, CompareOp> ops = {
          {"=", CompareOp::Eq}, {"!=", CompareOp::Ne}, {"<", CompareOp::Lt},
          {"<=", CompareOp::Le}, {">", CompareOp::Gt}, {">=", CompareOp::Ge}};
      c.op = ops.at(t.text);
    } else {
      fail("expected comparison operator");
    }
    ++at_;
    if (is_sym("(")) {
      if (is_kw("SELECT", 1)) throw UnsupportedConstruct("subquery", peek(1).pos);
      fail("unexpected '('");
    }
    if (at_literal()) {
      c.rhs_kind = Comparison::RhsKind::Literal;
      c.literal = parse_literal();
    } else {
      const Token& r = peek();
      if (r.kind == Tok::Keyword) {
        Aggregate dummy;
        if (aggregate_keyword(r.text, dummy)) throw UnsupportedConstruct("aggregate on comparison right-hand side", r.pos);
      }
      c.rhs_kind = Comparison::RhsKind::Column;
      c.column = parse_column(false);
    }
    if (is_sym("-") || is_sym("*")) throw UnsupportedConstruct("arithmetic expression", peek().pos);
    return Predicate::compare(std::move(c));
  }
};

}  // namespace

Query parse(std::string_view text) {
  Parser p(lex(text, false));
  return p.run().query;
}

HoleyQuery parse_with_holes(std::string_view text) {
  Parser p(lex(text, true));
  return p.run();
}

}  // namespace sqlmend
