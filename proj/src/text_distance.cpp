#include "sqlmend/text_distance.hpp"

#include <cctype>
#include <numeric>
#include <vector>

namespace sqlmend {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string normalize_once(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  const std::size_t n = in.size();
  char quote = 0;
  bool prev_ident = false;  // previous emitted char continues an identifier/number
  while (i < n) {
    char c = in[i];
    if (quote) {
      if (c == quote) quote = 0;
      if (!space(c)) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      ++i;
      continue;
    }
    if (c == '\'' || c == '"') {
      quote = c;
      out += c;
      prev_ident = false;
      ++i;
      continue;
    }
    if (ident_start(c) && !prev_ident) {
      std::size_t j = i;
      while (j < n && ident_char(in[j])) ++j;
      // Qualifier: identifier, optional spaces, '.', optional spaces, identifier start.
      std::size_t k = j;
      while (k < n && space(in[k])) ++k;
      if (k < n && in[k] == '.') {
        std::size_t m = k + 1;
        while (m < n && space(in[m])) ++m;
        if (m < n && ident_start(in[m])) {
          i = m;
          continue;
        }
      }
      for (std::size_t p = i; p < j; ++p) out += static_cast<char>(std::tolower(static_cast<unsigned char>(in[p])));
      i = j;
      prev_ident = true;
      continue;
    }
    if (space(c)) {
      ++i;
      prev_ident = false;
      continue;
    }
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    prev_ident = ident_char(c);
    ++i;
  }
  return out;
}

}  // namespace

std::string normalize_for_distance(std::string_view text) {
  std::string cur = normalize_once(text);
  for (;;) {
    std::string next = normalize_once(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace sqlmend
