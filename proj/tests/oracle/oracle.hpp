#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sqlmend/ast.hpp"
#include "sqlmend/relation.hpp"

namespace oracle {

/// Full-matrix Levenshtein distance.
std::size_t edit_distance_dp(const std::string& a, const std::string& b);

/// Multiset Jaccard by repeated removal of matched elements.
double jaccard_bruteforce(const std::vector<sqlmend::Value>& m, const std::vector<sqlmend::Value>& u);

/// Nested-loop evaluator for the supported subset. Throws std::runtime_error
/// on queries it cannot bind.
sqlmend::Relation naive_execute(const sqlmend::Query& q, const sqlmend::Database& db);

/// Rows equal position by position, with identical value alternatives.
bool same_relation(const sqlmend::Relation& a, const sqlmend::Relation& b);

/// Two or three tables over a small value range, at most `max_rows` rows each.
sqlmend::Database random_database(std::mt19937_64& rng, std::size_t max_rows = 8);

/// A well-typed query over `db`.
sqlmend::Query random_query(std::mt19937_64& rng, const sqlmend::Database& db);

/// Random printable string over a small alphabet, length <= max_len.
std::string random_text(std::mt19937_64& rng, std::size_t max_len);

}  // namespace oracle
