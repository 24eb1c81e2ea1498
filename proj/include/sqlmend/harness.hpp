#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqlmend/ast.hpp"
#include "sqlmend/relation.hpp"
#include "sqlmend/search.hpp"

namespace sqlmend {

/// One entry of a tasks.json array.
struct TaskRecord {
  std::string id;
  std::string question;
  /// Database directory, relative to the db root.
  std::string db_ref;
  std::vector<std::string> candidates;
  std::optional<std::string> gold;
  /// Expected-output CSV (with header), relative to the db root; overrides the gold example.
  std::optional<std::string> expected_csv;
  bool expected_ordered = false;
};

nlohmann::json to_json(const TaskRecord& t);
TaskRecord task_from_json(const nlohmann::json& j);

/// Throws LoadError on I/O or format errors.
std::vector<TaskRecord> load_tasks(const std::filesystem::path& file);
void save_tasks(const std::filesystem::path& file, const std::vector<TaskRecord>& tasks);

/// Output of `gold` over `db`; ordered iff gold has ORDER BY.
Relation generate_example(const Query& gold, const Database& db);

/// Fills every `?` literal of `skeleton_sql` from the question's literals and
/// the compared column's values. Fills using question literals come first,
/// then ones using more frequent DB values. Returns at most `max_fills`.
/// Holes whose pool is empty stay NULL; throws std::invalid_argument when
/// every hole's pool is empty.
std::vector<Query> fill_terminals(const std::string& skeleton_sql, const std::string& question, const Database& db,
                                  std::size_t max_fills = 10);

/// 1-based position of the first fill whose output matches the gold output.
std::optional<std::size_t> gold_fill_rank(const std::vector<Query>& fills, const Query& gold, const Database& db);

struct CorpusStats {
  static constexpr std::size_t bucket_width = 5;
  static constexpr std::size_t bucket_count = 20;  // plus one overflow bucket

  std::size_t total = 0;
  std::size_t failing = 0;
  std::size_t invalid = 0;
  std::size_t structure_match = 0;
  double structure_match_rate = 0;
  /// bucket_count buckets [0,5), [5,10), ... then one for distances >= 100.
  std::vector<std::size_t> histogram = std::vector<std::size_t>(bucket_count + 1, 0);

  static std::string bucket_label(std::size_t bucket);
  static std::size_t bucket_of(std::size_t distance);
};

nlohmann::json to_json(const CorpusStats& s);

/// Candidate #1 against gold per task. Tasks without gold, or whose queries
/// do not parse or execute, count as invalid.
CorpusStats analyze_corpus(const std::vector<TaskRecord>& tasks, const std::filesystem::path& db_root);

struct RunOptions {
  SearchConfig search;
  std::filesystem::path db_root;
  /// Shell command for the synthesizer fallback; empty disables it.
  std::string fallback;
  /// Adds wall-clock times, which makes reports non-reproducible.
  bool timing = false;
};

/// Solve stage of one task: base, beam, k1, k2, fallback, unsolved or error.
std::string solve_stage(const RepairOutcome& o);

/// Repairs every task and returns {"config", "tasks", "summary"}.
nlohmann::json run_repair(const std::vector<TaskRecord>& tasks, const RunOptions& opts);

}  // namespace sqlmend
