#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqlmend/ast.hpp"
#include "sqlmend/mutation.hpp"
#include "sqlmend/relation.hpp"

namespace sqlmend {

struct SearchConfig {
  /// Constant mutations allowed on one repair path. A path may also take one
  /// structural edit; its fresh-slot fills do not count toward this limit.
  int max_mutations = 2;
  /// Failed mutants promoted to the next round.
  int beam_width = 10;
  /// Executed mutants per candidate query.
  std::size_t per_candidate_budget = 200000;
  /// Wall-clock budget for one task, in milliseconds; 0 disables it.
  std::int64_t time_budget_ms = 0;
  /// Beam candidates to try.
  int use_top_n = 10;
};

struct RepairTask {
  std::vector<Query> candidates;
  std::shared_ptr<const Database> db;
  Relation expected;
  std::string question;
  /// Literals lexed from `question`; filled by make_task.
  std::vector<Value> question_literals;
};

RepairTask make_task(std::vector<Query> candidates, std::shared_ptr<const Database> db, Relation expected,
                     std::string question);

enum class RepairStatus { AlreadyCorrect, Repaired, Exhausted, Timeout };

std::string to_string(RepairStatus s);

struct SearchStats {
  std::size_t candidates_tried = 0;
  std::size_t mutants_executed = 0;
  std::size_t execution_errors = 0;
  std::size_t rounds = 0;
  /// 1-based beam position of the candidate that matched.
  std::optional<int> succeeded_candidate;
  double wall_ms = 0;
};

struct RepairOutcome {
  RepairStatus status = RepairStatus::Exhausted;
  std::optional<Query> repaired_query;
  std::vector<Mutation> mutations;
  SearchStats stats;
  std::string reason;
  /// Set when the query came from the external synthesizer.
  bool from_fallback = false;

  bool solved() const { return status == RepairStatus::AlreadyCorrect || status == RepairStatus::Repaired; }
  int constant_mutations() const;
  int structural_mutations() const;
};

/// A mutant that executed but did not match, with its similarity score.
struct ScoredMutant {
  /// Mutations from the candidate query to this mutant, in order.
  std::vector<Mutation> path;
  double score = 0;
  /// Position in enumeration order across the whole search.
  std::size_t order = 0;

  int constant_mutations() const;
  int structural_mutations() const;
};

/// |m ∩ u| / (|m| + |u| - |m ∩ u|) with per-value minimum multiplicity.
/// Both empty gives 1.
double jaccard(const std::vector<Value>& m, const std::vector<Value>& u);

/// Similarity of two outputs: jaccard over their flattened cell multisets.
double output_similarity(const Relation& actual, const Relation& expected);

struct SingleResult {
  RepairOutcome outcome;
  std::vector<ScoredMutant> failed;
};

/// One round over `query`: every slot with every domain value, then every
/// fill of each structural variant. Returns the first match in enumeration
/// order, else all failed mutants.
SingleResult single_mutation_repair(const Query& query, const RepairTask& task, const SearchConfig& cfg);

/// Rounds of single-mutation repair, each seeded with the best `beam_width`
/// failed mutants of the previous round.
RepairOutcome multi_mutation_repair(const Query& query, const RepairTask& task, const SearchConfig& cfg);

/// Unmutated candidates first, then multi-mutation repair of each in order.
RepairOutcome repair_beam(const RepairTask& task, const SearchConfig& cfg);

/// Runs `command` through the shell with the task as JSON on stdin and
/// validates the SQL it prints. An empty command yields "no fallback".
RepairOutcome external_fallback(const RepairTask& task, const std::string& command);

/// `SQLMEND_FALLBACK_CMD`, or empty.
std::string fallback_command_from_env();

/// JSON document sent to the fallback process.
std::string fallback_payload(const RepairTask& task);

}  // namespace sqlmend
