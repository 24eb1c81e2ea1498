#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sqlmend/harness.hpp"

namespace sqlmend {

struct CorpusOptions {
  std::size_t per_gold = 10;
  /// Constant mutations per task, each on a distinct slot.
  int mutations = 1;
  std::uint64_t seed = 1;
};

/// Broken-query tasks made by applying random in-space constant mutations to
/// each gold query: a slot uniformly among those with a non-empty domain,
/// then a value uniformly from its domain. Mutants whose output still matches
/// the gold output are redrawn. Candidate #1 is the mutant.
std::vector<TaskRecord> inverse_mutation_corpus(const std::vector<TaskRecord>& golds,
                                                const std::filesystem::path& db_root, const CorpusOptions& opts);

}  // namespace sqlmend
