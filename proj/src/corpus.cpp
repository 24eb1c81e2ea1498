#include "sqlmend/corpus.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "sqlmend/errors.hpp"
#include "sqlmend/executor.hpp"
#include "sqlmend/mutation.hpp"
#include "sqlmend/parser.hpp"
#include "sqlmend/structure.hpp"

namespace sqlmend {

namespace {

constexpr int kMaxAttempts = 100;

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

bool still_correct(const Query& q, const Database& db, const Relation& expected) {
  try {
    return outputs_match(execute(q, db), expected);
  } catch (const ExecutionError&) {
    return false;
  }
}

}  // namespace

std::vector<TaskRecord> inverse_mutation_corpus(const std::vector<TaskRecord>& golds,
                                                const std::filesystem::path& db_root, const CorpusOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::map<std::string, Database> dbs;
  std::vector<TaskRecord> out;
  for (const auto& g : golds) {
    if (!g.gold) throw LoadError("task " + g.id + " has no gold query");
    auto it = dbs.find(g.db_ref);
    if (it == dbs.end()) it = dbs.emplace(g.db_ref, load_database(db_root / g.db_ref)).first;
    const Database& db = it->second;
    MutationContext ctx(db, question_literals(g.question));
    const Query gold = parse(*g.gold);
    const Relation expected = generate_example(gold, db);
    for (std::size_t n = 0; n < opts.per_gold; ++n) {
      Query q = gold;
      // Redraw mutants that still produce the gold output.
      for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        q = gold;
        std::vector<int> touched;
        for (int k = 0; k < opts.mutations; ++k) {
          QueryStructure s = extract_structure(q);
          std::vector<std::pair<int, std::vector<Constant>>> options;
          for (const auto& slot : s.slots) {
            if (std::find(touched.begin(), touched.end(), slot.id) != touched.end()) continue;
            auto domain = candidate_domain(slot, s, ctx, WhereHistory{});
            if (!domain.empty()) options.emplace_back(slot.id, std::move(domain));
          }
          if (options.empty()) break;
          auto& [id, domain] = options[pick(rng, options.size())];
          const Constant& c = domain[pick(rng, domain.size())];
          q = apply_mutation(s, Mutation::constant(id, s.assignment.at(id), c));
          touched.push_back(id);
        }
        if (!still_correct(q, db, expected)) break;
      }
      TaskRecord t;
      t.id = g.id + "-m" + std::to_string(n + 1);
      t.question = g.question;
      t.db_ref = g.db_ref;
      t.candidates = {print(q)};
      t.gold = g.gold;
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace sqlmend
