#include "sqlmend/search.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "sqlmend/errors.hpp"
#include "sqlmend/executor.hpp"
#include "sqlmend/json_io.hpp"
#include "sqlmend/parser.hpp"
#include "sqlmend/structure.hpp"

namespace sqlmend {

namespace {

using Clock = std::chrono::steady_clock;

int count_kind(const std::vector<Mutation>& path, MutationKind kind) {
  return static_cast<int>(std::count_if(path.begin(), path.end(), [&](const Mutation& m) { return m.kind == kind; }));
}

enum class Probe { Match, Fail, Error, Duplicate, Stop };

/// Search state for one candidate query.
class Searcher {
 public:
  Searcher(const RepairTask& task, const SearchConfig& cfg, const MutationContext& ctx,
           std::optional<Clock::time_point> deadline, SearchStats& stats)
      : task_(task), cfg_(cfg), ctx_(ctx), deadline_(deadline), stats_(stats) {}

  struct Expansion {
    std::optional<Query> match;
    std::vector<Mutation> match_path;
    std::vector<ScoredMutant> failed;
  };

  bool stopped() const { return stop_; }
  bool timed_out() const { return timed_out_; }

  void mark_seen(const Query& q) { seen_.insert(print(q)); }

  /// One round of single mutations over `seed`, reached from the candidate by `prefix`.
  Expansion expand(const Query& seed, const std::vector<Mutation>& prefix) {
    Expansion out;
    const QueryStructure s = extract_structure(seed);
    const int constants = count_kind(prefix, MutationKind::Constant);
    const bool structural_used = count_kind(prefix, MutationKind::Structural) > 0;
    const bool can_mutate = constants < cfg_.max_mutations;

    auto visit = [&](const Query& q, std::vector<Mutation> path) -> bool {
      Relation result;
      Probe p = probe(q, result);
      if (p == Probe::Match) {
        out.match = q;
        out.match_path = std::move(path);
        return false;
      }
      if (p == Probe::Stop) return false;
      if (p == Probe::Fail) {
        ScoredMutant sm;
        sm.path = std::move(path);
        sm.score = output_similarity(result, task_.expected);
        sm.order = order_++;
        last_rows_ = result.row_count();
        out.failed.push_back(std::move(sm));
      }
      last_probe_ = p;
      return true;
    };

    auto with = [&](Mutation m) {
      std::vector<Mutation> path = prefix;
      path.push_back(std::move(m));
      return path;
    };

    if (can_mutate && !constant_round(s, prefix, visit)) return out;

    if (structural_used) return out;
    Relation actual;
    try {
      actual = execute(seed, *task_.db);
    } catch (const ExecutionError&) {
      return out;
    }
    std::vector<std::shared_ptr<const StructuralEdit>> edits;
    for (auto& e : structural_variants(s, actual, task_.expected))
      edits.push_back(std::make_shared<const StructuralEdit>(std::move(e)));

    for (const auto& edit : edits) {
      bool go = true;
      enumerate_fills(*edit, ctx_, [&](const std::map<int, Constant>& fills) {
        Mutation m = Mutation::structural(edit, fills);
        Query q;
        try {
          q = apply_mutation(s, m);
        } catch (const StructureError&) {
          return true;
        }
        go = visit(q, with(std::move(m)));
        return go;
      });
      if (!go) return out;
    }
    return out;
  }

 private:
  /// Every slot (except `skip`) with every domain value. False once the
  /// search should stop.
  template <typename Visit>
  bool constant_round(const QueryStructure& s, const std::vector<Mutation>& prefix, Visit& visit,
                      const std::vector<int>& skip = {}) {
    for (const auto& slot : s.slots) {
      if (std::find(skip.begin(), skip.end(), slot.id) != skip.end()) continue;
      WhereHistory history;
      const bool tracked = history_applies(s, slot.id);
      const Constant& old = s.assignment.at(slot.id);
      for (const auto& c : candidate_domain(slot, s, ctx_, history)) {
        if (tracked && !history.admits(slot.id, c)) continue;
        Mutation m = Mutation::constant(slot.id, old, c);
        Query q;
        try {
          q = apply_mutation(s, m);
        } catch (const StructureError&) {
          continue;
        }
        std::vector<Mutation> path = prefix;
        path.push_back(std::move(m));
        last_probe_ = Probe::Error;
        if (!visit(q, std::move(path))) return false;
        if (tracked && last_probe_ == Probe::Fail)
          history = update_history(history, s, slot.id, c, last_rows_, task_.expected.row_count());
      }
    }
    return true;
  }

  Probe probe(const Query& q, Relation& result) {
    if (stop_) return Probe::Stop;
    if (!seen_.insert(print(q)).second) return Probe::Duplicate;
    if (executed_ >= cfg_.per_candidate_budget) {
      stop_ = true;
      return Probe::Stop;
    }
    if (deadline_ && (executed_ % 32 == 0) && Clock::now() >= *deadline_) {
      stop_ = true;
      timed_out_ = true;
      return Probe::Stop;
    }
    ++executed_;
    ++stats_.mutants_executed;
    try {
      result = execute(q, *task_.db);
    } catch (const ExecutionError&) {
      ++stats_.execution_errors;
      return Probe::Error;
    }
    return outputs_match(result, task_.expected) ? Probe::Match : Probe::Fail;
  }

  const RepairTask& task_;
  const SearchConfig& cfg_;
  const MutationContext& ctx_;
  std::optional<Clock::time_point> deadline_;
  SearchStats& stats_;
  std::unordered_set<std::string> seen_;
  std::size_t executed_ = 0;
  std::size_t order_ = 0;
  std::size_t last_rows_ = 0;
  Probe last_probe_ = Probe::Error;
  bool stop_ = false;
  bool timed_out_ = false;
};

bool expandable(const ScoredMutant& m, const SearchConfig& cfg) {
  return m.constant_mutations() < cfg.max_mutations || m.structural_mutations() == 0;
}

void rank(std::vector<ScoredMutant>& pool) {
  std::sort(pool.begin(), pool.end(), [](const ScoredMutant& a, const ScoredMutant& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.structural_mutations() != b.structural_mutations()) return a.structural_mutations() < b.structural_mutations();
    return a.order < b.order;
  });
}

/// Replays a mutation path from the candidate query.
Query replay(const Query& root, const std::vector<Mutation>& path) {
  Query q = root;
  for (const auto& m : path) q = apply_mutation(extract_structure(q), m);
  return q;
}

std::optional<Clock::time_point> deadline_for(const SearchConfig& cfg, Clock::time_point start) {
  if (cfg.time_budget_ms <= 0) return std::nullopt;
  return start + std::chrono::milliseconds(cfg.time_budget_ms);
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool matches(const Query& q, const RepairTask& task) {
  try {
    return outputs_match(execute(q, *task.db), task.expected);
  } catch (const ExecutionError&) {
    return false;
  }
}

RepairOutcome run_rounds(const Query& query, const RepairTask& task, const SearchConfig& cfg,
                         const MutationContext& ctx, std::optional<Clock::time_point> deadline, SearchStats& stats,
                         std::vector<ScoredMutant>* first_round) {
  RepairOutcome out;
  Searcher searcher(task, cfg, ctx, deadline, stats);
  searcher.mark_seen(query);
  struct Seed {
    Query query;
    std::vector<Mutation> path;
  };
  std::vector<Seed> frontier{{query, {}}};
  for (int round = 0; round <= cfg.max_mutations && !frontier.empty(); ++round) {
    ++stats.rounds;
    std::vector<ScoredMutant> pool;
    for (const auto& seed : frontier) {
      auto ex = searcher.expand(seed.query, seed.path);
      if (ex.match) {
        out.status = RepairStatus::Repaired;
        out.repaired_query = std::move(ex.match);
        out.mutations = std::move(ex.match_path);
        return out;
      }
      if (searcher.stopped()) break;
      for (auto& f : ex.failed) pool.push_back(std::move(f));
    }
    if (first_round && round == 0) *first_round = pool;
    if (searcher.stopped()) break;
    if (cfg.beam_width <= 0) break;
    pool.erase(std::remove_if(pool.begin(), pool.end(), [&](const ScoredMutant& m) { return !expandable(m, cfg); }),
               pool.end());
    rank(pool);
    if (pool.size() > static_cast<std::size_t>(cfg.beam_width)) pool.resize(static_cast<std::size_t>(cfg.beam_width));
    frontier.clear();
    for (auto& m : pool) frontier.push_back({replay(query, m.path), std::move(m.path)});
  }
  if (searcher.timed_out()) {
    out.status = RepairStatus::Timeout;
    out.reason = "time budget exhausted";
  } else if (searcher.stopped()) {
    out.status = RepairStatus::Exhausted;
    out.reason = "mutant budget exhausted";
  } else {
    out.status = RepairStatus::Exhausted;
    out.reason = "search space exhausted";
  }
  return out;
}

}  // namespace

RepairTask make_task(std::vector<Query> candidates, std::shared_ptr<const Database> db, Relation expected,
                     std::string question) {
  RepairTask t;
  t.candidates = std::move(candidates);
  t.db = std::move(db);
  t.expected = std::move(expected);
  t.question_literals = question_literals(question);
  t.question = std::move(question);
  return t;
}

std::string to_string(RepairStatus s) {
  switch (s) {
    case RepairStatus::AlreadyCorrect: return "already-correct";
    case RepairStatus::Repaired: return "repaired";
    case RepairStatus::Exhausted: return "exhausted";
    case RepairStatus::Timeout: return "timeout";
  }
  return "unknown";
}

int RepairOutcome::constant_mutations() const { return count_kind(mutations, MutationKind::Constant); }
int RepairOutcome::structural_mutations() const { return count_kind(mutations, MutationKind::Structural); }
int ScoredMutant::constant_mutations() const { return count_kind(path, MutationKind::Constant); }
int ScoredMutant::structural_mutations() const { return count_kind(path, MutationKind::Structural); }

double jaccard(const std::vector<Value>& m, const std::vector<Value>& u) {
  if (m.empty() && u.empty()) return 1.0;
  std::vector<Value> a = m, b = u;
  std::sort(a.begin(), a.end(), ValueLess{});
  std::sort(b.begin(), b.end(), ValueLess{});
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    int c = compare_values(a[i], b[j]);
    if (c == 0) {
      ++common;
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

double output_similarity(const Relation& actual, const Relation& expected) {
  return jaccard(multiset_values(actual), multiset_values(expected));
}

SingleResult single_mutation_repair(const Query& query, const RepairTask& task, const SearchConfig& cfg) {
  SingleResult res;
  const auto start = Clock::now();
  res.outcome.stats.candidates_tried = 1;
  if (matches(query, task)) {
    res.outcome.status = RepairStatus::AlreadyCorrect;
    res.outcome.repaired_query = query;
    res.outcome.stats.succeeded_candidate = 1;
    return res;
  }
  SearchConfig one = cfg;
  one.beam_width = 0;
  MutationContext ctx(*task.db, task.question_literals);
  SearchStats stats;
  RepairOutcome o = run_rounds(query, task, one, ctx, deadline_for(cfg, start), stats, &res.failed);
  stats.candidates_tried = 1;
  if (o.solved()) stats.succeeded_candidate = 1;
  stats.wall_ms = elapsed_ms(start);
  o.stats = stats;
  res.outcome = std::move(o);
  return res;
}

RepairOutcome multi_mutation_repair(const Query& query, const RepairTask& task, const SearchConfig& cfg) {
  const auto start = Clock::now();
  RepairOutcome out;
  out.stats.candidates_tried = 1;
  if (matches(query, task)) {
    out.status = RepairStatus::AlreadyCorrect;
    out.repaired_query = query;
    out.stats.succeeded_candidate = 1;
    return out;
  }
  MutationContext ctx(*task.db, task.question_literals);
  SearchStats stats;
  out = run_rounds(query, task, cfg, ctx, deadline_for(cfg, start), stats, nullptr);
  stats.candidates_tried = 1;
  if (out.solved()) stats.succeeded_candidate = 1;
  stats.wall_ms = elapsed_ms(start);
  out.stats = stats;
  return out;
}

RepairOutcome repair_beam(const RepairTask& task, const SearchConfig& cfg) {
  const auto start = Clock::now();
  const auto deadline = deadline_for(cfg, start);
  RepairOutcome out;
  const std::size_t n = std::min(task.candidates.size(), static_cast<std::size_t>(std::max(cfg.use_top_n, 0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (matches(task.candidates[i], task)) {
      out.status = RepairStatus::AlreadyCorrect;
      out.repaired_query = task.candidates[i];
      out.stats.candidates_tried = i + 1;
      out.stats.succeeded_candidate = static_cast<int>(i + 1);
      out.stats.wall_ms = elapsed_ms(start);
      return out;
    }
  }
  MutationContext ctx(*task.db, task.question_literals);
  SearchStats stats;
  bool timed_out = false;
  for (std::size_t i = 0; i < n; ++i) {
    stats.candidates_tried = i + 1;
    RepairOutcome o = run_rounds(task.candidates[i], task, cfg, ctx, deadline, stats, nullptr);
    if (o.solved()) {
      stats.succeeded_candidate = static_cast<int>(i + 1);
      stats.wall_ms = elapsed_ms(start);
      o.stats = stats;
      return o;
    }
    if (o.status == RepairStatus::Timeout) {
      timed_out = true;
      break;
    }
  }
  out.status = timed_out ? RepairStatus::Timeout : RepairStatus::Exhausted;
  out.reason = timed_out ? "time budget exhausted" : n == 0 ? "no candidates" : "no repair found";
  stats.wall_ms = elapsed_ms(start);
  out.stats = stats;
  return out;
}

std::string fallback_command_from_env() {
  const char* v = std::getenv("SQLMEND_FALLBACK_CMD");
  return v ? std::string(v) : std::string();
}

std::string fallback_payload(const RepairTask& task) {
  nlohmann::json tables = nlohmann::json::object();
  for (const auto& t : task.db->schema.tables) tables[t.name] = relation_to_json(task.db->table(t.name));
  nlohmann::json doc = {{"schema", schema_to_json(task.db->schema)},
                        {"tables", std::move(tables)},
                        {"expected", relation_to_json(task.expected)},
                        {"question", task.question}};
  return doc.dump();
}

RepairOutcome external_fallback(const RepairTask& task, const std::string& command) {
  RepairOutcome out;
  out.status = RepairStatus::Exhausted;
  out.from_fallback = true;
  if (command.empty()) {
    out.reason = "no fallback";
    return out;
  }
  const auto start = Clock::now();
  auto fail = [&](std::string reason) {
    out.reason = std::move(reason);
    out.stats.wall_ms = elapsed_ms(start);
    return out;
  };

  std::string tmpl = (std::filesystem::temp_directory_path() / "sqlmend-XXXXXX").string();
  int fd = mkstemp(tmpl.data());
  if (fd < 0) return fail("fallback failed: cannot create input file");
  close(fd);
  {
    std::ofstream f(tmpl, std::ios::binary);
    f << fallback_payload(task);
  }
  std::string full = "(" + command + ") < '" + tmpl + "'";
  std::string output;
  int status = -1;
  if (FILE* pipe = popen(full.c_str(), "r")) {
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
    status = pclose(pipe);
  }
  std::filesystem::remove(tmpl);
  if (status == -1) return fail("fallback failed: cannot start command");
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    return fail("fallback failed: exit status " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));

  Query q;
  try {
    q = parse(output);
  } catch (const ParseError& e) {
    return fail(std::string("fallback emitted invalid SQL: ") + e.what());
  }
  Relation result;
  try {
    result = execute(q, *task.db);
  } catch (const ExecutionError& e) {
    return fail(std::string("fallback query failed to execute: ") + e.what());
  }
  if (!outputs_match(result, task.expected)) return fail("fallback output mismatch");
  out.status = RepairStatus::Repaired;
  out.repaired_query = std::move(q);
  out.stats.wall_ms = elapsed_ms(start);
  return out;
}

}  // namespace sqlmend
