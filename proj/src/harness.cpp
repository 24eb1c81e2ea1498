#include "sqlmend/harness.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "sqlmend/errors.hpp"
#include "sqlmend/executor.hpp"
#include "sqlmend/mutation.hpp"
#include "sqlmend/parser.hpp"
#include "sqlmend/structure.hpp"
#include "sqlmend/text_distance.hpp"

namespace sqlmend {

namespace {

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw LoadError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Occurrences of `v` in the column a comparison's left-hand side names.
std::size_t frequency(const QueryStructure& s, const PlaceholderSlot& slot, const Database& db, const Value& v) {
  auto it = s.assignment.find(slot.lhs_slot);
  if (it == s.assignment.end()) return 0;
  ColumnRef ref;
  if (auto c = std::get_if<ColumnRef>(&it->second)) ref = *c;
  else if (auto e = std::get_if<SelectExpr>(&it->second)) ref = e->column;
  else return 0;
  if (ref.is_star()) return 0;
  std::size_t n = 0;
  for (const auto& slot2 : s.slots) {
    if (slot2.scope != slot.scope) continue;
    if (slot2.role != SlotRole::FromTable && slot2.role != SlotRole::JoinTable) continue;
    const auto& name = std::get<TableName>(s.assignment.at(slot2.id)).name;
    if (!ref.table.empty() && ref.table != name) continue;
    const TableDef* t = db.schema.find(name);
    if (!t) continue;
    auto col = t->column_index(ref.column);
    if (!col) continue;
    for (const auto& row : db.table(name).rows) {
      const Value& cell = row[*col];
      if (is_text(v) && is_text(cell)) {
        const auto& pat = std::get<std::string>(v);
        if (pat == std::get<std::string>(cell) || like_match(std::get<std::string>(cell), pat)) ++n;
      } else if (!is_null(cell) && values_equal(cell, v)) {
        ++n;
      }
    }
    break;
  }
  return n;
}

bool from_question(const Value& v, const std::vector<Value>& literals) {
  for (const auto& q : literals) {
    if (values_equal(q, v) && q.index() == v.index()) return true;
    if (is_text(q) && is_text(v) && "%" + std::get<std::string>(q) + "%" == std::get<std::string>(v)) return true;
  }
  return false;
}

struct Choice {
  Value value;
  bool question = false;
  std::size_t freq = 0;
};

nlohmann::json mutation_json(const Mutation& m) {
  if (m.kind == MutationKind::Constant)
    return {{"kind", "constant"},
            {"slot", m.slot_id},
            {"from", to_string(m.old_value)},
            {"to", to_string(m.new_value)}};
  nlohmann::json fills = nlohmann::json::object();
  for (const auto& [id, c] : m.fills) fills[std::to_string(id)] = to_string(c);
  return {{"kind", "structural"}, {"variant", m.edit ? to_string(m.edit->variant) : ""}, {"fills", fills}};
}

class DatabaseCache {
 public:
  explicit DatabaseCache(std::filesystem::path root) : root_(std::move(root)) {}

  std::shared_ptr<const Database> get(const std::string& ref) {
    auto it = cache_.find(ref);
    if (it != cache_.end()) return it->second;
    auto db = std::make_shared<const Database>(load_database(root_ / ref));
    cache_.emplace(ref, db);
    return db;
  }

 private:
  std::filesystem::path root_;
  std::map<std::string, std::shared_ptr<const Database>> cache_;
};

}  // namespace

// ---------------------------------------------------------------- tasks

nlohmann::json to_json(const TaskRecord& t) {
  nlohmann::json j = {{"id", t.id}, {"question", t.question}, {"db_ref", t.db_ref}, {"candidates", t.candidates}};
  if (t.gold) j["gold"] = *t.gold;
  if (t.expected_csv) {
    j["expected"] = *t.expected_csv;
    j["expected_ordered"] = t.expected_ordered;
  }
  return j;
}

TaskRecord task_from_json(const nlohmann::json& j) {
  TaskRecord t;
  t.id = j.at("id").get<std::string>();
  t.question = j.value("question", std::string());
  t.db_ref = j.at("db_ref").get<std::string>();
  t.candidates = j.at("candidates").get<std::vector<std::string>>();
  if (t.candidates.empty()) throw LoadError("task " + t.id + " has no candidates");
  if (j.contains("gold") && !j.at("gold").is_null()) t.gold = j.at("gold").get<std::string>();
  if (j.contains("expected") && !j.at("expected").is_null()) t.expected_csv = j.at("expected").get<std::string>();
  t.expected_ordered = j.value("expected_ordered", false);
  return t;
}

std::vector<TaskRecord> load_tasks(const std::filesystem::path& file) {
  try {
    auto j = nlohmann::json::parse(read_text(file));
    if (!j.is_array()) throw LoadError(file.string() + ": expected a JSON array of tasks");
    std::vector<TaskRecord> out;
    for (const auto& e : j) out.push_back(task_from_json(e));
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(file.string() + ": " + e.what());
  }
}

void save_tasks(const std::filesystem::path& file, const std::vector<TaskRecord>& tasks) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : tasks) j.push_back(to_json(t));
  std::ofstream out(file, std::ios::binary);
  if (!out) throw LoadError("cannot write " + file.string());
  out << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- examples

Relation generate_example(const Query& gold, const Database& db) {
  Relation r = execute(gold, db);
  r.ordered = !gold.order_by.empty();
  return r;
}

// ---------------------------------------------------------------- terminal filler

std::vector<Query> fill_terminals(const std::string& skeleton_sql, const std::string& question, const Database& db,
                                  std::size_t max_fills) {
  HoleyQuery hq = parse_with_holes(skeleton_sql);
  if (hq.holes.empty()) return {hq.query};
  QueryStructure s = extract_structure(hq.query);
  std::vector<int> literal_slots;
  for (const auto& slot : s.slots)
    if (slot.kind == ValueKind::Literal) literal_slots.push_back(slot.id);

  const auto literals = question_literals(question);
  MutationContext ctx(db, literals);
  const WhereHistory none;

  std::vector<int> hole_slots;
  std::vector<std::vector<Choice>> pools;
  bool any = false;
  for (std::size_t ordinal : hq.holes) {
    const int id = literal_slots.at(ordinal);
    const auto& slot = s.slot(id);
    // A LIMIT hole parses as 1, which would hide 1 from its own domain.
    QueryStructure open = s;
    open.assignment[id] = Value{};
    std::vector<Choice> pool;
    for (const auto& c : candidate_domain(slot, open, ctx, none)) {
      const Value& v = std::get<Value>(c);
      Choice ch{v, from_question(v, literals), 0};
      if (slot.role == SlotRole::PredicateRhsLiteral) ch.freq = frequency(s, slot, db, v);
      pool.push_back(std::move(ch));
    }
    // Domain order breaks ties.
    std::stable_sort(pool.begin(), pool.end(), [](const Choice& a, const Choice& b) {
      if (a.question != b.question) return a.question;
      return a.freq > b.freq;
    });
    if (pool.size() > max_fills) pool.resize(max_fills);
    if (pool.empty()) continue;
    any = true;
    hole_slots.push_back(id);
    pools.push_back(std::move(pool));
  }
  if (!any) throw std::invalid_argument("no candidate values for any hole");

  struct Fill {
    std::vector<std::size_t> pick;
    std::size_t db_sourced = 0;
    std::size_t rank_sum = 0;
  };
  std::vector<Fill> fills;
  std::vector<std::size_t> pick(pools.size(), 0);
  while (true) {
    Fill f{pick, 0, 0};
    for (std::size_t i = 0; i < pick.size(); ++i) {
      if (!pools[i][pick[i]].question) ++f.db_sourced;
      f.rank_sum += pick[i];
    }
    fills.push_back(std::move(f));
    std::size_t k = pick.size();
    while (k > 0 && ++pick[k - 1] == pools[k - 1].size()) {
      pick[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }
  std::stable_sort(fills.begin(), fills.end(), [](const Fill& a, const Fill& b) {
    if (a.db_sourced != b.db_sourced) return a.db_sourced < b.db_sourced;
    return a.rank_sum < b.rank_sum;
  });
  std::vector<Query> out;
  for (const auto& f : fills) {
    if (out.size() >= max_fills) break;
    auto assignment = s.assignment;
    for (std::size_t i = 0; i < f.pick.size(); ++i) assignment[hole_slots[i]] = pools[i][f.pick[i]].value;
    try {
      out.push_back(instantiate(s, assignment));
    } catch (const StructureError&) {
    }
  }
  return out;
}

// ---------------------------------------------------------------- corpus analysis

std::optional<std::size_t> gold_fill_rank(const std::vector<Query>& fills, const Query& gold, const Database& db) {
  const Relation expected = generate_example(gold, db);
  for (std::size_t i = 0; i < fills.size(); ++i) {
    try {
      if (outputs_match(execute(fills[i], db), expected)) return i + 1;
    } catch (const ExecutionError&) {
    }
  }
  return std::nullopt;
}

std::string CorpusStats::bucket_label(std::size_t bucket) {
  if (bucket >= bucket_count) return std::to_string(bucket_count * bucket_width) + "+";
  return std::to_string(bucket * bucket_width) + "-" + std::to_string(bucket * bucket_width + bucket_width - 1);
}

std::size_t CorpusStats::bucket_of(std::size_t distance) { return std::min(distance / bucket_width, bucket_count); }

nlohmann::json to_json(const CorpusStats& s) {
  nlohmann::json hist = nlohmann::json::array();
  for (std::size_t b = 0; b < s.histogram.size(); ++b)
    hist.push_back({{"range", CorpusStats::bucket_label(b)}, {"count", s.histogram[b]}});
  return {{"total", s.total},
          {"failing", s.failing},
          {"invalid", s.invalid},
          {"structure_match", s.structure_match},
          {"structure_match_rate", s.structure_match_rate},
          {"edit_distance_histogram", hist}};
}

CorpusStats analyze_corpus(const std::vector<TaskRecord>& tasks, const std::filesystem::path& db_root) {
  CorpusStats st;
  DatabaseCache dbs(db_root);
  for (const auto& t : tasks) {
    ++st.total;
    if (!t.gold || t.candidates.empty()) {
      ++st.invalid;
      continue;
    }
    try {
      auto db = dbs.get(t.db_ref);
      Query cand = parse(t.candidates.front());
      Query gold = parse(*t.gold);
      Relation expected = generate_example(gold, *db);
      Relation actual = execute(cand, *db);
      if (outputs_match(actual, expected)) continue;
      ++st.failing;
      auto d = edit_distance(normalize_for_distance(t.candidates.front()), normalize_for_distance(*t.gold));
      ++st.histogram[CorpusStats::bucket_of(d)];
      if (structures_equal(extract_structure(cand), extract_structure(gold))) ++st.structure_match;
    } catch (const ParseError&) {
      ++st.invalid;
    } catch (const ExecutionError&) {
      ++st.invalid;
    } catch (const LoadError&) {
      ++st.invalid;
    }
  }
  st.structure_match_rate = st.failing ? static_cast<double>(st.structure_match) / static_cast<double>(st.failing) : 0;
  return st;
}

// ---------------------------------------------------------------- repair runs

std::string solve_stage(const RepairOutcome& o) {
  if (!o.solved()) return "unsolved";
  if (o.from_fallback) return "fallback";
  if (o.status == RepairStatus::AlreadyCorrect) return o.stats.succeeded_candidate.value_or(1) == 1 ? "base" : "beam";
  return o.constant_mutations() <= 1 ? "k1" : "k2";
}

nlohmann::json run_repair(const std::vector<TaskRecord>& tasks, const RunOptions& opts) {
  static const std::vector<std::string> stages = {"base", "beam", "k1", "k2", "fallback"};
  std::map<std::string, std::size_t> counts;
  for (const auto& s : stages) counts[s] = 0;
  counts["unsolved"] = 0;
  std::size_t errors = 0;

  DatabaseCache dbs(opts.db_root);
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& t : tasks) {
    nlohmann::json r = {{"id", t.id}};
    try {
      auto db = dbs.get(t.db_ref);
      std::vector<Query> candidates;
      std::vector<int> positions;
      std::size_t unparseable = 0;
      for (std::size_t i = 0; i < t.candidates.size(); ++i) {
        try {
          candidates.push_back(parse(t.candidates[i]));
          positions.push_back(static_cast<int>(i + 1));
        } catch (const ParseError&) {
          ++unparseable;
        }
      }
      std::optional<Query> gold;
      if (t.gold) gold = parse(*t.gold);
      Relation expected;
      if (t.expected_csv) {
        expected = load_relation_csv(opts.db_root / *t.expected_csv, t.expected_ordered);
      } else if (gold) {
        expected = generate_example(*gold, *db);
      } else {
        throw LoadError("task has neither an expected output nor a gold query");
      }
      RepairTask task = make_task(candidates, db, expected, t.question);
      RepairOutcome o = candidates.empty() ? RepairOutcome{} : repair_beam(task, opts.search);
      if (candidates.empty()) o.reason = "no parseable candidates";
      if (!o.solved() && !opts.fallback.empty()) {
        RepairOutcome f = external_fallback(task, opts.fallback);
        f.stats.candidates_tried = o.stats.candidates_tried;
        f.stats.mutants_executed = o.stats.mutants_executed;
        f.stats.execution_errors = o.stats.execution_errors;
        f.stats.rounds = o.stats.rounds;
        f.stats.wall_ms += o.stats.wall_ms;
        if (f.solved() || o.status != RepairStatus::Timeout) o = std::move(f);
      }
      const std::string stage = solve_stage(o);
      ++counts[stage];
      r["status"] = to_string(o.status);
      r["stage"] = stage;
      r["reason"] = o.reason;
      r["candidate"] = o.stats.succeeded_candidate && !o.from_fallback
                           ? nlohmann::json(positions.at(static_cast<std::size_t>(*o.stats.succeeded_candidate - 1)))
                           : nlohmann::json(nullptr);
      r["repaired_query"] = o.repaired_query ? nlohmann::json(print(*o.repaired_query)) : nlohmann::json(nullptr);
      nlohmann::json muts = nlohmann::json::array();
      for (const auto& m : o.mutations) muts.push_back(mutation_json(m));
      r["mutations"] = muts;
      r["constant_mutations"] = o.constant_mutations();
      r["structural_mutations"] = o.structural_mutations();
      r["stats"] = {{"candidates_tried", o.stats.candidates_tried},
                    {"mutants_executed", o.stats.mutants_executed},
                    {"execution_errors", o.stats.execution_errors},
                    {"rounds", o.stats.rounds},
                    {"unparseable_candidates", unparseable}};
      if (opts.timing) r["stats"]["wall_ms"] = o.stats.wall_ms;
      if (gold && o.repaired_query) {
        try {
          r["matches_gold"] = outputs_match(execute(*o.repaired_query, *db), generate_example(*gold, *db));
        } catch (const ExecutionError&) {
          r["matches_gold"] = false;
        }
      }
    } catch (const std::exception& e) {
      ++errors;
      ++counts["unsolved"];
      r["status"] = "error";
      r["stage"] = "error";
      r["reason"] = e.what();
    }
    reports.push_back(std::move(r));
  }

  const double n = tasks.empty() ? 1.0 : static_cast<double>(tasks.size());
  nlohmann::json cumulative = nlohmann::json::object();
  std::size_t running = 0;
  nlohmann::json stage_counts = nlohmann::json::object();
  for (const auto& s : stages) {
    running += counts[s];
    cumulative[s] = static_cast<double>(running) / n;
    stage_counts[s] = counts[s];
  }
  stage_counts["unsolved"] = counts["unsolved"];
  nlohmann::json summary = {{"tasks", tasks.size()},
                            {"errors", errors},
                            {"solved", running},
                            {"stage_counts", stage_counts},
                            {"cumulative_rates", cumulative}};
  nlohmann::json config = {{"max_mutations", opts.search.max_mutations},
                           {"beam_width", opts.search.beam_width},
                           {"per_candidate_budget", opts.search.per_candidate_budget},
                           {"time_budget_ms", opts.search.time_budget_ms},
                           {"top_n", opts.search.use_top_n},
                           {"fallback", !opts.fallback.empty()}};
  return {{"config", config}, {"tasks", reports}, {"summary", summary}};
}

}  // namespace sqlmend
