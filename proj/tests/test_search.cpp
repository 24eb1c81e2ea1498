#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "oracle.hpp"
#include "sqlmend/executor.hpp"
#include "sqlmend/harness.hpp"
#include "sqlmend/parser.hpp"
#include "sqlmend/search.hpp"

using namespace sqlmend;

namespace {

std::shared_ptr<const Database> flights() {
  static const auto db = std::make_shared<const Database>(load_database(std::string(SQLMEND_SEED_DIR) + "/flights"));
  return db;
}

const char* kGold =
    "SELECT airlines.name, routes.alid FROM routes JOIN airlines ON routes.alid = airlines.alid "
    "GROUP BY airlines.name ORDER BY COUNT(*) DESC LIMIT 1";

RepairTask task_for(const std::vector<std::string>& candidates, const std::string& gold, const std::string& question) {
  std::vector<Query> qs;
  for (const auto& c : candidates) qs.push_back(parse(c));
  return make_task(std::move(qs), flights(), generate_example(parse(gold), *flights()), question);
}

Value I(std::int64_t v) { return Value{v}; }
Value S(const char* v) { return Value{std::string(v)}; }

}  // namespace

TEST(Jaccard, Extremes) {
  std::vector<Value> a = {I(1), S("x"), Value{}};
  EXPECT_DOUBLE_EQ(jaccard(a, a), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(a, {I(2), S("y")}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard({}, {}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(a, {}), 0.0);
}

TEST(Jaccard, Multiplicity) {
  EXPECT_DOUBLE_EQ(jaccard({I(1), I(1), I(2)}, {I(1), I(2), I(2)}), 0.5);
  EXPECT_DOUBLE_EQ(jaccard({I(1), I(1)}, {Value{1.0}}), 0.5);
}

TEST(Jaccard, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 12), pick(0, 6);
  auto draw = [&] {
    std::vector<Value> v;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      int k = pick(rng);
      if (k == 0) v.push_back(Value{});
      else if (k < 4) v.push_back(I(k));
      else if (k == 4) v.push_back(Value{1.0});
      else v.push_back(S(k == 5 ? "a" : "b"));
    }
    return v;
  };
  for (int i = 0; i < 1000; ++i) {
    auto m = draw(), u = draw();
    ASSERT_NEAR(jaccard(m, u), oracle::jaccard_bruteforce(m, u), 1e-12);
  }
}

TEST(Search, SingleConstantRepair) {
  auto task = task_for({"SELECT rid, distance FROM routes ORDER BY distance ASC LIMIT 3"},
                       "SELECT rid, distance FROM routes ORDER BY distance DESC LIMIT 3", "3 longest routes");
  SearchConfig cfg;
  cfg.max_mutations = 1;
  auto o = repair_beam(task, cfg);
  ASSERT_EQ(o.status, RepairStatus::Repaired);
  EXPECT_EQ(print(*o.repaired_query), "SELECT rid, distance FROM routes ORDER BY distance DESC LIMIT 3");
  EXPECT_EQ(o.constant_mutations(), 1);
  EXPECT_EQ(o.stats.succeeded_candidate, 1);
}

TEST(Search, AlreadyCorrectCandidateWins) {
  auto task = task_for({"SELECT name FROM airlines", kGold}, kGold, "");
  auto o = repair_beam(task, SearchConfig{});
  EXPECT_EQ(o.status, RepairStatus::AlreadyCorrect);
  EXPECT_EQ(o.stats.succeeded_candidate, 2);
  EXPECT_TRUE(o.mutations.empty());
}

TEST(Search, RepairsLaterCandidate) {
  std::vector<std::string> beam(10, "SELECT name, city FROM airports");
  beam[1] = "SELECT name FROM airlines WHERE country = 'USA'";
  auto task = task_for(beam, "SELECT name FROM airlines WHERE country = 'Chile'", "");
  SearchConfig cfg;
  cfg.max_mutations = 1;
  auto o = repair_beam(task, cfg);
  ASSERT_EQ(o.status, RepairStatus::Repaired);
  EXPECT_EQ(o.stats.succeeded_candidate, 2);
  EXPECT_EQ(print(*o.repaired_query), "SELECT name FROM airlines WHERE country = 'Chile'");
}

TEST(Search, EmptyExpectedOutput) {
  auto task = task_for({"SELECT name FROM airlines"}, "SELECT name FROM airlines", "");
  task.expected.rows.clear();
  task.expected.columns = {"a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "m", "n", "o", "p", "q"};
  auto o = repair_beam(task, SearchConfig{});
  EXPECT_EQ(o.status, RepairStatus::Exhausted);
}

TEST(Search, TopNLimitsCandidates) {
  auto task = task_for({"SELECT name FROM airlines", kGold}, kGold, "");
  SearchConfig cfg;
  cfg.use_top_n = 1;
  cfg.max_mutations = 1;
  auto o = repair_beam(task, cfg);
  EXPECT_FALSE(o.solved());
  EXPECT_EQ(o.stats.candidates_tried, 1u);
}

TEST(Search, StructuralRepairNeedsTwoConstants) {
  const std::string broken =
      "SELECT airlines.name FROM routes JOIN airlines ON routes.alid = airlines.alid "
      "GROUP BY airlines.name ORDER BY COUNT(*) ASC LIMIT 3";
  const std::string q = "Which airline operates the most routes? Give its name and id.";
  SearchConfig k1;
  k1.max_mutations = 1;
  EXPECT_FALSE(repair_beam(task_for({broken}, kGold, q), k1).solved());
  auto o = repair_beam(task_for({broken}, kGold, q), SearchConfig{});
  ASSERT_EQ(o.status, RepairStatus::Repaired);
  EXPECT_EQ(o.structural_mutations(), 1);
  EXPECT_EQ(o.constant_mutations(), 2);
  auto out = execute(*o.repaired_query, *flights());
  EXPECT_EQ(out.rows, (std::vector<Row>{{S("Polar Air"), I(16)}}));
}

TEST(Search, MutantBudgetStopsSearch) {
  auto task = task_for({"SELECT airlines.name FROM routes JOIN airlines ON routes.alid = airlines.alid "
                        "GROUP BY airlines.name ORDER BY COUNT(*) ASC LIMIT 3"},
                       kGold, "");
  SearchConfig cfg;
  cfg.per_candidate_budget = 25;
  auto o = repair_beam(task, cfg);
  EXPECT_EQ(o.status, RepairStatus::Exhausted);
  EXPECT_LE(o.stats.mutants_executed, 25u);
}

TEST(Search, TimeBudget) {
  auto task = task_for({"SELECT airlines.name FROM routes JOIN airlines ON routes.alid = airlines.alid "
                        "GROUP BY airlines.name ORDER BY COUNT(*) ASC LIMIT 3"},
                       "SELECT name FROM airports WHERE elevation > 500", "");
  SearchConfig cfg;
  cfg.time_budget_ms = 1;
  EXPECT_EQ(repair_beam(task, cfg).status, RepairStatus::Timeout);
}

TEST(Search, ZeroBeamIsSingleRound) {
  auto task = task_for({"SELECT rid FROM routes WHERE distance > 9000 ORDER BY rid ASC LIMIT 2"},
                       "SELECT rid FROM routes WHERE distance > 1000 ORDER BY rid ASC LIMIT 3", "");
  SearchConfig cfg;
  cfg.beam_width = 0;
  auto o = repair_beam(task, cfg);
  EXPECT_FALSE(o.solved());
  EXPECT_EQ(o.stats.rounds, 1u);
  cfg.beam_width = 10;
  EXPECT_TRUE(repair_beam(task, cfg).solved());
}

TEST(Fallback, NoCommand) {
  auto o = external_fallback(task_for({"SELECT name FROM airlines"}, kGold, ""), "");
  EXPECT_FALSE(o.solved());
  EXPECT_EQ(o.reason, "no fallback");
}

TEST(Fallback, FailureModes) {
  auto task = task_for({"SELECT name FROM airlines"}, kGold, "");
  EXPECT_EQ(external_fallback(task, "exit 3").reason, "fallback failed: exit status 3");
  EXPECT_EQ(external_fallback(task, "echo 'SELECT FROM'").reason.rfind("fallback emitted invalid SQL", 0), 0u);
  EXPECT_EQ(external_fallback(task, "echo 'SELECT nope FROM airlines'").reason.rfind("fallback query failed to execute", 0), 0u);
  EXPECT_EQ(external_fallback(task, "echo 'SELECT name FROM airlines'").reason, "fallback output mismatch");
}

TEST(Fallback, ReadsTaskFromStdin) {
  auto task = task_for({"SELECT name FROM airlines"}, kGold, "Which airline operates the most routes?");
  const std::string cmd = std::string("grep -q 'most routes' && echo \"") + kGold + "\"";
  auto o = external_fallback(task, cmd);
  EXPECT_EQ(o.status, RepairStatus::Repaired);
  EXPECT_TRUE(o.from_fallback);
}

TEST(Fallback, Payload) {
  auto task = task_for({"SELECT name FROM airlines"}, kGold, "q?");
  auto j = nlohmann::json::parse(fallback_payload(task));
  EXPECT_EQ(j.at("question"), "q?");
  EXPECT_EQ(j.at("expected").at("rows").size(), 1u);
  EXPECT_TRUE(j.at("tables").contains("routes"));
  EXPECT_EQ(j.at("schema").at("tables").size(), 3u);
}
