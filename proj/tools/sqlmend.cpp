#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sqlmend/corpus.hpp"
#include "sqlmend/errors.hpp"
#include "sqlmend/harness.hpp"
#include "sqlmend/parser.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sqlmend::LoadError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw sqlmend::LoadError("cannot write " + out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutation-based repair of SQL queries against an input-output example"};
  app.require_subcommand(1);

  std::string tasks_file, db_root, fallback, out;
  int top_n = 10, max_mut = 2, beam_width = 10;
  std::int64_t budget_ms = 120000;
  std::size_t mutant_budget = 200000;
  bool timing = false;
  auto* repair = app.add_subcommand("repair", "Repair every task of a tasks.json file");
  repair->add_option("tasks", tasks_file, "tasks.json")->required()->check(CLI::ExistingFile);
  repair->add_option("--db-root", db_root, "Directory holding the task databases (default: next to tasks.json)");
  repair->add_option("--top-n", top_n, "Beam candidates to try")->check(CLI::PositiveNumber);
  repair->add_option("--max-mut", max_mut, "Constant mutations per repair")->check(CLI::IsMember({1, 2}));
  repair->add_option("--beam-width", beam_width, "Failed mutants promoted per round")->check(CLI::NonNegativeNumber);
  repair->add_option("--budget-ms", budget_ms, "Wall-clock budget per task; 0 disables it")
      ->check(CLI::NonNegativeNumber);
  repair->add_option("--mutant-budget", mutant_budget, "Executed mutants per candidate")->check(CLI::PositiveNumber);
  repair->add_option("--fallback", fallback, "Synthesizer command (default: $SQLMEND_FALLBACK_CMD)");
  repair->add_flag("--timing", timing, "Include wall-clock times in the report");
  repair->add_option("--out", out, "Report path (default: stdout)");

  std::string analyze_file, analyze_root, analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Edit-distance and structure statistics of failing candidates");
  analyze->add_option("tasks", analyze_file, "tasks.json")->required()->check(CLI::ExistingFile);
  analyze->add_option("--db-root", analyze_root, "Directory holding the task databases");
  analyze->add_option("--out", analyze_out, "Statistics path (default: stdout)");

  std::string query_file, db_dir, example_out;
  auto* gen = app.add_subcommand("gen-example", "Run a gold query and write its output as CSV");
  gen->add_option("query", query_file, "query.sql")->required()->check(CLI::ExistingFile);
  gen->add_option("db", db_dir, "Database directory")->required()->check(CLI::ExistingDirectory);
  gen->add_option("--out", example_out, "CSV path (default: stdout)");

  std::string skeleton_file, question_file, fill_db, fill_gold;
  std::size_t max_fills = 10;
  auto* fill = app.add_subcommand("fill-terminals", "Fill the ? literals of a query skeleton");
  fill->add_option("skeleton", skeleton_file, "skeleton.sql")->required()->check(CLI::ExistingFile);
  fill->add_option("question", question_file, "question.txt")->required()->check(CLI::ExistingFile);
  fill->add_option("db", fill_db, "Database directory")->required()->check(CLI::ExistingDirectory);
  fill->add_option("--max", max_fills, "Fills to print")->check(CLI::PositiveNumber);
  fill->add_option("--gold", fill_gold, "Gold query file; reports the rank of the first fill matching its output")
      ->check(CLI::ExistingFile);

  std::string gold_file, corpus_root, corpus_out;
  sqlmend::CorpusOptions corpus;
  auto* gen_corpus = app.add_subcommand("gen-corpus", "Make broken-query tasks by mutating gold queries");
  gen_corpus->add_option("golds", gold_file, "tasks.json with gold queries")->required()->check(CLI::ExistingFile);
  gen_corpus->add_option("--db-root", corpus_root, "Directory holding the task databases");
  gen_corpus->add_option("--per-gold", corpus.per_gold, "Tasks per gold query")->check(CLI::PositiveNumber);
  gen_corpus->add_option("--mutations", corpus.mutations, "Constant mutations per task")->check(CLI::PositiveNumber);
  gen_corpus->add_option("--seed", corpus.seed, "Random seed");
  gen_corpus->add_option("--out", corpus_out, "tasks.json path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*repair) {
      sqlmend::RunOptions opts;
      opts.search.max_mutations = max_mut;
      opts.search.beam_width = beam_width;
      opts.search.use_top_n = top_n;
      opts.search.time_budget_ms = budget_ms;
      opts.search.per_candidate_budget = mutant_budget;
      opts.db_root = db_root.empty() ? std::filesystem::path(tasks_file).parent_path() : std::filesystem::path(db_root);
      opts.fallback = fallback.empty() ? sqlmend::fallback_command_from_env() : fallback;
      opts.timing = timing;
      auto report = sqlmend::run_repair(sqlmend::load_tasks(tasks_file), opts);
      emit(report.dump(2) + "\n", out);
      const auto& s = report["summary"];
      std::cerr << "solved " << s["solved"] << "/" << s["tasks"] << "\n";
    } else if (*analyze) {
      std::filesystem::path root =
          analyze_root.empty() ? std::filesystem::path(analyze_file).parent_path() : std::filesystem::path(analyze_root);
      auto stats = sqlmend::analyze_corpus(sqlmend::load_tasks(analyze_file), root);
      emit(sqlmend::to_json(stats).dump(2) + "\n", analyze_out);
    } else if (*gen) {
      auto db = sqlmend::load_database(db_dir);
      auto rel = sqlmend::generate_example(sqlmend::parse(slurp(query_file)), db);
      emit(sqlmend::write_csv(rel), example_out);
    } else if (*gen_corpus) {
      std::filesystem::path root =
          corpus_root.empty() ? std::filesystem::path(gold_file).parent_path() : std::filesystem::path(corpus_root);
      auto tasks = sqlmend::inverse_mutation_corpus(sqlmend::load_tasks(gold_file), root, corpus);
      nlohmann::json j = nlohmann::json::array();
      for (const auto& t : tasks) j.push_back(sqlmend::to_json(t));
      emit(j.dump(2) + "\n", corpus_out);
    } else if (*fill) {
      auto db = sqlmend::load_database(fill_db);
      auto fills = sqlmend::fill_terminals(slurp(skeleton_file), slurp(question_file), db, max_fills);
      for (const auto& q : fills) std::cout << sqlmend::print(q) << "\n";
      if (!fill_gold.empty()) {
        auto rank = sqlmend::gold_fill_rank(fills, sqlmend::parse(slurp(fill_gold)), db);
        std::cerr << "gold match: " << (rank ? "rank " + std::to_string(*rank) : std::string("none")) << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
