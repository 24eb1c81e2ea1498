#include <memory>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sqlmend/errors.hpp"
#include "sqlmend/executor.hpp"
#include "sqlmend/harness.hpp"
#include "sqlmend/parser.hpp"
#include "sqlmend/search.hpp"
#include "sqlmend/structure.hpp"
#include "sqlmend/text_distance.hpp"

namespace py = pybind11;
using namespace sqlmend;

namespace {

py::object to_py(const Value& v) {
  if (auto i = std::get_if<std::int64_t>(&v)) return py::int_(*i);
  if (auto d = std::get_if<double>(&v)) return py::float_(*d);
  if (auto s = std::get_if<std::string>(&v)) return py::str(*s);
  return py::none();
}

Value from_py(const py::handle& o) {
  if (o.is_none()) return Value{};
  if (py::isinstance<py::bool_>(o)) throw py::type_error("booleans are not SQL values");
  if (py::isinstance<py::int_>(o)) return Value{o.cast<std::int64_t>()};
  if (py::isinstance<py::float_>(o)) return Value{o.cast<double>()};
  if (py::isinstance<py::str>(o)) return Value{o.cast<std::string>()};
  throw py::type_error("expected None, int, float or str");
}

std::vector<Value> values_from_py(const py::iterable& items) {
  std::vector<Value> out;
  for (auto o : items) out.push_back(from_py(o));
  return out;
}

py::dict relation_to_py(const Relation& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::list cells;
    for (const auto& v : row) cells.append(to_py(v));
    rows.append(py::tuple(cells));
  }
  py::dict d;
  d["columns"] = r.columns;
  d["rows"] = rows;
  d["ordered"] = r.ordered;
  return d;
}

Relation relation_from_py(const py::dict& d) {
  Relation r;
  r.columns = d["columns"].cast<std::vector<std::string>>();
  for (auto row : d["rows"]) r.rows.push_back(values_from_py(py::reinterpret_borrow<py::iterable>(row)));
  if (d.contains("ordered")) r.ordered = d["ordered"].cast<bool>();
  return r;
}

py::dict outcome_to_py(const RepairOutcome& o) {
  py::dict d;
  d["status"] = to_string(o.status);
  d["stage"] = solve_stage(o);
  d["reason"] = o.reason;
  d["repaired_query"] = o.repaired_query ? py::object(py::str(print(*o.repaired_query))) : py::object(py::none());
  py::list muts;
  for (const auto& m : o.mutations) muts.append(describe(m));
  d["mutations"] = muts;
  d["constant_mutations"] = o.constant_mutations();
  d["structural_mutations"] = o.structural_mutations();
  d["candidate"] = o.stats.succeeded_candidate ? py::object(py::int_(*o.stats.succeeded_candidate)) : py::object(py::none());
  d["mutants_executed"] = o.stats.mutants_executed;
  d["rounds"] = o.stats.rounds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mutation-based SQL repair";

  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<ExecutionError> execution_error(m, "ExecutionError", PyExc_RuntimeError);
  static py::exception<LoadError> load_error(m, "LoadError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const ExecutionError& e) {
      execution_error(e.what());
    } catch (const LoadError& e) {
      load_error(e.what());
    } catch (const StructureError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("canonical", [](const std::string& sql) { return print(parse(sql)); }, py::arg("sql"),
        "Parses a query and prints it in canonical form.");
  m.def("skeleton", [](const std::string& sql) { return print_skeleton(extract_structure(parse(sql))); },
        py::arg("sql"), "Query skeleton with numbered constant slots.");
  m.def(
      "same_structure",
      [](const std::string& a, const std::string& b) {
        return structures_equal(extract_structure(parse(a)), extract_structure(parse(b)));
      },
      py::arg("a"), py::arg("b"));
  m.def("normalize_for_distance", [](const std::string& s) { return normalize_for_distance(s); }, py::arg("text"));
  m.def("edit_distance", [](const std::string& a, const std::string& b) { return edit_distance(a, b); },
        py::arg("a"), py::arg("b"));
  m.def(
      "jaccard", [](const py::iterable& a, const py::iterable& b) { return jaccard(values_from_py(a), values_from_py(b)); },
      py::arg("a"), py::arg("b"), "Multiset Jaccard similarity of two value collections.");

  py::class_<Database, std::shared_ptr<Database>>(m, "Database")
      .def(py::init([](const std::string& dir) { return std::make_shared<Database>(load_database(dir)); }),
           py::arg("path"))
      .def_property_readonly("tables",
                             [](const Database& db) {
                               std::vector<std::string> names;
                               for (const auto& t : db.schema.tables) names.push_back(t.name);
                               return names;
                             })
      .def(
          "execute", [](const Database& db, const std::string& sql) { return relation_to_py(execute(parse(sql), db)); },
          py::arg("sql"))
      .def(
          "example", [](const Database& db, const std::string& gold) { return relation_to_py(generate_example(parse(gold), db)); },
          py::arg("gold"), "Expected output of a gold query; ordered iff it has ORDER BY.")
      .def(
          "fill_terminals",
          [](const Database& db, const std::string& skeleton, const std::string& question, std::size_t max_fills) {
            std::vector<std::string> out;
            for (const auto& q : fill_terminals(skeleton, question, db, max_fills)) out.push_back(print(q));
            return out;
          },
          py::arg("skeleton"), py::arg("question"), py::arg("max_fills") = 10);

  m.def(
      "repair",
      [](const std::vector<std::string>& candidates, std::shared_ptr<Database> db, const py::dict& expected,
         const std::string& question, int max_mutations, int beam_width, int top_n, std::int64_t budget_ms,
         std::size_t mutant_budget, const std::string& fallback) {
        std::vector<Query> qs;
        for (const auto& c : candidates) qs.push_back(parse(c));
        SearchConfig cfg;
        cfg.max_mutations = max_mutations;
        cfg.beam_width = beam_width;
        cfg.use_top_n = top_n;
        cfg.time_budget_ms = budget_ms;
        cfg.per_candidate_budget = mutant_budget;
        RepairTask task = make_task(std::move(qs), db, relation_from_py(expected), question);
        RepairOutcome o;
        {
          py::gil_scoped_release release;
          o = repair_beam(task, cfg);
          if (!o.solved() && !fallback.empty()) {
            RepairOutcome f = external_fallback(task, fallback);
            if (f.solved()) o = std::move(f);
          }
        }
        return outcome_to_py(o);
      },
      py::arg("candidates"), py::arg("db"), py::arg("expected"), py::arg("question") = "", py::arg("max_mutations") = 2,
      py::arg("beam_width") = 10, py::arg("top_n") = 10, py::arg("budget_ms") = 0, py::arg("mutant_budget") = 200000,
      py::arg("fallback") = "");

  m.def(
      "run_repair_json",
      [](const std::string& tasks_file, const std::string& db_root, int max_mutations, int beam_width, int top_n,
         std::int64_t budget_ms, const std::string& fallback) {
        RunOptions opts;
        opts.db_root = db_root;
        opts.search.max_mutations = max_mutations;
        opts.search.beam_width = beam_width;
        opts.search.use_top_n = top_n;
        opts.search.time_budget_ms = budget_ms;
        opts.fallback = fallback;
        auto tasks = load_tasks(tasks_file);
        py::gil_scoped_release release;
        return run_repair(tasks, opts).dump();
      },
      py::arg("tasks_file"), py::arg("db_root"), py::arg("max_mutations") = 2, py::arg("beam_width") = 10,
      py::arg("top_n") = 10, py::arg("budget_ms") = 120000, py::arg("fallback") = "");

  m.def(
      "analyze_json",
      [](const std::string& tasks_file, const std::string& db_root) {
        return to_json(analyze_corpus(load_tasks(tasks_file), db_root)).dump();
      },
      py::arg("tasks_file"), py::arg("db_root"));
}
