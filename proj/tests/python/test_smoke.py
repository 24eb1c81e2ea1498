import json
import os
import pathlib

import pytest

import sqlmend

SEED = pathlib.Path(os.environ.get("SQLMEND_SEED_DIR", pathlib.Path(__file__).resolve().parents[2] / "data" / "seed"))

GOLD = (
    "SELECT airlines.name, routes.alid FROM routes JOIN airlines ON routes.alid = airlines.alid "
    "GROUP BY airlines.name ORDER BY COUNT(*) DESC LIMIT 1"
)


@pytest.fixture(scope="module")
def flights():
    return sqlmend.Database(str(SEED / "flights"))


def test_canonical_and_skeleton():
    assert sqlmend.canonical("select Name from AIRLINES where alid=11") == "SELECT name FROM airlines WHERE alid = 11"
    assert sqlmend.skeleton("SELECT name FROM airlines LIMIT 2") == "SELECT #1 FROM #2 LIMIT #3"
    assert sqlmend.same_structure("SELECT a FROM t ORDER BY a ASC", "SELECT b FROM u ORDER BY b DESC")


def test_distance_and_similarity():
    assert sqlmend.normalize_for_distance("airline.names") == "names"
    assert sqlmend.edit_distance("kitten", "sitting") == 3
    assert sqlmend.jaccard([1, "x", None], [1, "x", None]) == 1.0
    assert sqlmend.jaccard([1, 1, 2], [1, 2, 2]) == 0.5
    assert sqlmend.jaccard([1], ["1"]) == 0.0


def test_execute(flights):
    out = flights.execute("SELECT name FROM airlines WHERE country = 'Chile'")
    assert out["rows"] == [("Andes Jet",)]
    assert out["ordered"] is False
    assert flights.tables == ["airlines", "routes", "airports"]


def test_errors(flights):
    with pytest.raises(sqlmend.ParseError):
        sqlmend.canonical("SELECT FROM")
    with pytest.raises(sqlmend.ExecutionError):
        flights.execute("SELECT wingspan FROM airlines")
    with pytest.raises(sqlmend.LoadError):
        sqlmend.Database("/nonexistent")


def test_fill_terminals(flights):
    fills = flights.fill_terminals("SELECT name FROM airlines WHERE country = ?", "Airlines from 'Chile'", 3)
    assert fills[0] == "SELECT name FROM airlines WHERE country = 'Chile'"
    assert len(fills) <= 3


def test_repair_structural(flights):
    broken = (
        "SELECT airlines.name FROM routes JOIN airlines ON routes.alid = airlines.alid "
        "GROUP BY airlines.name ORDER BY COUNT(*) ASC LIMIT 3"
    )
    expected = flights.example(GOLD)
    one = sqlmend.repair([broken], flights, expected, max_mutations=1)
    assert one["stage"] == "unsolved"
    two = sqlmend.repair([broken], flights, expected, question="Which airline operates the most routes?")
    assert two["stage"] == "k2"
    assert two["structural_mutations"] == 1
    assert flights.execute(two["repaired_query"])["rows"] == [("Polar Air", 16)]


def test_run_repair_and_analyze(tmp_path):
    report = sqlmend.run_repair(SEED / "gold.json")
    assert report["summary"]["stage_counts"]["base"] == 20
    rates = report["summary"]["cumulative_rates"]
    assert rates["base"] <= rates["beam"] <= rates["k1"] <= rates["k2"] <= rates["fallback"]
    stats = sqlmend.analyze(SEED / "gold.json")
    assert stats["total"] == 20 and stats["failing"] == 0
    assert json.dumps(report)
