import json
from fractions import Fraction

import pytest

from instrumental import io
from instrumental.cli import main
from instrumental.inequalities import catalog
from instrumental.quantum import gpt_box_search
from instrumental.scenario import Scenario, postselect, pr_box


@pytest.fixture(scope="module")
def pr_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("tables") / "pr.json"
    io.save_correlation(pr_box(), path)
    return str(path)


@pytest.fixture(scope="module")
def wired_pr_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("tables") / "wired_pr.json"
    io.save_correlation(postselect(pr_box(), Scenario.instrumental(2)), path)
    return str(path)


@pytest.fixture(scope="module")
def box52_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("tables") / "box52.json"
    io.save_correlation(gpt_box_search(catalog("bonet"))[1], path)
    return str(path)


def test_facets_classical_three_inputs(capsys):
    assert main(["facets", "--kind", "instrumental", "--classical", "-x", "3"]) == 0
    out = capsys.readouterr().out
    assert "facets: 48" in out
    assert "pearl: 12 facets" in out
    assert "bonet: 24 facets" in out
    assert "positivity: 12 facets" in out


def test_facets_gpt_two_inputs(capsys):
    assert main(["facets", "--kind", "instrumental", "--gpt", "-x", "2"]) == 0
    out = capsys.readouterr().out
    assert "facets: 12" in out
    assert "pearl: 4 facets" in out
    assert "positivity: 8 facets" in out
    assert "bonet" not in out


def test_facets_json_round_trips(capsys):
    assert main(["facets", "--classical", "-x", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert {o["tag"]: o["size"] for o in doc["orbits"]} == {
        "pearl": 4,
        "positivity": 8,
    }
    h = io.hpolytope_from_json(doc["polytope"])
    assert len(h.inequalities) == 12


def test_facets_porta_formats(capsys, monkeypatch):
    assert main(["facets", "--classical", "-x", "2", "--format", "porta"]) == 0
    direct = capsys.readouterr().out
    assert direct.startswith("DIM = 8")
    assert "INEQUALITIES_SECTION" in direct
    monkeypatch.setenv("PORTA_COMPAT", "1")
    assert main(["facets", "--classical", "-x", "2"]) == 0
    assert capsys.readouterr().out == direct
    parsed = io.read_ieq(direct)
    assert len(parsed.inequalities) == 12 and len(parsed.equalities) == 2


def test_facets_capacity_exit(capsys):
    assert main(["facets", "--classical", "-x", "2", "--max-rays", "3"]) == 2
    assert "capacity" in capsys.readouterr().err


def test_bounds_bonet(capsys):
    assert main(["bounds", "bonet"]) == 0
    out = capsys.readouterr().out
    assert "3/2 + (1/2)*sqrt(2)" in out
    assert "all three bounds verified" in out


def test_bounds_tilted_one_matches_bonet(capsys):
    assert main(["bounds", "bonet"]) == 0
    bonet = capsys.readouterr().out
    assert main(["bounds", "tilted", "1"]) == 0
    assert capsys.readouterr().out == bonet


def test_bounds_chained_json(capsys):
    assert main(["bounds", "chained", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    rows = {r["theory"]: r for r in doc["rows"]}
    assert rows["classical"]["exact"] == "2"
    assert rows["gpt"]["exact"] == "5/2"
    assert all(r["verified"] for r in rows.values())


def test_bounds_csv(capsys):
    assert main(["bounds", "chsh", "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "theory,exact,approx"
    assert "(2)*sqrt(2)" in out


def test_bounds_usage_errors(capsys):
    assert main(["bounds", "tilted"]) == 1
    assert main(["bounds", "bonet", "7"]) == 1
    assert main(["bounds", "mystery"]) == 1
    capsys.readouterr()


def test_membership_wired_pr(capsys, wired_pr_file):
    assert main(["membership", wired_pr_file, "--theory", "classical"]) == 0
    out = capsys.readouterr().out
    assert "inside" in out and "note:" not in out


def test_membership_bell_parent_caveat(capsys, pr_file):
    assert main(["membership", pr_file, "--theory", "classical"]) == 0
    out = capsys.readouterr().out
    assert "inside" in out
    assert "--with-local-processing" in out


def test_membership_local_processing_flips_verdict(capsys, pr_file):
    assert main(
        ["membership", pr_file, "--theory", "classical", "--with-local-processing"]
    ) == 0
    out = capsys.readouterr().out
    assert "outside" in out
    assert "separating inequality" in out
    assert "margin 2" in out


def test_membership_box_nosignalling(capsys, box52_file):
    assert main(["membership", box52_file, "--theory", "nosignalling"]) == 0
    out = capsys.readouterr().out
    assert "inside" in out and "extension:" in out


def test_membership_json_separator_is_valid(capsys, box52_file):
    assert main(
        ["membership", box52_file, "--theory", "classical", "--format", "json"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["inside"] is False
    coeffs = [Fraction(c) for c in doc["separator"]["coeffs"]]
    bound = Fraction(doc["separator"]["bound"])
    box = io.load_correlation(box52_file)
    value = sum(c * e for c, e in zip(coeffs, box.entries))
    assert value - bound == Fraction(doc["margin"]) > 0


def test_membership_flag_needs_bell_input(capsys, wired_pr_file):
    assert main(
        ["membership", wired_pr_file, "--theory", "classical",
         "--with-local-processing"]
    ) == 1
    assert "Bell" in capsys.readouterr().err


def test_identity_commands(capsys):
    assert main(["identity", "bonet", "--trials", "20"]) == 0
    out = capsys.readouterr().out
    assert "symbolic reduction to zero: yes" in out
    assert out.rstrip().endswith("0")
    assert main(["identity", "chained", "--n", "2", "--trials", "10"]) == 0
    capsys.readouterr()
    assert main(
        ["identity", "tilted", "--alpha", "3/2", "--trials", "10",
         "--format", "json"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["symbolic"] is True and doc["max_abs_residual"] == "0"


def test_identity_is_seed_deterministic(capsys):
    args = ["identity", "bonet", "--trials", "15", "--seed", "7"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


def test_identity_usage_errors(capsys):
    assert main(["identity", "tilted", "--trials", "5"]) == 1
    assert main(["identity", "bonet", "--alpha", "2"]) == 1
    capsys.readouterr()


def test_output_file(tmp_path):
    target = tmp_path / "facets.txt"
    assert main(["facets", "--classical", "-x", "2", "--output", str(target)]) == 0
    assert "pearl: 4 facets" in target.read_text()


def test_usage_exit_codes(capsys):
    assert main([]) == 1
    assert main(["facets", "--classical"]) == 1  # missing -x
    assert main(["facets", "-x", "2"]) == 1  # missing side
    capsys.readouterr()
