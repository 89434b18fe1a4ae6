from __future__ import annotations

import json

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finsub.cli import ParseError, format_ruleset, load_schema, main, parse_ruleset
from finsub.core import Ruleset
from finsub.fes import FesRuleset
from finsub.twod import Ruleset2D

SCHEMA = load_schema()


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    rec = json.loads(out)
    jsonschema.validate(rec, SCHEMA)
    return code, rec


def test_parse_kinds():
    assert parse_ruleset("7, 2,5") == Ruleset((2, 5, 7))
    assert parse_ruleset("!2,4") == FesRuleset((2, 4))
    assert parse_ruleset("(2,6),(3,3)") == Ruleset2D(((2, 6), (3, 3)))


@pytest.mark.parametrize("text,pos", [("2,2,3", 2), ("2,x", 2), ("0,3", 0),
                                      ("2,-1", 2), ("", 0), ("(1,1),(1,1)", 6)])
def test_parse_errors_have_positions(text, pos):
    with pytest.raises(ParseError) as e:
        parse_ruleset(text)
    assert e.value.position == pos


@settings(max_examples=100)
@given(st.lists(st.integers(1, 500), min_size=1, max_size=8, unique=True))
def test_round_trip(moves):
    for S in (Ruleset.of(moves), FesRuleset.of(moves)):
        assert parse_ruleset(format_ruleset(S)) == S
    S2 = Ruleset2D(tuple((m, m % 7) for m in moves))
    assert parse_ruleset(format_ruleset(S2)) == S2


GOLDEN = [
    (["outcomes", "2,5", "--horizon", "17"], 0, {"symbols": "PPNNPNNPPNNPNNPPN"}),
    (["grundy", "4,9,14", "--horizon", "18"], 0,
     {"values": [0, 0, 0, 0, 1, 1, 1, 1, 0, 2, 2, 2, 1, 0, 3, 3, 2, 1]}),
    (["period", "2,5,7"], 0, {"preperiod": 0, "period": 22, "certified": True}),
    (["period", "2,4,7", "--nim"], 0, {"preperiod": 8, "period": 3}),
    (["period", "2,5,7", "--horizon", "30"], 2, {"certified": False}),
    (["seed-period", "2,7,16", "--seed", "NNNNNNNNNPNNNNNN"], 0, {"certified": True, "period": 9}),
    (["misere", "2,3", "--horizon", "6"], 0, {"symbols": "NNPPNN"}),
    (["expand", "1,2", "--bound", "10"], 0, {"adjoinable": [4, 5, 7, 8, 10]}),
    (["adjoin-check", "2,5,7"], 0, {"verified": [15, 17, 20]}),
    (["bipartite", "3,5,9"], 0, {"ultimately_bipartite": True, "onset": 14}),
    (["fes", "!2", "--horizon", "100"], 0, {"preperiod": 0, "period": 4, "saltus": 2}),
    (["fes-conjecture", "sleator-slusky", "--a", "2", "--b", "7"], 0, {}),
    (["family", "flammenkamp-S2", "--range", "2..3"], 0, {"family": "flammenkamp-S2"}),
    (["records", "--k", "3", "--range", "5..7"], 0, {"k": 3}),
    (["classify3", "--s3", "9"], 0, {"s3": 9}),
    (["zhang", "1,4", "--residue", "2", "--modulus", "5", "--range", "2..40"], 0, {"base_period": 5}),
    (["grid2d", "(1,0),(0,1)", "--width", "8", "--height", "8"], 0, {"p_positions": 32}),
]


@pytest.mark.parametrize("argv,code,fields", GOLDEN, ids=[g[0][0] + str(i) for i, g in enumerate(GOLDEN)])
def test_golden_runs(capsys, argv, code, fields):
    got, rec = run_json(capsys, *argv)
    assert got == code
    assert rec["command"] == argv[0]
    for k, v in fields.items():
        assert rec[k] == v


@pytest.mark.parametrize("argv", [
    ["outcomes", "2,2,3"], ["period", "0,3"], ["grundy", "!2"], ["fes", "2,3"],
    ["outcomes", "2,5", "--format", "pgm"], ["family", "no-such-family"],
    ["seed-period", "2,5"], ["outcomes", "2,5", "--seed", "NN"], ["records", "--range", "7..3"],
    ["no-such-command"], ["render", "(1,1)"],
])
def test_input_errors_exit_one(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and err


def test_digest_reproducible(capsys):
    a = run_json(capsys, "outcomes", "2,5,7", "--horizon", "1000")[1]["digest"]
    b = run_json(capsys, "outcomes", "2,5,7", "--horizon", "1000")[1]["digest"]
    assert a == b
    g1 = run_json(capsys, "grid2d", "(2,6),(3,3),(6,1),(19,6)", "--width", "300")[1]["digest"]
    g2 = run_json(capsys, "grid2d", "(2,6),(3,3),(6,1),(19,6)", "--width", "300",
                  "--threads", "2")[1]["digest"]
    assert g1 == g2


def test_csv_and_out(capsys, tmp_path):
    path = tmp_path / "r.csv"
    assert main(["records", "--k", "3", "--range", "7..7", "--format", "csv", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith("max_s,ruleset,outcome_preperiod,outcome_period")
    assert lines[1].startswith("7,2 5 7,0,22")


def test_render_writes_pgm(capsys, tmp_path):
    path = tmp_path / "g.pgm"
    code, out, _ = run(capsys, "render", "(1,1)", "--width", "5", "--height", "4", "--out", str(path))
    assert code == 0
    data = path.read_bytes()
    assert data.startswith(b"P5\n5 4\n255\n") and len(data) == 11 + 20
    classify = tmp_path / "c.pgm"
    assert main(["classify3", "--s3", "9", "--format", "pgm", "--out", str(classify)]) == 0
    assert classify.read_bytes().startswith(b"P5\n8 8\n255\n")
