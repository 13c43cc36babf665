import csv
import io as _io
import json
import shutil

import pytest
from click.testing import CliRunner

from pfxcomplex import io
from pfxcomplex.cli import cli, parse_range
from pfxcomplex.witnesses import DEFAULT_FIXTURES, regex_dfa

HEADER = "operation,m,n,constructed,minimized,formula,tight,family"


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, [str(a) for a in args], catch_exceptions=False)

    return invoke


def rows(text):
    return list(csv.DictReader(_io.StringIO(text)))


def test_parse_range():
    assert parse_range("3..5") == [3, 4, 5]
    assert parse_range("3,6") == [3, 6]
    assert parse_range("4") == [4]


def test_union_grid(run):
    r = run("verify-bounds", "--ops", "union", "--m", "3..5", "--n", "3..5")
    assert r.exit_code == 0
    assert r.output.splitlines()[0] == HEADER
    got = rows(r.output)
    assert [int(x["minimized"]) for x in got] == [7, 10, 13, 10, 14, 18, 13, 18, 23]
    assert all(x["tight"] == "true" for x in got)


def test_concat_unary_row(run):
    r = run("verify-bounds", "--ops", "concat-unary", "--m", "3", "--n", "3")
    (row,) = rows(r.output)
    assert (row["minimized"], row["formula"], row["tight"]) == ("4", "4", "true")


def test_star_binary_out_of_domain(run):
    r = run("verify-bounds", "--ops", "star-binary", "--n", "3")
    (row,) = rows(r.output)
    assert row["tight"] == "out-of-domain"
    assert row["minimized"] == "2"
    assert r.exit_code == 0


@pytest.mark.parametrize("fmt", ["json", "md"])
def test_formats(run, fmt):
    r = run("--format", fmt, "verify-bounds", "--ops", "union", "--m", "3", "--n", "3..4")
    assert r.exit_code == 0
    if fmt == "json":
        data = json.loads(r.output)
        assert [d["minimized"] for d in data] == [7, 10]
        assert set(data[0]) == set(HEADER.split(","))
    else:
        assert r.output.startswith("| operation | m | n |")


def test_deterministic_and_worker_independent(run):
    a = run("verify-bounds", "--ops", "union,reversal,nfa-union", "--m", "3..4", "--n", "4..5")
    b = run("--workers", "2", "verify-bounds", "--ops", "union,reversal,nfa-union", "--m", "3..4", "--n", "4..5")
    assert a.output == b.output


def test_unavailable_exit(run, tmp_path):
    r = run("--fixtures", tmp_path, "verify-bounds", "--ops", "intersection", "--m", "3", "--n", "3")
    assert r.exit_code == 3
    assert rows(r.output)[0]["tight"] == "unavailable"


def test_untight_exit(run, tmp_path):
    fx = tmp_path / "fx"
    shutil.copytree(DEFAULT_FIXTURES, fx)
    io.write_automata([regex_dfa("a", ("a", "b")), regex_dfa("b", ("a", "b"))], fx / "intersection-binary-dfa-m3-n3.json")
    r = run("--fixtures", fx, "verify-bounds", "--ops", "intersection", "--m", "3", "--n", "3")
    assert r.exit_code == 2
    assert rows(r.output)[0]["tight"] == "false"


@pytest.mark.parametrize(
    "args",
    [
        ["no-such-command"],
        ["verify-bounds", "--ops", "bogus"],
        ["verify-bounds", "--m", "x..y"],
        ["--format", "xml", "verify-bounds"],
        ["--workers", "0", "verify-bounds"],
    ],
)
def test_usage_exit(run, args):
    assert run(*args).exit_code == 4


def test_bad_automaton_file_is_usage_error(run, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"type": "dfa"}\n')
    r = run("measure", p)
    assert r.exit_code == 4
    assert "alphabet" in r.output


def test_show_unavailable(run, tmp_path):
    r = run("--fixtures", tmp_path, "fixtures", "show", "cyclic-shift-full", "--n", "4")
    assert r.exit_code == 3
    assert "fixtures populate --family cyclic-shift-full" in r.output


def _chain(run, tmp_path, op, family, m, n, raw=True):
    w = tmp_path / "w.json"
    res = tmp_path / "r.json"
    show = ["fixtures", "show", family, "--n", n] + (["--m", m] if m else [])
    assert run(*show, "-o", w).exit_code == 0
    args = ["op", op, w, "-o", res] + (["--raw"] if raw else [])
    assert run(*args).exit_code == 0
    out = json.loads(run("--format", "json", "measure", res).output)[0]
    return out


@pytest.mark.parametrize(
    "operation,cli_op,m,n",
    [
        ("union", "union", 4, 5),
        ("difference", "difference", 5, 3),
        ("intersection", "intersection", 4, 4),
        ("cyclic-shift", "cyclic-shift", None, 4),
        ("star-unary", "star", None, 6),
        ("nfa-union", "nfa-union", 3, 4),
        ("nfa-star", "nfa-star", None, 4),
    ],
)
def test_row_reproduced_by_chain(run, tmp_path, operation, cli_op, m, n):
    from pfxcomplex.bounds import OPERATIONS

    r = run("--format", "json", "verify-bounds", "--ops", operation, "--m", m or 3, "--n", n)
    (row,) = json.loads(r.output)
    spec = OPERATIONS[operation]
    out = _chain(run, tmp_path, cli_op, spec.family, m, n)
    if operation.startswith("nfa-"):
        assert out["states"] == row["constructed"]
        assert out["nsc_upper"] == row["constructed"]
    else:
        assert out["states"] == row["constructed"]
        assert out["sc"] == row["minimized"]


def test_fooling_find_and_verify(run, tmp_path):
    w = tmp_path / "w.json"
    io.write_automaton(regex_dfa("a^4", ("a",)), w)
    cert = tmp_path / "c.json"
    r = run("--format", "json", "fooling", w, "--find", cert)
    assert r.exit_code == 0 and json.loads(r.output)[0]["bound"] == 5
    assert run("fooling", w, cert).exit_code == 0
    cert.write_text('{"pairs": [["", "aaaa"], ["a", "aaa"], ["b", ""]]}')
    r = run("fooling", w, cert)
    assert r.exit_code == 4
    cert.write_text('{"pairs": [["", "aaaa"], ["", "aaaa"]]}')
    assert run("fooling", w, cert).exit_code == 2


def test_measure_subsets(run, tmp_path):
    from pfxcomplex.witnesses import nfa_to_dfa_ternary

    w = tmp_path / "n.json"
    io.write_automaton(nfa_to_dfa_ternary(4), w)
    out = json.loads(run("--format", "json", "measure", "--subsets", w).output)[0]
    assert out["prefix_free"] is True
    assert out["sc"] == 9


def test_search_commands(run, tmp_path):
    r = run("--format", "json", "search", "--kind", "dfa", "--op", "intersection", "--m", 3, "--n", 3, "--target", 3, "--out", tmp_path)
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["best"] == 3 and out["exhaustive"] is True
    assert (tmp_path / out["witnesses"][0]).exists()
    r = run("search", "--kind", "dfa", "--op", "reversal", "--n", 5, "--target", 9)
    assert r.exit_code == 2


def test_fixtures_list_and_name(run):
    r = run("--format", "json", "fixtures", "list")
    fams = {x["family"] for x in json.loads(r.output)}
    assert "union-dfa" in fams and "cyclic-shift-full" in fams
    assert run("fixtures", "name", "union-dfa", "--m", 3, "--n", 4).output.strip() == "union-dfa-m3-n4.json"
