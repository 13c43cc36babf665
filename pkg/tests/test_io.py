import json

import pytest
from hypothesis import given, settings

from pfxcomplex.automata import isomorphic
from pfxcomplex.complexity import FoolingCertificate
from pfxcomplex.io import (
    ParseError,
    dumps,
    loads_all,
    read_automata,
    read_automaton,
    read_certificate,
    write_automata,
    write_automaton,
    write_certificate,
)
from pfxcomplex.regex import regex_to_nfa
from pfxcomplex.automata import to_min_dfa
from test_automata import dfas, nfas

GOOD = {
    "type": "dfa",
    "alphabet": ["a"],
    "states": 2,
    "initial": 0,
    "finals": [1],
    "transitions": [[0, "a", 1], [1, "a", 1]],
}


def line(**changes):
    obj = dict(GOOD)
    obj.update(changes)
    return json.dumps(obj)


@settings(max_examples=100, deadline=None)
@given(dfas())
def test_dfa_round_trip(d):
    (back,) = loads_all(dumps(d))
    assert back == d


@settings(max_examples=100, deadline=None)
@given(nfas())
def test_nfa_round_trip(a):
    (back,) = loads_all(dumps(a))
    assert back.delta == a.delta and back.finals == a.finals and back.alphabet == a.alphabet


def test_files(tmp_path):
    k = to_min_dfa(regex_to_nfa("a*b"))
    l = regex_to_nfa("(b^2)*a")
    write_automata([k, l], tmp_path / "pair.json")
    got = read_automata(tmp_path / "pair.json")
    assert isomorphic(got[0], k) and got[1].n == l.n
    write_automaton(k, tmp_path / "one.json")
    assert read_automaton(tmp_path / "one.json") == k
    with pytest.raises(ParseError, match="expected one"):
        read_automaton(tmp_path / "pair.json")


@pytest.mark.parametrize(
    "text,field",
    [
        (line(type="pda"), "type"),
        (line(alphabet=["ab"]), "alphabet"),
        (line(alphabet=["a", "a"]), "alphabet"),
        (line(states=0), "states"),
        (line(states="2"), "states"),
        (line(initial=5), "initial"),
        (line(finals=[7]), "finals"),
        (line(transitions=[[0, "a", 1]]), "transitions"),
        (line(transitions=[[0, "b", 1], [1, "a", 1]]), "transitions[0]"),
        (line(transitions=[[0, "a", 9], [1, "a", 1]]), "transitions[0]"),
        (line(transitions=[[0, "a", 1], [0, "a", 0], [1, "a", 1]]), "transitions[1]"),
    ],
)
def test_parse_errors_name_field(text, field):
    with pytest.raises(ParseError) as exc:
        loads_all(text)
    assert exc.value.field == field
    assert exc.value.line == 1


def test_parse_error_line_number():
    with pytest.raises(ParseError) as exc:
        loads_all(json.dumps(GOOD) + "\n{bad json\n")
    assert exc.value.line == 2


def test_empty_file():
    with pytest.raises(ParseError):
        loads_all("\n\n")


def test_certificate_round_trip(tmp_path):
    plain = FoolingCertificate((("a", "b"), ("", "ab")))
    ext = FoolingCertificate((), ((("a", "b"),), (("b", "a"),), "ab", "ba"))
    for cert in (plain, ext):
        write_certificate(cert, tmp_path / "c.json")
        assert read_certificate(tmp_path / "c.json") == cert


def test_certificate_bad_pair(tmp_path):
    p = tmp_path / "c.json"
    p.write_text('{"pairs": [["a"]]}')
    with pytest.raises(ParseError) as exc:
        read_certificate(p)
    assert exc.value.field == "pairs[0]"
