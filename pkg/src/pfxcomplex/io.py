"""Automaton and certificate files.

An automaton file holds one JSON object per line::

    {"type": "dfa", "alphabet": ["a", "b"], "states": 3, "initial": 0,
     "finals": [1], "transitions": [[0, "a", 1], [0, "b", 2], ...]}

States are 0-based.  A DFA must list exactly ``states * len(alphabet)``
triples.  Fixture files for two-operand witness families carry two lines.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .automata import Automaton, AutomatonError, Dfa, Nfa


class ParseError(AutomatonError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


def to_dict(a: Automaton) -> dict[str, Any]:
    if isinstance(a, Dfa):
        triples = [[q, a.alphabet[i], t] for q, row in enumerate(a.delta) for i, t in enumerate(row)]
        kind = "dfa"
    else:
        triples = [[q, s, t] for q, s, t in a.transitions()]
        kind = "nfa"
    return {
        "type": kind,
        "alphabet": list(a.alphabet),
        "states": a.n,
        "initial": a.initial,
        "finals": sorted(a.finals),
        "transitions": triples,
    }


def dumps(a: Automaton) -> str:
    return json.dumps(to_dict(a), separators=(",", ":"), ensure_ascii=False)


def _need(obj: dict, key: str, typ, line: int):
    if key not in obj:
        raise ParseError("missing", line, key)
    val = obj[key]
    if typ is int and isinstance(val, bool) or not isinstance(val, typ):
        raise ParseError(f"expected {typ.__name__}, got {type(val).__name__}", line, key)
    return val


def from_dict(obj: Any, line: int | None = None) -> Automaton:
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", line)
    kind = _need(obj, "type", str, line)
    if kind not in ("dfa", "nfa"):
        raise ParseError(f"unknown type {kind!r}", line, "type")
    alphabet = _need(obj, "alphabet", list, line)
    if not alphabet or any(not isinstance(s, str) or len(s) != 1 for s in alphabet):
        raise ParseError("alphabet must be a nonempty list of 1-char strings", line, "alphabet")
    if len(set(alphabet)) != len(alphabet):
        raise ParseError("duplicate symbols", line, "alphabet")
    n = _need(obj, "states", int, line)
    if n < 1:
        raise ParseError("must be positive", line, "states")
    initial = _need(obj, "initial", int, line)
    if not 0 <= initial < n:
        raise ParseError(f"state {initial} out of range", line, "initial")
    finals = _need(obj, "finals", list, line)
    for f in finals:
        if not isinstance(f, int) or isinstance(f, bool) or not 0 <= f < n:
            raise ParseError(f"state {f!r} out of range", line, "finals")
    triples = _need(obj, "transitions", list, line)
    sym = {s: i for i, s in enumerate(alphabet)}
    k = len(alphabet)
    cells: list[list[set[int]]] = [[set() for _ in range(k)] for _ in range(n)]
    for j, tr in enumerate(triples):
        fld = f"transitions[{j}]"
        if not isinstance(tr, list) or len(tr) != 3:
            raise ParseError("expected [from, symbol, to]", line, fld)
        q, s, t = tr
        for st in (q, t):
            if not isinstance(st, int) or isinstance(st, bool) or not 0 <= st < n:
                raise ParseError(f"state {st!r} out of range", line, fld)
        if s not in sym:
            raise ParseError(f"symbol {s!r} not in alphabet", line, fld)
        if kind == "dfa" and cells[q][sym[s]]:
            raise ParseError(f"duplicate transition for ({q}, {s!r})", line, fld)
        cells[q][sym[s]].add(t)
    if kind == "dfa":
        for q in range(n):
            for i in range(k):
                if not cells[q][i]:
                    raise ParseError(f"missing transition for ({q}, {alphabet[i]!r})", line, "transitions")
        delta = [[next(iter(c)) for c in row] for row in cells]
        return Dfa(tuple(alphabet), delta, initial, frozenset(finals))
    return Nfa(tuple(alphabet), [[frozenset(c) for c in row] for row in cells], initial, frozenset(finals))


def loads_all(text: str) -> list[Automaton]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", lineno) from None
        out.append(from_dict(obj, lineno))
    if not out:
        raise ParseError("file holds no automaton")
    return out


def read_automata(path: str | Path) -> list[Automaton]:
    return loads_all(Path(path).read_text(encoding="utf-8"))


def read_automaton(path: str | Path) -> Automaton:
    items = read_automata(path)
    if len(items) != 1:
        raise ParseError(f"expected one automaton, found {len(items)}")
    return items[0]


def write_automata(automata: list[Automaton], path: str | Path) -> None:
    Path(path).write_text("".join(dumps(a) + "\n" for a in automata), encoding="utf-8")


def write_automaton(a: Automaton, path: str | Path) -> None:
    write_automata([a], path)


def read_certificate(path: str | Path):
    """Parse a fooling-set certificate file into a ``FoolingCertificate``."""
    from .complexity import FoolingCertificate

    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")

    def pairs(key):
        val = obj.get(key, [])
        if not isinstance(val, list):
            raise ParseError("expected a list of pairs", field=key)
        out = []
        for j, p in enumerate(val):
            if not (isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p)):
                raise ParseError("expected [x, y] string pair", field=f"{key}[{j}]")
            out.append((p[0], p[1]))
        return tuple(out)

    ext = None
    if any(key in obj for key in ("A", "B", "u", "v")):
        for key in ("u", "v"):
            if not isinstance(obj.get(key, ""), str):
                raise ParseError("expected a string", field=key)
        ext = (pairs("A"), pairs("B"), obj.get("u", ""), obj.get("v", ""))
    return FoolingCertificate(pairs("pairs"), ext)


def write_certificate(cert, path: str | Path) -> None:
    obj: dict[str, Any] = {"pairs": [list(p) for p in cert.pairs]}
    if cert.extension is not None:
        a, b, u, v = cert.extension
        obj.update(A=[list(p) for p in a], B=[list(p) for p in b], u=u, v=v)
    Path(path).write_text(json.dumps(obj, ensure_ascii=False) + "\n", encoding="utf-8")
