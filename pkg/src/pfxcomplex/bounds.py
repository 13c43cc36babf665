"""Bound verification grid: one report row per (operation, m, n).

DFA rows report the raw construction size and the minimized size.  NFA rows
report the construction size and the best certified ``nsc`` lower bound in
the ``minimized`` column; a row is tight when that bound meets the formula,
which also pins the construction as optimal.
"""

from __future__ import annotations

import csv
import io as _io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .automata import Automaton, AutomatonError, determinize, minimize, to_min_dfa
from .complexity import find_extended_certificate, find_fooling_set, verify_certificate
from .constructions import (
    dfa_bool,
    dfa_concat_prefix_free,
    dfa_cyclic_shift,
    dfa_reverse,
    dfa_star_prefix_free,
    nfa_complement_prefix_free,
    nfa_concat,
    nfa_cyclic_shift,
    nfa_difference,
    nfa_intersection,
    nfa_reverse,
    nfa_star,
    nfa_union,
    reverse_sc,
)
from .search import nfa_cs_lower_bound
from .witnesses import DomainError, UnavailableError, fooling_fixture, make_witness, regex_dfa

TIGHT, UNTIGHT, UNAVAILABLE, OUT_OF_DOMAIN = "true", "false", "unavailable", "out-of-domain"
FIELDS = ("operation", "m", "n", "constructed", "minimized", "formula", "tight", "family")


@dataclass(frozen=True)
class BoundRow:
    operation: str
    m: int | None
    n: int
    constructed: int | None
    minimized: int | None
    formula: int
    tight: str
    family: str


@dataclass(frozen=True)
class BoundSpec:
    operation: str
    family: str
    binary: bool
    formula: Callable[[int | None, int], int]
    evaluate: Callable[..., tuple[int, int]]
    domain: Callable[[int | None, int], bool]
    outside: Callable[[int | None, int], object] | None = None


def _dfa_bool(op):
    def run(pair, m, n, fixtures):
        k, l = pair
        return dfa_bool(k, l, op, minimal=False).n, dfa_bool(k, l, op).n

    return run


def _concat(pair, m, n, fixtures):
    raw = dfa_concat_prefix_free(*pair)
    return raw.n, minimize(raw).n


def _star(l, m, n, fixtures):
    raw = dfa_star_prefix_free(l)
    return raw.n, minimize(raw).n


def _nfa_to_dfa(a, m, n, fixtures):
    raw = determinize(a, merge_finals=True)
    return raw.n, minimize(raw).n


def _reversal(d, m, n, fixtures):
    return determinize(dfa_reverse(d)).n, reverse_sc(d)


def _cyclic(d, m, n, fixtures):
    raw = dfa_cyclic_shift(d, minimal=False)
    return raw.n, minimize(raw).n


def _certified(result: Automaton, cert) -> int:
    v = verify_certificate(cert, to_min_dfa(result))
    return min(v.bound, result.n) if v else 0


def _searched_lower(result: Automaton) -> int:
    d = to_min_dfa(result)
    lo = len(find_fooling_set(d))
    ext = find_extended_certificate(d)
    if ext is not None:
        lo = max(lo, ext.claimed_bound)
    return min(lo, result.n)


def _nfa_with_fixture(build, family):
    def run(w, m, n, fixtures):
        args = w if isinstance(w, tuple) else (w,)
        res = build(*args)
        return res.n, _certified(res, fooling_fixture(family, m, n, fixtures))

    return run


def _nfa_intersection(pair, m, n, fixtures):
    res = nfa_intersection(*pair)
    return res.n, _searched_lower(res)


def _nfa_complement(l, m, n, fixtures):
    res = nfa_complement_prefix_free(l)
    return res.n, _certified(res, fooling_fixture("nfa-complement-ternary", m, n, fixtures))


def _nfa_cyclic(l, m, n, fixtures):
    res = nfa_cyclic_shift(l)
    return res.n, min(nfa_cs_lower_bound(l), res.n)


def _ge3(m, n):
    return (m is None or m >= 3) and n >= 3


SPECS: tuple[BoundSpec, ...] = (
    BoundSpec("intersection", "intersection-binary-dfa", True, lambda m, n: m * n - 2 * (m + n) + 6, _dfa_bool("intersection"), _ge3),
    BoundSpec("union", "union-dfa", True, lambda m, n: m * n - 2, _dfa_bool("union"), _ge3),
    BoundSpec("symmetric-difference", "symmetric-difference-dfa", True, lambda m, n: m * n - 2, _dfa_bool("symmetric-difference"), _ge3),
    BoundSpec("difference", "difference-dfa", True, lambda m, n: m * n - m - 2 * n + 4, _dfa_bool("difference"), _ge3),
    BoundSpec("concat-unary", "concat-unary-dfa", True, lambda m, n: m + n - 2, _concat, _ge3),
    BoundSpec(
        "star-binary", "star-binary-dfa", False, lambda m, n: n, _star, lambda m, n: n >= 4,
        outside=lambda m, n: regex_dfa(f"(a^{{{n - 2}}})*b", ("a", "b")) if n >= 3 else None,
    ),
    BoundSpec("star-unary", "star-unary-dfa", False, lambda m, n: n - 2, _star, _ge3),
    BoundSpec("nfa-to-dfa", "nfa-to-dfa-ternary", False, lambda m, n: 2 ** (n - 1) + 1, _nfa_to_dfa, _ge3),
    BoundSpec("cyclic-shift", "cyclic-shift-full", False, lambda m, n: (2 * n - 3) ** (n - 2), _cyclic, lambda m, n: n >= 4),
    BoundSpec("reversal", "reversal-ternary", False, lambda m, n: 2 ** (n - 2) + 1, _reversal, lambda m, n: n >= 5),
    BoundSpec("nfa-union", "nfa-union", True, lambda m, n: m + n, _nfa_with_fixture(nfa_union, "nfa-union"), _ge3),
    BoundSpec("nfa-intersection", "nfa-intersection", True, lambda m, n: (m - 1) * (n - 1) + 1, _nfa_intersection, _ge3),
    BoundSpec("nfa-complement", "nfa-complement-ternary", False, lambda m, n: 2 ** (n - 1), _nfa_complement, _ge3),
    BoundSpec("nfa-difference", "nfa-difference", True, lambda m, n: (m - 1) * 2 ** (n - 1) + 1, _nfa_with_fixture(nfa_difference, "nfa-difference"), _ge3),
    BoundSpec("nfa-concat", "nfa-concat-unary", True, lambda m, n: m + n - 1, _nfa_with_fixture(nfa_concat, "nfa-concat-unary"), _ge3),
    BoundSpec("nfa-reverse", "nfa-reverse-unary", False, lambda m, n: n, _nfa_with_fixture(nfa_reverse, "nfa-reverse-unary"), _ge3),
    BoundSpec("nfa-star", "nfa-star", False, lambda m, n: n, _nfa_with_fixture(nfa_star, "nfa-star"), _ge3),
    BoundSpec("nfa-cyclic-shift", "nfa-cyclic-shift-binary", False, lambda m, n: 2 * n * n - 4 * n + 3, _nfa_cyclic, _ge3),
)
OPERATIONS = {s.operation: s for s in SPECS}


def evaluate_row(operation: str, m: int | None, n: int, fixtures: str | None = None) -> BoundRow:
    spec = OPERATIONS[operation]
    formula = spec.formula(m, n)
    if not spec.domain(m, n):
        cons = mini = None
        w = spec.outside(m, n) if spec.outside else None
        if w is not None:
            cons, mini = spec.evaluate(w, m, n, fixtures)
        return BoundRow(operation, m, n, cons, mini, formula, OUT_OF_DOMAIN, spec.family)
    try:
        w = make_witness(spec.family, m, n, fixtures)
    except UnavailableError:
        return BoundRow(operation, m, n, None, None, formula, UNAVAILABLE, spec.family)
    except DomainError:
        return BoundRow(operation, m, n, None, None, formula, OUT_OF_DOMAIN, spec.family)
    cons, mini = spec.evaluate(w, m, n, fixtures)
    return BoundRow(operation, m, n, cons, mini, formula, TIGHT if mini == formula else UNTIGHT, spec.family)


def grid(operations: Sequence[str], ms: Iterable[int], ns: Iterable[int]) -> list[tuple[str, int | None, int]]:
    ms, ns = list(ms), list(ns)
    keys = []
    for op in operations:
        if op not in OPERATIONS:
            raise AutomatonError(f"unknown operation {op!r}; known: {', '.join(OPERATIONS)}")
        if OPERATIONS[op].binary:
            keys.extend((op, m, n) for m in ms for n in ns)
        else:
            keys.extend((op, None, n) for n in ns)
    return keys


def _row_job(key, fixtures):
    return evaluate_row(*key, fixtures)


def verify_bounds(
    operations: Sequence[str] | None = None,
    ms: Iterable[int] = range(3, 9),
    ns: Iterable[int] = range(3, 9),
    fixtures: str | Path | None = None,
    workers: int = 1,
) -> list[BoundRow]:
    """Rows ordered by (operation as listed, m, n) whatever the worker count."""
    keys = grid(list(operations or OPERATIONS), ms, ns)
    fx = str(fixtures) if fixtures is not None else None
    if workers <= 1 or len(keys) <= 1:
        return [evaluate_row(*k, fx) for k in keys]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_row_job, keys, [fx] * len(keys)))


def exit_status(rows: Sequence[BoundRow]) -> int:
    if any(r.tight == UNTIGHT for r in rows):
        return 2
    if any(r.tight == UNAVAILABLE for r in rows):
        return 3
    return 0


def _cell(v) -> str:
    return "" if v is None else str(v)


def render(rows: Sequence[BoundRow], fmt: str = "csv") -> str:
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=1) + "\n"
    if fmt == "md":
        lines = ["| " + " | ".join(FIELDS) + " |", "|" + "---|" * len(FIELDS)]
        for r in rows:
            lines.append("| " + " | ".join(_cell(getattr(r, f)) for f in FIELDS) + " |")
        return "\n".join(lines) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS)
    for r in rows:
        w.writerow([_cell(getattr(r, f)) for f in FIELDS])
    return buf.getvalue()
