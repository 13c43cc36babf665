"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N: PASS|FAIL|UNAVAILABLE`` line that the
conftest hook prints in the terminal summary.  Sub-checks are all evaluated
before asserting so the line lists every failing part.
"""

import functools
import random

import pytest

import property_suite
from conftest import ACCEPTANCE_LINES
from oracles import accepted_upto, concat, cyclic_shift, myhill_nerode_classes, reverse, star
from pfxcomplex.automata import Nfa, determinize, is_prefix_free, isomorphic, minimize, reachable_subsets
from pfxcomplex.bounds import OPERATIONS, verify_bounds
from pfxcomplex.complexity import verify_certificate
from pfxcomplex.constructions import (
    dfa_bool,
    dfa_cyclic_shift,
    dfa_star_prefix_free,
    nfa_concat,
    nfa_cyclic_shift,
    nfa_intersection,
    nfa_reverse,
    nfa_star,
    nfa_union,
    reversal_complexity,
    reverse_sc,
)
from pfxcomplex.io import read_automaton
from pfxcomplex.search import (
    SearchSpec,
    enumerate_prefix_free,
    extremal_search,
    fill_template,
    minimal_pf_dfas,
)
from pfxcomplex.witnesses import (
    DEFAULT_FIXTURES,
    concat_certificate,
    cyclic_shift_partial_witness,
    make_witness,
    nfa_to_dfa_ternary,
    regex_dfa,
    star_certificate,
    union_certificate,
)

GRID = range(3, 9)

# slot for the transcribed eight-state binary machine of the reversal erratum
ERRATUM_FIXTURE = DEFAULT_FIXTURES / "reversal-erratum-binary-m0-n8.json"


def criterion(num, title):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except pytest.skip.Exception as exc:
                ACCEPTANCE_LINES.append(f"criterion {num:>2}: UNAVAILABLE  {title} ({exc.msg})")
                raise
            except BaseException as exc:
                msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
                ACCEPTANCE_LINES.append(f"criterion {num:>2}: FAIL  {title} ({msg})")
                raise
            line = f"criterion {num:>2}: PASS  {title}" + (f" ({detail})" if detail else "")
            ACCEPTANCE_LINES.append(line)
            print(line)

        return run

    return wrap


def check(failures):
    assert not failures, "; ".join(failures)


@criterion(1, "Boolean DFA bounds")
def test_criterion_01_boolean_dfa_bounds():
    rows = verify_bounds(["union", "symmetric-difference", "difference"], GRID, GRID)
    bad = [f"{r.operation}({r.m},{r.n})={r.minimized}!={r.formula}" for r in rows if r.minimized != r.formula]
    check(bad)
    assert len(rows) == 3 * 36
    return f"{len(rows)} rows exact"


@criterion(2, "Intersection tightness, exhaustive binary search")
def test_criterion_02_intersection_search():
    bad = []
    for m, n in [(3, 3), (3, 4), (4, 4)]:
        target = m * n - 2 * (m + n) + 6
        o = extremal_search(SearchSpec("dfa", n, 2, "intersection", m=m, target=target))
        if not (o.exhaustive and o.best == target):
            bad.append(f"search ({m},{n}) best {o.best} target {target}")
        k, l = make_witness("intersection-binary-dfa", m, n)
        if (k.n, l.n) != (m, n) or dfa_bool(k, l, "intersection").n != target:
            bad.append(f"fixture ({m},{n}) does not reach {target}")
    check(bad)


@criterion(3, "Concatenation and star")
def test_criterion_03_concat_star():
    rows = verify_bounds(["concat-unary", "star-binary", "star-unary"], GRID, GRID)
    bad = []
    for r in rows:
        if r.operation == "star-binary" and r.n == 3:
            if r.tight != "out-of-domain" or r.minimized != 2:
                bad.append(f"star-binary n=3 gave {r.minimized}, expected 2")
        elif r.minimized != r.formula:
            bad.append(f"{r.operation}({r.m},{r.n})={r.minimized}!={r.formula}")
    # n=3 value computed directly, not through the report row
    if minimize(dfa_star_prefix_free(regex_dfa("(a^1)*b", ("a", "b")))).n != 2:
        bad.append("direct n=3 binary star is not 2")
    check(bad)


@criterion(4, "NFA to DFA: ternary witnesses, binary impossibility")
def test_criterion_04_nfa_to_dfa():
    bad = []
    for n in range(3, 9):
        a = nfa_to_dfa_ternary(n)
        got = minimize(determinize(a, merge_finals=True)).n
        if not is_prefix_free(a) or got != 2 ** (n - 1) + 1:
            bad.append(f"ternary n={n} gives {got}")
    for n in (3, 4):
        o = extremal_search(SearchSpec("nfa", n, 2, "nfa-to-dfa", budget=10**9))
        bound = 2 ** (n - 1) + 1
        if not (o.exhaustive and o.best < bound):
            bad.append(f"binary n={n} exhaustive maximum {o.best} is not below {bound}")
    check(bad)


@criterion(5, "Reversal: binary bases, ternary witnesses, binary impossibility")
def test_criterion_05_reversal():
    bad = []
    for k in (3, 4, 5):
        base = make_witness("reversal-binary-base", None, k)
        if base.n != k or reversal_complexity(base) != 2 ** k:
            bad.append(f"base k={k}")
    for n in (5, 6, 7):
        w = make_witness("reversal-ternary", None, n)
        if w.n != n or not is_prefix_free(w) or reverse_sc(w) != 2 ** (n - 2) + 1:
            bad.append(f"ternary n={n} gives {reverse_sc(w)}")
    for n in (4, 5):
        o = extremal_search(SearchSpec("dfa", n, 2, "reversal"))
        bound = 2 ** (n - 2) + 1
        if not (o.exhaustive and o.best < bound):
            bad.append(f"binary n={n} exhaustive maximum {o.best} is not below {bound}")
    check(bad)


def _rotation_ok(d):
    n = d.n
    raw = dfa_cyclic_shift(d, minimal=False)
    want = {w for w in cyclic_shift(accepted_upto(d, 2 * n))}
    return raw.n <= (2 * n - 3) ** (n - 2) and accepted_upto(raw, 2 * n) == want


@criterion(6, "Cyclic shift DFA bound, rotation oracle, n=4 template")
def test_criterion_06_cyclic_shift():
    bad = []
    for k in (2, 3):
        for n in (3, 4, 5):
            bound = (2 * n - 3) ** (n - 2)
            o = extremal_search(SearchSpec("dfa", n, k, "cyclic-shift", budget=10**8, workers=2))
            if o.best > bound:
                bad.append(f"k={k} n={n} maximum {o.best} exceeds {bound}")
    rng = random.Random(0)
    oracle_set = [d for n in (3, 4) for k in (2, 3) for d in enumerate_prefix_free("dfa", n, k)]
    oracle_set += list(enumerate_prefix_free("dfa", 5, 2))
    oracle_set += rng.sample(minimal_pf_dfas(5, 3, budget=10**8), 300)
    wrong = sum(1 for d in oracle_set if not _rotation_ok(d))
    if wrong:
        bad.append(f"{wrong} machines disagree with the rotation oracle")
    o = fill_template(cyclic_shift_partial_witness(4), "cyclic-shift", 25, budget=10**8, workers=2)
    if o.best > 25:
        bad.append(f"template best {o.best} exceeds 25")
    check(bad)
    return f"template best-found {o.best} of 25; rotation oracle on {len(oracle_set)} machines"


def _nfa_cases():
    """(label, result, expected states, operand languages, oracle, length)."""
    for m in range(3, 7):
        for n in range(3, 7):
            k, l = make_witness("nfa-union", m, n)
            yield f"union({m},{n})", nfa_union(k, l), m + n, (k, l), lambda x, y, L: x | y
            k, l = make_witness("nfa-concat-unary", m, n)
            yield f"concat({m},{n})", nfa_concat(k, l), m + n - 1, (k, l), lambda x, y, L: concat(x, y, L)
    for m, n in [(3, 3), (3, 4), (4, 4)]:
        k, l = make_witness("nfa-intersection", m, n)
        yield f"intersection({m},{n})", nfa_intersection(k, l), (m - 1) * (n - 1) + 1, (k, l), lambda x, y, L: x & y
    for n in GRID:
        a = make_witness("nfa-reverse-unary", None, n)
        yield f"reverse({n})", nfa_reverse(a), n, (a,), lambda x, L: reverse(x)
        a = make_witness("nfa-star", None, n)
        yield f"star({n})", nfa_star(a), n, (a,), lambda x, L: star(x, L)
    for n in (3, 4):
        a = make_witness("nfa-cyclic-shift-binary", None, n)
        yield f"cyclic-shift({n})", nfa_cyclic_shift(a), 2 * n * n - 4 * n + 3, (a,), lambda x, L: cyclic_shift(x)


@criterion(7, "NFA operations: state counts and bounded-length semantics")
def test_criterion_07_nfa_operations():
    bad = []
    count = 0
    for label, res, states, operands, op in _nfa_cases():
        count += 1
        if res.n != states:
            bad.append(f"{label} has {res.n} states, expected {states}")
        length = 2 * sum(a.n for a in operands)
        langs = [accepted_upto(a, length) for a in operands]
        want = {w for w in op(*langs, length) if len(w) <= length}
        if accepted_upto(res, length) != want:
            bad.append(f"{label} language differs up to length {length}")
    check(bad)
    return f"{count} fixture instances"


@criterion(8, "Explicit fooling sets close nsc")
def test_criterion_08_fooling_sets():
    bad = []
    for m in range(3, 7):
        for n in range(3, 7):
            k, l = make_witness("nfa-union", m, n)
            u = nfa_union(k, l)
            v = verify_certificate(union_certificate(m, n), u)
            if not v or v.bound != u.n:
                bad.append(f"union({m},{n}) {v.violation or v.bound}")
            k, l = make_witness("nfa-concat-unary", m, n)
            c = nfa_concat(k, l)
            v = verify_certificate(concat_certificate(m, n), c)
            if not v or v.bound != c.n:
                bad.append(f"concat({m},{n}) {v.violation or v.bound}")
    for n in range(3, 7):
        s = nfa_star(make_witness("nfa-star", None, n))
        v = verify_certificate(star_certificate(n), s)
        if not v or v.bound != s.n:
            bad.append(f"star({n}) {v.violation or v.bound}")
    check(bad)


@criterion(9, "Property suites")
def test_criterion_09_properties():
    tally = property_suite.run()
    bad = [f"semantics mismatch {f}" for f in tally.failures]
    if tally.instances < 10**4:
        bad.append(f"only {tally.instances} instances")
    machines = [d for n in (3, 4) for d in minimal_pf_dfas(n, 2)]
    nfas = list(enumerate_prefix_free("nfa", 3, 2))[::7]
    for d in machines:
        m = minimize(d)
        if not isomorphic(minimize(m), m) or m.n != myhill_nerode_classes(d, 2 * d.n):
            bad.append(f"minimize on {d.delta}")
    for a in nfas:
        det = determinize(a)
        if accepted_upto(det, 8) != accepted_upto(a, 8):
            bad.append(f"determinize on {a.delta}")
        if minimize(det).n != myhill_nerode_classes(det, 8):
            bad.append(f"Myhill-Nerode count on {a.delta}")
    check(bad[:10])
    return f"{tally.instances} machine-operation instances"


@criterion(10, "Reversal erratum: 252 reachable subsets")
def test_criterion_10_erratum():
    if not ERRATUM_FIXTURE.exists():
        pytest.skip(f"{ERRATUM_FIXTURE.name} not transcribed")
    d = read_automaton(ERRATUM_FIXTURE)
    (f,) = d.finals
    rev = [[set() for _ in d.alphabet] for _ in range(d.n)]
    for q, row in enumerate(d.delta):
        for i, t in enumerate(row):
            rev[t][i].add(q)
    assert reachable_subsets(Nfa(d.alphabet, rev, f, frozenset([d.initial]))) == 252


def test_formula_table_covers_every_operation():
    assert set(OPERATIONS) >= {"union", "intersection", "nfa-cyclic-shift", "reversal"}
