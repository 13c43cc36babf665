"""Witness families: closed-form generators and fixture-backed searched slots.

Parameters follow the operand state counts: ``m`` for the left operand and
``n`` for the right one.  Unary families use ``n`` only (``m`` is ignored and
written as ``0`` in fixture names).  DFA families count the dead state; NFA
families are the trimmed minimal DFA, so ``nsc`` equals the parameter.

Searched slots live in a fixture directory as ``<family>-m<m>-n<n>.json``
(one automaton per line, two lines for two-operand families).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

from . import io
from .automata import (
    Automaton,
    AutomatonError,
    Dfa,
    Nfa,
    canonical,
    determinize,
    minimize,
    shortest_accepted,
    to_min_dfa,
    trim_dead,
)
from .complexity import FoolingCertificate, find_fooling_set
from .constructions import augment_reversal_witness, dfa_bool
from .regex import regex_to_nfa
from .search import (
    DfaTemplate,
    SearchOutcome,
    SearchSpec,
    complement_dfa,
    extremal_search,
    fill_template,
    search_complement_base,
    search_reversal_base,
)

DEFAULT_FIXTURES = Path(__file__).with_name("fixtures")
SIX_LETTERS = ("a", "b", "c", "d", "g", "h")


class DomainError(AutomatonError):
    """Parameters outside a family's domain."""


class UnavailableError(AutomatonError):
    """A searched slot has no fixture for the requested parameters."""


@dataclass(frozen=True)
class WitnessFamily:
    id: str
    arity: int
    kind: str
    provenance: str
    domain: str
    generator: Callable[..., Automaton | tuple[Automaton, Automaton]]
    populate: str | None = None


# ---------------------------------------------------------------------------
# regex-backed generators
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def regex_dfa(expr: str, alphabet: tuple[str, ...]) -> Dfa:
    return canonical(minimize(determinize(regex_to_nfa(expr, alphabet))))


def regex_nfa(expr: str, alphabet: tuple[str, ...]) -> Nfa:
    return trim_dead(regex_dfa(expr, alphabet))


def _sized(a: Automaton, size: int, what: str) -> Automaton:
    if a.n != size:
        raise AutomatonError(f"{what} has {a.n} states, expected {size}")
    return a


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _pow(r: str, k: int) -> str:
    return f"({r})^{{{k}}}"


def _union_dfa(m, n, fixtures):
    _need(m >= 3 and n >= 3, "needs m, n >= 3")
    ab = ("a", "b")
    k = regex_dfa(_pow("a*b", m - 2), ab)
    l = regex_dfa(_pow("b*a", n - 2), ab)
    return _sized(k, m, "K"), _sized(l, n, "L")


def _difference_dfa(m, n, fixtures):
    _need(m >= 3 and n >= 3, "needs m, n >= 3")
    abc = ("a", "b", "c")
    k = regex_dfa(_pow("b*(a+c)", m - 2), abc)
    l = regex_dfa(_pow("(a+c)*b", n - 3) + "c*(a+b)", abc)
    return _sized(k, m, "K"), _sized(l, n, "L")


def _concat_unary_dfa(m, n, fixtures):
    _need(m >= 3 and n >= 3, "needs m, n >= 3")
    k = regex_dfa(_pow("a", m - 2), ("a",))
    l = regex_dfa(_pow("a", n - 2), ("a",))
    return _sized(k, m, "K"), _sized(l, n, "L")


def _star_binary_dfa(m, n, fixtures):
    _need(n >= 4, "needs n >= 4 (n = 3 is outside the tight range)")
    return _sized(regex_dfa(f"({_pow('a', n - 2)})*b", ("a", "b")), n, "L")


def _star_unary_dfa(m, n, fixtures):
    _need(n >= 3, "needs n >= 3")
    return _sized(regex_dfa(_pow("a", n - 2), ("a",)), n, "L")


def _nfa_union(m, n, fixtures):
    _need(m >= 2 and n >= 2, "needs m, n >= 2")
    ab = ("a", "b")
    k = regex_nfa(f"({_pow('a', m - 1)})*b", ab)
    l = regex_nfa(f"({_pow('b', n - 1)})*a", ab)
    return _sized(k, m, "K"), _sized(l, n, "L")


def _nfa_difference_k(m, n, fixtures):
    _need(m >= 2, "needs m >= 2")
    return _sized(regex_nfa(_pow("(a+b)*d", m - 2) + "(a+b)*c", ("a", "b", "c", "d")), m, "K")


def _nfa_concat_unary(m, n, fixtures):
    _need(m >= 1 and n >= 1, "needs m, n >= 1")
    k = regex_nfa(_pow("a", m - 1), ("a",))
    l = regex_nfa(_pow("a", n - 1), ("a",))
    return _sized(k, m, "K"), _sized(l, n, "L")


def _nfa_reverse_unary(m, n, fixtures):
    _need(n >= 1, "needs n >= 1")
    return _sized(regex_nfa(_pow("a", n - 1), ("a",)), n, "L")


def _nfa_star(m, n, fixtures):
    _need(n >= 2, "needs n >= 2")
    return _sized(regex_nfa(f"({_pow('b', n - 1)})*a", ("a", "b")), n, "L")


def nfa_to_dfa_ternary(n: int) -> Nfa:
    """Ternary prefix-free ``n``-state NFA whose merged determinization has
    ``2^(n-1)+1`` states.

    States ``0..n-2`` are non-final and ``n-1`` is final: ``a`` rotates
    ``i -> i+1 mod (n-1)``, ``b`` sends ``i`` to ``{0, i}``, and ``c`` leads
    from ``n-2`` to the final state.
    """
    _need(n >= 3, "needs n >= 3")
    r = n - 1
    delta = []
    for i in range(r):
        c = frozenset([n - 1]) if i == r - 1 else frozenset()
        delta.append((frozenset([(i + 1) % r]), frozenset([0, i]), c))
    delta.append((frozenset(),) * 3)
    return Nfa(("a", "b", "c"), delta, 0, frozenset([n - 1]))


def _nfa_to_dfa_ternary(m, n, fixtures):
    return nfa_to_dfa_ternary(n)


def cyclic_shift_partial_witness(n: int) -> DfaTemplate:
    """Six-letter ``n``-state template with only the ``d`` row fixed.

    0-based layout: live states ``0..n-3``, final ``n-2``, dead ``n-1``.  By
    ``d`` the last live state enters the final state and every other live
    state loops; all other live-state moves are holes with targets ``0..n-1``.
    """
    _need(n >= 4, "needs n >= 4")
    d = SIX_LETTERS.index("d")
    rows = []
    for q in range(n - 2):
        rows.append(tuple((q + 1 if q == n - 3 else q) if a == d else -1 for a in range(6)))
    rows.append((n - 1,) * 6)
    rows.append((n - 1,) * 6)
    return DfaTemplate(SIX_LETTERS, tuple(rows), tuple(range(n)))


# ---------------------------------------------------------------------------
# fixture-backed slots
# ---------------------------------------------------------------------------


def fixture_name(family: str, m: int | None, n: int) -> str:
    return f"{family}-m{m or 0}-n{n}.json"


def _load(family: str, m: int | None, n: int, fixtures: Path | None) -> list[Automaton]:
    path = Path(fixtures or DEFAULT_FIXTURES) / fixture_name(family, m, n)
    if not path.exists():
        fam = FAMILIES.get(family)
        cmd = fam.populate if fam is not None and fam.populate else "pfxcomplex fixtures populate"
        raise UnavailableError(f"no fixture {path.name} in {path.parent}; run `{cmd}`")
    return io.read_automata(path)


def _intersection_binary_dfa(m, n, fixtures):
    k, l = _load("intersection-binary-dfa", m, n, fixtures)
    return k, l


def _reversal_binary_base(m, n, fixtures):
    (base,) = _load("reversal-binary-base", None, n, fixtures)
    return base


def _reversal_ternary(m, n, fixtures):
    _need(n >= 5, "needs n >= 5")
    (base,) = _load("reversal-binary-base", None, n - 2, fixtures)
    return augment_reversal_witness(base)


def _cyclic_shift_full(m, n, fixtures):
    (d,) = _load("cyclic-shift-full", None, n, fixtures)
    return d


def _nfa_cyclic_shift_binary(m, n, fixtures):
    (a,) = _load("nfa-cyclic-shift-binary", None, n, fixtures)
    return a


def _nfa_complement_ternary(m, n, fixtures):
    (a,) = _load("nfa-complement-ternary", None, n, fixtures)
    return a


def _nfa_intersection(m, n, fixtures):
    """The binary DFA intersection pair one size up with dead states trimmed."""
    k, l = _load("intersection-binary-dfa", m + 1, n + 1, fixtures)
    return _sized(trim_dead(k), m, "K"), _sized(trim_dead(l), n, "L")


def add_d_loops(l: Nfa) -> Nfa:
    """Extend ``l`` by a letter ``d`` looping on every non-final state."""
    alphabet = tuple(l.alphabet) + ("d",)
    delta = []
    for q in range(l.n):
        loop = frozenset() if q in l.finals else frozenset([q])
        delta.append(tuple(l.delta[q]) + (loop,))
    return Nfa(alphabet, delta, l.initial, l.finals)


def _with_alphabet(a: Nfa, alphabet: Sequence[str]) -> Nfa:
    pos = {s: i for i, s in enumerate(a.alphabet)}
    delta = [[a.delta[q][pos[s]] if s in pos else frozenset() for s in alphabet] for q in range(a.n)]
    return Nfa(tuple(alphabet), delta, a.initial, a.finals)


def _nfa_difference(m, n, fixtures):
    k = _nfa_difference_k(m, None, fixtures)
    l = add_d_loops(_nfa_complement_ternary(None, n, fixtures))
    return k, _with_alphabet(l, k.alphabet)


FAMILIES: dict[str, WitnessFamily] = {}


def _register(*fams: WitnessFamily) -> None:
    for f in fams:
        FAMILIES[f.id] = f


_POP = "pfxcomplex fixtures populate --family "

_register(
    WitnessFamily("union-dfa", 2, "dfa", "closed-form", "m,n>=3", _union_dfa),
    WitnessFamily("symmetric-difference-dfa", 2, "dfa", "closed-form", "m,n>=3", _union_dfa),
    WitnessFamily("difference-dfa", 2, "dfa", "closed-form", "m,n>=3", _difference_dfa),
    WitnessFamily("concat-unary-dfa", 2, "dfa", "closed-form", "m,n>=3", _concat_unary_dfa),
    WitnessFamily("star-binary-dfa", 1, "dfa", "closed-form", "n>=4", _star_binary_dfa),
    WitnessFamily("star-unary-dfa", 1, "dfa", "closed-form", "n>=3", _star_unary_dfa),
    WitnessFamily("nfa-union", 2, "nfa", "closed-form", "m,n>=2", _nfa_union),
    WitnessFamily("nfa-difference-k", 1, "nfa", "closed-form", "m>=2", _nfa_difference_k),
    WitnessFamily("nfa-concat-unary", 2, "nfa", "closed-form", "m,n>=1", _nfa_concat_unary),
    WitnessFamily("nfa-reverse-unary", 1, "nfa", "closed-form", "n>=1", _nfa_reverse_unary),
    WitnessFamily("nfa-star", 1, "nfa", "closed-form", "n>=2", _nfa_star),
    WitnessFamily("nfa-to-dfa-ternary", 1, "nfa", "reconstructed", "n>=3", _nfa_to_dfa_ternary),
    WitnessFamily(
        "intersection-binary-dfa", 2, "dfa", "searched", "m,n fixture", _intersection_binary_dfa,
        _POP + "intersection-binary-dfa",
    ),
    WitnessFamily(
        "reversal-binary-base", 1, "dfa", "searched", "n fixture", _reversal_binary_base,
        _POP + "reversal-binary-base",
    ),
    WitnessFamily(
        "reversal-ternary", 1, "dfa", "derived", "n>=5 with base fixture n-2", _reversal_ternary,
        _POP + "reversal-binary-base",
    ),
    WitnessFamily(
        "cyclic-shift-full", 1, "dfa", "searched", "n fixture", _cyclic_shift_full,
        _POP + "cyclic-shift-full",
    ),
    WitnessFamily(
        "nfa-cyclic-shift-binary", 1, "nfa", "searched", "n fixture", _nfa_cyclic_shift_binary,
        _POP + "nfa-cyclic-shift-binary",
    ),
    WitnessFamily(
        "nfa-complement-ternary", 1, "nfa", "searched", "n fixture", _nfa_complement_ternary,
        _POP + "nfa-complement-ternary",
    ),
    WitnessFamily(
        "nfa-intersection", 2, "nfa", "derived", "m,n with dfa fixture m+1,n+1", _nfa_intersection,
        _POP + "intersection-binary-dfa",
    ),
    WitnessFamily(
        "nfa-difference", 2, "nfa", "derived", "m>=2, n with complement fixture", _nfa_difference,
        _POP + "nfa-complement-ternary",
    ),
)


def make_witness(family: str, m: int | None, n: int, fixtures: str | Path | None = None):
    """Machine (or operand pair) of ``family`` at parameters ``(m, n)``."""
    fam = FAMILIES.get(family)
    if fam is None:
        raise DomainError(f"unknown witness family {family!r}; known: {', '.join(sorted(FAMILIES))}")
    if fam.id == "nfa-difference-k":
        return fam.generator(m if m is not None else n, None, fixtures)
    return fam.generator(m, n, fixtures)


# ---------------------------------------------------------------------------
# lower-bound fixtures
# ---------------------------------------------------------------------------


def _pairs(it) -> tuple[tuple[str, str], ...]:
    return tuple(it)


def union_certificate(m: int, n: int) -> FoolingCertificate:
    A = _pairs(
        [("a" * (m - 1) + "b", "")]
        + [("a" * i, "a" * (m - 1 - i) + "b") for i in range(1, m - 1)]
        + [("a" * (m - 1), "a" * (m - 1) + "b")]
    )
    B = _pairs(
        [("b" * j, "b" * (n - 1 - j) + "a") for j in range(1, n - 1)]
        + [("b" * (n - 1), "b" * (n - 1) + "a")]
    )
    return FoolingCertificate(A + B, (A, B, "b" * (n - 1) + "a", "a" * (m - 1) + "b"))


def singleton_certificate(k: int, letter: str = "a") -> FoolingCertificate:
    """Pairs splitting ``letter^(k-1)`` at every position."""
    return FoolingCertificate(_pairs((letter * i, letter * (k - 1 - i)) for i in range(k)))


def concat_certificate(m: int, n: int) -> FoolingCertificate:
    return singleton_certificate(m + n - 1)


def star_certificate(n: int) -> FoolingCertificate:
    return FoolingCertificate(_pairs([("", "")] + [("b" * i, "b" * (n - 1 - i) + "a") for i in range(1, n)]))


def union_operand_certificate(k: int, loop: str = "a", exit: str = "b") -> FoolingCertificate:
    """Fooling set for ``(loop^(k-1))* exit``: one pair per cycle state plus the final state."""
    cycle = [(loop * i, loop * (k - 1 - i) + exit) for i in range(k - 1)]
    return FoolingCertificate(_pairs(cycle + [(exit, "")]))


def complement_base(l: Nfa) -> Nfa:
    """The binary NFA ``B`` with ``L(l) = L(B) c``: drop the final state and
    make its ``c``-predecessors final."""
    (f,) = l.finals
    c = l.alphabet.index("c")
    keep = [q for q in range(l.n) if q != f]
    pos = {q: i for i, q in enumerate(keep)}
    letters = [i for i, s in enumerate(l.alphabet) if s != "c"]
    delta = [[frozenset(pos[t] for t in l.delta[q][a] if t != f) for a in letters] for q in keep]
    finals = frozenset(pos[q] for q in keep if f in l.delta[q][c])
    return Nfa(tuple(l.alphabet[a] for a in letters), delta, pos[l.initial], finals)


def complement_certificate(l: Nfa) -> FoolingCertificate:
    """``{(x, y c)}`` from a maximum fooling set ``{(x, y)}`` of the base complement."""
    base = to_min_dfa(complement_base(l))
    return FoolingCertificate(_pairs((x, y + "c") for x, y in find_fooling_set(complement_dfa(base))))


def difference_certificate(m: int, l_prime: Nfa) -> FoolingCertificate:
    """Pairs ``(x d^i, d^(m-2-i) y)`` over the complement pairs of ``l_prime``
    plus ``(w d^(m-2) c, ε)`` for a shortest ``w`` rejected by the base."""
    inner = complement_certificate(l_prime).pairs
    pairs = [(x + "d" * i, "d" * (m - 2 - i) + y) for x, y in inner for i in range(m - 1)]
    base = to_min_dfa(complement_base(l_prime))
    w = shortest_accepted(complement_dfa(base))
    if w is not None:
        pairs.append((w + "d" * (m - 2) + "c", ""))
    return FoolingCertificate(_pairs(pairs))


def fooling_fixture(family: str, m: int | None, n: int, fixtures: str | Path | None = None) -> FoolingCertificate:
    """The explicit lower-bound certificate attached to an NFA operation witness."""
    if family == "nfa-union":
        return union_certificate(m, n)
    if family == "nfa-concat-unary":
        return concat_certificate(m, n)
    if family == "nfa-star":
        return star_certificate(n)
    if family == "nfa-reverse-unary":
        return singleton_certificate(n)
    if family == "nfa-complement-ternary":
        return complement_certificate(make_witness(family, None, n, fixtures))
    if family == "nfa-difference":
        return difference_certificate(m, make_witness("nfa-complement-ternary", None, n, fixtures))
    raise DomainError(f"no explicit fooling fixture for {family!r}")


# ---------------------------------------------------------------------------
# searched-slot population
# ---------------------------------------------------------------------------


def intersection_strings(m: int, n: int) -> list[str]:
    """Strings listed as pairwise distinct for the binary intersection witness."""
    head = "a" * (n - 3) + "b" * (m - 3)
    return [head + "a", head + "aa"] + ["a" * j + "b" * i for i in range(m - 2) for j in range(n - 2)]


def intersection_predicate(k: Dfa, l: Dfa) -> bool:
    """All of :func:`intersection_strings` lead to distinct states of the
    minimal DFA for ``K ∩ L``."""
    d = dfa_bool(k, l, "intersection")
    ws = intersection_strings(k.n, l.n)
    return len({d.run(w) for w in ws}) == len(ws)


INTERSECTION_GRID = ((3, 3), (3, 4), (4, 4), (4, 5), (5, 5))
REVERSAL_BASES = (3, 4, 5)
CYCLIC_SHIFT_FULL = (4,)
NFA_CYCLIC_EXHAUSTIVE = (3,)
NFA_CYCLIC_SAMPLED = (4,)
COMPLEMENT_SIZES = (3, 4)
SEARCHED = (
    "intersection-binary-dfa",
    "reversal-binary-base",
    "cyclic-shift-full",
    "nfa-cyclic-shift-binary",
    "nfa-complement-ternary",
)


def _complement_ternary(base: Nfa) -> Nfa:
    """``L(base) c`` as a prefix-free-normal NFA with one extra final state."""
    f = base.n
    delta = [tuple(base.delta[q]) + (frozenset([f]) if q in base.finals else frozenset(),) for q in range(base.n)]
    delta.append((frozenset(),) * 3)
    return Nfa(("a", "b", "c"), delta, base.initial, frozenset([f]))


def _record(out: Path, family: str, m: int | None, n: int, outcome: SearchOutcome, machines, log, extra=None):
    name = fixture_name(family, m, n)
    index_path = out / "outcomes.json"
    index = json.loads(index_path.read_text()) if index_path.exists() else {}
    entry = outcome.to_json([name] if machines else [])
    if extra:
        entry.update(extra)
    index[name] = entry
    if machines:
        io.write_automata(list(machines), out / name)
    index_path.write_text(json.dumps(index, indent=1, sort_keys=True) + "\n")
    log(f"{family} m={m or '-'} n={n}: best {outcome.best} target {outcome.target}" + ("" if machines else " (not stored)"))


def populate_fixtures(
    out: str | Path | None = None,
    families: Sequence[str] | None = None,
    *,
    workers: int = 1,
    seed: int = 0,
    samples: int = 2000,
    budget: int = 10**9,
    log: Callable[[str], None] = lambda s: None,
) -> None:
    """Run the searches behind each searched slot and write their fixtures.

    A slot is stored only when its search reaches the target; every attempt is
    logged in ``outcomes.json`` with its best-found value.
    """
    out = Path(out or DEFAULT_FIXTURES)
    out.mkdir(parents=True, exist_ok=True)
    todo = list(families or SEARCHED)
    for fam in todo:
        if fam not in SEARCHED:
            raise DomainError(f"{fam!r} is not a searched slot; choose from {', '.join(SEARCHED)}")
    if "intersection-binary-dfa" in todo:
        for m, n in INTERSECTION_GRID:
            tgt = m * n - 2 * (m + n) + 6
            o = extremal_search(
                SearchSpec("dfa", n, 2, "intersection", m=m, target=tgt, budget=budget, workers=workers),
                accept=intersection_predicate,
            )
            pair = [canonical(w) for w in o.witnesses]
            ok = bool(pair) and intersection_predicate(*pair)
            _record(out, "intersection-binary-dfa", m, n, o, pair if o.reached else (), log, {"distinct_strings": ok})
    if "reversal-binary-base" in todo:
        for k in REVERSAL_BASES:
            o = search_reversal_base(k, 2, budget=budget, workers=workers)
            _record(out, "reversal-binary-base", None, k, o, o.witnesses if o.reached else (), log)
    if "cyclic-shift-full" in todo:
        for n in CYCLIC_SHIFT_FULL:
            tgt = (2 * n - 3) ** (n - 2)
            o = fill_template(cyclic_shift_partial_witness(n), "cyclic-shift", tgt, budget, workers)
            _record(out, "cyclic-shift-full", None, n, o, o.witnesses if o.reached else (), log)
    if "nfa-cyclic-shift-binary" in todo:
        for n in NFA_CYCLIC_EXHAUSTIVE:
            tgt = 2 * n * n - 4 * n + 3
            o = extremal_search(SearchSpec("nfa", n, 2, "nfa-cyclic-shift", target=tgt, budget=budget))
            _record(out, "nfa-cyclic-shift-binary", None, n, o, o.witnesses if o.reached else (), log)
        for n in NFA_CYCLIC_SAMPLED:
            tgt = 2 * n * n - 4 * n + 3
            spec = SearchSpec(
                "nfa", n, 2, "nfa-cyclic-shift", target=tgt, mode="sampled",
                samples=samples, seed=seed, stop_at_target=True,
            )
            o = extremal_search(spec)
            _record(out, "nfa-cyclic-shift-binary", None, n, o, o.witnesses if o.reached else (), log)
    if "nfa-complement-ternary" in todo:
        for n in COMPLEMENT_SIZES:
            o = search_complement_base(n - 1, 2, budget=budget)
            machines = [_complement_ternary(o.witnesses[0])] if o.reached else ()
            _record(out, "nfa-complement-ternary", None, n, o, machines, log)


def available(family: str, m: int | None, n: int, fixtures: str | Path | None = None) -> bool:
    try:
        make_witness(family, m, n, fixtures)
    except (UnavailableError, DomainError):
        return False
    return True
