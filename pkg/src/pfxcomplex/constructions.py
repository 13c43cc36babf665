"""Operation-specific constructions on prefix-free automata.

DFA-side constructions take complete DFAs, bring them to minimal normal form
(unique final state ``f`` whose transitions all enter the dead state ``z``)
and build the result with the exact state budget of the corresponding
bound.  NFA-side constructions take prefix-free-normal NFAs (one final
state, no outgoing transitions from it).

Numbering of merged machines: left operand first, then right operand,
then fresh states.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .automata import (
    Automaton,
    ContractViolation,
    Dfa,
    Nfa,
    as_nfa,
    check_alphabet,
    determinize,
    dfa_epsilon,
    extend_alphabet,
    is_prefix_free,
    minimize,
    pf_shape,
    standard_alphabet,
    to_min_dfa,
)


class BoolOp(enum.Enum):
    INTERSECTION = "intersection"
    UNION = "union"
    SYMMETRIC_DIFFERENCE = "symmetric-difference"
    DIFFERENCE = "difference"

    def apply(self, x: bool, y: bool) -> bool:
        if self is BoolOp.INTERSECTION:
            return x and y
        if self is BoolOp.UNION:
            return x or y
        if self is BoolOp.SYMMETRIC_DIFFERENCE:
            return x != y
        return x and not y


def _merged_alphabet(*alphabets: tuple[str, ...]) -> tuple[str, ...]:
    syms = set().union(*alphabets)
    if all(a == alphabets[0] for a in alphabets):
        return alphabets[0]
    order = {s: i for i, s in enumerate(standard_alphabet(16))}
    return check_alphabet(sorted(syms, key=lambda s: (order.get(s, 99), s)))


def _align(*machines: Automaton):
    alpha = _merged_alphabet(*(m.alphabet for m in machines))
    return [extend_alphabet(m, alpha) for m in machines]


def _pf_min(d: Automaton, what: str = "input") -> tuple[Dfa, int | None, int | None]:
    m = to_min_dfa(d)
    shape = pf_shape(m)
    if shape is None:
        raise ContractViolation(f"{what} is not prefix-free")
    return m, shape.final, shape.dead


# ---------------------------------------------------------------------------
# deterministic constructions
# ---------------------------------------------------------------------------


def _bool_rep(op: BoolOp, fk, zk, fl, zl) -> Callable[[int, int], tuple[int, int]]:
    if op is BoolOp.INTERSECTION:

        def rep(i, j):
            if (i, j) == (fk, fl):
                return i, j
            if i in (fk, zk) or j in (fl, zl):
                return zk, zl
            return i, j

    elif op is BoolOp.UNION:

        def rep(i, j):
            if (i, j) in ((fk, zl), (zk, fl)):
                return fk, fl
            return i, j

    elif op is BoolOp.SYMMETRIC_DIFFERENCE:

        def rep(i, j):
            if (i, j) == (fk, fl):
                return zk, zl
            if (i, j) == (zk, fl):
                return fk, zl
            return i, j

    else:

        def rep(i, j):
            if i == zk or (i, j) == (fk, fl):
                return zk, zl
            if i == fk:
                return fk, zl
            if j == fl:
                return i, zl
            return i, j

    return rep


def dfa_bool(k: Automaton, l: Automaton, op: BoolOp | str, *, minimal: bool = True) -> Dfa:
    """Cross-product DFA for a Boolean operation on prefix-free languages.

    The state merges that hold for every pair of prefix-free minimal DFAs
    are applied to the raw product, so with ``minimal=False`` the result
    already has at most the bound's number of states (``mn-2(m+n)+6`` for
    intersection, ``mn-2`` for union and symmetric difference,
    ``mn-m-2n+4`` for difference) whenever both operands have at least
    three states.
    """
    op = BoolOp(op)
    k, l = _align(k, l)
    K, fk, zk = _pf_min(k, "left operand")
    L, fl, zl = _pf_min(l, "right operand")
    m, n = K.n, L.n
    nondegenerate = m >= 3 and n >= 3 and None not in (fk, zk, fl, zl)
    if nondegenerate:
        rep = _bool_rep(op, fk, zk, fl, zl)
    else:
        rep = lambda i, j: (i, j)  # noqa: E731
    reps = sorted({rep(i, j) for i in range(m) for j in range(n)})
    pos = {p: x for x, p in enumerate(reps)}
    delta = []
    for i, j in reps:
        delta.append([pos[rep(K.delta[i][a], L.delta[j][a])] for a in range(len(K.alphabet))])
    finals = frozenset(pos[p] for p in reps if op.apply(p[0] in K.finals, p[1] in L.finals))
    raw = Dfa(K.alphabet, delta, pos[rep(K.initial, L.initial)], finals)
    return minimize(raw) if minimal else raw


def dfa_concat_prefix_free(k: Automaton, l: Automaton) -> Dfa:
    """DFA for ``KL`` with exactly ``m+n-2`` states (``m = sc(K)``, ``n = sc(L)``)."""
    k, l = _align(k, l)
    K, fk, zk = _pf_min(k, "left operand")
    L, fl, zl = _pf_min(l, "right operand")
    if fk is None:
        raise ContractViolation("left operand must be nonempty")
    if zl is None:
        zl = L.initial if fl is None else zl
    kept = [q for q in range(K.n) if q not in (fk, zk)]
    off = len(kept)
    idx = {q: x for x, q in enumerate(kept)}
    idx[fk] = off + L.initial
    idx[zk] = off + zl
    delta = [[idx[t] for t in K.delta[q]] for q in kept]
    delta += [[off + t for t in row] for row in L.delta]
    finals = frozenset(off + f for f in L.finals)
    return Dfa(K.alphabet, delta, idx[K.initial], finals)


def dfa_star_prefix_free(l: Automaton) -> Dfa:
    """DFA for ``L*`` on the same ``n`` states: the final state becomes the
    initial one and copies the old initial state's transitions."""
    L, f, _ = _pf_min(l)
    if f is None:
        return dfa_epsilon(L.alphabet)
    delta = [list(row) for row in L.delta]
    delta[f] = list(L.delta[L.initial])
    return Dfa(L.alphabet, delta, f, frozenset([f]))


def dfa_reverse(d: Automaton) -> Nfa:
    """NFA for the reversal: drop the dead state, flip every transition and
    swap the initial and final roles.  No transition enters the new initial
    state."""
    D, f, z = _pf_min(d)
    if f is None:
        return Nfa(D.alphabet, [[frozenset()] * len(D.alphabet)], 0, frozenset())
    kept = [q for q in range(D.n) if q != z]
    idx = {q: x for x, q in enumerate(kept)}
    delta = [[set() for _ in D.alphabet] for _ in kept]
    for q in kept:
        for a, t in enumerate(D.delta[q]):
            if t != z:
                delta[idx[t]][a].add(idx[q])
    return Nfa(D.alphabet, delta, idx[f], frozenset([idx[D.initial]]))


def reverse_sc(d: Automaton) -> int:
    return to_min_dfa(dfa_reverse(d)).n


def reversal_complexity(d: Dfa) -> int:
    """sc of the reversal of an arbitrary complete DFA with one final state."""
    if len(d.finals) != 1:
        raise ContractViolation("reversal_complexity expects exactly one final state")
    (f,) = d.finals
    rev = [[set() for _ in d.alphabet] for _ in range(d.n)]
    for q, row in enumerate(d.delta):
        for a, t in enumerate(row):
            rev[t][a].add(q)
    return to_min_dfa(Nfa(d.alphabet, rev, f, frozenset([d.initial]))).n


def augment_reversal_witness(base: Dfa) -> Dfa:
    """Ternary prefix-free DFA from a binary base with one final state.

    States of the base keep their numbers; the base's final state moves by
    ``c`` to a new sole final state, every other state moves by ``c`` to a
    new dead state.
    """
    if base.alphabet != ("a", "b"):
        raise ContractViolation(f"base must be over ('a', 'b'), got {base.alphabet}")
    if len(base.finals) != 1:
        raise ContractViolation("base must have exactly one final state")
    (pivot,) = base.finals
    fin, dead = base.n, base.n + 1
    delta = [list(row) + [fin if q == pivot else dead] for q, row in enumerate(base.delta)]
    delta.append([dead] * 3)
    delta.append([dead] * 3)
    return Dfa(("a", "b", "c"), delta, base.initial, frozenset([fin]))


def pf_layout(d: Automaton) -> tuple[Dfa, np.ndarray]:
    """Minimal prefix-free DFA renumbered as initial 0, live states in BFS
    order, final ``n-2`` and dead ``n-1``.  Requires ``sc >= 3``."""
    D, f, z = _pf_min(d)
    if f is None or D.initial == f:
        raise ContractViolation("layout needs a language other than {} and {ε}")
    order = [q for q in range(D.n) if q not in (f, z)]
    pos = {q: x for x, q in enumerate(order)}
    pos[f], pos[z] = D.n - 2, D.n - 1
    table = np.empty((D.n, len(D.alphabet)), dtype=np.int64)
    for q in range(D.n):
        table[pos[q]] = [pos[t] for t in D.delta[q]]
    out = Dfa.from_table(D.alphabet, table, 0, [D.n - 2])
    return out, table


@dataclass(frozen=True)
class SplitConcatenationPlan:
    """One term ``L(B_i) L(C_i)`` of the cyclic-shift union (0-based pivot)."""

    pivot: int
    left: Dfa
    right: Dfa
    concatenation: Dfa


def split_concatenation_plans(d: Automaton) -> list[SplitConcatenationPlan]:
    laid, table = pf_layout(d)
    n = laid.n
    parts, pfin, pinit = _kernels.cyclic_parts(table, n)
    plans = []
    for i in range(n - 2):
        left = Dfa(laid.alphabet, laid.delta, i, frozenset([n - 2]))
        right = Dfa(laid.alphabet, laid.delta, 0, frozenset([i]))
        conc = Dfa.from_table(laid.alphabet, parts[i], int(pinit[i]), [int(pfin[i])])
        plans.append(SplitConcatenationPlan(i, left, right, conc))
    return plans


def dfa_cyclic_shift(d: Automaton, *, minimal: bool = True) -> Dfa:
    """DFA for the cyclic shift as the reachable union product of the
    ``n-2`` split concatenations (each with ``2n-3`` states)."""
    D, f, _ = _pf_min(d)
    if f is None or D.initial == f:
        return D
    laid, table = pf_layout(D)
    rows, acc = _kernels.cyclic_product(table, laid.n)
    raw = Dfa.from_table(laid.alphabet, rows, 0, np.flatnonzero(acc))
    return minimize(raw) if minimal else raw


# ---------------------------------------------------------------------------
# nondeterministic constructions
# ---------------------------------------------------------------------------


def _normal(a: Automaton, what: str = "input") -> tuple[Nfa, int, int]:
    a = as_nfa(a)
    if not a.is_prefix_free_normal:
        raise ContractViolation(f"{what} is not a prefix-free-normal Nfa")
    (f,) = a.finals
    return a, a.initial, f


def _empty_nfa(alphabet) -> Nfa:
    return Nfa(alphabet, [[frozenset()] * len(alphabet)], 0, frozenset())


def nfa_union(k: Automaton, l: Automaton) -> Nfa:
    """``m+n`` states: both machines with their final states merged plus a
    fresh initial state copying the first moves of both initial states."""
    k, l = _align(as_nfa(k), as_nfa(l))
    K, sk, fk = _normal(k, "left operand")
    L, sl, fl = _normal(l, "right operand")
    m = K.n
    lkept = [q for q in range(L.n) if q != fl]
    lidx = {q: m + x for x, q in enumerate(lkept)}
    lidx[fl] = fk
    fresh = m + len(lkept)
    delta = [[set(ts) for ts in row] for row in K.delta]
    for q in lkept:
        delta.append([{lidx[t] for t in ts} for ts in L.delta[q]])
    delta.append([set(K.delta[sk][a]) | {lidx[t] for t in L.delta[sl][a]} for a in range(len(K.alphabet))])
    finals = {fk}
    if sk == fk or sl == fl:
        finals.add(fresh)
    return Nfa(K.alphabet, delta, fresh, frozenset(finals))


def nfa_intersection(k: Automaton, l: Automaton) -> Nfa:
    """Product on pairs of non-final states plus the single final pair:
    ``(m-1)(n-1)+1`` states."""
    k, l = _align(as_nfa(k), as_nfa(l))
    K, sk, fk = _normal(k, "left operand")
    L, sl, fl = _normal(l, "right operand")
    if (sk == fk) != (sl == fl):
        return _empty_nfa(K.alphabet)
    pairs = [(i, j) for i in range(K.n) if i != fk for j in range(L.n) if j != fl]
    pairs.append((fk, fl))
    pos = {p: x for x, p in enumerate(pairs)}
    delta = []
    for i, j in pairs:
        row = []
        for a in range(len(K.alphabet)):
            row.append({pos[(x, y)] for x in K.delta[i][a] for y in L.delta[j][a] if (x, y) in pos})
        delta.append(row)
    return Nfa(K.alphabet, delta, pos[(sk, sl)], frozenset([pos[(fk, fl)]]))


def nfa_concat(k: Automaton, l: Automaton) -> Nfa:
    """``m+n-1`` states: the final state of ``K`` is identified with the
    initial state of ``L``."""
    k, l = _align(as_nfa(k), as_nfa(l))
    K, sk, fk = _normal(k, "left operand")
    L, sl, fl = _normal(l, "right operand")
    kept = [q for q in range(K.n) if q != fk]
    off = len(kept)
    idx = {q: x for x, q in enumerate(kept)}
    idx[fk] = off + sl
    delta = [[{idx[t] for t in ts} for ts in K.delta[q]] for q in kept]
    delta += [[{off + t for t in ts} for ts in row] for row in L.delta]
    return Nfa(K.alphabet, delta, idx[sk], frozenset([off + fl]))


def nfa_reverse(l: Automaton) -> Nfa:
    L, s, f = _normal(l)
    delta = [[set() for _ in L.alphabet] for _ in range(L.n)]
    for q, row in enumerate(L.delta):
        for a, ts in enumerate(row):
            for t in ts:
                delta[t][a].add(q)
    return Nfa(L.alphabet, delta, f, frozenset([s]))


def nfa_star(l: Automaton) -> Nfa:
    """Same ``n`` states: the final state becomes initial and accepting and
    gets the initial state's outgoing transitions."""
    L, s, f = _normal(l)
    delta = [list(row) for row in L.delta]
    delta[f] = list(L.delta[s])
    return Nfa(L.alphabet, delta, f, frozenset([f]))


def nfa_complement_prefix_free(l: Automaton) -> Nfa:
    """NFA with at most ``2^(n-1)`` states for the complement of a
    prefix-free ``n``-state NFA language."""
    L, _, _ = _normal(l)
    if not is_prefix_free(L):
        raise ContractViolation("input language is not prefix-free")
    D = minimize(determinize(L, merge_finals=True))
    shape = pf_shape(D)
    k = len(D.alphabet)
    if shape.final is None:
        return Nfa(D.alphabet, [[frozenset([0])] * k], 0, frozenset([0]))
    f, z = shape.final, shape.dead
    if D.initial == f:
        # complement of {ε} is Σ+
        return Nfa(D.alphabet, [[frozenset([1])] * k, [frozenset([1])] * k], 0, frozenset([1]))
    s = D.initial
    kept = [q for q in range(D.n) if q != f]
    idx = {q: x for x, q in enumerate(kept)}
    delta = []
    for q in kept:
        row = []
        for t in D.delta[q]:
            if t == f:
                row.append({idx[z]})
            elif t == z:
                row.append({idx[z], idx[s]})
            else:
                row.append({idx[t]})
        delta.append(row)
    finals = frozenset(idx[q] for q in kept if q != z)
    return Nfa(D.alphabet, delta, idx[s], finals)


def nfa_difference(k: Automaton, l: Automaton) -> Nfa:
    """``K`` intersected with the complement machine of ``L``; pairs whose
    ``K``-side is final collapse into one final state, giving at most
    ``(m-1)2^(n-1)+1`` states."""
    k, l = _align(as_nfa(k), as_nfa(l))
    K, sk, fk = _normal(k, "left operand")
    C = nfa_complement_prefix_free(l)
    if sk == fk:
        return Nfa(K.alphabet, [[frozenset()] * len(K.alphabet)], 0, frozenset([0]) if C.initial in C.finals else frozenset())
    pairs = [(i, q) for i in range(K.n) if i != fk for q in range(C.n)]
    pos = {p: x for x, p in enumerate(pairs)}
    fin = len(pairs)
    delta = []
    for i, q in pairs:
        row = []
        for a in range(len(K.alphabet)):
            tgt = set()
            for x in K.delta[i][a]:
                for y in C.delta[q][a]:
                    if x == fk:
                        if y in C.finals:
                            tgt.add(fin)
                    else:
                        tgt.add(pos[(x, y)])
            row.append(tgt)
        delta.append(row)
    delta.append([set() for _ in K.alphabet])
    return Nfa(K.alphabet, delta, pos[(sk, C.initial)], frozenset([fin]))


def nfa_cyclic_shift(l: Automaton) -> Nfa:
    """``2n^2-4n+3`` states: one ``2n-2``-state block per non-final pivot
    state plus a fresh initial state that copies the first moves of every
    block's initial state."""
    L, s, f = _normal(l)
    if s == f:
        return L
    n = L.n
    k = len(L.alphabet)
    pivots = [q for q in range(n) if q != f]
    c_states = [q for q in range(n) if q not in (s, f)]
    size = 2 * n - 2
    delta: list[list[set[int]]] = []
    finals = set()
    for b, i in enumerate(pivots):
        base = b * size
        cpos = {q: base + n + x for x, q in enumerate(c_states)}
        merged = base + f
        cpos[s] = merged
        block = [[set() for _ in range(k)] for _ in range(size)]
        for q in range(n):
            if q == f:
                continue
            for a in range(k):
                block[q][a] = {base + t for t in L.delta[q][a]}
        for q in [s] + c_states:
            here = cpos[q] - base
            for a in range(k):
                block[here][a] = {cpos[t] for t in L.delta[q][a] if t != f}
        delta.extend(block)
        finals.add(cpos[i])
    fresh = len(delta)
    delta.append([set().union(*(delta[b * size + i][a] for b, i in enumerate(pivots))) for a in range(k)])
    return Nfa(L.alphabet, delta, fresh, frozenset(finals))
