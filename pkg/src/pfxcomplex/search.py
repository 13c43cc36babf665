"""Exhaustive and sampled searches over small prefix-free automata.

Searches maximize the state complexity of an operation's result.  An
exhaustive search whose best value stays below a target is a machine-checked
impossibility statement for that size and alphabet.

Work is split into contiguous index ranges; the reducer keeps the maximum and
breaks ties by the smallest index, so results do not depend on the number of
workers.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _kernels
from .automata import (
    Automaton,
    Dfa,
    Nfa,
    is_prefix_free,
    standard_alphabet,
    to_min_dfa,
)
from .complexity import (
    ResourceLimitError,
    find_extended_certificate,
    find_fooling_set,
)
from .constructions import BoolOp, nfa_cyclic_shift

DFA_EXHAUSTIVE_CAP = 6
NFA_EXHAUSTIVE_CAP = 4
DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class SearchSpec:
    kind: str
    n: int
    k: int
    operation: str
    m: int | None = None
    partner: Automaton | None = None
    target: int | None = None
    budget: int = DEFAULT_BUDGET
    mode: str = "exhaustive"
    samples: int = 1000
    seed: int = 0
    workers: int = 1
    stop_at_target: bool = False


@dataclass
class SearchOutcome:
    best: int
    target: int | None
    exhaustive: bool
    witnesses: list[Automaton] = field(default_factory=list)
    examined: int = 0
    seed: int | None = None
    operation: str = ""

    def to_json(self, witness_files: Sequence[str] = ()) -> dict:
        out = {
            "best": self.best,
            "target": self.target,
            "exhaustive": self.exhaustive,
            "witnesses": list(witness_files),
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @property
    def reached(self) -> bool:
        return self.target is not None and self.best >= self.target


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def pf_dfa_space(n: int, k: int) -> int:
    return n ** ((n - 2) * k)


def pf_nfa_space(n: int, k: int) -> int:
    return (1 << n) ** ((n - 1) * k)


def dfa_from_pf_index(idx: int, n: int, k: int) -> Dfa:
    table = _kernels.decode_pf(idx, n, k)
    return Dfa.from_table(standard_alphabet(k), table, 0, [n - 2])


def nfa_from_index(idx: int, n: int, k: int) -> Nfa:
    base = 1 << n
    delta = []
    for _q in range(n - 1):
        row = []
        for _a in range(k):
            m = idx % base
            idx //= base
            row.append(frozenset(t for t in range(n) if m >> t & 1))
        delta.append(row)
    delta.append([frozenset()] * k)
    return Nfa(standard_alphabet(k), delta, 0, frozenset([n - 1]))


def _nfa_index(succ: Sequence[Sequence[int]], n: int, k: int) -> int:
    base = 1 << n
    idx = 0
    for q in range(n - 2, -1, -1):
        for a in range(k - 1, -1, -1):
            idx = idx * base + succ[q][a]
    return idx


def _nfa_canonical(idx: int, n: int, k: int) -> bool:
    """Smallest index among relabelings of the inner states ``1..n-2``."""
    nfa = nfa_from_index(idx, n, k)
    masks = nfa.masks
    inner = list(range(1, n - 1))
    for perm in itertools.permutations(inner):
        if list(perm) == inner:
            continue
        mp = {0: 0, n - 1: n - 1}
        mp.update(zip(inner, perm))
        new = [[0] * k for _ in range(n)]
        for q in range(n):
            for a in range(k):
                m = sum(1 << mp[t] for t in range(n) if masks[q][a] >> t & 1)
                new[mp[q]][a] = m
        if _nfa_index(new, n, k) < idx:
            return False
    return True


def enumerate_prefix_free(kind: str, n: int, k: int, budget: int = DEFAULT_BUDGET) -> Iterator[Automaton]:
    """Every canonical prefix-free machine with ``n`` states over ``k`` letters.

    ``dfa``: complete machines, initial 0, live states ``0..n-3`` numbered in
    BFS order, unique final ``n-2`` whose moves all enter dead ``n-1``; the
    final state must be reachable.  ``nfa``: prefix-free-normal machines
    (initial 0, final ``n-1``) up to relabeling of inner states, filtered by
    prefix-freeness of the language.
    """
    if kind == "dfa":
        if n > DFA_EXHAUSTIVE_CAP or n < 3:
            raise ResourceLimitError(f"exhaustive dfa mode needs 3 <= n <= {DFA_EXHAUSTIVE_CAP}")
        space = pf_dfa_space(n, k)
        if space > budget:
            raise ResourceLimitError(f"{space} tables exceed budget {budget}")
        for idx in range(space):
            table = _kernels.decode_pf(idx, n, k)
            if _kernels.canonical_pf(table, n) and _kernels.reachable(table, 0)[n - 2]:
                yield Dfa.from_table(standard_alphabet(k), table, 0, [n - 2])
    elif kind == "nfa":
        if n > NFA_EXHAUSTIVE_CAP or n < 1:
            raise ResourceLimitError(f"exhaustive nfa mode needs 1 <= n <= {NFA_EXHAUSTIVE_CAP}")
        space = pf_nfa_space(n, k)
        if space > budget:
            raise ResourceLimitError(f"{space} tables exceed budget {budget}")
        for idx in range(space):
            if not _nfa_canonical(idx, n, k):
                continue
            nfa = nfa_from_index(idx, n, k)
            if is_prefix_free(nfa):
                yield nfa
    else:
        raise ValueError(f"unknown machine kind {kind!r}")


def minimal_pf_dfas(n: int, k: int, budget: int = DEFAULT_BUDGET) -> list[Dfa]:
    """Canonical prefix-free DFAs with exactly ``n`` states that are minimal."""
    out = []
    for d in enumerate_prefix_free("dfa", n, k, budget):
        if _kernels.min_size(d.table, d.final_vector, 0) == n:
            out.append(d)
    return out


# ---------------------------------------------------------------------------
# parallel range reduction
# ---------------------------------------------------------------------------


def _chunks(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total or 1))
    step = -(-total // workers)
    return [(s, min(total, s + step)) for s in range(0, total, step)]


def _map(fn, arglist: list[tuple], workers: int) -> list:
    if workers <= 1 or len(arglist) <= 1:
        return [fn(*args) for args in arglist]
    with ProcessPoolExecutor(max_workers=min(workers, len(arglist))) as ex:
        return list(ex.map(fn, *zip(*arglist)))


def _reduce(results: list[tuple]) -> tuple[int, int]:
    best, best_idx = -1, -1
    for res in results:
        b, i = res[0], res[1]
        if b > best:
            best, best_idx = b, i
    return best, best_idx


def _sweep(name: str, args: tuple, total: int, workers: int) -> list[tuple]:
    fn = getattr(_kernels, name)
    return _map(fn, [(*args, s, e) for s, e in _chunks(total, workers)], workers)


# ---------------------------------------------------------------------------
# extremal search
# ---------------------------------------------------------------------------

UNARY_DFA_SWEEPS = {"reversal": "sweep_pf_reversal", "cyclic-shift": "sweep_pf_cyclic"}
BINARY_DFA_OPS = {op.value for op in BoolOp}


def _product_sc(t1: np.ndarray, f1: np.ndarray, t2: np.ndarray, f2: np.ndarray, op: BoolOp) -> int:
    n2 = t2.shape[0]
    prod = (t1[:, None, :] * n2 + t2[None, :, :]).reshape(-1, t1.shape[1])
    fin = np.vectorize(op.apply)(f1[:, None], f2[None, :]).reshape(-1)
    return _kernels.min_size(prod, fin, 0)


def _check_space(space: int, spec: SearchSpec) -> None:
    if space > spec.budget:
        raise ResourceLimitError(f"search space {space} exceeds budget {spec.budget}")


def extremal_search(spec: SearchSpec, accept: Callable[..., bool] | None = None) -> SearchOutcome:
    """Maximize the minimized size of ``spec.operation`` over the space.

    ``accept`` (binary DFA operations only) narrows the reported witness to
    the first maximal pair satisfying it, if any does.
    """
    op = spec.operation
    if spec.mode == "sampled":
        return _sampled_search(spec)
    if spec.kind == "dfa" and op in UNARY_DFA_SWEEPS:
        if spec.n > DFA_EXHAUSTIVE_CAP:
            raise ResourceLimitError(f"exhaustive dfa mode needs n <= {DFA_EXHAUSTIVE_CAP}")
        space = pf_dfa_space(spec.n, spec.k)
        _check_space(space, spec)
        results = _sweep(UNARY_DFA_SWEEPS[op], (spec.n, spec.k), space, spec.workers)
        best, idx = _reduce(results)
        count = sum(r[2] for r in results)
        wit = [dfa_from_pf_index(idx, spec.n, spec.k)] if idx >= 0 else []
        return SearchOutcome(best, spec.target, True, wit, count, None, op)
    if spec.kind == "nfa" and op == "nfa-to-dfa":
        if spec.n > NFA_EXHAUSTIVE_CAP:
            raise ResourceLimitError(f"exhaustive nfa mode needs n <= {NFA_EXHAUSTIVE_CAP}")
        space = pf_nfa_space(spec.n, spec.k)
        _check_space(space, spec)
        results = _sweep("sweep_nfa_det", (spec.n, spec.k), space, spec.workers)
        best, idx = _reduce(results)
        count = sum(r[2] for r in results)
        wit = [nfa_from_index(idx, spec.n, spec.k)] if idx >= 0 else []
        return SearchOutcome(best, spec.target, True, wit, count, None, op)
    if spec.kind == "dfa" and op in BINARY_DFA_OPS:
        return _binary_dfa_search(spec, BoolOp(op), accept)
    if spec.kind == "nfa" and op == "nfa-cyclic-shift":
        return _nfa_cyclic_exhaustive(spec)
    raise ValueError(f"unsupported search: kind={spec.kind!r} operation={op!r}")


def _binary_dfa_search(spec: SearchSpec, op: BoolOp, accept) -> SearchOutcome:
    m = spec.m if spec.m is not None else spec.n
    lefts = minimal_pf_dfas(m, spec.k, spec.budget)
    if spec.partner is not None:
        rights = [to_min_dfa(spec.partner)]
    else:
        rights = minimal_pf_dfas(spec.n, spec.k, spec.budget)
    _check_space(len(lefts) * len(rights), spec)
    best, best_pair, first_ok = -1, None, None
    for left in lefts:
        t1, f1 = left.table, left.final_vector
        for right in rights:
            if right.alphabet != left.alphabet:
                continue
            v = _product_sc(t1, f1, right.table, right.final_vector, op)
            if v > best:
                best, best_pair = v, (left, right)
                first_ok = None
            if v == best and first_ok is None and accept is not None and accept(left, right):
                first_ok = (left, right)
    pair = first_ok or best_pair
    return SearchOutcome(best, spec.target, True, list(pair) if pair else [], len(lefts) * len(rights), None, op.value)


def nfa_cs_lower_bound(nfa: Nfa, limit: int = 512, exact_nodes: int | None = 400) -> int:
    """Certified nsc lower bound for the cyclic shift of ``nfa``'s language."""
    cs = to_min_dfa(nfa_cyclic_shift(nfa))
    lo = len(find_fooling_set(cs, limit, exact_nodes))
    ext = find_extended_certificate(cs, limit, exact_nodes)
    if ext is not None:
        lo = max(lo, ext.claimed_bound)
    return lo


def _nfa_cyclic_exhaustive(spec: SearchSpec) -> SearchOutcome:
    best, wit, count = -1, [], 0
    for nfa in enumerate_prefix_free("nfa", spec.n, spec.k, spec.budget):
        if to_min_dfa(nfa).n < spec.n:
            continue
        count += 1
        v = nfa_cs_lower_bound(nfa)
        if v > best:
            best, wit = v, [nfa]
            if spec.stop_at_target and spec.target is not None and v >= spec.target:
                return SearchOutcome(best, spec.target, False, wit, count, None, spec.operation)
    return SearchOutcome(best, spec.target, not spec.stop_at_target or best < (spec.target or 0), wit, count, None, spec.operation)


def _sampled_search(spec: SearchSpec) -> SearchOutcome:
    rng = np.random.default_rng(spec.seed)
    best, wit, examined = -1, [], 0
    if spec.kind == "nfa":
        n, k = spec.n, spec.k
        for _ in range(spec.samples):
            # a random partial deterministic table plus sparse extra edges;
            # uniform subsets are almost never prefix-free
            extra = rng.uniform(0.0, 0.35)
            succ = []
            for _q in range(n - 1):
                row = []
                for _a in range(k):
                    mask = 0 if rng.random() < 0.15 else 1 << int(rng.integers(0, n))
                    for t in range(n):
                        if rng.random() < extra:
                            mask |= 1 << t
                    row.append(mask)
                succ.append(row)
            succ.append([0] * k)
            nfa = nfa_from_index(_nfa_index(succ, n, k), n, k)
            if not is_prefix_free(nfa) or to_min_dfa(nfa).n <= n:
                continue
            examined += 1
            if spec.operation == "nfa-cyclic-shift":
                v = nfa_cs_lower_bound(nfa)
            elif spec.operation == "nfa-to-dfa":
                v = to_min_dfa(nfa).n
            else:
                raise ValueError(f"unsupported sampled nfa operation {spec.operation!r}")
            if v > best:
                best, wit = v, [nfa]
                if spec.stop_at_target and spec.target is not None and v >= spec.target:
                    break
        return SearchOutcome(best, spec.target, False, wit, examined, spec.seed, spec.operation)
    if spec.kind == "dfa" and spec.operation in UNARY_DFA_SWEEPS:
        n, k = spec.n, spec.k
        space = pf_dfa_space(n, k)
        name = UNARY_DFA_SWEEPS[spec.operation]
        for _ in range(spec.samples):
            idx = int(rng.integers(0, space))
            b, i, c = getattr(_kernels, name)(n, k, idx, idx + 1)
            examined += c
            if c and b > best:
                best, wit = b, [dfa_from_pf_index(i, n, k)]
        return SearchOutcome(best, spec.target, False, wit, examined, spec.seed, spec.operation)
    raise ValueError(f"unsupported sampled search: {spec.kind!r}/{spec.operation!r}")


# ---------------------------------------------------------------------------
# base machines for reversal
# ---------------------------------------------------------------------------


def base_from_index(idx: int, n: int, k: int) -> Dfa:
    fin = idx % n
    idx //= n
    flat = []
    for _ in range(n * k):
        flat.append(idx % n)
        idx //= n
    return Dfa.from_table(standard_alphabet(k), np.asarray(flat).reshape(n, k), 0, [fin])


def search_reversal_base(n: int, k: int = 2, budget: int = 10**9, workers: int = 1) -> SearchOutcome:
    """First complete ``n``-state DFA (initial 0, one final state) whose
    reversal needs ``2^n`` states, in index order."""
    target = 1 << n
    space = n * n ** (n * k)
    if space > budget:
        raise ResourceLimitError(f"search space {space} exceeds budget {budget}")
    # blocks are scanned in order so the first hit is the same for any worker count
    step = (1 << 16) * max(1, workers)
    best, best_idx = -1, -1
    for start in range(0, space, step):
        stop = min(space, start + step)
        ranges = [(n, k, start + s, start + e, target) for s, e in _chunks(stop - start, workers)]
        b, i = _reduce(_map(_kernels.sweep_base_reversal, ranges, workers))
        if b > best:
            best, best_idx = b, i
        if best >= target:
            break
    exhaustive = best < target
    return SearchOutcome(best, target, exhaustive, [base_from_index(best_idx, n, k)], 0, None, "reversal-base")


# ---------------------------------------------------------------------------
# template filling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DfaTemplate:
    """Prefix-free layout table with holes (``-1``) on live states."""

    alphabet: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    choices: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.table)

    @property
    def holes(self) -> list[tuple[int, int]]:
        return [(q, a) for q, row in enumerate(self.table) for a, t in enumerate(row) if t < 0]

    def fill(self, idx: int) -> Dfa:
        t = np.asarray(self.table, dtype=np.int64)
        base = len(self.choices)
        for q, a in self.holes:
            t[q, a] = self.choices[idx % base]
            idx //= base
        return Dfa.from_table(self.alphabet, t, 0, [self.n - 2])


def fill_template(
    template: DfaTemplate,
    objective: str = "cyclic-shift",
    target: int | None = None,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> SearchOutcome:
    """Exhaustively assign the holes, maximizing the minimized cyclic-shift
    size; stops at the first assignment reaching ``target``."""
    if objective != "cyclic-shift":
        raise ValueError(f"unsupported template objective {objective!r}")
    n = template.n
    holes = template.holes
    for q, _ in holes:
        if q >= n - 2:
            raise ValueError("holes are only allowed on live states")
    space = len(template.choices) ** len(holes)
    if space > budget:
        raise ResourceLimitError(f"{space} fillings exceed budget {budget}")
    table = np.asarray(template.table, dtype=np.int64)
    tgt = target if target is not None else 1 << 62
    hole_arr = np.asarray(holes, dtype=np.int64).reshape(-1, 2)
    choices = np.asarray(template.choices, dtype=np.int64)
    ranges = [(table, hole_arr, choices, s, e, n, tgt) for s, e in _chunks(space, workers)]
    results = _map(_kernels.sweep_template, ranges, workers)
    best, idx = _reduce(results)
    exhaustive = target is None or best < target
    return SearchOutcome(best, target, exhaustive, [template.fill(idx)], space, None, "cyclic-shift")


# ---------------------------------------------------------------------------
# complement base machines
# ---------------------------------------------------------------------------


def complement_dfa(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.delta, d.initial, frozenset(range(d.n)) - d.finals)


def search_complement_base(s: int, k: int = 2, budget: int = 10**7) -> SearchOutcome:
    """First ``s``-state NFA over ``k`` letters (initial 0, any nonempty final
    set) whose complement admits a fooling set of size ``2^s``.

    Machines are ordered by transition masks (state-major, letter-minor, first
    cell most significant) and then by final mask.  Candidates whose minimal
    DFA has fewer than ``2^s`` states are skipped: a fooling set never beats
    the complete DFA of the complement.
    """
    target = 1 << s
    space = (1 << s) ** (s * k) * ((1 << s) - 1)
    if space > budget:
        raise ResourceLimitError(f"search space {space} exceeds budget {budget}")
    alphabet = standard_alphabet(k)
    subsets = [frozenset(t for t in range(s) if m >> t & 1) for m in range(1 << s)]
    best, wit, examined = -1, [], 0
    for cells in itertools.product(range(1 << s), repeat=s * k):
        delta = [[subsets[cells[q * k + a]] for a in range(k)] for q in range(s)]
        for fm in range(1, 1 << s):
            nfa = Nfa(alphabet, delta, 0, subsets[fm])
            d = to_min_dfa(nfa)
            if d.n < target:
                continue
            examined += 1
            v = len(find_fooling_set(complement_dfa(d)))
            if v > best:
                best, wit = v, [nfa]
            if v >= target:
                return SearchOutcome(best, target, False, wit, examined, None, "complement-base")
    return SearchOutcome(best, target, True, wit, examined, None, "complement-base")
