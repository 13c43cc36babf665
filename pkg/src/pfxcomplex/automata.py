"""Automaton types and the basic algorithms every other module builds on."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from . import _kernels

CANONICAL_SYMBOLS = "abcdgh"
MAX_ALPHABET = 16


class AutomatonError(Exception):
    """Base class for errors raised by this package."""


class ContractViolation(AutomatonError):
    """An operation was called on an input outside its precondition."""


class RejectedInput(AutomatonError):
    """A string contains a symbol outside the automaton's alphabet."""


def check_alphabet(symbols: Iterable[str]) -> tuple[str, ...]:
    syms = tuple(symbols)
    if not syms:
        raise ValueError("alphabet must be nonempty")
    if len(set(syms)) != len(syms):
        raise ValueError(f"duplicate symbols in alphabet {syms!r}")
    if len(syms) > MAX_ALPHABET:
        raise ValueError(f"alphabet larger than {MAX_ALPHABET} symbols")
    for s in syms:
        if not isinstance(s, str) or len(s) != 1:
            raise ValueError(f"symbol {s!r} is not a single character")
    return syms


def standard_alphabet(k: int) -> tuple[str, ...]:
    """First ``k`` symbols in canonical order ``a b c d g h`` then ``i j ...``."""
    extra = [chr(c) for c in range(ord("i"), ord("z") + 1)]
    pool = list(CANONICAL_SYMBOLS) + extra
    return check_alphabet(pool[:k])


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton; ``delta[q][a]`` indexes the alphabet."""

    alphabet: tuple[str, ...]
    delta: tuple[tuple[int, ...], ...]
    initial: int = 0
    finals: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", check_alphabet(self.alphabet))
        object.__setattr__(self, "delta", tuple(tuple(int(t) for t in row) for row in self.delta))
        object.__setattr__(self, "finals", frozenset(int(f) for f in self.finals))
        n, k = len(self.delta), len(self.alphabet)
        if n == 0:
            raise ValueError("a Dfa needs at least one state")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        for f in self.finals:
            if not 0 <= f < n:
                raise ValueError(f"final state {f} out of range")
        for q, row in enumerate(self.delta):
            if len(row) != k:
                raise ValueError(f"state {q} has {len(row)} transitions, expected {k}")
            for t in row:
                if not 0 <= t < n:
                    raise ValueError(f"transition {q} -> {t} out of range")

    @property
    def n(self) -> int:
        return len(self.delta)

    @cached_property
    def table(self) -> np.ndarray:
        t = np.asarray(self.delta, dtype=np.int64).reshape(self.n, len(self.alphabet))
        t.flags.writeable = False
        return t

    @cached_property
    def final_vector(self) -> np.ndarray:
        v = np.zeros(self.n, dtype=bool)
        v[list(self.finals)] = True
        v.flags.writeable = False
        return v

    @cached_property
    def _sym(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.alphabet)}

    def run(self, w: str, start: int | None = None) -> int:
        q = self.initial if start is None else start
        sym = self._sym
        for ch in w:
            try:
                q = self.delta[q][sym[ch]]
            except KeyError:
                raise RejectedInput(f"symbol {ch!r} not in alphabet {self.alphabet}") from None
        return q

    def accepts(self, w: str) -> bool:
        return self.run(w) in self.finals

    def to_nfa(self) -> "Nfa":
        return Nfa(
            self.alphabet,
            tuple(tuple(frozenset([t]) for t in row) for row in self.delta),
            self.initial,
            self.finals,
        )

    @classmethod
    def from_table(cls, alphabet, table, initial=0, finals=()) -> "Dfa":
        return cls(tuple(alphabet), tuple(tuple(int(x) for x in row) for row in np.asarray(table)), int(initial), frozenset(finals))


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton with one initial state and no epsilon moves."""

    alphabet: tuple[str, ...]
    delta: tuple[tuple[frozenset[int], ...], ...]
    initial: int = 0
    finals: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", check_alphabet(self.alphabet))
        object.__setattr__(
            self, "delta", tuple(tuple(frozenset(int(t) for t in ts) for ts in row) for row in self.delta)
        )
        object.__setattr__(self, "finals", frozenset(int(f) for f in self.finals))
        n, k = len(self.delta), len(self.alphabet)
        if n == 0:
            raise ValueError("an Nfa needs at least one state")
        if not 0 <= self.initial < n:
            raise ValueError(f"initial state {self.initial} out of range")
        for f in self.finals:
            if not 0 <= f < n:
                raise ValueError(f"final state {f} out of range")
        for q, row in enumerate(self.delta):
            if len(row) != k:
                raise ValueError(f"state {q} has {len(row)} transition sets, expected {k}")
            for ts in row:
                for t in ts:
                    if not 0 <= t < n:
                        raise ValueError(f"transition {q} -> {t} out of range")

    @property
    def n(self) -> int:
        return len(self.delta)

    @cached_property
    def masks(self) -> list[list[int]]:
        """Successor bitmasks, ``masks[q][a]``, as Python ints."""
        return [[sum(1 << t for t in ts) for ts in row] for row in self.delta]

    @cached_property
    def final_mask(self) -> int:
        return sum(1 << f for f in self.finals)

    @cached_property
    def _sym(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.alphabet)}

    def step(self, states: frozenset[int] | set[int], ch: str) -> frozenset[int]:
        try:
            a = self._sym[ch]
        except KeyError:
            raise RejectedInput(f"symbol {ch!r} not in alphabet {self.alphabet}") from None
        out: set[int] = set()
        for q in states:
            out |= self.delta[q][a]
        return frozenset(out)

    def run(self, w: str, start: Iterable[int] | None = None) -> frozenset[int]:
        cur = frozenset([self.initial]) if start is None else frozenset(start)
        for ch in w:
            cur = self.step(cur, ch)
        return cur

    def accepts(self, w: str) -> bool:
        return bool(self.run(w) & self.finals)

    def transitions(self) -> Iterator[tuple[int, str, int]]:
        for q, row in enumerate(self.delta):
            for a, ts in enumerate(row):
                for t in sorted(ts):
                    yield q, self.alphabet[a], t

    @property
    def is_prefix_free_normal(self) -> bool:
        """Exactly one final state and it has no outgoing transitions."""
        if len(self.finals) != 1:
            return False
        (f,) = self.finals
        return all(not ts for ts in self.delta[f])


Automaton = Union[Dfa, Nfa]


def accepts(a: Automaton, w: str) -> bool:
    return a.accepts(w)


def as_nfa(a: Automaton) -> Nfa:
    return a.to_nfa() if isinstance(a, Dfa) else a


# ---------------------------------------------------------------------------
# determinization and minimization
# ---------------------------------------------------------------------------


def _subset_dfa(nfa: Nfa, merge: bool) -> tuple[Dfa, list[int]]:
    rows, acc, masks = _kernels.subset(nfa.masks, 1 << nfa.initial, nfa.final_mask, merge)
    finals = frozenset(int(i) for i in np.flatnonzero(acc))
    return Dfa.from_table(nfa.alphabet, rows, 0, finals), [int(m) for m in masks]


def determinize(a: Automaton, merge_finals: bool = False) -> Dfa:
    """Reachable subset automaton.

    With ``merge_finals`` every accepting subset collapses into one state
    that moves to the empty subset; only sound for prefix-free languages.
    """
    nfa = as_nfa(a)
    if merge_finals and not is_prefix_free(nfa):
        raise ContractViolation("merge_finals requires a prefix-free language")
    return _subset_dfa(nfa, merge_finals)[0]


def reachable_subsets(a: Automaton) -> int:
    """Number of reachable states of the plain subset automaton."""
    return _subset_dfa(as_nfa(a), False)[0].n


def _bfs_order(table: np.ndarray, init: int) -> list[int]:
    order = [init]
    seen = {init}
    head = 0
    while head < len(order):
        q = order[head]
        head += 1
        for t in table[q]:
            t = int(t)
            if t not in seen:
                seen.add(t)
                order.append(t)
    return order


def canonical(d: Dfa) -> Dfa:
    """Trim unreachable states and renumber in BFS order (alphabet order)."""
    order = _bfs_order(d.table, d.initial)
    pos = {q: i for i, q in enumerate(order)}
    delta = [[pos[int(t)] for t in d.table[q]] for q in order]
    finals = frozenset(pos[f] for f in d.finals if f in pos)
    return Dfa(d.alphabet, delta, 0, finals)


def isomorphic(d1: Dfa, d2: Dfa) -> bool:
    return d1.alphabet == d2.alphabet and canonical(d1) == canonical(d2)


def minimize(d: Dfa) -> Dfa:
    """Minimal complete DFA, canonically numbered."""
    d = canonical(d)
    cls, count = _kernels.refine(d.table, d.final_vector)
    rep = {}
    for q in range(d.n):
        rep.setdefault(int(cls[q]), q)
    delta = [[int(cls[t]) for t in d.table[rep[c]]] for c in range(count)]
    finals = frozenset(int(cls[f]) for f in d.finals)
    return canonical(Dfa(d.alphabet, delta, int(cls[d.initial]), finals))


def to_min_dfa(a: Automaton) -> Dfa:
    return minimize(a if isinstance(a, Dfa) else determinize(a))


# ---------------------------------------------------------------------------
# prefix-free normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrefixFreeShape:
    """Roles of the states in a minimal prefix-free DFA."""

    final: int | None
    dead: int | None


def pf_shape(d: Dfa) -> PrefixFreeShape | None:
    """Final/dead roles if the (minimal) ``d`` has prefix-free shape, else None."""
    finals = sorted(d.finals)
    if not finals:
        return PrefixFreeShape(None, None)
    if len(finals) != 1:
        return None
    f = finals[0]
    z = d.delta[f][0]
    if z == f or z in d.finals:
        return None
    if any(t != z for t in d.delta[f]) or any(t != z for t in d.delta[z]):
        return None
    return PrefixFreeShape(f, z)


def is_prefix_free(a: Automaton) -> bool:
    """True iff no accepted string is a proper prefix of another one."""
    return pf_shape(to_min_dfa(a)) is not None


def dfa_empty(alphabet: Sequence[str]) -> Dfa:
    return Dfa(tuple(alphabet), [[0] * len(alphabet)], 0, frozenset())


def dfa_epsilon(alphabet: Sequence[str]) -> Dfa:
    k = len(alphabet)
    return Dfa(tuple(alphabet), [[1] * k, [1] * k], 0, frozenset([0]))


def dfa_all(alphabet: Sequence[str]) -> Dfa:
    return Dfa(tuple(alphabet), [[0] * len(alphabet)], 0, frozenset([0]))


def words(alphabet: Sequence[str], max_len: int) -> Iterator[str]:
    """All strings over ``alphabet`` in length-lexicographic order."""
    for length in range(max_len + 1):
        for tup in product(alphabet, repeat=length):
            yield "".join(tup)


def language(a: Automaton, max_len: int) -> set[str]:
    """Accepted strings of length at most ``max_len`` (DFS with pruning)."""
    out: set[str] = set()
    if isinstance(a, Dfa):
        stack = [("", a.initial)]
        while stack:
            w, q = stack.pop()
            if q in a.finals:
                out.add(w)
            if len(w) < max_len:
                for i, s in enumerate(a.alphabet):
                    stack.append((w + s, a.delta[q][i]))
        return out
    stack2 = [("", frozenset([a.initial]))]
    while stack2:
        w, qs = stack2.pop()
        if qs & a.finals:
            out.add(w)
        if len(w) < max_len and qs:
            for s in a.alphabet:
                stack2.append((w + s, a.step(qs, s)))
    return out


def shortest_accepted(d: Dfa, start: int | None = None) -> str | None:
    q0 = d.initial if start is None else start
    prev: dict[int, tuple[int, str] | None] = {q0: None}
    queue = deque([q0])
    while queue:
        q = queue.popleft()
        if q in d.finals:
            path = []
            while prev[q] is not None:
                p, s = prev[q]
                path.append(s)
                q = p
            return "".join(reversed(path))
        for i, s in enumerate(d.alphabet):
            t = d.delta[q][i]
            if t not in prev:
                prev[t] = (q, s)
                queue.append(t)
    return None


def access_strings(d: Dfa) -> dict[int, str]:
    """Shortest (length-lex) string reaching each reachable state."""
    acc = {d.initial: ""}
    queue = deque([d.initial])
    while queue:
        q = queue.popleft()
        for i, s in enumerate(d.alphabet):
            t = d.delta[q][i]
            if t not in acc:
                acc[t] = acc[q] + s
                queue.append(t)
    return acc


def extend_alphabet(a: Automaton, alphabet: Sequence[str]) -> Automaton:
    """Same language over a larger alphabet (new symbols lead nowhere)."""
    alphabet = check_alphabet(alphabet)
    if alphabet == a.alphabet:
        return a
    missing = [s for s in a.alphabet if s not in alphabet]
    if missing:
        raise ContractViolation(f"target alphabet lacks symbols {missing}")
    idx = [a.alphabet.index(s) if s in a.alphabet else None for s in alphabet]
    if isinstance(a, Nfa):
        delta = [[row[i] if i is not None else frozenset() for i in idx] for row in a.delta]
        return Nfa(alphabet, delta, a.initial, a.finals)
    sink = a.n
    delta = [[row[i] if i is not None else sink for i in idx] for row in a.delta]
    delta.append([sink] * len(alphabet))
    return Dfa(alphabet, delta, a.initial, a.finals)


def trim_dead(d: Dfa) -> Nfa:
    """Partial-DFA view as an Nfa: states that cannot reach a final state are removed."""
    d = canonical(d)
    rev: dict[int, set[int]] = {q: set() for q in range(d.n)}
    for q, row in enumerate(d.delta):
        for t in row:
            rev[t].add(q)
    live = set(d.finals)
    stack = list(d.finals)
    while stack:
        q = stack.pop()
        for p in rev[q]:
            if p not in live:
                live.add(p)
                stack.append(p)
    if d.initial not in live:
        return Nfa(d.alphabet, [[frozenset()] * len(d.alphabet)], 0, frozenset())
    keep = [q for q in range(d.n) if q in live]
    pos = {q: i for i, q in enumerate(keep)}
    delta = [[frozenset([pos[t]]) if t in pos else frozenset() for t in d.delta[q]] for q in keep]
    return Nfa(d.alphabet, delta, pos[d.initial], frozenset(pos[f] for f in d.finals))
