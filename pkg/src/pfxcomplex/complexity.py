"""State complexity measurement and nondeterministic lower-bound certificates."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from . import _kernels
from .automata import (
    Automaton,
    AutomatonError,
    Dfa,
    access_strings,
    reachable_subsets,
    to_min_dfa,
)

__all__ = [
    "ComplexityResult",
    "FoolingCertificate",
    "ResourceLimitError",
    "Verdict",
    "find_extended_certificate",
    "find_fooling_set",
    "measure",
    "nsc_exact_bruteforce",
    "nsc_upper_trivial",
    "reachable_subsets",
    "sc",
    "verify_certificate",
    "verify_extended_fooling",
    "verify_fooling_set",
]

Pair = tuple[str, str]

DEFAULT_BUDGET = 10**7


class ResourceLimitError(AutomatonError):
    """An enumeration would exceed its configured budget."""


def sc(lang: Automaton) -> int:
    """States of the minimal complete DFA (dead state included)."""
    return to_min_dfa(lang).n


@dataclass(frozen=True)
class FoolingCertificate:
    """Plain fooling set ``pairs``, optionally extended by ``(A, B, u, v)``.

    With an extension the certified bound is ``|A| + |B| + 1`` and ``pairs``
    is ignored by :func:`verify_certificate`.
    """

    pairs: tuple[Pair, ...] = ()
    extension: tuple[tuple[Pair, ...], tuple[Pair, ...], str, str] | None = None

    @property
    def claimed_bound(self) -> int:
        if self.extension is not None:
            a, b, _, _ = self.extension
            return len(a) + len(b) + 1
        return len(self.pairs)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    bound: int
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_fooling_set(pairs: Sequence[Pair] | FoolingCertificate, lang: Automaton) -> Verdict:
    """Check both fooling-set conditions; certifies ``nsc >= len(pairs)``."""
    if isinstance(pairs, FoolingCertificate):
        pairs = pairs.pairs
    d = lang if isinstance(lang, Dfa) else to_min_dfa(lang)
    pairs = list(pairs)
    ends = [d.run(x) for x, _ in pairs]
    for (x, y), p in zip(pairs, ends):
        if d.run(y, p) not in d.finals:
            return Verdict(False, 0, f"{x + y!r} from pair ({x!r}, {y!r}) is not in the language")
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            xi, yi = pairs[i]
            xj, yj = pairs[j]
            if d.run(yj, ends[i]) in d.finals and d.run(yi, ends[j]) in d.finals:
                return Verdict(
                    False,
                    0,
                    f"pairs ({xi!r}, {yi!r}) and ({xj!r}, {yj!r}): both {xi + yj!r} and {xj + yi!r} accepted",
                )
    return Verdict(True, len(pairs))


def verify_extended_fooling(
    A: Sequence[Pair], B: Sequence[Pair], u: str, v: str, lang: Automaton
) -> Verdict:
    """Check that ``A∪B``, ``A∪{(ε,u)}`` and ``B∪{(ε,v)}`` are fooling sets;
    certifies ``nsc >= |A| + |B| + 1``."""
    A, B = list(A), list(B)
    for name, pairs in (("A∪B", A + B), ("A∪{(ε,u)}", A + [("", u)]), ("B∪{(ε,v)}", B + [("", v)])):
        r = verify_fooling_set(pairs, lang)
        if not r:
            return Verdict(False, 0, f"{name}: {r.violation}")
    return Verdict(True, len(A) + len(B) + 1)


def verify_certificate(cert: FoolingCertificate, lang: Automaton) -> Verdict:
    if cert.extension is not None:
        return verify_extended_fooling(*cert.extension, lang)
    return verify_fooling_set(cert.pairs, lang)


# ---------------------------------------------------------------------------
# certificate search
# ---------------------------------------------------------------------------


def _suffix_classes(d: Dfa, limit: int) -> list[tuple[frozenset[int], str]]:
    """Distinct sets ``{p : p --y--> final}`` with a shortest witness ``y``.

    BFS over the reversed subset automaton; stops after ``limit`` sets.
    """
    pred = [[set() for _ in d.alphabet] for _ in range(d.n)]
    for q, row in enumerate(d.delta):
        for a, t in enumerate(row):
            pred[t][a].add(q)
    start = frozenset(d.finals)
    seen = {start: ""}
    queue = deque([start])
    while queue and len(seen) < limit:
        cur = queue.popleft()
        for a, s in enumerate(d.alphabet):
            nxt = frozenset(p for q in cur for p in pred[q][a])
            if nxt not in seen:
                seen[nxt] = s + seen[cur]
                queue.append(nxt)
    return [(k, w) for k, w in seen.items() if k]


def _fooling_graph(d: Dfa, limit: int, exclude_initial: bool = False):
    acc = access_strings(d)
    classes = _suffix_classes(d, limit)
    g = nx.Graph()
    nodes = []
    for cid, (members, _) in enumerate(classes):
        for p in sorted(members):
            if p in acc and not (exclude_initial and p == d.initial):
                nodes.append((p, cid))
    g.add_nodes_from(nodes)
    for i in range(len(nodes)):
        p, c = nodes[i]
        for j in range(i + 1, len(nodes)):
            p2, c2 = nodes[j]
            if p not in classes[c2][0] or p2 not in classes[c][0]:
                g.add_edge(nodes[i], nodes[j])
    return g, acc, classes


def _greedy_clique(g: nx.Graph) -> list:
    order = sorted(g.nodes, key=lambda v: (-g.degree(v), v))
    clique: list = []
    for v in order:
        if all(g.has_edge(v, u) for u in clique):
            clique.append(v)
    return clique


def _max_clique(g: nx.Graph, exact_nodes: int | None = None) -> list:
    """Maximum clique, or a greedy one when the graph exceeds ``exact_nodes``
    (any clique is still a valid fooling set)."""
    if g.number_of_nodes() == 0:
        return []
    if exact_nodes is not None and g.number_of_nodes() > exact_nodes:
        return sorted(_greedy_clique(g))
    clique, _ = nx.max_weight_clique(g, weight=None)
    return sorted(clique)


def find_fooling_set(lang: Automaton, limit: int = 4096, exact_nodes: int | None = None) -> list[Pair]:
    """A maximum fooling set among pairs ``(access string, suffix witness)``.

    Exact over all fooling sets when the suffix-class BFS is not truncated by
    ``limit``: a fooling-set pair only matters through the DFA state its
    first half reaches and the set of states its second half accepts from.
    Graphs above ``exact_nodes`` nodes get a greedy clique instead.
    """
    d = to_min_dfa(lang)
    g, acc, classes = _fooling_graph(d, limit)
    return [(acc[p], classes[c][1]) for p, c in _max_clique(g, exact_nodes)]


def find_extended_certificate(
    lang: Automaton, limit: int = 4096, exact_nodes: int | None = None
) -> FoolingCertificate | None:
    """Try to beat the best fooling set by one via the two-string extension."""
    d = to_min_dfa(lang)
    g, acc, classes = _fooling_graph(d, limit, exclude_initial=True)
    clique = _max_clique(g, exact_nodes)
    if not clique:
        return None
    s0 = d.initial
    covers = []
    for members, y in classes:
        if s0 not in members:
            continue
        mask = frozenset(node for node in clique if s0 not in classes[node[1]][0] or node[0] not in members)
        covers.append((mask, y))
    full = frozenset(clique)
    for mu, u in covers:
        for mv, v in covers:
            if mu | mv == full:
                a_nodes = sorted(mu)
                b_nodes = sorted(full - mu)
                A = tuple((acc[p], classes[c][1]) for p, c in a_nodes)
                B = tuple((acc[p], classes[c][1]) for p, c in b_nodes)
                cert = FoolingCertificate(A + B, (A, B, u, v))
                if verify_certificate(cert, d):
                    return cert
    return None


# ---------------------------------------------------------------------------
# brute-force minimal NFA oracle
# ---------------------------------------------------------------------------


def _space(k: int, s: int) -> int:
    return (1 << k) ** (k * s + 1)


def nsc_exact_bruteforce(lang: Automaton, cap: int = 4, budget: int = DEFAULT_BUDGET) -> int | None:
    """Smallest ``k <= cap`` such that some ``k``-state single-initial NFA
    accepts the language, by exhaustive enumeration; None if none exists.

    Machines are enumerated by increasing ``k`` then by index (finals first,
    then transition masks).  Raises :class:`ResourceLimitError` before
    starting a size whose cumulative machine count would exceed ``budget``.
    """
    d = to_min_dfa(lang)
    s = len(d.alphabet)
    table = d.table
    fin = d.final_vector
    used = 0
    for k in range(1, cap + 1):
        space = _space(k, s)
        if k > _kernels.MAX_MASK_STATES or used + space > budget:
            raise ResourceLimitError(
                f"enumerating {k}-state NFAs over {s} letters needs {space} machines "
                f"(budget {budget}, {used} used)"
            )
        used += space
        if _kernels.sweep_nfa_match(k, s, table, fin, d.initial, 0, space) >= 0:
            return k
    return None


def nsc_upper_trivial(lang: Automaton) -> int:
    """Minimal DFA with its dead state removed, read as an NFA."""
    d = to_min_dfa(lang)
    if d.n == 1:
        return 1
    has_dead = any(q not in d.finals and all(t == q for t in d.delta[q]) for q in range(d.n))
    return d.n - 1 if has_dead else d.n


@dataclass(frozen=True)
class ComplexityResult:
    sc: int
    nsc_lower: int
    nsc_upper: int
    nsc_exact: int | None = None


def measure(
    lang: Automaton,
    *,
    upper: int | None = None,
    certificates: Iterable[FoolingCertificate] = (),
    brute_cap: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> ComplexityResult:
    """sc plus an nsc interval.

    The lower end is the best of the given certificates and a searched
    fooling set (with extension when it helps); the upper end is the best of
    ``upper`` and the trimmed minimal DFA.  ``brute_cap > 0`` runs the
    exhaustive oracle when the interval is still open.
    """
    d = to_min_dfa(lang)
    lo = 0
    for cert in certificates:
        r = verify_certificate(cert, d)
        if r:
            lo = max(lo, r.bound)
    lo = max(lo, len(find_fooling_set(d)))
    ext = find_extended_certificate(d)
    if ext is not None:
        lo = max(lo, ext.claimed_bound)
    hi = nsc_upper_trivial(d)
    if upper is not None:
        hi = min(hi, upper)
    lo = max(lo, 1)
    exact = hi if lo == hi else None
    if exact is None and brute_cap:
        try:
            exact = nsc_exact_bruteforce(d, cap=min(brute_cap, hi), budget=budget)
        except ResourceLimitError:
            exact = None
    return ComplexityResult(d.n, lo, hi, exact)
