"""Independent oracles for the test-suite.

Nothing here calls the package's determinization, minimization or
constructions: machines are simulated straight from their ``delta`` fields,
regexes are checked with Python's ``re``, and operations are evaluated on
finite sets of words.
"""

from __future__ import annotations

import itertools
import re

from pfxcomplex.automata import Dfa


def all_words(alphabet, max_len):
    for length in range(max_len + 1):
        for t in itertools.product(alphabet, repeat=length):
            yield "".join(t)


def _targets(a, q, i):
    t = a.delta[q][i]
    return (t,) if isinstance(a, Dfa) else t


def live_states(a):
    """States from which some final state is reachable (backward fixpoint)."""
    live = set(a.finals)
    changed = True
    while changed:
        changed = False
        for q in range(a.n):
            if q not in live and any(t in live for i in range(len(a.alphabet)) for t in _targets(a, q, i)):
                live.add(q)
                changed = True
    return live


def accepted_upto(a, max_len):
    """Words of length <= max_len accepted by ``a``, by prefix-tree simulation
    pruned at state sets with no live state."""
    idx = {s: i for i, s in enumerate(a.alphabet)}
    det = isinstance(a, Dfa)
    live = live_states(a)
    start = frozenset([a.initial]) & live
    out = set()
    level = [("", start)]
    for length in range(max_len + 1):
        nxt = []
        for w, states in level:
            if states & a.finals:
                out.add(w)
            if length == max_len or not states:
                continue
            for s in a.alphabet:
                if det:
                    tgt = frozenset(a.delta[q][idx[s]] for q in states)
                else:
                    tgt = frozenset(t for q in states for t in a.delta[q][idx[s]])
                nxt.append((w + s, tgt & live))
        level = nxt
    return out


def py_regex(expr: str) -> str:
    """Translate the package regex syntax to Python ``re`` syntax."""
    out = expr.replace("+", "|").replace("ε", "")
    out = re.sub(r"\^\{?(\d+)\}?", r"{\1}", out)
    return out.replace("()", "(?:)")


def regex_lang(expr: str, alphabet, max_len):
    pat = re.compile(py_regex(expr))
    return {w for w in all_words(alphabet, max_len) if pat.fullmatch(w)}


def is_prefix_free_set(words) -> bool:
    return not any(w[:i] in words for w in words for i in range(len(w)))


def concat(k, l, max_len):
    return {x + y for x in k for y in l if len(x) + len(y) <= max_len}


def star(l, max_len):
    out = {""}
    frontier = {""}
    while frontier:
        frontier = {x + y for x in frontier for y in l if y and len(x) + len(y) <= max_len} - out
        out |= frontier
    return out


def reverse(l):
    return {w[::-1] for w in l}


def cyclic_shift(l):
    return {w[i:] + w[:i] for w in l for i in range(len(w) + 1)}


def complement(l, alphabet, max_len):
    return set(all_words(alphabet, max_len)) - l


def myhill_nerode_classes(a, max_len):
    """Number of distinct residual signatures of reachable words.

    Access words up to ``a.n - 1`` letters reach every reachable state of a
    DFA (``2^n - 1`` for the subset states of an NFA); residuals are
    compared on suffixes up to ``max_len`` letters.
    """
    access = a.n - 1 if isinstance(a, Dfa) else 2**a.n - 1
    lang = accepted_upto(a, access + max_len)
    suffixes = list(all_words(a.alphabet, max_len))
    sigs = set()
    for x in all_words(a.alphabet, access):
        sigs.add(tuple((x + y) in lang for y in suffixes))
    return len(sigs)
