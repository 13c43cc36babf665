"""Small regular expressions for writing witness languages.

Syntax: juxtaposition concatenates, ``+`` or ``|`` is union, ``*`` is star,
``^k`` / ``^{k}`` is a bounded power, ``ε`` (or ``()``) is the empty string.
For example ``(a*b)^{3}`` or ``((a+c)*b)^2c*(a+b)``.

Compilation uses the position (Glushkov) automaton, so the resulting
:class:`~pfxcomplex.automata.Nfa` has a single initial state and never needs
epsilon transitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .automata import AutomatonError, Nfa, check_alphabet


class RegexSyntaxError(AutomatonError):
    pass


@dataclass(frozen=True)
class Eps:
    pass


@dataclass(frozen=True)
class Sym:
    symbol: str


@dataclass(frozen=True)
class Alt:
    parts: tuple["RegexAst", ...]


@dataclass(frozen=True)
class Cat:
    parts: tuple["RegexAst", ...]


@dataclass(frozen=True)
class Star:
    body: "RegexAst"


@dataclass(frozen=True)
class Power:
    body: "RegexAst"
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("power exponent must be >= 0")


RegexAst = Union[Eps, Sym, Alt, Cat, Star, Power]


class _Parser:
    def __init__(self, text: str):
        self.s = text.replace(" ", "")
        self.i = 0

    def peek(self) -> str | None:
        return self.s[self.i] if self.i < len(self.s) else None

    def eat(self, ch: str) -> None:
        if self.peek() != ch:
            raise RegexSyntaxError(f"expected {ch!r} at offset {self.i} in {self.s!r}")
        self.i += 1

    def parse(self) -> RegexAst:
        node = self.alt()
        if self.i != len(self.s):
            raise RegexSyntaxError(f"unexpected {self.peek()!r} at offset {self.i} in {self.s!r}")
        return node

    def alt(self) -> RegexAst:
        parts = [self.cat()]
        while self.peek() in ("+", "|"):
            self.i += 1
            parts.append(self.cat())
        return parts[0] if len(parts) == 1 else Alt(tuple(parts))

    def cat(self) -> RegexAst:
        parts = []
        while self.peek() is not None and self.peek() not in "+|)":
            parts.append(self.postfix())
        if not parts:
            return Eps()
        return parts[0] if len(parts) == 1 else Cat(tuple(parts))

    def postfix(self) -> RegexAst:
        node = self.atom()
        while self.peek() in ("*", "^"):
            if self.peek() == "*":
                self.i += 1
                node = Star(node)
            else:
                self.i += 1
                braced = self.peek() == "{"
                if braced:
                    self.i += 1
                start = self.i
                while self.peek() is not None and self.peek().isdigit():
                    self.i += 1
                if start == self.i:
                    raise RegexSyntaxError(f"missing exponent at offset {start} in {self.s!r}")
                k = int(self.s[start : self.i])
                if braced:
                    self.eat("}")
                node = Power(node, k)
        return node

    def atom(self) -> RegexAst:
        ch = self.peek()
        if ch == "(":
            self.i += 1
            node = self.alt()
            self.eat(")")
            return node
        if ch == "ε":
            self.i += 1
            return Eps()
        if ch is None or ch in "*^{}":
            raise RegexSyntaxError(f"unexpected {ch!r} at offset {self.i} in {self.s!r}")
        self.i += 1
        return Sym(ch)


def parse_regex(text: str) -> RegexAst:
    return _Parser(text).parse()


def symbols_of(r: RegexAst) -> set[str]:
    if isinstance(r, Sym):
        return {r.symbol}
    if isinstance(r, (Alt, Cat)):
        out: set[str] = set()
        for p in r.parts:
            out |= symbols_of(p)
        return out
    if isinstance(r, (Star, Power)):
        return symbols_of(r.body)
    return set()


class _Glushkov:
    def __init__(self):
        self.labels: list[str] = []
        self.follow: list[set[int]] = []

    def new_pos(self, symbol: str) -> int:
        self.labels.append(symbol)
        self.follow.append(set())
        return len(self.labels) - 1

    def visit(self, r: RegexAst) -> tuple[bool, set[int], set[int]]:
        """(nullable, first, last) with ``follow`` updated in place."""
        if isinstance(r, Eps):
            return True, set(), set()
        if isinstance(r, Sym):
            p = self.new_pos(r.symbol)
            return False, {p}, {p}
        if isinstance(r, Alt):
            nullable, first, last = False, set(), set()
            for part in r.parts:
                n2, f2, l2 = self.visit(part)
                nullable |= n2
                first |= f2
                last |= l2
            return nullable, first, last
        if isinstance(r, Cat):
            return self._cat(r.parts)
        if isinstance(r, Power):
            return self._cat([r.body] * r.exponent)
        if isinstance(r, Star):
            _, first, last = self.visit(r.body)
            for p in last:
                self.follow[p] |= first
            return True, first, last
        raise TypeError(f"not a regex node: {r!r}")

    def _cat(self, parts: Sequence[RegexAst]) -> tuple[bool, set[int], set[int]]:
        nullable, first, last = True, set(), set()
        for part in parts:
            n2, f2, l2 = self.visit(part)
            for p in last:
                self.follow[p] |= f2
            if nullable:
                first |= f2
            last = l2 | last if n2 else l2
            nullable = nullable and n2
        return nullable, first, last


def regex_to_nfa(r: RegexAst | str, alphabet: Sequence[str] | None = None) -> Nfa:
    """Position automaton for ``r`` (state 0 initial, state ``p+1`` per position)."""
    if isinstance(r, str):
        r = parse_regex(r)
    used = symbols_of(r)
    if alphabet is None:
        alphabet = sorted(used) or ["a"]
    alphabet = check_alphabet(alphabet)
    stray = used - set(alphabet)
    if stray:
        raise RegexSyntaxError(f"symbols {sorted(stray)} not in alphabet {alphabet}")
    g = _Glushkov()
    nullable, first, last = g.visit(r)
    sym = {s: i for i, s in enumerate(alphabet)}
    k = len(alphabet)
    npos = len(g.labels)
    delta = [[set() for _ in range(k)] for _ in range(npos + 1)]
    for p in first:
        delta[0][sym[g.labels[p]]].add(p + 1)
    for p in range(npos):
        for t in g.follow[p]:
            delta[p + 1][sym[g.labels[t]]].add(t + 1)
    finals = {p + 1 for p in last}
    if nullable:
        finals.add(0)
    return Nfa(alphabet, delta, 0, frozenset(finals))
