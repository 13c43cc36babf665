import random

import pytest

from oracles import accepted_upto, all_words, complement, concat, cyclic_shift, reverse, star
from pfxcomplex.automata import ContractViolation, is_prefix_free, to_min_dfa, trim_dead
from pfxcomplex.constructions import (
    augment_reversal_witness,
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
    pf_layout,
    reversal_complexity,
    reverse_sc,
    split_concatenation_plans,
)
from pfxcomplex.regex import regex_to_nfa
from pfxcomplex.search import minimal_pf_dfas
from pfxcomplex.witnesses import regex_dfa

AB = ("a", "b")
BOOL = {
    "intersection": lambda x, y: x & y,
    "union": lambda x, y: x | y,
    "symmetric-difference": lambda x, y: x ^ y,
    "difference": lambda x, y: x - y,
}


@pytest.fixture(scope="module")
def pf4():
    return minimal_pf_dfas(3, 2) + minimal_pf_dfas(4, 2)


def _sample(items, count, seed=0):
    rng = random.Random(seed)
    return items if len(items) <= count else rng.sample(items, count)


class TestBoolean:
    def test_union_witness(self):
        k, l = regex_dfa("(a*b)^{2}", AB), regex_dfa("(b*a)^{3}", AB)
        assert (k.n, l.n) == (4, 5)
        assert dfa_bool(k, l, "union").n == 18

    @pytest.mark.parametrize("op", list(BOOL))
    def test_semantics(self, op, pf4):
        pairs = [(k, l) for k in _sample(pf4, 12, 1) for l in _sample(pf4, 12, 2)]
        for k, l in pairs:
            got = accepted_upto(dfa_bool(k, l, op, minimal=False), 7)
            assert got == BOOL[op](accepted_upto(k, 7), accepted_upto(l, 7))

    @pytest.mark.parametrize("op,bound", [
        ("intersection", lambda m, n: m * n - 2 * (m + n) + 6),
        ("union", lambda m, n: m * n - 2),
        ("symmetric-difference", lambda m, n: m * n - 2),
        ("difference", lambda m, n: m * n - m - 2 * n + 4),
    ])
    def test_raw_size_within_bound(self, op, bound, pf4):
        for k in _sample(pf4, 15, 3):
            for l in _sample(pf4, 15, 4):
                assert dfa_bool(k, l, op, minimal=False).n <= bound(k.n, l.n)

    def test_mixed_alphabets(self):
        k, l = regex_dfa("ab", AB), regex_dfa("c", ("c",))
        u = dfa_bool(k, l, "union")
        assert accepted_upto(u, 3) == {"ab", "c"}

    def test_rejects_non_prefix_free(self):
        with pytest.raises(ContractViolation, match="left operand"):
            dfa_bool(to_min_dfa(regex_to_nfa("a*")), regex_dfa("b", AB), "union")


class TestConcatStar:
    def test_concat_unary(self):
        k, l = regex_dfa("a^3", ("a",)), regex_dfa("a^2", ("a",))
        r = dfa_concat_prefix_free(k, l)
        assert r.n == 5 + 4 - 2
        assert accepted_upto(r, 8) == {"aaaaa"}

    def test_concat_semantics(self, pf4):
        for k in _sample(pf4, 15, 5):
            for l in _sample(pf4, 15, 6):
                r = dfa_concat_prefix_free(k, l)
                assert r.n == k.n + l.n - 2
                assert accepted_upto(r, 7) == concat(accepted_upto(k, 7), accepted_upto(l, 7), 7)

    def test_star_semantics(self, pf4):
        for l in pf4:
            r = dfa_star_prefix_free(l)
            assert r.n == l.n
            assert accepted_upto(r, 7) == star(accepted_upto(l, 7), 7)

    def test_star_binary_n3_below_n(self):
        assert to_min_dfa(dfa_star_prefix_free(regex_dfa("(a^1)*b", AB))).n == 2


class TestReversal:
    def test_semantics(self, pf4):
        for d in pf4:
            rev = dfa_reverse(d)
            assert accepted_upto(rev, 7) == reverse(accepted_upto(d, 7))
            assert reverse_sc(d) == to_min_dfa(rev).n

    def test_augment(self):
        base = regex_dfa("(a+b)*a", AB)
        w = augment_reversal_witness(base)
        assert is_prefix_free(w)
        assert w.n == base.n + 2
        assert accepted_upto(w, 5) == {x + "c" for x in accepted_upto(base, 4)}
        assert reverse_sc(w) == reversal_complexity(base) + 1

    def test_augment_contract(self):
        with pytest.raises(ContractViolation):
            augment_reversal_witness(regex_dfa("c", ("c",)))


class TestCyclicShift:
    def test_layout_and_plans(self):
        d = regex_dfa("ab+ba", AB)
        laid, _ = pf_layout(d)
        assert laid.initial == 0 and laid.finals == {laid.n - 2}
        plans = split_concatenation_plans(d)
        assert len(plans) == laid.n - 2
        for p in plans:
            assert p.concatenation.n <= 2 * laid.n - 3

    def test_semantics_and_bound(self, pf4):
        for d in pf4:
            n = d.n
            raw = dfa_cyclic_shift(d, minimal=False)
            got = accepted_upto(raw, 2 * n)
            assert got == {w for w in cyclic_shift(accepted_upto(d, 2 * n)) if len(w) <= 2 * n}
            assert to_min_dfa(raw).n <= max(3, (2 * n - 3) ** (n - 2))


# ---------------------------------------------------------------------------
# nondeterministic constructions
# ---------------------------------------------------------------------------


def nfa_inputs():
    exprs = ["a", "ab", "a*b", "(a+b)a", "(ab)*b", "ba*b", "(a^2)*b", "aa+ab+b"]
    return [trim_dead(regex_dfa(e, AB)) for e in exprs]


@pytest.fixture(scope="module")
def nfas_pf():
    return nfa_inputs()


class TestNfaConstructions:
    def test_union(self, nfas_pf):
        for k in nfas_pf:
            for l in nfas_pf:
                r = nfa_union(k, l)
                assert r.n == k.n + l.n
                assert accepted_upto(r, 8) == accepted_upto(k, 8) | accepted_upto(l, 8)

    def test_intersection(self, nfas_pf):
        for k in nfas_pf:
            for l in nfas_pf:
                r = nfa_intersection(k, l)
                assert r.n == (k.n - 1) * (l.n - 1) + 1
                assert accepted_upto(r, 8) == accepted_upto(k, 8) & accepted_upto(l, 8)

    def test_concat(self, nfas_pf):
        for k in nfas_pf:
            for l in nfas_pf:
                r = nfa_concat(k, l)
                assert r.n == k.n + l.n - 1
                assert accepted_upto(r, 8) == concat(accepted_upto(k, 8), accepted_upto(l, 8), 8)

    def test_reverse_star(self, nfas_pf):
        for l in nfas_pf:
            assert nfa_reverse(l).n == l.n
            assert accepted_upto(nfa_reverse(l), 8) == reverse(accepted_upto(l, 8))
            assert nfa_star(l).n == l.n
            assert accepted_upto(nfa_star(l), 8) == star(accepted_upto(l, 8), 8)

    def test_complement(self, nfas_pf):
        for l in nfas_pf:
            r = nfa_complement_prefix_free(l)
            assert r.n <= 2 ** (l.n - 1)
            assert accepted_upto(r, 7) == complement(accepted_upto(l, 7), AB, 7)

    def test_difference(self, nfas_pf):
        for k in nfas_pf:
            for l in nfas_pf:
                r = nfa_difference(k, l)
                assert r.n <= (k.n - 1) * 2 ** (l.n - 1) + 1
                assert accepted_upto(r, 7) == accepted_upto(k, 7) - accepted_upto(l, 7)

    def test_cyclic_shift(self, nfas_pf):
        for l in nfas_pf:
            r = nfa_cyclic_shift(l)
            n = l.n
            assert r.n == 2 * n * n - 4 * n + 3
            assert accepted_upto(r, 7) == {w for w in cyclic_shift(accepted_upto(l, 7)) if len(w) <= 7}

    def test_rejects_non_normal(self):
        bad = regex_to_nfa("a*")
        for fn in (nfa_reverse, nfa_star, nfa_cyclic_shift, nfa_complement_prefix_free):
            with pytest.raises(ContractViolation):
                fn(bad)
        with pytest.raises(ContractViolation, match="right operand"):
            nfa_union(nfa_inputs()[0], bad)

    def test_all_words_sanity(self):
        assert len(list(all_words(AB, 3))) == 15
