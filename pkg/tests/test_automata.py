import pytest
from hypothesis import given, settings, strategies as st

from oracles import accepted_upto, is_prefix_free_set, myhill_nerode_classes, regex_lang, star
from pfxcomplex.automata import (
    ContractViolation,
    Dfa,
    Nfa,
    RejectedInput,
    accepts,
    canonical,
    check_alphabet,
    determinize,
    dfa_empty,
    dfa_epsilon,
    is_prefix_free,
    isomorphic,
    minimize,
    standard_alphabet,
    to_min_dfa,
)
from pfxcomplex.constructions import dfa_bool
from pfxcomplex.regex import RegexSyntaxError, parse_regex, regex_to_nfa


def rdfa(expr, alphabet=None):
    return to_min_dfa(regex_to_nfa(expr, alphabet))


@st.composite
def dfas(draw, max_states=5, max_k=2):
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_k))
    delta = [[draw(st.integers(0, n - 1)) for _ in range(k)] for _ in range(n)]
    finals = draw(st.frozensets(st.integers(0, n - 1)))
    return Dfa(standard_alphabet(k), delta, 0, finals)


@st.composite
def nfas(draw, max_states=4, max_k=2):
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_k))
    cell = st.frozensets(st.integers(0, n - 1), max_size=2)
    delta = [[draw(cell) for _ in range(k)] for _ in range(n)]
    finals = draw(st.frozensets(st.integers(0, n - 1)))
    return Nfa(standard_alphabet(k), delta, 0, finals)


class TestAlphabet:
    def test_canonical_order(self):
        assert standard_alphabet(6) == ("a", "b", "c", "d", "g", "h")

    @pytest.mark.parametrize("bad", [[], ["a", "a"], ["ab"], list("abcdefghijklmnopq")])
    def test_invalid(self, bad):
        with pytest.raises(Exception):
            check_alphabet(bad)


class TestAccepts:
    def test_dfa_a2(self):
        d = rdfa("aa")
        assert d.n == 4
        assert accepts(d, "aa")
        assert not accepts(d, "aaa")

    def test_nfa_even_a_then_b(self):
        nfa = Nfa(("a", "b"), [[{1}, {2}], [{0}, set()], [set(), set()]], 0, {2})
        assert accepts(nfa, "aab")
        assert not accepts(nfa, "ab")

    def test_unknown_symbol(self):
        with pytest.raises(RejectedInput):
            accepts(rdfa("aa"), "ab")

    def test_incomplete_dfa_rejected(self):
        with pytest.raises(Exception):
            Dfa(("a",), [[1]], 0, frozenset())


class TestPrefixFree:
    def test_examples(self):
        assert is_prefix_free(rdfa("a*b"))
        assert not is_prefix_free(rdfa("a*"))
        k, l = rdfa("a*b"), rdfa("b*a")
        # b and ba: union of prefix-free languages need not be prefix-free
        assert not is_prefix_free(dfa_bool(k, l, "union"))
        assert is_prefix_free(dfa_bool(k, l, "intersection"))

    def test_empty_and_epsilon(self):
        assert is_prefix_free(dfa_empty(("a",)))
        assert is_prefix_free(dfa_epsilon(("a",)))

    @settings(max_examples=200, deadline=None)
    @given(dfas())
    def test_agrees_with_bruteforce(self, d):
        words = accepted_upto(d, 2 * d.n)
        assert is_prefix_free(d) == is_prefix_free_set(words)

    @settings(max_examples=100, deadline=None)
    @given(nfas())
    def test_nfa_agrees_with_bruteforce(self, a):
        words = accepted_upto(a, 2 * a.n + 2)
        if is_prefix_free(a):
            assert is_prefix_free_set(words)


class TestRegex:
    @pytest.mark.parametrize(
        "expr,alphabet",
        [
            ("a^3", ("a",)),
            ("(a^2)*b", ("a", "b")),
            ("(b*(a+c))^1", ("a", "b", "c")),
            ("(a*b)^{2}", ("a", "b")),
            ("((a+c)*b)^{0}c*(a+b)", ("a", "b", "c")),
            ("(a|b)*abb", ("a", "b")),
        ],
    )
    def test_language_matches_python_re(self, expr, alphabet):
        nfa = regex_to_nfa(expr, alphabet)
        assert accepted_upto(nfa, 8) == regex_lang(expr, alphabet, 8)

    def test_a3_exact(self):
        assert accepted_upto(regex_to_nfa("a^3"), 6) == {"aaa"}

    def test_single_initial_no_epsilon(self):
        nfa = regex_to_nfa("(a+ε)(b*a)*")
        assert nfa.initial == 0
        assert accepted_upto(nfa, 6) == regex_lang("(a+ε)(b*a)*", ("a", "b"), 6)

    def test_star_closure(self):
        base = "ab+b"
        got = accepted_upto(regex_to_nfa(f"({base})*"), 7)
        assert got == star(regex_lang(base, ("a", "b"), 7), 7)

    def test_bad_syntax(self):
        with pytest.raises(RegexSyntaxError):
            parse_regex("(ab")
        with pytest.raises(RegexSyntaxError):
            regex_to_nfa("abc", ("a", "b"))


class TestDeterminize:
    @settings(max_examples=150, deadline=None)
    @given(nfas())
    def test_equivalent(self, a):
        d = determinize(a)
        assert accepted_upto(d, 2 * a.n) == accepted_upto(a, 2 * a.n)

    def test_dfa_input_isomorphic(self):
        d = rdfa("(a*b)^{2}")
        assert isomorphic(determinize(d.to_nfa()), canonical(d))

    def test_merge_requires_prefix_free(self):
        with pytest.raises(ContractViolation):
            determinize(regex_to_nfa("a*"), merge_finals=True)

    def test_merge_bound(self):
        nfa = Nfa(("a", "b"), [[{0, 1}, {2}], [{1}, {0, 2}], [set(), set()]], 0, {2})
        if is_prefix_free(nfa):
            assert determinize(nfa, merge_finals=True).n <= 2 ** 2 + 1


class TestMinimize:
    def test_fixpoint(self):
        d = rdfa("a")
        assert d.n == 3
        assert isomorphic(minimize(d), d)

    def test_star_of_a_star_b(self):
        d = determinize(regex_to_nfa("(a*b)*"))
        assert minimize(d).n == 2

    def test_union_witness_3_3(self):
        k, l = rdfa("a*b"), rdfa("b*a")
        assert dfa_bool(k, l, "union").n == 7

    @settings(max_examples=150, deadline=None)
    @given(dfas())
    def test_idempotent_and_myhill_nerode(self, d):
        m = minimize(d)
        assert isomorphic(minimize(m), m)
        assert m.n == myhill_nerode_classes(d, 2 * d.n)
        assert accepted_upto(m, 2 * d.n) == accepted_upto(d, 2 * d.n)

    @settings(max_examples=100, deadline=None)
    @given(dfas())
    def test_isomorphism_invariance(self, d):
        perm = list(range(d.n))
        perm.reverse()
        delta = [None] * d.n
        for q in range(d.n):
            delta[perm[q]] = [perm[t] for t in d.delta[q]]
        e = Dfa(d.alphabet, delta, perm[d.initial], frozenset(perm[f] for f in d.finals))
        assert isomorphic(minimize(d), minimize(e))
