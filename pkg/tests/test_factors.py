import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_overlapping, factor_set, naive_period
from quadword.errors import HorizonError
from quadword.factors import (
    FactorIndex,
    Periodicity,
    bergman_gap_check,
    border_array,
    build_index,
    complexity,
    minimal_period,
    occurrences,
    recurrence_check,
    trusted_profile,
)
from quadword.words import FiniteWord, UltimatelyPeriodicStream, periodic_stream, power


def W(s, alphabet=None):
    return FiniteWord.parse(s, alphabet)


def test_small_index():
    idx = build_index(W("aab"))
    for f in ["", "a", "b", "aa", "ab", "aab"]:
        assert W(f) in idx
    for f in ["ba", "bb", "aaa", "abb"]:
        assert W(f) not in idx
    assert [complexity(idx, n) for n in (1, 2, 3)] == [2, 2, 1]
    assert idx.num_states <= 2 * 3


def test_unary_complexity():
    idx = build_index(W("aaaa"))
    assert [idx.complexity(n) for n in range(1, 5)] == [1, 1, 1, 1]


def test_complexity_examples(fib_index):
    assert fib_index.complexity(7) == 8
    assert build_index(W("ababa")).complexity(2) == 2
    with pytest.raises(HorizonError):
        build_index(W("ab")).complexity(3)


def test_occurrence_examples():
    idx = build_index(W("aaaa"))
    assert occurrences(idx, W("aa")) == 3
    assert occurrences(idx, W("ba")) == 0


def test_anchor_recurs_in_u(u_index):
    assert u_index.occurrences(W("aba")) >= 3


def test_oracle_equivalence_random_words():
    rng = random.Random(20261019)
    for _ in range(1000):
        k = rng.choice((2, 3))
        s = "".join(rng.choice("abc"[:k]) for _ in range(rng.randint(1, 200)))
        w = FiniteWord.parse(s, FiniteWord.parse("abc"[:k]).alphabet)
        idx = FactorIndex(w)
        counts = idx.complexity_counts()
        assert idx.num_states <= 2 * len(s)
        for n in range(1, len(s) + 1):
            assert counts[n] == len(factor_set(s, n))
        for _ in range(5):
            n = rng.randint(1, min(8, len(s)))
            probe = "".join(rng.choice("abc"[:k]) for _ in range(n))
            assert idx.occurrences(W(probe, w.alphabet)) == count_overlapping(s, probe)
            assert (W(probe, w.alphabet) in idx) == (probe in s)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="ab", min_size=1, max_size=60))
def test_factors_listing(s):
    idx = FactorIndex(W(s))
    for n in range(1, len(s) + 1):
        assert {str(f) for f in idx.factors(n)} == factor_set(s, n)


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="abc", min_size=2, max_size=120))
def test_factor_splitting_bound(s):
    w = W(s, FiniteWord.parse("abc").alphabet)
    prof = trusted_profile(w)
    p = prof.p
    for m in range(1, prof.n_trust):
        for n in range(1, prof.n_trust - m + 1):
            assert p[m + n] <= p[m] * p[n]


def test_high_entropy_windows_distinct():
    rng = random.Random(7)
    for _ in range(50):
        s = "".join(rng.choice("abcdefgh") for _ in range(150))
        idx = FactorIndex(W(s))
        for n in (5, 10, 40):
            distinct = len(factor_set(s, n)) == len(s) - n + 1
            assert (idx.complexity(n) == len(s) - n + 1) == distinct


@pytest.mark.parametrize("w, p", [("abab", 2), ("aaaa", 1), ("abca", 3), ("aba", 2), ("abaab", 3)])
def test_minimal_period(w, p):
    assert minimal_period(W(w)) == p


@given(st.text(alphabet="ab", min_size=1, max_size=40))
def test_minimal_period_oracle(s):
    assert minimal_period(W(s)) == naive_period(s)
    b = border_array(W(s).letters)
    assert len(s) - b[-1] == naive_period(s)


@given(st.text(alphabet="abc", min_size=1, max_size=16), st.sampled_from([2, 3, 4]))
def test_period_of_primitive_powers(s, k):
    w = W(s, FiniteWord.parse("abc").alphabet)
    primitive = all(len(s) % d or s != s[:d] * (len(s) // d) for d in range(1, len(s)))
    if primitive:
        assert minimal_period(power(w, k)) == len(s)


def test_recurrence_examples(u8):
    assert recurrence_check(u8, 10**6, 20, 3).ok
    bad = recurrence_check(UltimatelyPeriodicStream(W("a"), W("b")), 100, 2, 2)
    assert not bad.ok and bad.worst_factor == "ab" and bad.worst_count == 1
    assert recurrence_check(periodic_stream("ab"), 400, 3, 10).ok
    with pytest.raises(HorizonError):
        recurrence_check(periodic_stream("ab"), 11, 3, 2)


def test_trusted_profile_clamps(fib):
    prof = trusted_profile(fib.prefix(1000))
    assert prof.n_trust <= 500
    assert all(prof(n) == n + 1 for n in range(1, prof.n_trust + 1))
    with pytest.raises(HorizonError):
        prof(prof.n_trust + 1)
    assert prof.p[0] == 1


def test_profile_invariants(u_profile):
    p = u_profile.p
    assert p[0] == 1
    assert all(p[n] <= p[n + 1] <= 2 * p[n] for n in range(u_profile.n_trust))


def test_bergman_gap_examples(fib_profile, u_profile):
    periodic = trusted_profile(periodic_stream("ab").prefix(800), 200)
    res = bergman_gap_check(periodic)
    assert res.kind is Periodicity.ULTIMATELY_PERIODIC and res.witness == 2
    assert fib_profile.n_trust >= 200
    assert bergman_gap_check(fib_profile).kind is Periodicity.APERIODIC_AT_HORIZON
    assert bergman_gap_check(u_profile).kind is Periodicity.APERIODIC_AT_HORIZON
