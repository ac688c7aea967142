import math
import random

import pytest

from oracles import avoiding_count, avoiding_count_windowed
from quadword.errors import HorizonError
from quadword.factors import ComplexityProfile, trusted_profile
from quadword.growth import (
    ForbiddenPresentation,
    GrowthKind,
    InsufficientWindowError,
    check_growth_sandwich,
    check_u_bounds,
    classify_growth,
    estimate_gk,
    estimate_growth_constant,
    growth_function,
    growth_report,
    growth_series,
    prime_budget,
    stage_index,
    transfer_count,
    transfer_counts,
)
from quadword.words import constant_stream


def sturmian_dims(n):
    return 1 + n * (n + 3) // 2


def test_growth_function_examples(fib_profile):
    assert growth_function(fib_profile, 3) == 10
    const = trusted_profile(constant_stream("a").prefix(100))
    assert growth_function(const, 5) == 6
    with pytest.raises(HorizonError):
        growth_function(const, const.n_trust + 1)


def test_sturmian_closed_form(fib_profile):
    dims = growth_series(fib_profile)
    assert all(dims[n] == sturmian_dims(n) for n in range(fib_profile.n_trust + 1))
    assert all(a < b for a, b in zip(dims, dims[1:]))


def test_u_growth_lower_bound(u_profile):
    dims = growth_series(u_profile)
    assert all(dims[n] >= math.comb(n + 1, 2) for n in range(1, len(dims)))


def test_gk_estimates(fib_profile, u_profile):
    assert abs(estimate_gk(growth_series(fib_profile), 50, 500) - 2.0) <= 0.1
    const = trusted_profile(constant_stream("a").prefix(2000))
    assert abs(estimate_gk(growth_series(const), 50, 500) - 1.0) <= 0.1
    assert 2.0 <= estimate_gk(growth_series(u_profile), 100, 2000) <= 2.3


def test_gk_window_checks(fib_profile):
    dims = growth_series(fib_profile)
    with pytest.raises(InsufficientWindowError):
        estimate_gk(dims, 50, 100)
    with pytest.raises(InsufficientWindowError):
        estimate_gk(dims, 2, 100)


def test_growth_constant(fib_profile):
    gc = estimate_growth_constant(growth_series(fib_profile), 500)
    n = 450
    assert gc == pytest.approx(sturmian_dims(n) / n**2)
    assert 0.5 < gc < 0.51
    assert prime_budget(gc) == 1
    const = trusted_profile(constant_stream("a").prefix(4000))
    assert estimate_growth_constant(growth_series(const), 1000) < 0.002
    with pytest.raises(InsufficientWindowError):
        estimate_growth_constant([1] * 50)


def test_growth_report(fib_profile):
    rep = growth_report(fib_profile, 500)
    doc = rep.to_json()
    assert {"dims", "gk_estimate", "gc_estimate", "bound_checks"} <= set(doc)
    assert rep.c_lower <= 0.5 + 1.5 / 250 + 1e-9 and rep.c_upper >= 0.5


def test_u_bounds(u_profile, u8):
    anchors = [len(w) for w in u8.anchors(10)]
    checks = check_u_bounds(u_profile, anchors, 2000)
    assert checks[0].n == 2 and checks[0].bound == 300.0 and checks[0].actual <= 4
    assert all(c.ok for c in checks)
    assert stage_index(anchors, 64) <= 7
    by_n = {c.n: c for c in checks}
    assert by_n[64].extra["d"] == stage_index(anchors, 64)


def test_stage_index_needs_long_anchors():
    with pytest.raises(HorizonError):
        stage_index([1, 3, 6], 6)


def test_sandwich(u_profile):
    assert all(c.ok for c in check_growth_sandwich(u_profile, 2000))


def test_sandwich_detects_violation():
    flat = ComplexityProfile([1] + [1] * 50, 50)
    assert not all(c.ok for c in check_growth_sandwich(flat, 50))


@pytest.mark.parametrize(
    "forbidden, counts",
    [
        (["aa"], [2, 3, 5, 8, 13]),
        ([], [2, 4, 8, 16, 32]),
        (["ab", "ba"], [2, 2, 2, 2, 2]),
    ],
)
def test_transfer_examples(forbidden, counts):
    pres = ForbiddenPresentation.parse("ab", forbidden)
    assert transfer_counts(pres, 5)[1:] == counts
    assert [transfer_count(pres, n) for n in range(1, 6)] == counts


def test_transfer_count_large_n_exact():
    pres = ForbiddenPresentation.parse("ab", ["aa"])
    # avoiding aa gives Fibonacci numbers F(n+2)
    a, b = 1, 1
    for _ in range(201):
        a, b = b, a + b
    assert transfer_count(pres, 200) == a


def test_presentation_reduced():
    pres = ForbiddenPresentation.parse("ab", ["aa", "aab", "baa", "b"])
    assert sorted(str(w) for w in pres.forbidden) == ["aa", "b"]
    with pytest.raises(ValueError):
        ForbiddenPresentation.parse("ab", [""] + ["a"])


def random_presentations(count, seed=99):
    rng = random.Random(seed)
    for _ in range(count):
        alphabet = "abc"[: rng.choice((2, 3))]
        forbidden = sorted(
            {"".join(rng.choice(alphabet) for _ in range(rng.randint(1, 4))) for _ in range(rng.randint(0, 4))}
        )
        yield alphabet, forbidden


def test_transfer_vs_brute_force_random():
    for alphabet, forbidden in random_presentations(60):
        pres = ForbiddenPresentation.parse(alphabet, forbidden)
        counts = transfer_counts(pres, 18)
        top = 12 if len(alphabet) == 2 else 8
        for n in range(top + 1):
            assert counts[n] == avoiding_count(alphabet, forbidden, n)
        for n in range(19):
            assert counts[n] == avoiding_count_windowed(alphabet, forbidden, n)


def test_classify_growth():
    fib = classify_growth(ForbiddenPresentation.parse("ab", ["aa"]))
    assert fib.kind is GrowthKind.EXPONENTIAL and fib.rate == pytest.approx((1 + 5**0.5) / 2)
    lin = classify_growth(ForbiddenPresentation.parse("ab", ["ab"]))
    assert lin.kind is GrowthKind.POLYNOMIAL and lin.degree == 1
    const = classify_growth(ForbiddenPresentation.parse("ab", ["ab", "ba", "bb"]))
    assert const.kind is GrowthKind.POLYNOMIAL and const.degree == 0
    quad = classify_growth(ForbiddenPresentation.parse("abc", ["ba", "ca", "cb"]), 200)
    assert quad.kind is GrowthKind.POLYNOMIAL and quad.degree == 2
    finite = classify_growth(ForbiddenPresentation.parse("ab", ["aa", "b"]))
    assert finite.kind is GrowthKind.FINITE


def test_classify_growth_inconclusive_and_window():
    pres = ForbiddenPresentation.parse("ab", ["aa"])
    with pytest.raises(InsufficientWindowError):
        classify_growth(pres, 4)
    # a^i b^j c^k ... counts grow like n^2 but a short horizon cannot pin the degree
    slow = classify_growth(ForbiddenPresentation.parse("abc", ["ba", "ca", "cb"]), 12)
    assert slow.kind is GrowthKind.INCONCLUSIVE
