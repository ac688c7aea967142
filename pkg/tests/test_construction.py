from math import ceil

import pytest

from oracles import fibonacci_by_substitution, shortest_anchors
from quadword.construction import (
    ConstructionParams,
    ConstructionTrace,
    UStream,
    build_block,
    build_stage,
    build_trace,
    exponent,
    select_anchors,
    verify_stage_length_bound,
)
from quadword.errors import SearchHorizonError
from quadword.words import FiniteWord, UltimatelyPeriodicStream, periodic_stream, power


def W(s):
    return FiniteWord.parse(s)


def direct_u(anchors: list[str]) -> list[str]:
    """Stages evaluated straight from the defining formulas on strings."""
    stages = [anchors[0]]
    for n in range(2, len(anchors) + 1):
        a = [ceil(len(anchors[n - 1]) / len(anchors[j - 1])) for j in range(1, n)]
        left = anchors[n - 1] + "".join(anchors[j - 1] * a[j - 1] for j in range(n - 1, 1, -1))
        middle = anchors[0] * a[0]
        right = "".join(anchors[j - 1] * a[j - 1] for j in range(2, n)) + anchors[n - 1]
        v = left + middle + right
        stages.append((stages[-1] + v) * 2)
    return stages


def test_anchors_fibonacci(fib):
    assert [str(w) for w in select_anchors(fib, 3)] == ["a", "aba", "abaaba"]
    assert [str(w) for w in select_anchors(fib, 1)] == ["a"]
    text = fibonacci_by_substitution(10**5)
    got = [str(w) for w in select_anchors(fib, 10)]
    assert got == shortest_anchors(text, 10)


def test_anchors_periodic_base():
    assert [str(w) for w in select_anchors(periodic_stream("ab"), 2)] == ["a", "aba"]


def test_anchor_search_fails_on_nonrecurrent_base():
    base = UltimatelyPeriodicStream(W("a"), W("b"))
    with pytest.raises(SearchHorizonError):
        select_anchors(base, 2)


@pytest.mark.parametrize("li, lj, expected", [(6, 3, 2), (6, 1, 6), (7, 3, 3)])
def test_exponent(li, lj, expected):
    anchors = [W("a" * lj), W("a" * li)]
    assert exponent(anchors, 2, 1) == expected


def test_exponent_index_errors():
    anchors = [W("a"), W("aba")]
    with pytest.raises(IndexError):
        exponent(anchors, 1, 1)
    with pytest.raises(IndexError):
        exponent(anchors, 3, 1)


def test_blocks(fib):
    anchors = select_anchors(fib, 3)
    assert str(build_block(1, anchors)) == "a"
    assert str(build_block(2, anchors)) == "abaaaaaba"
    assert len(build_block(3, anchors)) == 2 * 6 + 2 * 2 * 3 + 6 * 1 == 30
    with pytest.raises(IndexError):
        build_block(4, anchors)


def test_block_is_palindromic_arrangement(fib):
    anchors = select_anchors(fib, 7)
    for n in range(2, 8):
        v = build_block(n, anchors)
        assert v.startswith(anchors[n - 1]) and v.endswith(anchors[n - 1])


def test_stages_match_formula(fib):
    trace = build_trace(ConstructionParams(fib, depth=7))
    stages = direct_u([str(w) for w in trace.anchors])
    assert str(build_stage(1, trace)) == "a"
    assert str(build_stage(2, trace)) == ("a" + "abaaaaaba") * 2
    assert trace.stage_lengths[:6] == [1, 20, 100, 416, 1498, 5068]
    for n in range(1, 8):
        assert str(build_stage(n, trace)) == stages[n - 1]
        if n > 1:
            assert trace.stage_lengths[n - 1] == 2 * (trace.stage_lengths[n - 2] + trace.block_lengths[n - 1])
            assert stages[n - 1].startswith(stages[n - 2])


def test_stage_length_bound(fib):
    checks = verify_stage_length_bound(build_trace(ConstructionParams(fib, depth=6)))
    assert [c.ok for c in checks] == [True] * 6
    assert (checks[0].length, checks[0].bound) == (1, 4)
    assert (checks[1].length, checks[1].bound) == (20, 48)


def test_anchor_invariants(fib):
    anchors = select_anchors(fib, 9)
    base = fib.prefix(len(anchors[-1]))
    assert len(anchors[0]) == 1
    for prev, cur in zip(anchors, anchors[1:]):
        assert cur.startswith(prev) and cur.endswith(prev)
        assert len(cur) >= 2 * len(prev)
        assert base.startswith(cur)


def test_power_presence(fib):
    trace = build_trace(ConstructionParams(fib, depth=7))
    u = trace.u_prefix
    d = trace.depth
    for j in range(1, d):
        for m in range(1, trace.exponents[(d, j)] + 1):
            assert power(trace.anchors[j - 1], m).is_factor_of(u)


def test_trace_is_reproducible(fib):
    a = build_trace(ConstructionParams(fib, depth=6))
    b = build_trace(ConstructionParams(fib, depth=6))
    assert a.u_prefix.letters == b.u_prefix.letters


def test_trace_json_round_trip(fib):
    trace = build_trace(ConstructionParams(fib, depth=5))
    doc = trace.to_json()
    assert set(doc) >= {"anchors", "exponents", "block_lengths", "stage_lengths", "length_bound_ok"}
    assert doc["exponents"]["2,1"] == 3
    again = ConstructionTrace.from_json(doc)
    assert again.u_prefix == trace.u_prefix


def test_u_stream_prefixes(fib):
    u = UStream(ConstructionParams(fib, depth=2))
    trace = build_trace(ConstructionParams(fib, depth=2))
    assert u.prefix(20) == build_stage(2, trace)
    assert str(u.prefix(1)) == "a"
    for n in (10, 100, 1000):
        assert u.prefix(2 * n).startswith(u.prefix(n))


def test_u_stream_descends_past_stage_cap(fib):
    capped = UStream(ConstructionParams(fib, depth=3, stage_cap=500))
    full = UStream(ConstructionParams(fib, depth=3))
    ref = full.prefix(200000).letters
    assert capped.prefix(500).letters == ref[:500]
    for i in list(range(0, 3000)) + list(range(3000, 200000, 611)):
        assert capped.letter_at(i) == ref[i]


def test_params_validation(fib):
    with pytest.raises(ValueError):
        ConstructionParams(fib, depth=0)
    with pytest.raises(ValueError):
        ConstructionParams(fib, growth_factor=1)
    with pytest.raises(ValueError):
        ConstructionParams(fib, anchor_rule="longest")
