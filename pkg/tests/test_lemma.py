from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardcore_pca.drift.lemma import (
    ChainSpec, InvalidChain, aux_chain_simulate, class_system_bound, goal_check, minmax_bound,
    minmax_from_values, stationary_distribution, stationary_drift, two_state_fixture,
)


def test_single_state():
    spec = ChainSpec.from_jumps(("a",), {"a": {"a": 1}}, {("a", "a"): [(-3, Fraction(1, 2)), (1, Fraction(1, 2))]})
    assert minmax_bound(spec) == -1 == stationary_drift(spec)


def test_two_state_fixture():
    spec = two_state_fixture()
    assert spec.drift1 == {"a": -1, "b": 2}
    assert minmax_bound(spec) == Fraction(1, 2) == stationary_drift(spec)
    assert spec.split() == ({"b"}, {"a"})


def test_two_state_simulation():
    spec = two_state_fixture()
    res = aux_chain_simulate(spec, 200_000, seed=3, start="a")
    assert abs(res.R_hat - res.R) < 3 * res.R_stderr + 1e-9
    assert abs(res.R - 0.5) < 3 * res.R_stderr
    for f in res.F2:
        gap = abs(res.tau[(f, 0)] - res.tau[(f, 1)])
        assert gap <= max(3 * (res.tau_stderr[(f, 0)] + res.tau_stderr[(f, 1)]), 1 / res.steps)


def test_all_f1_walks_agree():
    half = Fraction(1, 2)
    spec = ChainSpec.from_jumps(
        ("a", "b"), {"a": {"a": half, "b": half}, "b": {"a": half, "b": half}},
        {k: [(1, 1)] for k in (("a", "a"), ("a", "b"), ("b", "a"), ("b", "b"))},
    )
    assert spec.split()[1] == set()
    assert aux_chain_simulate(spec, 10_000, seed=1).jhat_equals_j


def test_invalid_rows():
    with pytest.raises(InvalidChain):
        ChainSpec(("a",), {"a": {"a": Fraction(1, 2)}}, {"a": 0}, {"a": 0})
    with pytest.raises(InvalidChain):
        ChainSpec(("a",), {"a": {"a": 2, "b": -1}}, {"a": 0}, {"a": 0})


def test_goal_threshold():
    assert goal_check(Fraction(-2, 5), 2).passed
    assert not goal_check(Fraction(-1, 2), 2).passed
    assert goal_check(Fraction(-9, 10), 3).passed and goal_check(-1, 3).threshold == -1


def test_minmax_from_values():
    assert minmax_from_values({"a": -1, "b": 0}, {"a": -1}) == Fraction(-1, 2)


def random_chain(draw_ints, m):
    states = tuple("abcdefg"[:m])
    tr, jumps = {}, {}
    it = iter(draw_ints)
    for f in states:
        w = [next(it) + 1 for _ in states]
        tot = sum(w)
        tr[f] = {g: Fraction(x, tot) for g, x in zip(states, w)}
        for g in states:
            jumps[(f, g)] = [(next(it) - 3, Fraction(1, 2)), (next(it) - 3, Fraction(1, 2))]
    return ChainSpec.from_jumps(states, tr, jumps)


@given(st.lists(st.integers(0, 6), min_size=64, max_size=64), st.integers(2, 3))
@settings(max_examples=60)
def test_bound_never_exceeds_stationary_drift(ints, m):
    spec = random_chain(ints, m)
    pi = stationary_distribution(spec)
    assert sum(pi.values()) == 1 and all(p >= 0 for p in pi.values())
    assert minmax_bound(spec) <= stationary_drift(spec)


def test_three_state_simulation():
    spec = random_chain([3, 1, 4, 1, 5, 6, 2, 6, 5, 3, 5, 0, 2, 4, 6, 2, 6, 4, 3, 3, 0, 2, 5, 0, 2, 4, 1, 6,
                         5, 3, 0, 1, 4, 2, 3, 6, 1, 0, 6, 5, 2, 4, 5, 3, 1, 2, 0, 6], 3)
    res = aux_chain_simulate(spec, 300_000, seed=5)
    assert abs(res.R_hat - res.R) < 3 * res.R_stderr + 1e-9
    assert abs(res.R - float(stationary_drift(spec))) < 3 * res.R_stderr
    for f in res.F2:
        gap = abs(res.tau[(f, 0)] - res.tau[(f, 1)])
        assert gap <= max(3 * (res.tau_stderr[(f, 0)] + res.tau_stderr[(f, 1)]), 1 / res.steps)


@pytest.mark.parametrize("n", [2, 3])
def test_class_system_passes_on_grid(n):
    step = Fraction(1, 50)
    for a in range(26):
        for b in range(26):
            if (a, b) == (0, 0) or a + b == 50:
                continue
            assert class_system_bound(n, a * step, b * step).passed, (n, a, b)
