import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from dimjump.codes import Bounds, ClassicalCode, Exact, build_lp
from dimjump.distance import brute_force_distance, code_distance, default_weight_cap, distance_search, is_logical, random_logical_search
from dimjump.group_algebra import RMatrix
from dimjump.registry import registry_load, build_code


def small_hgp():
    shape = st.tuples(st.integers(1, 3), st.integers(2, 4))
    return shape.flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 1))).map(
        lambda H: build_lp([ClassicalCode(RMatrix.from_binary(H))] * 2)
    )


@settings(max_examples=40, deadline=None)
@given(small_hgp(), st.sampled_from("XZ"))
def test_search_agrees_with_brute_force(code, basis):
    if code.k == 0:
        assert isinstance(distance_search(code, basis), Bounds)
        return
    d = distance_search(code, basis, weight_cap=code.n)
    assert isinstance(d, Exact)
    assert d.value == brute_force_distance(code, basis, code.n)
    assert is_logical(code, basis, d.witness) and int(d.witness.sum()) == d.value


@pytest.mark.parametrize("name, d2, d3", [("bt-27", 3, 3), ("lifted-toric-2", 4, 4)])
def test_small_codes_against_brute_force(pairs, name, d2, d3):
    c2, c3 = pairs[name]
    assert brute_force_distance(c2, "Z", 4) == brute_force_distance(c2, "X", 4) == d2
    assert brute_force_distance(c3, "Z", 4) == d3
    assert code_distance(c2).d == Exact(d2)
    assert code_distance(c3).d == Exact(d3)


def test_cap_gives_lower_bound_only(pairs):
    c3 = pairs["bt-45"][1]
    d = distance_search(c3, "Z", weight_cap=2)
    assert d == Bounds(3, None)


def test_hint_certifies_when_lighter_weights_are_excluded(pairs):
    c3 = pairs["bt-45"][1]
    w = distance_search(c3, "Z").witness
    d = distance_search(c3, "Z", weight_cap=3, candidate_hints=[w])
    assert isinstance(d, Exact) and d.value == 4


def test_hint_beyond_cap_is_an_upper_bound(pairs):
    c3 = pairs["bt-81"][1]
    w = distance_search(c3, "Z").witness
    heavy = w ^ c3.hz.row(0)  # same class, heavier representative
    d = distance_search(c3, "Z", weight_cap=2, candidate_hints=[heavy])
    assert d.lower == 3 and d.upper == int(heavy.sum())


def test_non_logical_hints_are_ignored(pairs):
    c3 = pairs["bt-27"][1]
    d = distance_search(c3, "Z", weight_cap=2, candidate_hints=[np.zeros(c3.n, np.uint8), c3.hz.row(0)])
    assert d == Bounds(3, None)


def test_random_search_returns_logicals(pairs):
    c3 = pairs["bt-81"][1]
    v = random_logical_search(c3, "Z", 20, seed=1)
    assert v is not None and is_logical(c3, "Z", v)


def test_default_cap_stays_within_budget():
    from math import comb

    cap = default_weight_cap(81)
    assert sum(comb(81, w) for w in range(1, cap + 1)) <= 50_000_000 < sum(comb(81, w) for w in range(1, cap + 2))


def test_invalid_cap():
    with pytest.raises(ValueError):
        distance_search(build_code(registry_load("bt-27"), 3), "Z", weight_cap=0)
