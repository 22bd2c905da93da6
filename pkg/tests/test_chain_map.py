import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimjump.chain_map import (
    cnot_schedule,
    hgp_slice_maps,
    ideal_membership,
    inclusion_chain_map,
    induced_logical_map,
    verify_chain_map,
    write_schedule,
)
from dimjump.f2 import BitMatrix, rank
from dimjump.group_algebra import FiniteAbelianGroup, GroupAlgebraElement
from dimjump.registry import TABLE_ROWS, CodeSpec, build_pair, registry_load


@pytest.mark.parametrize("name", TABLE_ROWS)
def test_inclusion_is_a_transversal_chain_map(pairs, name):
    spec = registry_load(name)
    c2, c3 = pairs[name]
    g = inclusion_chain_map(spec.classical_codes())
    assert verify_chain_map(g) is None
    lm = induced_logical_map(g, c2, c3)
    assert lm.injective and lm.rank == c2.k
    assert lm.physical_weights == (1, 1)
    # transversal basis brings bar gamma_1 to [I; 0]
    Q = lm.transversal_basis
    assert rank(Q) == c3.k
    t = lm.transversal_target
    assert t.pairing == BitMatrix.identity(c3.k)
    g1 = lm.gamma1_binary
    for j in range(c2.k):
        image = g1 @ lm.source_basis.z_reps.row(j)
        assert np.array_equal(t.x_reps @ image, np.eye(c3.k, dtype=np.uint8)[j])


def test_bt27_couples_two_of_three(pairs):
    spec = registry_load("bt-27")
    lm = induced_logical_map(inclusion_chain_map(spec.classical_codes()), *pairs["bt-27"])
    assert (lm.rank, lm.target_basis.k) == (2, 3)
    assert lm.coupled_target_logicals() == [0, 1]


def test_corrupted_map_fails_square():
    spec = registry_load("bt-27")
    g = inclusion_chain_map(spec.classical_codes())
    g.components[1].coeffs[0, 0, 0] ^= 1
    fail = verify_chain_map(g)
    assert fail is not None and fail.level == "R"


@pytest.mark.parametrize(
    "name, u, v",
    [("bt-27", "1", "x"), ("bt-45", "1", "x^2 + x*y^3"), ("bt-81", "y^3 + y^4", "x*y^6 + x*y^7")],
)
def test_given_certificates_and_solver(name, u, v):
    from dimjump.group_algebra import parse_element

    spec = registry_load(name)
    a, b, c = spec.elements()
    assert parse_element(u, spec.group) * a + parse_element(v, spec.group) * b == c
    cert = ideal_membership(a, b, c)
    assert cert is not None and cert.verifies(a, b, c) and cert.odd_order


def test_counterexample_has_no_certificate_and_no_transversal_logic():
    spec = CodeSpec("ce", (3,), "bt", {}, {"a": "1 + x", "b": "1 + x", "c": "1"})
    assert ideal_membership(*spec.elements()) is None
    c2, c3 = build_pair(spec)
    g = inclusion_chain_map(spec.classical_codes())
    assert verify_chain_map(g) is None
    lm = induced_logical_map(g, c2, c3)
    assert c2.k == 2 and c3.k == 0
    assert not lm.injective and lm.transversal_basis is None


def test_ideal_solver_brute_force_on_small_group():
    G = FiniteAbelianGroup((4,))
    els = [GroupAlgebraElement.from_vector(G, np.array([(i >> s) & 1 for s in range(4)], np.uint8)) for i in range(16)]
    for a in els[::3]:
        for b in els[::5]:
            ideal = {(u * a + v * b) for u in els for v in els}
            for c in els:
                assert (ideal_membership(a, b, c) is not None) == (c in ideal)


def test_slice_maps_have_disjoint_images():
    spec = registry_load("pentagon")
    maps = hgp_slice_maps(spec.classical_codes())
    supports = [set(np.flatnonzero(m.binary(1).to_dense().any(axis=1))) for m in maps]
    for i in range(len(supports)):
        for j in range(i):
            assert not supports[i] & supports[j]


@given(st.integers(0, 2**16))
def test_schedule_lists_every_edge_once(seed):
    rng = np.random.default_rng(seed)
    perm = rng.permutation(6)[:4]
    g = np.zeros((6, 4), np.uint8)
    g[perm, np.arange(4)] = 1
    sched = cnot_schedule(BitMatrix.from_dense(g))
    assert sorted(sched) == sorted(zip(perm.tolist(), range(4)))


def test_write_schedule(tmp_path):
    write_schedule([(0, 1), (2, 3)], tmp_path / "s.json")
    assert json.loads((tmp_path / "s.json").read_text())
