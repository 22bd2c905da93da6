import numpy as np
import pytest

from dimjump.codes import (
    ClassicalCode,
    CssCode,
    build_lp,
    bt_direct,
    check_translation_invariance,
    compute_parameters,
    kunneth_k_hgp,
    logical_basis,
    spacetime_cost,
    torus_layout,
)
from dimjump.f2 import BitMatrix, rank
from dimjump.group_algebra import RMatrix
from dimjump.registry import REGISTRY, TABLE_ROWS, build_code, build_pair, registry_load, spec_from_config


@pytest.mark.parametrize("name", TABLE_ROWS)
def test_registry_parameters(pairs, name):
    spec = registry_load(name)
    c2, c3 = pairs[name]
    assert (c2.n, c2.k) == spec.expected_2d[:2]
    assert (c3.n, c3.k) == spec.expected_3d[:2]
    assert c2.dimension == 2 and c3.dimension == 3


@pytest.mark.parametrize("name", list(REGISTRY))
def test_css_and_metacheck_conditions(name):
    spec = REGISTRY[name]
    c3 = build_code(spec, 3)
    assert (c3.hx @ c3.hz.T).is_zero()
    assert (c3.mz @ c3.hz).is_zero()
    assert sum(size for _, size in c3.sector_layout) == c3.n


def test_fig_s1_has_no_2d_member_but_builds_in_3d():
    c3 = build_code(registry_load("fig-s1"), 3)
    assert (c3.n, c3.k) == (27, 3)


@pytest.mark.parametrize("name", ["bt-27", "bt-45", "bt-81", "tt-210"])
def test_direct_tricycle_equals_lifted_product(name):
    spec = registry_load(name)
    direct = bt_direct(*spec.elements())
    lp = build_lp(spec.classical_codes())
    assert direct.hx == lp.hx and direct.hz == lp.hz and direct.mz == lp.mz


@pytest.mark.parametrize("name", TABLE_ROWS)
def test_logical_basis_pairing_is_identity(pairs, name):
    for code in pairs[name]:
        lb = logical_basis(code)
        assert lb.pairing == BitMatrix.identity(code.k)
        assert (code.hx @ lb.z_reps.T).is_zero()
        assert (code.hz @ lb.x_reps.T).is_zero()


def test_hypergraph_product_of_repetition_codes_is_toric():
    rep = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=np.uint8)
    cc = ClassicalCode(RMatrix.from_binary(rep))
    code = build_lp([cc, cc])
    assert (code.n, code.k) == (18, 2)
    p = compute_parameters(code)
    assert p.hx_weights[0] == 4 and p.hz_weights[0] == 4


def test_css_constructor_rejects_anticommuting_checks():
    hx = BitMatrix.from_dense(np.array([[1, 0]], dtype=np.uint8))
    hz = BitMatrix.from_dense(np.array([[1, 0]], dtype=np.uint8))
    with pytest.raises(ValueError):
        CssCode(hx, hz)


def test_kunneth_prediction_for_pentagon(pairs):
    spec = registry_load("pentagon")
    q2, q3 = pairs["pentagon"]
    assert kunneth_k_hgp(q2, spec.classical_codes()[2]) == q3.k == 8


def test_kunneth_needs_trivial_group(pairs):
    with pytest.raises(ValueError):
        kunneth_k_hgp(pairs["lifted-toric-2"][0], registry_load("lifted-toric-2").classical_codes()[2])


def test_stabilizer_weights_of_tricycle_codes(pairs):
    for name in ("bt-27", "bt-45", "bt-81"):
        p = compute_parameters(pairs[name][1])
        assert p.max_stabilizer_weight == 6


def test_torus_layout_is_translation_invariant(pairs):
    c2 = build_lp(registry_load("bt-27").classical_codes()[:2])
    c3 = pairs["bt-27"][1]
    lay = torus_layout(c3)
    assert lay.n == 27
    assert check_translation_invariance(c3, lay, (1, 0)) and check_translation_invariance(c3, lay, (0, 1))
    with pytest.raises(ValueError):
        torus_layout(c2)


@pytest.mark.parametrize(
    "args, cost",
    [((27, 9, 27, 3, 0.704, 6), 239), ((81, 27, 81, 3, 0.349, 6), 1444), ((10, 0, 0, 1, 1.0, 0), 20)],
)
def test_spacetime_cost(args, cost):
    assert spacetime_cost(*args) == cost


@pytest.mark.parametrize("args", [(0, 1, 1, 1, 0.5, 6), (10, 1, 1, 0, 0.5, 6), (10, 1, 1, 1, 0.0, 6), (10, -1, 1, 1, 0.5, 6)])
def test_spacetime_cost_rejects_bad_inputs(args):
    with pytest.raises(ValueError):
        spacetime_cost(*args)


def test_config_round_trip_matches_registry():
    spec = spec_from_config({"group": {"orders": [3, 3]}, "construction": "bt", "polynomials": dict(zip("abc", registry_load("bt-27").polynomials.values()))})
    assert build_code(spec, 3).hx == build_code(registry_load("bt-27"), 3).hx


@pytest.mark.parametrize(
    "cfg",
    [{}, {"group": {"orders": [3]}, "construction": "bt"}, {"group": {"orders": [3]}, "construction": "lp3", "matrices": {"A": [["1"]]}}, {"group": {"orders": [3]}, "construction": "xyz"}],
)
def test_bad_configs(cfg):
    with pytest.raises(ValueError):
        spec_from_config(cfg)


def test_unknown_registry_name():
    with pytest.raises(KeyError):
        registry_load("nope")


def test_classical_code_dimensions():
    cc = registry_load("bt-27").classical_codes()[0]
    assert cc.n == 9 and cc.r == 9
    assert cc.k == cc.n - rank(cc.binary)
