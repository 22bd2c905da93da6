import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimjump.ccz import (
    CczTensor,
    equivariant_solve,
    induced_logical_tensor,
    propagated_error_channel,
    random_tensor,
    read_triples,
    verify_cup_validity,
    write_triples,
)
from dimjump.codes import logical_basis
from dimjump.f2 import kernel_basis


@pytest.fixture(scope="module")
def solved(bt27):
    code = bt27[1]
    res = equivariant_solve(code, depth_target=2, budget=2_000_000)
    assert res.delta is not None, res.reason
    return code, res


def _combo(rng, M):
    return (rng.integers(0, 2, M.shape[0]) @ M) % 2


def test_solution_is_valid_by_direct_evaluation(solved):
    code, res = solved
    delta = res.delta
    rng = np.random.default_rng(0)
    K, S = kernel_basis(code.hz).to_dense(), code.hx.to_dense()
    for _ in range(60):
        u, v, w = (_combo(rng, K) for _ in range(3))
        s = S[rng.integers(S.shape[0])]
        assert delta.evaluate(s, v, w) == delta.evaluate(u, s, w) == delta.evaluate(u, v, s) == 0
    assert verify_cup_validity(delta, [code] * 3) is None


def test_solution_is_depth_two_and_nontrivial(solved):
    code, res = solved
    lb = logical_basis(code)
    lt, depth, nontrivial = induced_logical_tensor(res.delta, [lb] * 3, [code] * 3)
    assert depth == 2 and nontrivial
    X = lb.x_reps.to_dense()
    direct = {(a, b, c) for a in range(3) for b in range(3) for c in range(3) if res.delta.evaluate(X[a], X[b], X[c])}
    assert direct == set(lt.entries)
    assert res.equivariant.expand() == res.delta


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_logical_tensor_ignores_stabilizer_shifts(solved, seed):
    code, res = solved
    lb = logical_basis(code)
    rng = np.random.default_rng(seed)
    S = code.hx.to_dense()
    X = lb.x_reps.to_dense()
    shifted = [(X[i] + _combo(rng, S)) % 2 for i in range(3)]
    for a in range(3):
        for b in range(3):
            for c in range(3):
                assert res.delta.evaluate(shifted[a], shifted[b], shifted[c]) == res.delta.evaluate(X[a], X[b], X[c])


def test_random_tensors_are_rejected(bt27):
    code = bt27[1]
    rng = np.random.default_rng(1)
    rejected = sum(verify_cup_validity(random_tensor((27, 27, 27), 100, rng), [code] * 3) is not None for _ in range(100))
    assert rejected >= 99


def test_invalid_tensor_is_refused_by_induced_tensor(bt27):
    code = bt27[1]
    delta = CczTensor((27, 27, 27), frozenset({(0, 0, 0)}))
    with pytest.raises(ValueError):
        induced_logical_tensor(delta, [logical_basis(code)] * 3, [code] * 3)


def test_zero_tensor_is_valid_and_trivial(bt27):
    code = bt27[1]
    zero = CczTensor.zero((27, 27, 27))
    assert verify_cup_validity(zero, [code] * 3) is None
    _, depth, nontrivial = induced_logical_tensor(zero, [logical_basis(code)] * 3, [code] * 3)
    assert depth == 0 and not nontrivial


def test_error_channel_has_five_qubit_supports(solved):
    _, res = solved
    ch = propagated_error_channel(res.delta, 0.002)
    assert len(ch) == 81
    assert {len(s) for s, _ in ch} == {5}
    assert all(p == 0.002 for _, p in ch)
    with pytest.raises(ValueError):
        propagated_error_channel(res.delta, 1.5)


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_triples_round_trip(tmp_path, solved, fmt):
    _, res = solved
    write_triples(res.delta, tmp_path / "d", fmt)
    assert read_triples(tmp_path / "d") == res.delta


def test_out_of_range_triple():
    with pytest.raises(ValueError):
        CczTensor((2, 2, 2), frozenset({(0, 0, 2)}))


def test_solver_declines_non_tricycle_codes(pairs):
    res = equivariant_solve(pairs["pentagon"][1])
    assert res.delta is None and "tricycle" in res.reason


def test_block_size_mismatch(bt27):
    with pytest.raises(ValueError):
        verify_cup_validity(CczTensor.zero((3, 3, 3)), [bt27[1]] * 3)
