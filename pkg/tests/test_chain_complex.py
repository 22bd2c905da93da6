import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimjump.chain_complex import (
    ChainComplexF2,
    ChainComplexR,
    binary_lift,
    euler_characteristic,
    homology,
    single_map_complex,
    tensor_product,
    validate,
)
from dimjump.f2 import BitMatrix, rank
from dimjump.group_algebra import FiniteAbelianGroup, GroupAlgebraElement, RMatrix


@st.composite
def rmatrices(draw, G=None):
    G = G or FiniteAbelianGroup(draw(st.sampled_from([(1,), (2,), (3,), (2, 2)])))
    r, c = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    coeffs = np.array(draw(st.lists(st.integers(0, 1), min_size=r * c * G.size, max_size=r * c * G.size)), dtype=np.uint8)
    return RMatrix(G, coeffs.reshape(r, c, G.size))


def test_boundary_mismatch_is_rejected():
    with pytest.raises(ValueError):
        ChainComplexF2([BitMatrix.zeros(2, 3), BitMatrix.zeros(4, 1)])


def test_validate_reports_nonzero_square():
    d = BitMatrix.from_dense(np.array([[1, 1]], dtype=np.uint8))
    bad = ChainComplexF2([d, BitMatrix.from_dense(np.array([[1], [0]], dtype=np.uint8))])
    v = validate(bad)
    assert v is not None and v.degree == 2  # d_1 d_2 leaves degree 2


def test_cycle_graph_homology():
    # 1-complex of a 4-cycle: one connected component, one loop
    d = BitMatrix.from_dense(np.array([[1, 0, 0, 1], [1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]], dtype=np.uint8))
    C = ChainComplexF2([d])
    h1, h0 = homology(C, 1), homology(C, 0)
    assert h1.dimension == 1 and h0.dimension == 1
    assert h1.is_cycle(np.ones(4, dtype=np.uint8))
    assert not h0.is_boundary(np.array([1, 0, 0, 0], dtype=np.uint8))
    with pytest.raises(ValueError):
        homology(C, 3)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_tensor_product_is_a_complex_with_kunneth_homology(data):
    G = FiniteAbelianGroup.trivial()
    A = single_map_complex(data.draw(rmatrices(G)))
    B = single_map_complex(data.draw(rmatrices(G)))
    T = tensor_product(A, B)
    assert validate(T) is None
    F = binary_lift(T)
    assert validate(F) is None
    hA = [homology(binary_lift(A), i).dimension for i in range(2)]
    hB = [homology(binary_lift(B), i).dimension for i in range(2)]
    for n in range(3):
        expect = sum(hA[i] * hB[n - i] for i in range(2) if 0 <= n - i <= 1)
        assert homology(F, n).dimension == expect


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_lifted_product_squares_to_zero(data):
    G = FiniteAbelianGroup(data.draw(st.sampled_from([(2,), (3,), (2, 2)])))
    T = single_map_complex(data.draw(rmatrices(G)))
    for _ in range(data.draw(st.integers(1, 2))):
        T = tensor_product(T, single_map_complex(data.draw(rmatrices(G))))
    assert validate(T) is None
    F = binary_lift(T)
    for i in range(1, F.length):
        assert (F.boundary(i) @ F.boundary(i + 1)).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_euler_characteristic_equals_alternating_betti_sum(data):
    G = FiniteAbelianGroup((3,))
    T = tensor_product(single_map_complex(data.draw(rmatrices(G))), single_map_complex(data.draw(rmatrices(G))))
    F = binary_lift(T)
    betti = [homology(F, i).dimension for i in range(F.length + 1)]
    assert euler_characteristic(F.space_dims) == euler_characteristic(betti)


def test_transpose_reverses_degrees():
    d1 = BitMatrix.from_dense(np.array([[1, 1, 0]], dtype=np.uint8))
    d2 = BitMatrix.from_dense(np.array([[1], [1], [0]], dtype=np.uint8))
    C = ChainComplexF2([d1, d2])
    Ct = C.transpose()
    assert Ct.space_dims == list(reversed(C.space_dims))
    assert rank(Ct.boundary(1)) == rank(d2)


def test_r_complex_checks_group_consistency():
    G, H = FiniteAbelianGroup((2,)), FiniteAbelianGroup((3,))
    a = RMatrix.from_elements(G, [[GroupAlgebraElement.one(G)]])
    b = RMatrix.from_elements(H, [[GroupAlgebraElement.one(H)]])
    with pytest.raises(ValueError):
        ChainComplexR(G, [a, b])
