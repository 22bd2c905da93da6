import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimjump.f2 import BitMatrix
from dimjump.group_algebra import (
    FiniteAbelianGroup,
    GroupAlgebraElement,
    RMatrix,
    binary_rep,
    parse_element,
)

GROUPS = [(1,), (2,), (3,), (4,), (2, 2), (3, 3), (2, 3), (2, 2, 2)]


def elements(G):
    return st.lists(st.booleans(), min_size=G.size, max_size=G.size).map(
        lambda bits: GroupAlgebraElement.from_vector(G, np.array(bits, dtype=np.uint8))
    )


@st.composite
def group_and_elements(draw, count=3):
    G = FiniteAbelianGroup(draw(st.sampled_from(GROUPS)))
    return G, [draw(elements(G)) for _ in range(count)]


def test_regular_representation_of_x_is_down_shift():
    G = FiniteAbelianGroup((3,))
    B = binary_rep(parse_element("x", G)).to_dense()
    assert B.tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]


def test_parse_and_render_round_trip():
    G = FiniteAbelianGroup((3, 3))
    a = parse_element("x^2*y + x^2*y^2", G)
    assert a.weight == 2
    assert parse_element(a.render(), G) == a
    assert parse_element("0", G).is_zero()
    assert parse_element("1", G) == GroupAlgebraElement.one(G)
    # exponents reduce modulo the cyclic orders
    assert parse_element("x^4", G) == parse_element("x", G)


@pytest.mark.parametrize("text", ["x^", "w", "x**2", "1 +"])
def test_parse_rejects_garbage(text):
    with pytest.raises(ValueError):
        parse_element(text, FiniteAbelianGroup((3, 3)))


@pytest.mark.parametrize("orders", [(2,), (3,), (2, 2), (4,), (2, 3)])
def test_binary_rep_is_multiplicative_exhaustively(orders):
    G = FiniteAbelianGroup(orders)
    els = [GroupAlgebraElement.from_vector(G, np.array(bits, dtype=np.uint8)) for bits in itertools.product([0, 1], repeat=G.size)]
    reps = {e: binary_rep(e) for e in els}
    for a in els:
        for b in els:
            assert binary_rep(a * b) == reps[a] @ reps[b]


@given(group_and_elements())
def test_ring_axioms(ge):
    _, (a, b, c) = ge
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + a == GroupAlgebraElement.zero(a.group)


@given(group_and_elements(2))
def test_antipode_is_transpose_and_involution(ge):
    _, (a, b) = ge
    assert binary_rep(a.antipode()) == binary_rep(a).T
    assert a.antipode().antipode() == a
    assert (a * b).antipode() == a.antipode() * b.antipode()


@given(group_and_elements(1))
def test_vector_round_trip(ge):
    G, (a,) = ge
    assert GroupAlgebraElement.from_vector(G, a.to_vector()) == a
    assert a.weight == int(a.to_vector().sum())


@settings(max_examples=40)
@given(st.data())
def test_rmatrix_product_commutes_with_binary_lift(data):
    G = FiniteAbelianGroup(data.draw(st.sampled_from(GROUPS)))
    r, m, c = (data.draw(st.integers(1, 3)) for _ in range(3))
    A = RMatrix.from_elements(G, [[data.draw(elements(G)) for _ in range(m)] for _ in range(r)])
    B = RMatrix.from_elements(G, [[data.draw(elements(G)) for _ in range(c)] for _ in range(m)])
    assert binary_rep(A @ B) == binary_rep(A) @ binary_rep(B)
    assert binary_rep(A.dagger()) == binary_rep(A).T
    assert binary_rep(A.kron(B)) == binary_rep(A.kron(B))


def test_group_tables():
    G = FiniteAbelianGroup((2, 3))
    assert G.size == 6 and G.rank == 2
    add, neg = G.add_table, G.neg_table
    for i in range(G.size):
        assert add[i, neg[i]] == G.index((0, 0))
    # first factor varies slowest
    assert G.elements[:3] == [(0, 0), (0, 1), (0, 2)]


def test_trivial_group_matrix_is_plain_binary():
    G = FiniteAbelianGroup.trivial()
    M = RMatrix.from_binary(np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8))
    assert M.group == G
    assert binary_rep(M) == BitMatrix.from_dense(np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8))
