"""Group algebras F2[G] over finite abelian groups and their regular representation.

Group elements are exponent vectors over the cyclic factors; the canonical
ordering is lexicographic with the first factor varying slowest.  An element
of the algebra is a set of monomials (coefficients live in F2).

Matrices over the algebra (``RMatrix``) are stored densely as an
``(rows, cols, l)`` array of coefficient vectors, which keeps products and
Kronecker products vectorised.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:
    from .f2 import BitMatrix

__all__ = [
    "FiniteAbelianGroup",
    "GroupAlgebraElement",
    "RMatrix",
    "parse_element",
    "ga_add",
    "ga_mul",
    "antipode",
    "binary_rep",
]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct product of cyclic groups C_{l1} x ... x C_{lm}."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(o) for o in self.orders)
        if any(o < 1 for o in orders):
            raise ValueError(f"cyclic orders must be >= 1, got {orders}")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def trivial(cls) -> "FiniteAbelianGroup":
        return cls((1,))

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(o) for o in self.orders)))

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for o in reversed(self.orders):
            strides.append(acc)
            acc *= o
        return tuple(reversed(strides))

    def reduce(self, exps: Sequence[int]) -> tuple[int, ...]:
        if len(exps) != self.rank:
            raise ValueError(f"exponent vector {tuple(exps)} does not match group {self.orders}")
        return tuple(int(e) % o for e, o in zip(exps, self.orders))

    def index(self, exps: Sequence[int]) -> int:
        e = self.reduce(exps)
        return sum(a * s for a, s in zip(e, self._strides))

    def element(self, idx: int) -> tuple[int, ...]:
        return self.elements[idx]

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[g, h]`` is the index of g + h."""
        l = self.size
        elems = np.array(self.elements, dtype=np.int64).reshape(l, self.rank)
        orders = np.array(self.orders, dtype=np.int64)
        summed = (elems[:, None, :] + elems[None, :, :]) % orders
        strides = np.array(self._strides, dtype=np.int64)
        return (summed * strides).sum(axis=-1)

    @cached_property
    def neg_table(self) -> np.ndarray:
        elems = np.array(self.elements, dtype=np.int64).reshape(self.size, self.rank)
        orders = np.array(self.orders, dtype=np.int64)
        strides = np.array(self._strides, dtype=np.int64)
        return (((-elems) % orders) * strides).sum(axis=-1)

    @cached_property
    def sub_table(self) -> np.ndarray:
        """``sub_table[g, h]`` is the index of g - h."""
        return self.add_table[:, self.neg_table]

    def to_json(self) -> dict:
        return {"orders": list(self.orders)}

    def __str__(self) -> str:
        return " x ".join(f"C{o}" for o in self.orders)


def _variable_names(rank: int) -> list[str]:
    if rank <= 3:
        return ["x", "y", "z"][:rank]
    return [f"x{i + 1}" for i in range(rank)]


@dataclass(frozen=True)
class GroupAlgebraElement:
    group: FiniteAbelianGroup
    support: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        reduced = frozenset(self.group.reduce(e) for e in self.support)
        object.__setattr__(self, "support", reduced)

    @classmethod
    def zero(cls, group: FiniteAbelianGroup) -> "GroupAlgebraElement":
        return cls(group, frozenset())

    @classmethod
    def one(cls, group: FiniteAbelianGroup) -> "GroupAlgebraElement":
        return cls(group, frozenset({(0,) * group.rank}))

    @classmethod
    def monomial(cls, group: FiniteAbelianGroup, exps: Sequence[int]) -> "GroupAlgebraElement":
        return cls(group, frozenset({tuple(exps)}))

    @classmethod
    def from_monomials(cls, group: FiniteAbelianGroup, monomials: Iterable[Sequence[int]]):
        """Sum of monomials with F2 cancellation of repeats."""
        support: set = set()
        for m in monomials:
            support ^= {group.reduce(m)}
        return cls(group, frozenset(support))

    @classmethod
    def from_vector(cls, group: FiniteAbelianGroup, vec) -> "GroupAlgebraElement":
        vec = np.asarray(vec)
        return cls(group, frozenset(group.element(int(i)) for i in np.flatnonzero(vec & 1)))

    def to_vector(self) -> np.ndarray:
        v = np.zeros(self.group.size, dtype=np.uint8)
        for e in self.support:
            v[self.group.index(e)] = 1
        return v

    @property
    def weight(self) -> int:
        return len(self.support)

    def is_zero(self) -> bool:
        return not self.support

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return ga_add(self, other)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return ga_mul(self, other)

    def antipode(self) -> "GroupAlgebraElement":
        return antipode(self)

    def render(self) -> str:
        if not self.support:
            return "0"
        names = _variable_names(self.group.rank)
        terms = []
        for exps in sorted(self.support):
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            terms.append("*".join(factors) if factors else "1")
        return " + ".join(terms)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"GroupAlgebraElement({self.render()!r}, {self.group.orders})"


_FACTOR_RE = re.compile(r"([a-z]\d*)(?:\^\{?(-?\d+)\}?)?")


def parse_element(text: str, group: FiniteAbelianGroup) -> GroupAlgebraElement:
    """Parse a polynomial string such as ``"x^2*y + x^2*y^2"``.

    Variables ``x, y, z`` name the first three cyclic factors (``x1..xk`` for
    groups with more than three factors).  Juxtaposition (``x^2y``) and ``*``
    are both accepted as multiplication.  Repeated monomials cancel in pairs.
    """
    names = _variable_names(group.rank)
    lookup = {name: i for i, name in enumerate(names)}
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    monomials = []
    for term in s.split("+"):
        if term == "":
            raise ValueError(f"malformed polynomial {text!r}")
        if term == "0":
            continue
        exps = [0] * group.rank
        rest = term
        if rest.startswith("1"):
            rest = rest[1:]
            if rest.startswith("*"):
                rest = rest[1:]
            if rest == "":
                monomials.append(exps)
                continue
        pos = 0
        while pos < len(rest):
            if rest[pos] == "*":
                pos += 1
                continue
            m = _FACTOR_RE.match(rest, pos)
            if m is None or m.end() == pos:
                raise ValueError(f"malformed monomial {term!r} in {text!r}")
            var, power = m.group(1), m.group(2)
            if var not in lookup:
                raise ValueError(f"unknown variable {var!r} for a group with {group.rank} factor(s)")
            exps[lookup[var]] += int(power) if power is not None else 1
            pos = m.end()
        monomials.append(exps)
    return GroupAlgebraElement.from_monomials(group, monomials)


def _check_same_group(a: GroupAlgebraElement, b: GroupAlgebraElement):
    if a.group != b.group:
        raise ValueError(f"group mismatch: {a.group.orders} vs {b.group.orders}")


def ga_add(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    _check_same_group(a, b)
    return GroupAlgebraElement(a.group, a.support ^ b.support)


def ga_mul(a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
    _check_same_group(a, b)
    G = a.group
    return GroupAlgebraElement.from_monomials(
        G, (tuple(x + y for x, y in zip(e, f)) for e in a.support for f in b.support)
    )


def antipode(a: GroupAlgebraElement) -> GroupAlgebraElement:
    return GroupAlgebraElement(a.group, frozenset(tuple(-x for x in e) for e in a.support))


class RMatrix:
    """Matrix over F2[G], stored as an ``(rows, cols, l)`` uint8 coefficient array."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteAbelianGroup, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=np.uint8)
        if coeffs.ndim != 3 or coeffs.shape[2] != group.size:
            raise ValueError(f"coefficient array of shape {coeffs.shape} does not fit group of order {group.size}")
        self.group = group
        self.coeffs = coeffs & 1

    # -- construction -----------------------------------------------------
    @classmethod
    def zeros(cls, group: FiniteAbelianGroup, rows: int, cols: int) -> "RMatrix":
        return cls(group, np.zeros((rows, cols, group.size), dtype=np.uint8))

    @classmethod
    def identity(cls, group: FiniteAbelianGroup, n: int) -> "RMatrix":
        c = np.zeros((n, n, group.size), dtype=np.uint8)
        c[np.arange(n), np.arange(n), 0] = 1
        return cls(group, c)

    @classmethod
    def unit_column(cls, group: FiniteAbelianGroup, n: int, q: int) -> "RMatrix":
        """Column vector in R^n with the identity at (0-based) row q."""
        m = cls.zeros(group, n, 1)
        m.coeffs[q, 0, 0] = 1
        return m

    @classmethod
    def from_elements(cls, group: FiniteAbelianGroup, entries: Sequence[Sequence[GroupAlgebraElement]]) -> "RMatrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        c = np.zeros((rows, cols, group.size), dtype=np.uint8)
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for j, e in enumerate(row):
                if e.group != group:
                    raise ValueError("entry group mismatch")
                c[i, j] = e.to_vector()
        return cls(group, c)

    @classmethod
    def from_strings(cls, group: FiniteAbelianGroup, entries: Sequence[Sequence[str]]) -> "RMatrix":
        return cls.from_elements(group, [[parse_element(str(s), group) for s in row] for row in entries])

    @classmethod
    def from_binary(cls, matrix) -> "RMatrix":
        """Matrix over the trivial group from a 0/1 array."""
        a = np.asarray(matrix, dtype=np.uint8)
        return cls(FiniteAbelianGroup.trivial(), a[:, :, None])

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[0], self.coeffs.shape[1]

    @property
    def rows(self) -> int:
        return self.coeffs.shape[0]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[1]

    def __getitem__(self, key) -> GroupAlgebraElement:
        i, j = key
        return GroupAlgebraElement.from_vector(self.group, self.coeffs[i, j])

    def entries(self) -> list[list[GroupAlgebraElement]]:
        return [[self[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def to_strings(self) -> list[list[str]]:
        return [[e.render() for e in row] for row in self.entries()]

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, RMatrix):
            return NotImplemented
        return self.group == other.group and self.coeffs.shape == other.coeffs.shape and np.array_equal(
            self.coeffs, other.coeffs
        )

    def __hash__(self):
        return hash((self.group, self.coeffs.shape, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"RMatrix({self.rows}x{self.cols} over {self.group})"

    def copy(self) -> "RMatrix":
        return RMatrix(self.group, self.coeffs.copy())

    # -- algebra ----------------------------------------------------------
    def _check(self, other: "RMatrix"):
        if self.group != other.group:
            raise ValueError(f"group mismatch: {self.group.orders} vs {other.group.orders}")

    def __add__(self, other: "RMatrix") -> "RMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return RMatrix(self.group, self.coeffs ^ other.coeffs)

    def __matmul__(self, other: "RMatrix") -> "RMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        G = self.group
        l = G.size
        r, c, s = self.rows, self.cols, other.cols
        acc = np.zeros((r, s * l), dtype=np.float64)
        sub = G.sub_table
        for g in range(l):
            left = self.coeffs[:, :, g]
            if not left.any():
                continue
            # shifted[k, j, t] = other[k, j, t - g]
            shifted = other.coeffs[:, :, sub[:, g]]
            acc += left.astype(np.float64) @ shifted.reshape(c, s * l).astype(np.float64)
        out = (acc.astype(np.int64) & 1).astype(np.uint8).reshape(r, s, l)
        return RMatrix(G, out)

    def kron(self, other: "RMatrix") -> "RMatrix":
        """Kronecker product over R: entry ((i,k),(j,m)) = A[i,j] * B[k,m]."""
        self._check(other)
        G = self.group
        l = G.size
        (r1, c1), (r2, c2) = self.shape, other.shape
        out = np.zeros((r1, r2, c1, c2, l), dtype=np.uint8)
        sub = G.sub_table
        for g in range(l):
            left = self.coeffs[:, :, g]
            if not left.any():
                continue
            shifted = other.coeffs[:, :, sub[:, g]]
            out ^= np.einsum("ij,kmt->ikjmt", left, shifted).astype(np.uint8) & 1
        return RMatrix(G, out.reshape(r1 * r2, c1 * c2, l))

    def dagger(self) -> "RMatrix":
        """Transpose with the antipode applied entrywise."""
        return RMatrix(self.group, self.coeffs[:, :, self.group.neg_table].transpose(1, 0, 2))

    @property
    def T(self) -> "RMatrix":
        """Plain transpose (no antipode)."""
        return RMatrix(self.group, self.coeffs.transpose(1, 0, 2))


def hstack(blocks: Sequence[RMatrix]) -> RMatrix:
    return RMatrix(blocks[0].group, np.concatenate([b.coeffs for b in blocks], axis=1))


def vstack(blocks: Sequence[RMatrix]) -> RMatrix:
    return RMatrix(blocks[0].group, np.concatenate([b.coeffs for b in blocks], axis=0))


def block_matrix(group: FiniteAbelianGroup, row_dims: Sequence[int], col_dims: Sequence[int], blocks: dict) -> RMatrix:
    """Assemble an RMatrix from ``{(bi, bj): RMatrix}``; missing blocks are zero."""
    ro = np.concatenate([[0], np.cumsum(row_dims)]).astype(int)
    co = np.concatenate([[0], np.cumsum(col_dims)]).astype(int)
    c = np.zeros((int(ro[-1]), int(co[-1]), group.size), dtype=np.uint8)
    for (bi, bj), m in blocks.items():
        if m.shape != (row_dims[bi], col_dims[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {m.shape}, expected {(row_dims[bi], col_dims[bj])}")
        c[ro[bi] : ro[bi + 1], co[bj] : co[bj + 1]] = m.coeffs
    return RMatrix(group, c)


def binary_rep(M) -> "BitMatrix":
    """Regular representation: each entry becomes the l x l matrix of left multiplication.

    Column h of a block holds the expansion of ``entry * h``, so
    ``B(a)[g, h] = [g - h in supp(a)]``.  Accepts a ``GroupAlgebraElement``
    (treated as a 1x1 matrix) or an ``RMatrix``.
    """
    from .f2 import BitMatrix

    if isinstance(M, GroupAlgebraElement):
        M = RMatrix.from_elements(M.group, [[M]])
    G = M.group
    l = G.size
    r, c = M.shape
    blocks = M.coeffs[:, :, G.sub_table]  # (r, c, l, l): [p, q, g, h] = coeff of g-h
    dense = blocks.transpose(0, 2, 1, 3).reshape(r * l, c * l)
    return BitMatrix.from_dense(dense)
