"""Chain complexes over R = F2[G] and over F2, tensor products and homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .f2 import BitMatrix, kernel_basis, quotient_reps, row_basis, solve_in_span
from .group_algebra import FiniteAbelianGroup, RMatrix, binary_rep, block_matrix

__all__ = [
    "ChainComplexR",
    "ChainComplexF2",
    "Violation",
    "HomologyData",
    "validate",
    "tensor_product",
    "binary_lift",
    "homology",
    "single_map_complex",
]


@dataclass(frozen=True)
class Violation:
    """First nonzero entry of a composite boundary ``d_{i-1} d_i``."""

    degree: int
    row: int
    col: int

    def __str__(self) -> str:
        return f"d{self.degree - 1}*d{self.degree} != 0 at ({self.row}, {self.col})"


# A sector label is the tuple of factor degrees, e.g. (1, 0, 1) for A1 (x) B0 (x) C1.
Sector = tuple


@dataclass
class ChainComplexR:
    """Free R-modules C_0..C_D with boundaries ``boundaries[i-1] = d_i : C_i -> C_{i-1}``.

    ``sectors[i]`` lists ``(label, dim)`` pairs decomposing C_i; single
    complexes use the label ``(i,)``.
    """

    group: FiniteAbelianGroup
    boundaries: list[RMatrix]
    sectors: list[list[tuple[Sector, int]]] | None = None

    def __post_init__(self):
        if not self.boundaries:
            raise ValueError("a chain complex needs at least one boundary map")
        for d in self.boundaries:
            if d.group != self.group:
                raise ValueError("boundary over a different group")
        for i in range(1, len(self.boundaries)):
            lo, hi = self.boundaries[i - 1], self.boundaries[i]
            if lo.cols != hi.rows:
                raise ValueError(f"d{i} has {lo.cols} columns but d{i + 1} has {hi.rows} rows")
        if self.sectors is None:
            self.sectors = [[((i,), m)] for i, m in enumerate(self.module_dims)]
        if [sum(d for _, d in s) for s in self.sectors] != self.module_dims:
            raise ValueError("sector dimensions do not add up to module dimensions")

    @property
    def length(self) -> int:
        return len(self.boundaries)

    @property
    def module_dims(self) -> list[int]:
        return [self.boundaries[0].rows] + [d.cols for d in self.boundaries]

    def boundary(self, i: int) -> RMatrix:
        """d_i, with zero maps outside 1..D."""
        dims = self.module_dims
        if 1 <= i <= self.length:
            return self.boundaries[i - 1]
        rows = dims[i - 1] if 1 <= i <= self.length + 1 else 0
        cols = dims[i] if 0 <= i <= self.length else 0
        return RMatrix.zeros(self.group, rows, cols)

    def sector_offsets(self, degree: int) -> dict[Sector, tuple[int, int]]:
        out, start = {}, 0
        for label, dim in self.sectors[degree]:
            out[label] = (start, start + dim)
            start += dim
        return out


@dataclass
class ChainComplexF2:
    boundaries: list[BitMatrix]
    sectors: list[list[tuple[Sector, int]]] | None = None

    def __post_init__(self):
        if not self.boundaries:
            raise ValueError("a chain complex needs at least one boundary map")
        for i in range(1, len(self.boundaries)):
            if self.boundaries[i - 1].cols != self.boundaries[i].rows:
                raise ValueError(f"d{i} and d{i + 1} do not compose")

    @property
    def length(self) -> int:
        return len(self.boundaries)

    @property
    def space_dims(self) -> list[int]:
        return [self.boundaries[0].rows] + [d.cols for d in self.boundaries]

    def boundary(self, i: int) -> BitMatrix:
        dims = self.space_dims
        if 1 <= i <= self.length:
            return self.boundaries[i - 1]
        rows = dims[i - 1] if 1 <= i <= self.length + 1 else 0
        cols = dims[i] if 0 <= i <= self.length else 0
        return BitMatrix.zeros(rows, cols)

    def transpose(self) -> "ChainComplexF2":
        """The cochain complex read as a chain complex (degrees reversed)."""
        sectors = list(reversed(self.sectors)) if self.sectors else None
        return ChainComplexF2([d.T for d in reversed(self.boundaries)], sectors)


def single_map_complex(H: RMatrix) -> ChainComplexR:
    """1-complex C_1 --H--> C_0 (bits in degree 1, checks in degree 0)."""
    return ChainComplexR(H.group, [H])


def validate(C) -> Violation | None:
    """Return the first violation of d_{i-1} d_i = 0, or None if the complex is exact-composable."""
    for i in range(2, C.length + 1):
        lo, hi = C.boundaries[i - 2], C.boundaries[i - 1]
        if lo.cols != hi.rows:
            raise ValueError(f"d{i - 1} and d{i} have incompatible shapes")
        prod = lo @ hi
        if isinstance(prod, RMatrix):
            nz = np.argwhere(prod.coeffs.any(axis=2))
        else:
            nz = np.argwhere(prod.to_dense())
        if len(nz):
            r, c = nz[0]
            return Violation(i, int(r), int(c))
    return None


def tensor_product(A: ChainComplexR, B: ChainComplexR) -> ChainComplexR:
    """Total complex of A (x)_R B; sectors inside each degree sorted by descending A-degree."""
    if A.group != B.group:
        raise ValueError("tensor_product: group mismatch")
    G = A.group
    DA, DB = A.length, B.length
    D = DA + DB
    # leaf sectors: (labelA + labelB, dim) for every pair of leaf sectors, grouped by total degree
    layout: list[list[tuple[int, Sector, Sector, int, int]]] = []
    for n in range(D + 1):
        entries = []
        for i in range(min(n, DA), -1, -1):
            j = n - i
            if j > DB:
                continue
            entries.append((i, j))
        layout.append(entries)

    dimsA, dimsB = A.module_dims, B.module_dims

    def block_dims(n):
        return [dimsA[i] * dimsB[j] for i, j in layout[n]]

    boundaries = []
    for n in range(1, D + 1):
        blocks = {}
        for cj, (i, j) in enumerate(layout[n]):
            for ri, (i2, j2) in enumerate(layout[n - 1]):
                if (i2, j2) == (i - 1, j):
                    blocks[(ri, cj)] = A.boundary(i).kron(RMatrix.identity(G, dimsB[j]))
                elif (i2, j2) == (i, j - 1):
                    blocks[(ri, cj)] = RMatrix.identity(G, dimsA[i]).kron(B.boundary(j))
        boundaries.append(block_matrix(G, block_dims(n - 1), block_dims(n), blocks))

    sectors = []
    for n in range(D + 1):
        row = []
        for i, j in layout[n]:
            for la, da in A.sectors[i]:
                for lb, db in B.sectors[j]:
                    row.append((tuple(la) + tuple(lb), da * db))
        sectors.append(row)
    # leaf order inside an (i, j) block is A-major, matching kron
    return ChainComplexR(G, boundaries, sectors)


def binary_lift(C: ChainComplexR) -> ChainComplexF2:
    l = C.group.size
    sectors = [[(lab, d * l) for lab, d in s] for s in C.sectors]
    return ChainComplexF2([binary_rep(d) for d in C.boundaries], sectors)


@dataclass
class HomologyData:
    degree: int
    dimension: int
    representatives: BitMatrix
    cycle_basis: BitMatrix
    boundary_basis: BitMatrix
    boundary_in: BitMatrix = field(repr=False)
    boundary_out: BitMatrix = field(repr=False)

    def is_cycle(self, v) -> bool:
        return not (self.boundary_in @ np.asarray(v, dtype=np.uint8)).any()

    def is_boundary(self, v) -> bool:
        return solve_in_span(self.boundary_out, v) is not None


def homology(C: ChainComplexF2, degree: int) -> HomologyData:
    """H_i = ker d_i / im d_{i+1} with deterministic representatives."""
    if not 0 <= degree <= C.length:
        raise ValueError(f"degree {degree} outside 0..{C.length}")
    d_in = C.boundary(degree)
    d_out = C.boundary(degree + 1)
    Z = kernel_basis(d_in) if d_in.rows else BitMatrix.identity(C.space_dims[degree])
    Bsp = row_basis(d_out.T) if d_out.cols else BitMatrix.zeros(0, C.space_dims[degree])
    reps = quotient_reps(Z, Bsp)
    return HomologyData(degree, reps.rows, reps, Z, Bsp, d_in, d_out)


def euler_characteristic(dims: Sequence[int]) -> int:
    return sum((-1) ** i * d for i, d in enumerate(dims))
