"""Chain maps between lifted-product complexes and the logical CNOTs they induce."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chain_complex import ChainComplexR, binary_lift, tensor_product
from .codes import ClassicalCode, CssCode, LogicalBasis, logical_basis
from .f2 import BitMatrix, inverse, quotient_reps, rank, row_basis, solve_in_span
from .group_algebra import GroupAlgebraElement, RMatrix, binary_rep, block_matrix

__all__ = [
    "ChainMapR",
    "SquareFailure",
    "LogicalCnotMap",
    "IdealCertificate",
    "tensor_chain_maps",
    "identity_chain_map",
    "inclusion_chain_map",
    "hgp_slice_maps",
    "verify_chain_map",
    "induced_logical_map",
    "ideal_membership",
    "cnot_schedule",
    "write_schedule",
]


@dataclass
class ChainMapR:
    """Components gamma_i : source_i -> target_i, one RMatrix per degree 0..D."""

    source: ChainComplexR
    target: ChainComplexR
    components: list[RMatrix]

    def __post_init__(self):
        if self.source.length != self.target.length:
            raise ValueError("source and target have different lengths")
        if len(self.components) != self.source.length + 1:
            raise ValueError("need one component per degree")
        for i, g in enumerate(self.components):
            want = (self.target.module_dims[i], self.source.module_dims[i])
            if g.shape != want:
                raise ValueError(f"gamma_{i} has shape {g.shape}, expected {want}")

    @property
    def length(self) -> int:
        return self.source.length

    def binary(self, i: int) -> BitMatrix:
        return binary_rep(self.components[i])


@dataclass(frozen=True)
class SquareFailure:
    degree: int
    level: str  # "R" or "binary"
    row: int
    col: int

    def __str__(self) -> str:
        return f"square {self.degree} fails over {self.level} at ({self.row}, {self.col})"


def identity_chain_map(C: ChainComplexR) -> ChainMapR:
    return ChainMapR(C, C, [RMatrix.identity(C.group, m) for m in C.module_dims])


def tensor_chain_maps(gx: ChainMapR, gy: ChainMapR) -> ChainMapR:
    """gx (x) gy: block diagonal over matching (i, j) sectors of the total complexes."""
    G = gx.source.group
    if gy.source.group != G:
        raise ValueError("tensor_chain_maps: group mismatch")
    src = tensor_product(gx.source, gy.source)
    tgt = tensor_product(gx.target, gy.target)
    DX, DY = gx.length, gy.length
    comps = []
    for n in range(DX + DY + 1):
        pairs = [(i, n - i) for i in range(min(n, DX), -1, -1) if n - i <= DY]
        rdims = [gx.target.module_dims[i] * gy.target.module_dims[j] for i, j in pairs]
        cdims = [gx.source.module_dims[i] * gy.source.module_dims[j] for i, j in pairs]
        blocks = {(b, b): gx.components[i].kron(gy.components[j]) for b, (i, j) in enumerate(pairs)}
        comps.append(block_matrix(G, rdims, cdims, blocks))
    return ChainMapR(src, tgt, comps)


def _point_complex(group) -> ChainComplexR:
    """0 -> R^1 concentrated in degree 0."""
    return ChainComplexR(group, [RMatrix.zeros(group, 1, 0)])


def _row_selector(cc: ClassicalCode, q: int) -> ChainMapR:
    """Classical chain map from the point complex into C_C picking check row q (0-based)."""
    G = cc.group
    r, n = cc.H.shape
    if not 0 <= q < r:
        raise ValueError(f"row q={q + 1} outside 1..{r}")
    return ChainMapR(_point_complex(G), cc.complex, [RMatrix.unit_column(G, r, q), RMatrix.zeros(G, n, 0)])


def inclusion_chain_map(codes: list[ClassicalCode], q: int = 1) -> ChainMapR:
    """Canonical map from Q_AB (x) point into Q_ABC, using check row q (1-based) of H_C."""
    if len(codes) != 3:
        raise ValueError("inclusion needs the three classical factors")
    qab = tensor_product(codes[0].complex, codes[1].complex)
    return tensor_chain_maps(identity_chain_map(qab), _row_selector(codes[2], q - 1))


def hgp_slice_maps(codes: list[ClassicalCode]) -> list[ChainMapR]:
    """One inclusion per unit vector in a basis of coker(H_C); their qubit images are disjoint."""
    cc = codes[2]
    if cc.group.size != 1:
        raise ValueError("slice maps are defined for the trivial group")
    Hc = cc.binary
    r = Hc.rows
    image = row_basis(Hc.T) if Hc.cols else BitMatrix.zeros(0, r)
    units = quotient_reps(BitMatrix.identity(r), image)
    if units.rows == 0:
        raise ValueError("H_C has trivial cokernel; no slices exist")
    rows = [int(np.flatnonzero(u)[0]) for u in units]
    return [inclusion_chain_map(codes, q + 1) for q in rows]


def verify_chain_map(g: ChainMapR) -> SquareFailure | None:
    """Check d^T_i gamma_i = gamma_{i-1} d^S_i over R and after the binary lift."""
    for i in range(1, g.length + 1):
        lhs = g.target.boundary(i) @ g.components[i]
        rhs = g.components[i - 1] @ g.source.boundary(i)
        diff = (lhs + rhs).coeffs.any(axis=2)
        if diff.any():
            r, c = np.argwhere(diff)[0]
            return SquareFailure(i, "R", int(r), int(c))
    S, T = binary_lift(g.source), binary_lift(g.target)
    for i in range(1, g.length + 1):
        lhs = T.boundary(i) @ g.binary(i)
        rhs = g.binary(i - 1) @ S.boundary(i)
        diff = (lhs + rhs).to_dense()
        if diff.any():
            r, c = np.argwhere(diff)[0]
            return SquareFailure(i, "binary", int(r), int(c))
    return None


@dataclass
class LogicalCnotMap:
    gamma1_binary: BitMatrix
    bar_gamma1: BitMatrix  # k_target x k_source
    injective: bool
    source_basis: LogicalBasis
    target_basis: LogicalBasis
    transversal_basis: BitMatrix | None = None  # Q with bar_gamma1 = Q [I; 0]
    transversal_target: LogicalBasis | None = None

    @property
    def rank(self) -> int:
        return rank(self.bar_gamma1)

    @property
    def physical_weights(self) -> tuple[int, int]:
        g = self.gamma1_binary
        rw = g.row_weights()
        cw = g.col_weights()
        return int(rw.max(initial=0)), int(cw.max(initial=0))

    def coupled_target_logicals(self) -> list[int]:
        """Target logical indices (in the transversal basis) receiving a source logical."""
        return list(range(self.rank)) if self.injective else []


def _decompose(y, target_z: BitMatrix, hz: BitMatrix):
    k = target_z.rows
    A = BitMatrix.hstack([target_z.T, hz.T]) if hz.rows else target_z.T
    sol = solve_in_span(A, y)
    if sol is None:
        return None
    return sol[:k]


def induced_logical_map(
    g: ChainMapR,
    source: CssCode,
    target: CssCode,
    source_basis: LogicalBasis | None = None,
    target_basis: LogicalBasis | None = None,
) -> LogicalCnotMap:
    """Matrix of gamma_1 on first homology, with the basis change giving [I; 0] when injective."""
    g1 = g.binary(1)
    if g1.shape != (target.n, source.n):
        raise ValueError(f"gamma_1 has shape {g1.shape}, codes need {(target.n, source.n)}")
    sb = source_basis or logical_basis(source)
    if target_basis is None and target.k == 0:
        # nothing to land on: the induced map is the zero map onto a zero space
        empty = BitMatrix.zeros(0, target.n)
        target_basis = LogicalBasis(empty, empty, BitMatrix.zeros(0, 0))
    tb = target_basis or logical_basis(target)
    cols = []
    for z in sb.z_reps:
        y = g1 @ z
        if (target.hx @ y).any():
            raise ValueError("gamma_1 maps a cycle outside ker Hx: not a chain map")
        c = _decompose(y, tb.z_reps, target.hz)
        if c is None:
            raise ValueError("gamma_1 image could not be decomposed into logicals plus stabilizers")
        cols.append(c)
    bar = BitMatrix.from_dense(np.array(cols, dtype=np.uint8).reshape(len(cols), tb.k).T) if cols else BitMatrix.zeros(tb.k, 0)
    injective = rank(bar) == sb.k
    out = LogicalCnotMap(g1, bar, injective, sb, tb)
    if injective:
        kt = tb.k
        extra = quotient_reps(BitMatrix.identity(kt), row_basis(bar.T))
        Q = BitMatrix.hstack([bar, extra.T]) if extra.rows else bar
        Qinv = inverse(Q)
        z_new = Q.T @ tb.z_reps
        x_new = Qinv @ tb.x_reps
        out.transversal_basis = Q
        out.transversal_target = LogicalBasis(z_new, x_new, z_new @ x_new.T)
    return out


@dataclass(frozen=True)
class IdealCertificate:
    u: GroupAlgebraElement
    v: GroupAlgebraElement
    odd_order: bool

    def verifies(self, a, b, c) -> bool:
        return self.u * a + self.v * b == c


def ideal_membership(a: GroupAlgebraElement, b: GroupAlgebraElement, c: GroupAlgebraElement) -> IdealCertificate | None:
    """Find u, v with u a + v b = c, or None when c is outside the ideal (a, b)."""
    G = a.group
    if b.group != G or c.group != G:
        raise ValueError("ideal_membership: group mismatch")
    A = BitMatrix.hstack([binary_rep(a), binary_rep(b)])
    sol = solve_in_span(A, c.to_vector())
    if sol is None:
        return None
    l = G.size
    cert = IdealCertificate(GroupAlgebraElement.from_vector(G, sol[:l]), GroupAlgebraElement.from_vector(G, sol[l:]), G.size % 2 == 1)
    if not cert.verifies(a, b, c):
        raise AssertionError("ideal certificate failed to re-verify")
    return cert


def cnot_schedule(gamma1: BitMatrix) -> list[tuple[int, int]]:
    """(control in the 3D code, target in the 2D code) pairs, sorted."""
    r, c = np.nonzero(gamma1.to_dense())
    return sorted(zip(r.tolist(), c.tolist()))


def write_schedule(pairs, path, fmt: str = "json") -> None:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps({"cnots": [list(p) for p in pairs]}, indent=1) + "\n")
    else:
        path.write_text("".join(f"{a} {b}\n" for a, b in pairs))
