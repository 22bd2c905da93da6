"""Classical and CSS codes built from chain complexes over group algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .chain_complex import (
    ChainComplexF2,
    ChainComplexR,
    binary_lift,
    homology,
    single_map_complex,
    tensor_product,
    validate,
)
from .f2 import BitMatrix, inverse, kernel_basis, quotient_reps, rank, row_basis
from .group_algebra import FiniteAbelianGroup, GroupAlgebraElement, RMatrix, binary_rep

__all__ = [
    "ClassicalCode",
    "CssCode",
    "Exact",
    "Bounds",
    "CodeParameters",
    "LogicalBasis",
    "build_lp",
    "bt_direct",
    "compute_parameters",
    "logical_basis",
    "kunneth_k_hgp",
    "TorusLayout",
    "torus_layout",
    "spacetime_cost",
]


@dataclass(frozen=True)
class ClassicalCode:
    """Check matrix H over R: rows are checks (degree 0), columns are bits (degree 1)."""

    H: RMatrix

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.H.group

    @property
    def complex(self) -> ChainComplexR:
        return single_map_complex(self.H)

    @property
    def binary(self) -> BitMatrix:
        return binary_rep(self.H)

    @property
    def n(self) -> int:
        return self.H.cols * self.group.size

    @property
    def r(self) -> int:
        return self.H.rows * self.group.size

    @property
    def k(self) -> int:
        return self.n - rank(self.binary)

    @property
    def k_transpose(self) -> int:
        return self.r - rank(self.binary)


@dataclass
class CssCode:
    hx: BitMatrix
    hz: BitMatrix
    mz: BitMatrix | None = None
    sector_layout: list[tuple[str, int]] = field(default_factory=list)
    recipe: dict[str, Any] = field(default_factory=dict)
    r_complex: ChainComplexR | None = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if self.hx.cols != self.hz.cols:
            raise ValueError(f"Hx has {self.hx.cols} columns, Hz has {self.hz.cols}")
        if not (self.hx @ self.hz.T).is_zero():
            raise ValueError("Hx Hz^T != 0")
        if self.mz is not None and not (self.mz @ self.hz).is_zero():
            raise ValueError("Mz Hz != 0")
        if not self.sector_layout:
            self.sector_layout = [("q", self.n)]

    @property
    def n(self) -> int:
        return self.hx.cols

    @property
    def k(self) -> int:
        return self.n - rank(self.hx) - rank(self.hz)

    @property
    def dimension(self) -> int:
        """2 for codes from a 2-complex, 3 when meta-checks are present."""
        return 3 if self.mz is not None else 2

    @property
    def complex(self) -> ChainComplexF2:
        maps = [self.hx, self.hz.T] + ([self.mz.T] if self.mz is not None else [])
        return ChainComplexF2(maps)

    def sector_slices(self) -> dict[str, slice]:
        out, start = {}, 0
        for name, size in self.sector_layout:
            out[name] = slice(start, start + size)
            start += size
        return out

    def label(self) -> str:
        return f"[[{self.n},{self.k}]]"


@dataclass(frozen=True)
class Exact:
    value: int
    witness: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Bounds:
    lower: int
    upper: int | None = None
    witness: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        hi = "?" if self.upper is None else str(self.upper)
        return f"[{self.lower},{hi}]"


@dataclass
class CodeParameters:
    n: int
    k: int
    d_z: Exact | Bounds | None = None
    d_x: Exact | Bounds | None = None
    hx_weights: tuple[int, int] = (0, 0)
    hz_weights: tuple[int, int] = (0, 0)

    @property
    def max_stabilizer_weight(self) -> int:
        return max(self.hx_weights[0], self.hz_weights[0])

    @property
    def d(self) -> Exact | Bounds | None:
        """Z distance for 3D codes; min(d_X, d_Z) when both are known."""
        if self.d_x is None:
            return self.d_z
        return _min_distance(self.d_z, self.d_x)


def _min_distance(a, b):
    if isinstance(a, Exact) and isinstance(b, Exact):
        return a if a.value <= b.value else b
    lows = [x.value if isinstance(x, Exact) else x.lower for x in (a, b)]
    ups = [x.value if isinstance(x, Exact) else x.upper for x in (a, b)]
    ups = [u for u in ups if u is not None]
    lo, hi = min(lows), (min(ups) if ups else None)
    if hi is not None and hi <= lo:
        winner = a if (a.value if isinstance(a, Exact) else a.upper) == hi else b
        return Exact(hi, winner.witness) if isinstance(winner, Exact) else Bounds(lo, hi, winner.witness)
    return Bounds(lo, hi)


def _rc_weights(M: BitMatrix) -> tuple[int, int]:
    if M.rows == 0 or M.cols == 0:
        return (0, 0)
    return int(M.row_weights().max()), int(M.col_weights().max())


def compute_parameters(code: CssCode) -> CodeParameters:
    """n, k and (row, column) weights; distances are filled in by ``distance.code_distance``."""
    return CodeParameters(code.n, code.k, hx_weights=_rc_weights(code.hx), hz_weights=_rc_weights(code.hz))


def _qubit_layout(C: ChainComplexR) -> list[tuple[str, int]]:
    l = C.group.size
    return [("".join(map(str, lab)), d * l) for lab, d in C.sectors[1]]


def build_lp(codes: Sequence[ClassicalCode], name: str = "") -> CssCode:
    """2D (two factors) or 3D (three factors) lifted product with qubits in degree 1."""
    if len(codes) not in (2, 3):
        raise ValueError("build_lp takes two or three classical codes")
    G = codes[0].group
    if any(c.group != G for c in codes):
        raise ValueError("build_lp: group mismatch")
    C = codes[0].complex
    for c in codes[1:]:
        C = tensor_product(C, c.complex)
    bad = validate(C)
    if bad is not None:
        raise AssertionError(f"tensor product is not a complex: {bad}")
    F = binary_lift(C)
    hx, hz = F.boundaries[0], F.boundaries[1].T
    mz = F.boundaries[2].T if len(codes) == 3 else None
    recipe = {
        "construction": f"lp{len(codes)}",
        "group": G.to_json(),
        "matrices": {k: c.H.to_strings() for k, c in zip("ABC", codes)},
    }
    return CssCode(hx, hz, mz, _qubit_layout(C), recipe, C, name)


def bt_direct(a: GroupAlgebraElement, b: GroupAlgebraElement, c: GroupAlgebraElement, name: str = "") -> CssCode:
    """Tricycle code straight from the closed-form check matrices."""
    G = a.group
    if b.group != G or c.group != G:
        raise ValueError("bt_direct: group mismatch")
    zero = GroupAlgebraElement.zero(G)
    d1 = RMatrix.from_elements(G, [[a, b, c]])
    conj = [x.antipode() for x in (a, b, c)]
    A_, B_, C_ = conj
    hz_r = RMatrix.from_elements(G, [[B_, A_, zero], [C_, zero, A_], [zero, C_, B_]])
    mz_r = RMatrix.from_elements(G, [[C_, B_, A_]])
    l = G.size
    recipe = {
        "construction": "bt",
        "group": G.to_json(),
        "polynomials": {"a": a.render(), "b": b.render(), "c": c.render()},
    }
    layout = [("100", l), ("010", l), ("001", l)]
    # the R-level complex rides along so chain maps can address sectors
    C = single_map_complex(RMatrix.from_elements(G, [[a]]))
    for p in (b, c):
        C = tensor_product(C, single_map_complex(RMatrix.from_elements(G, [[p]])))
    return CssCode(binary_rep(d1), binary_rep(hz_r), binary_rep(mz_r), layout, recipe, C, name)


@dataclass
class LogicalBasis:
    z_reps: BitMatrix
    x_reps: BitMatrix
    pairing: BitMatrix

    @property
    def k(self) -> int:
        return self.z_reps.rows


def logical_basis(code: CssCode, normalize: bool = True) -> LogicalBasis:
    """Deterministic logical Z/X representatives with identity pairing after normalization."""
    if code.k == 0:
        raise ValueError("code encodes no logical qubits")
    z = homology(code.complex, 1).representatives
    x = quotient_reps(kernel_basis(code.hz), row_basis(code.hx))
    P = z @ x.T
    if rank(P) != z.rows:
        raise AssertionError("logical pairing is singular")
    if normalize:
        x = inverse(P).T @ x
        P = z @ x.T
    return LogicalBasis(z, x, P)


def kunneth_k_hgp(qab: CssCode, cc: ClassicalCode) -> int:
    """Predicted k of (Q_AB (x) C_C) from the homology of the factors over F2."""
    if cc.group.size != 1:
        raise ValueError("Kunneth prediction is implemented for the trivial group only")
    h1_q = qab.k
    h0_q = qab.hx.rows - rank(qab.hx)
    h1_c = cc.k
    h0_c = cc.k_transpose
    return h1_q * h0_c + h0_q * h1_c


@dataclass
class TorusLayout:
    group: FiniteAbelianGroup
    coords: np.ndarray  # (n, 2) Cartesian positions on the torus
    sublattice: np.ndarray  # (n,) sector index
    lattice_index: np.ndarray  # (n, 2) integer (i, j)

    @property
    def n(self) -> int:
        return len(self.coords)

    def shift(self, qubits, t: tuple[int, int]) -> np.ndarray:
        """Translate qubit indices by group element t, staying on the same sublattice."""
        lx, ly = self.group.orders
        q = np.asarray(qubits)
        l = lx * ly
        s, g = np.divmod(q, l)
        i, j = np.divmod(g, ly)
        return s * l + ((i + t[0]) % lx) * ly + (j + t[1]) % ly


def torus_layout(code: CssCode) -> TorusLayout:
    """Triangular-lattice coordinates for a bicycle/tricycle code on C_lx x C_ly."""
    if code.recipe.get("construction") != "bt":
        raise ValueError("torus_layout needs a code from bt_direct")
    G = FiniteAbelianGroup(tuple(code.recipe["group"]["orders"]))
    if G.rank != 2:
        raise ValueError("torus_layout needs a bivariate group")
    lx, ly = G.orders
    l = G.size
    nsec = code.n // l
    e1, e2 = np.array([1.0, 0.0]), np.array([0.5, np.sqrt(3) / 2])
    coords, sub, idx = [], [], []
    for s in range(nsec):
        off = s / nsec * (e1 + e2)
        for i in range(lx):
            for j in range(ly):
                coords.append(i * e1 + j * e2 + off)
                sub.append(s)
                idx.append((i, j))
    return TorusLayout(G, np.array(coords), np.array(sub), np.array(idx))


def check_translation_invariance(code: CssCode, layout: TorusLayout, t=(1, 0)) -> bool:
    """Every X and Z check support, shifted by t, is again a check support of the same type."""
    for H in (code.hx, code.hz):
        dense = H.to_dense()
        supports = {tuple(np.flatnonzero(r)) for r in dense}
        for r in dense:
            moved = tuple(sorted(layout.shift(np.flatnonzero(r), t)))
            if moved not in supports:
                return False
    return True


def spacetime_cost(n: int, num_x_checks: int, num_z_checks: int, k: int, success_rate: float, max_stab_weight: int) -> int:
    """Qubit-count times circuit depth per logical qubit, divided by the success rate."""
    if n <= 0 or k <= 0:
        raise ValueError("n and k must be positive")
    if num_x_checks < 0 or num_z_checks < 0 or max_stab_weight < 0:
        raise ValueError("check counts and weight must be non-negative")
    if not 0 < success_rate <= 1:
        raise ValueError("success_rate must lie in (0, 1]")
    return int(round((n + num_x_checks + num_z_checks) / (k * success_rate) * (max_stab_weight + 2)))
