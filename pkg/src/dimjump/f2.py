"""Dense bit-packed linear algebra over GF(2).

Rows are packed little-endian into uint64 words (column j lives in word
j // 64, bit j % 64).  Vectors cross the public API as 1-D uint8 arrays of
zeros and ones; packing is an internal detail.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BitMatrix",
    "RrefResult",
    "rref",
    "rank",
    "kernel_basis",
    "row_basis",
    "solve_in_span",
    "kron",
    "quotient_reps",
    "inverse",
    "write_mtx",
    "read_mtx",
    "write_alist",
    "read_alist",
]

_WORD = 64


def _nwords(cols: int) -> int:
    return max(1, (cols + _WORD - 1) // _WORD)


def _pack(dense: np.ndarray) -> np.ndarray:
    rows, cols = dense.shape
    nw = _nwords(cols)
    padded = np.zeros((rows, nw * _WORD), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    bytes_ = np.packbits(padded, axis=1, bitorder="little")
    return bytes_.view("<u8").reshape(rows, nw).astype(np.uint64, copy=False)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows = words.shape[0]
    if rows == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    bits = np.unpackbits(np.ascontiguousarray(words).astype("<u8").view(np.uint8).reshape(rows, -1), axis=1, bitorder="little")
    return bits[:, :cols].copy()


def as_bits(v) -> np.ndarray:
    return np.asarray(v, dtype=np.uint8).reshape(-1) & 1


class BitMatrix:
    """Row-major packed matrix over GF(2)."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        nw = _nwords(self.cols)
        if words is None:
            words = np.zeros((self.rows, nw), dtype=np.uint64)
        if words.shape != (self.rows, nw):
            raise ValueError(f"payload shape {words.shape} does not match {self.rows}x{self.cols}")
        self.words = words
        self._clear_padding()

    def _clear_padding(self):
        extra = self.cols % _WORD
        if extra and self.rows:
            self.words[:, -1] &= np.uint64((1 << extra) - 1)
        if self.cols == 0 and self.rows:
            self.words[:] = 0

    # -- construction -----------------------------------------------------
    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        a = np.asarray(dense, dtype=np.uint8)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        return cls(a.shape[0], a.shape[1], _pack(a))

    @classmethod
    def from_rows(cls, rows: Iterable, cols: int) -> "BitMatrix":
        rows = [as_bits(r) for r in rows]
        if not rows:
            return cls.zeros(0, cols)
        return cls.from_dense(np.vstack(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    def to_dense(self) -> np.ndarray:
        return _unpack(self.words, self.cols)

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.words.copy())

    # -- basic properties -------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.shape, self.words.tobytes()))

    @property
    def nnz(self) -> int:
        return int(self.to_dense().sum())

    def row(self, i: int) -> np.ndarray:
        return _unpack(self.words[i : i + 1], self.cols)[0]

    def __iter__(self):
        dense = self.to_dense()
        return iter(dense)

    def __len__(self) -> int:
        return self.rows

    def row_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=1).astype(int)

    def col_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=0).astype(int)

    def is_zero(self) -> bool:
        return not self.words.any()

    def get(self, i: int, j: int) -> int:
        return int((int(self.words[i, j // _WORD]) >> (j % _WORD)) & 1)

    # -- algebra ----------------------------------------------------------
    @property
    def T(self) -> "BitMatrix":
        return BitMatrix.from_dense(self.to_dense().T) if self.rows else BitMatrix.zeros(self.cols, 0)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitMatrix(self.rows, self.cols, self.words ^ other.words)

    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            prod = self.to_dense().astype(np.float64) @ other.to_dense().astype(np.float64)
            return BitMatrix.from_dense((prod.astype(np.int64) & 1).astype(np.uint8))
        v = np.asarray(other, dtype=np.uint8)
        if v.ndim == 1:
            if v.shape[0] != self.cols:
                raise ValueError(f"vector length {v.shape[0]} does not match {self.cols} columns")
            prod = self.to_dense().astype(np.float64) @ (v & 1).astype(np.float64)
            return (prod.astype(np.int64) & 1).astype(np.uint8)
        if v.shape[0] != self.cols:
            raise ValueError(f"cannot multiply {self.shape} by array {v.shape}")
        prod = self.to_dense().astype(np.float64) @ (v & 1).astype(np.float64)
        return (prod.astype(np.int64) & 1).astype(np.uint8)

    def take_rows(self, idx) -> "BitMatrix":
        idx = np.asarray(idx, dtype=np.int64).reshape(-1)
        return BitMatrix(len(idx), self.cols, self.words[idx].copy())

    def take_cols(self, idx) -> "BitMatrix":
        idx = np.asarray(idx, dtype=np.int64).reshape(-1)
        return BitMatrix.from_dense(self.to_dense()[:, idx]) if self.rows else BitMatrix.zeros(0, len(idx))

    @staticmethod
    def hstack(blocks: Sequence["BitMatrix"]) -> "BitMatrix":
        return BitMatrix.from_dense(np.hstack([b.to_dense() for b in blocks]))

    @staticmethod
    def vstack(blocks: Sequence["BitMatrix"]) -> "BitMatrix":
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("column mismatch in vstack")
        return BitMatrix(sum(b.rows for b in blocks), cols, np.vstack([b.words for b in blocks]))


@dataclass(frozen=True)
class RrefResult:
    rank: int
    reduced: BitMatrix
    pivots: tuple[int, ...]


def _rref_words(words: np.ndarray, cols: int, stop_col: int | None = None):
    """In-place reduced row echelon form on packed rows; leftmost-nonzero pivoting."""
    rows = words.shape[0]
    pivots = []
    r = 0
    limit = cols if stop_col is None else min(stop_col, cols)
    for c in range(limit):
        if r >= rows:
            break
        w, b = divmod(c, _WORD)
        bit = np.uint64(1) << np.uint64(b)
        colbits = (words[r:, w] & bit) != 0
        nz = np.flatnonzero(colbits)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        mask = (words[:, w] & bit) != 0
        mask[r] = False
        if mask.any():
            words[mask] ^= words[r]
        pivots.append(c)
        r += 1
    return r, pivots


def rref(M: BitMatrix) -> RrefResult:
    words = M.words.copy()
    rank_, pivots = _rref_words(words, M.cols)
    return RrefResult(rank_, BitMatrix(M.rows, M.cols, words), tuple(pivots))


def rank(M: BitMatrix) -> int:
    return rref(M).rank


def row_basis(M: BitMatrix) -> BitMatrix:
    """Nonzero rows of the RREF of M: a basis of the row space."""
    res = rref(M)
    return res.reduced.take_rows(np.arange(res.rank))


def kernel_basis(M: BitMatrix) -> BitMatrix:
    """Basis of {v : M v = 0}, one vector per row, from the free columns of the RREF."""
    res = rref(M)
    n = M.cols
    pivots = list(res.pivots)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return BitMatrix.zeros(0, n)
    red = res.reduced.to_dense()[: res.rank]
    basis = np.zeros((len(free), n), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        if pivots:
            basis[i, pivots] = red[:, f]
    return BitMatrix.from_dense(basis)


def solve_in_span(A: BitMatrix, b) -> np.ndarray | None:
    """Return some x with A x = b, or None when b is outside the column space."""
    b = as_bits(b)
    if b.shape[0] != A.rows:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {A.rows}")
    aug = np.hstack([A.to_dense(), b.reshape(-1, 1)])
    packed = _pack(aug)
    r, pivots = _rref_words(packed, A.cols + 1)
    if pivots and pivots[-1] == A.cols:
        return None
    red = _unpack(packed[:r], A.cols + 1)
    x = np.zeros(A.cols, dtype=np.uint8)
    for i, p in enumerate(pivots):
        x[p] = red[i, A.cols]
    if not np.array_equal(A @ x, b):
        raise AssertionError("solve_in_span re-substitution failed")
    return x


def kron(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    return BitMatrix.from_dense(np.kron(A.to_dense(), B.to_dense()))


def quotient_reps(Z: BitMatrix, B: BitMatrix) -> BitMatrix:
    """Vectors of Z (rows) extending a basis of span(B) to a basis of span(Z).

    Deterministic: scans the rows of B first, then the rows of Z in order,
    keeping each Z row that is independent of everything kept before it.
    """
    if Z.cols != B.cols:
        raise ValueError("quotient_reps: length mismatch")
    n = Z.cols
    Bb = row_basis(B) if B.rows else BitMatrix.zeros(0, n)
    rz = rank(Z) if Z.rows else 0
    joint = BitMatrix.vstack([Bb, Z]) if Z.rows else Bb
    if (rank(joint) if joint.rows else 0) != rz:
        raise ValueError("quotient_reps: span(B) is not contained in span(Z)")
    # columns of joint^T are the vectors; RREF pivots pick the earliest independent ones
    res = rref(joint.T)
    kept = [p - Bb.rows for p in res.pivots if p >= Bb.rows]
    return Z.take_rows(kept)


def inverse(M: BitMatrix) -> BitMatrix:
    n = M.rows
    if M.cols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = BitMatrix.hstack([M, BitMatrix.identity(n)])
    res = rref(aug)
    if res.rank < n or res.pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular over GF(2)")
    return res.reduced.take_cols(np.arange(n, 2 * n))


# -- file formats -------------------------------------------------------------


def write_mtx(M: BitMatrix, path) -> None:
    """Matrix Market coordinate pattern format, 1-indexed, sorted row-major."""
    r, c = np.nonzero(M.to_dense())
    lines = ["%%MatrixMarket matrix coordinate pattern general", f"{M.rows} {M.cols} {len(r)}"]
    lines += [f"{i + 1} {j + 1}" for i, j in zip(r, c)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_mtx(path) -> BitMatrix:
    lines = [ln for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("%")]
    rows, cols, nnz = map(int, lines[0].split()[:3])
    dense = np.zeros((rows, cols), dtype=np.uint8)
    for ln in lines[1 : 1 + nnz]:
        parts = ln.split()
        dense[int(parts[0]) - 1, int(parts[1]) - 1] ^= 1
    return BitMatrix.from_dense(dense)


def write_alist(M: BitMatrix, path) -> None:
    """MacKay alist format (1-indexed, zero-padded per-row/column lists)."""
    dense = M.to_dense()
    rw, cw = dense.sum(axis=1).astype(int), dense.sum(axis=0).astype(int)
    mr = int(rw.max()) if M.rows else 0
    mc = int(cw.max()) if M.cols else 0
    lines = [f"{M.cols} {M.rows}", f"{mc} {mr}", " ".join(map(str, cw)), " ".join(map(str, rw))]
    for j in range(M.cols):
        idx = list(np.flatnonzero(dense[:, j]) + 1)
        lines.append(" ".join(map(str, idx + [0] * (mc - len(idx)))))
    for i in range(M.rows):
        idx = list(np.flatnonzero(dense[i]) + 1)
        lines.append(" ".join(map(str, idx + [0] * (mr - len(idx)))))
    Path(path).write_text("\n".join(lines) + "\n")


def read_alist(path) -> BitMatrix:
    lines = Path(path).read_text().splitlines()
    cols, rows = map(int, lines[0].split())
    dense = np.zeros((rows, cols), dtype=np.uint8)
    for j in range(cols):
        for tok in lines[4 + j].split():
            if int(tok):
                dense[int(tok) - 1, j] = 1
    return BitMatrix.from_dense(dense)
