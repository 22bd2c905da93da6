"""Minimum-weight logical operator search.

The exhaustive search is a meet-in-the-middle over syndromes: a weight-w
vector v = L + R with |L| = ceil(w/2), |R| = floor(w/2) is a logical iff
H L = H R and the logical parities of L and R differ.  Weights are scanned
in increasing order, so when weight w is reached there is no logical of
lower weight and any match has disjoint halves (an overlap would give a
lighter logical).  Syndromes are compared through a random 64-bit linear
hash; every reported match is re-verified exactly.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .codes import Bounds, CodeParameters, CssCode, Exact, compute_parameters, logical_basis
from .f2 import BitMatrix, kernel_basis, rref

__all__ = [
    "DEFAULT_BUDGET",
    "default_weight_cap",
    "distance_search",
    "brute_force_distance",
    "random_logical_search",
    "is_logical",
    "code_distance",
]

DEFAULT_BUDGET = 50_000_000


def default_weight_cap(n: int, budget: int = DEFAULT_BUDGET) -> int:
    """Largest w such that the number of nonzero vectors of weight <= w stays within budget."""
    total, w = 0, 0
    while w < n:
        nxt = total + comb(n, w + 1)
        if nxt > budget:
            break
        total, w = nxt, w + 1
    return max(w, 1)


def _checks(code: CssCode, basis: str):
    """(H, L): Z logicals live in ker Hx and are detected by X logicals, and vice versa."""
    basis = basis.upper()
    if basis not in ("X", "Z"):
        raise ValueError("basis must be 'X' or 'Z'")
    if code.k == 0:
        return (code.hx if basis == "Z" else code.hz), None
    lb = logical_basis(code)
    if basis == "Z":
        return code.hx, lb.x_reps
    return code.hz, lb.z_reps


def is_logical(code: CssCode, basis: str, v) -> bool:
    H, L = _checks(code, basis)
    if L is None:
        return False
    v = np.asarray(v, dtype=np.uint8)
    return not (H @ v).any() and bool((L @ v).any())


def _combinations(n: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int32)
    count = comb(n, k)
    flat = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(n), k)), dtype=np.int32, count=count * k)
    return flat.reshape(count, k)


def _column_hashes(H: BitMatrix, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    row_keys = rng.integers(0, np.iinfo(np.int64).max, size=H.rows, dtype=np.int64).astype(np.uint64)
    dense = H.to_dense()
    out = np.zeros(H.cols, dtype=np.uint64)
    for i in range(H.rows):
        out[dense[i] == 1] ^= row_keys[i]
    return out


def _column_logicals(L: BitMatrix) -> np.ndarray:
    """Logical parity pattern of each column packed into a uint64."""
    dense = L.to_dense()
    if L.rows > 63:
        raise ValueError("more than 63 logical qubits are not supported by the packed search")
    weights = (np.uint64(1) << np.arange(L.rows, dtype=np.uint64))
    return (dense.astype(np.uint64) * weights[:, None]).sum(axis=0).astype(np.uint64)


def _xor_reduce(table: np.ndarray, combos: np.ndarray) -> np.ndarray:
    if combos.shape[1] == 0:
        return np.zeros(len(combos), dtype=np.uint64)
    return np.bitwise_xor.reduce(table[combos], axis=1)


def _search_weight(w, n, hcol, lcol, H, L):
    a, b = (w + 1) // 2, w // 2
    left = _combinations(n, a)
    right = left if b == a else _combinations(n, b)
    hl, ll = _xor_reduce(hcol, left), _xor_reduce(lcol, left)
    hr, lr = (hl, ll) if right is left else (_xor_reduce(hcol, right), _xor_reduce(lcol, right))
    order = np.argsort(hr, kind="stable")
    hr_s = hr[order]
    lo = np.searchsorted(hr_s, hl, side="left")
    hi = np.searchsorted(hr_s, hl, side="right")
    counts = hi - lo
    hit = np.flatnonzero(counts)
    if hit.size == 0:
        return None
    li = np.repeat(hit, counts[hit])
    starts = np.repeat(lo[hit], counts[hit])
    offs = np.arange(len(li)) - np.repeat(np.cumsum(counts[hit]) - counts[hit], counts[hit])
    ri = order[starts + offs]
    good = ll[li] != lr[ri]
    for i, j in zip(li[good], ri[good]):
        v = np.zeros(n, dtype=np.uint8)
        v[left[i]] ^= 1
        v[right[j]] ^= 1
        if v.sum() == w and not (H @ v).any() and (L @ v).any():
            return v
    return None


def _best_hint(H, L, hints):
    best = None
    for h in hints or []:
        v = np.asarray(h, dtype=np.uint8) & 1
        if v.any() and not (H @ v).any() and (L @ v).any():
            if best is None or v.sum() < best.sum():
                best = v
    return best


def distance_search(
    code: CssCode,
    basis: str = "Z",
    weight_cap: int | None = None,
    candidate_hints=None,
    seed: int = 0,
) -> Exact | Bounds:
    """Exact minimum logical weight up to ``weight_cap``; beyond it, bounds from the hints."""
    H, L = _checks(code, basis)
    n = code.n
    cap = default_weight_cap(n) if weight_cap is None else int(weight_cap)
    if cap < 1:
        raise ValueError("weight_cap must be >= 1")
    if L is None:
        return Bounds(cap + 1, None)
    hint = _best_hint(H, L, candidate_hints)
    limit = min(cap, n) if hint is None else min(cap, n, int(hint.sum()) - 1)
    hcol, lcol = _column_hashes(H, seed), _column_logicals(L)
    for w in range(1, limit + 1):
        v = _search_weight(w, n, hcol, lcol, H, L)
        if v is not None:
            return Exact(w, v)
    if hint is not None and limit == int(hint.sum()) - 1:
        # every lighter weight was ruled out, so the hint itself is optimal
        return Exact(int(hint.sum()), hint)
    return Bounds(cap + 1, None if hint is None else int(hint.sum()), hint)


def brute_force_distance(code: CssCode, basis: str = "Z", max_weight: int = 4) -> int | None:
    """Plain enumeration oracle for small codes."""
    H, L = _checks(code, basis)
    if L is None:
        return None
    Hd, Ld = H.to_dense().astype(np.int64), L.to_dense().astype(np.int64)
    for w in range(1, max_weight + 1):
        for supp in itertools.combinations(range(code.n), w):
            idx = list(supp)
            if not (Hd[:, idx].sum(axis=1) & 1).any() and (Ld[:, idx].sum(axis=1) & 1).any():
                return w
    return None


def random_logical_search(code: CssCode, basis: str = "Z", iterations: int = 200, seed: int = 0):
    """Low-weight logical via random information sets (single rows and row pairs).

    Returns the lightest logical found (a uint8 vector) or None.  Gives an
    upper bound only.
    """
    H, L = _checks(code, basis)
    if L is None:
        return None
    rng = np.random.default_rng(seed)
    K = kernel_basis(H).to_dense()
    Ld = L.to_dense().astype(np.float64)
    n = code.n
    best = None
    for _ in range(iterations):
        perm = rng.permutation(n)
        red = rref(BitMatrix.from_dense(K[:, perm])).reduced.to_dense()
        rows = np.zeros_like(red)
        rows[:, perm] = red
        rows = rows[rows.any(axis=1)]
        par = (rows.astype(np.float64) @ Ld.T).astype(np.int64) & 1  # (K, k)
        wts = rows.sum(axis=1).astype(np.int64)
        logical = par.any(axis=1)
        if logical.any():
            i = int(np.argmin(np.where(logical, wts, n + 1)))
            if best is None or wts[i] < best.sum():
                best = rows[i].copy()
        # pairs of rows
        rf = rows.astype(np.float64)
        overlap = (rf @ rf.T).astype(np.int64)
        pw = wts[:, None] + wts[None, :] - 2 * overlap
        ppar = (par[:, None, :] ^ par[None, :, :]).any(axis=2)
        np.fill_diagonal(ppar, False)
        pw = np.where(ppar, pw, n + 1)
        i, j = np.unravel_index(int(np.argmin(pw)), pw.shape)
        if pw[i, j] <= n and (best is None or pw[i, j] < best.sum()):
            best = rows[i] ^ rows[j]
    if best is not None and not is_logical(code, basis, best):
        raise AssertionError("random search produced a non-logical vector")
    return best


def code_distance(
    code: CssCode,
    weight_cap: int | None = None,
    hints_z=None,
    hints_x=None,
    both: bool | None = None,
    isd_iterations: int = 0,
    seed: int = 0,
) -> CodeParameters:
    """Parameters with distances: d_Z always, d_X too for 2D codes (or when ``both``)."""
    params = compute_parameters(code)
    if both is None:
        both = code.mz is None
    hz = list(hints_z or [])
    hx = list(hints_x or [])
    if isd_iterations and code.k:
        cap = default_weight_cap(code.n) if weight_cap is None else weight_cap
        for basis, hints in (("Z", hz), ("X", hx)) if both else (("Z", hz),):
            v = random_logical_search(code, basis, isd_iterations, seed)
            if v is not None and v.sum() > cap:
                hints.append(v)
    params.d_z = distance_search(code, "Z", weight_cap, hz, seed)
    if both:
        params.d_x = distance_search(code, "X", weight_cap, hx, seed)
    return params
