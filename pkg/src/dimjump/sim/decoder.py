"""Min-sum belief propagation with order-0 ordered-statistics post-processing."""

from __future__ import annotations

import numpy as np

from ..f2 import BitMatrix, _rref_words

__all__ = ["BpOsdDecoder", "osd0"]


def osd0(H: np.ndarray, syndrome: np.ndarray, order: np.ndarray) -> np.ndarray:
    """Solve H e = s using the first independent columns of ``order`` as the information set.

    Raises ValueError if the syndrome is outside the column space of H.
    """
    m, n = H.shape
    aug = BitMatrix.from_dense(np.concatenate([H[:, order], syndrome.reshape(-1, 1)], axis=1))
    words = aug.words.copy()
    r, pivots = _rref_words(words, n + 1, stop_col=n)
    rhs = BitMatrix(m, n + 1, words).to_dense()[:, n]
    if rhs[r:].any():
        raise ValueError("syndrome is not in the column space of the check matrix")
    e_perm = np.zeros(n, dtype=np.uint8)
    for i, c in enumerate(pivots):
        e_perm[c] = rhs[i]
    e = np.zeros(n, dtype=np.uint8)
    e[order] = e_perm
    return e


class BpOsdDecoder:
    """Stateless per call: ``decode`` depends only on the syndrome."""

    def __init__(self, H, priors, max_iter: int = 60, scaling: float = 0.625):
        Hd = H.to_dense() if isinstance(H, BitMatrix) else np.asarray(H, dtype=np.uint8)
        self.H = (Hd & 1).astype(np.uint8)
        m, n = self.H.shape
        priors = np.broadcast_to(np.asarray(priors, dtype=np.float64), (n,))
        p = np.clip(priors, 1e-12, 0.5 - 1e-12)
        self.llr = np.log((1 - p) / p)
        self.max_iter = max_iter
        self.scaling = scaling
        r, c = np.nonzero(self.H)
        order = np.lexsort((c, r))
        self.er, self.ec = r[order], c[order]
        self.check_start = np.searchsorted(self.er, np.arange(m + 1))
        self._cache: dict[bytes, np.ndarray] = {}

    def _bp(self, s: np.ndarray):
        m, n = self.H.shape
        er, ec = self.er, self.ec
        if er.size == 0:
            return np.zeros(n, np.uint8), self.llr.copy(), True
        starts = self.check_start[:-1]
        nonempty = self.check_start[1:] > starts
        ssign = np.where(s.astype(bool), -1.0, 1.0)
        q = self.llr[ec].copy()
        post = self.llr.copy()
        for _ in range(self.max_iter):
            a = np.abs(q)
            sg = np.where(q < 0, -1.0, 1.0)
            # per-check sign product and two smallest magnitudes
            neg = (sg < 0).astype(np.int64)
            par = np.add.reduceat(neg, starts[nonempty]) % 2
            tot_sign = np.ones(m)
            tot_sign[nonempty] = np.where(par == 1, -1.0, 1.0)
            min1 = np.full(m, np.inf)
            min1[nonempty] = np.minimum.reduceat(a, starts[nonempty])
            is_min = a == min1[er]
            # second minimum: mask the first occurrence of min1 in each check
            first = np.zeros(len(a), dtype=bool)
            idx = np.flatnonzero(is_min)
            _, firstpos = np.unique(er[idx], return_index=True)
            first[idx[firstpos]] = True
            a2 = np.where(first, np.inf, a)
            min2 = np.full(m, np.inf)
            min2[nonempty] = np.minimum.reduceat(a2, starts[nonempty])
            mag = np.where(first, min2[er], min1[er])
            mag = np.where(np.isinf(mag), 0.0, mag)
            rmsg = self.scaling * ssign[er] * tot_sign[er] * sg * mag
            post = self.llr + np.bincount(ec, weights=rmsg, minlength=n)
            e = (post < 0).astype(np.uint8)
            if np.array_equal((self.H.astype(np.int64) @ e) & 1, s):
                return e, post, True
            q = post[ec] - rmsg
        return (post < 0).astype(np.uint8), post, False

    def decode(self, syndrome) -> np.ndarray:
        s = (np.asarray(syndrome, dtype=np.uint8) & 1)
        key = np.packbits(s).tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit.copy()
        if not s.any():
            e = np.zeros(self.H.shape[1], dtype=np.uint8)
        else:
            e, post, ok = self._bp(s)
            if not ok:
                e = osd0(self.H, s, np.argsort(post, kind="stable"))
        self._cache[key] = e
        return e.copy()
