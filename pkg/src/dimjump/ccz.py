"""Physical CCZ triple sets on three code blocks and the logical tensors they induce."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .codes import CssCode, logical_basis
from .f2 import kernel_basis
from .group_algebra import FiniteAbelianGroup

__all__ = [
    "CczTensor",
    "LogicalCczTensor",
    "CupViolation",
    "EquivariantCcz",
    "verify_cup_validity",
    "induced_logical_tensor",
    "equivariant_solve",
    "propagated_error_channel",
    "random_tensor",
    "write_triples",
    "read_triples",
]

PERMUTATIONS = list(itertools.permutations(range(3)))


@dataclass(frozen=True)
class CczTensor:
    block_sizes: tuple[int, int, int]
    triples: frozenset

    def __post_init__(self):
        n1, n2, n3 = self.block_sizes
        t = frozenset((int(i), int(j), int(k)) for i, j, k in self.triples)
        for i, j, k in t:
            if not (0 <= i < n1 and 0 <= j < n2 and 0 <= k < n3):
                raise ValueError(f"triple {(i, j, k)} out of range for blocks {self.block_sizes}")
        object.__setattr__(self, "triples", t)
        object.__setattr__(self, "block_sizes", tuple(int(x) for x in self.block_sizes))

    @classmethod
    def zero(cls, sizes) -> "CczTensor":
        return cls(tuple(sizes), frozenset())

    def sorted_triples(self) -> list[tuple[int, int, int]]:
        return sorted(self.triples)

    def dense(self) -> np.ndarray:
        T = np.zeros(self.block_sizes, dtype=np.uint8)
        for i, j, k in self.triples:
            T[i, j, k] = 1
        return T

    def evaluate(self, u, v, w) -> int:
        """f(u, v, w) = sum over triples of u_i v_j w_k (mod 2)."""
        u, v, w = (np.asarray(x, dtype=np.uint8) for x in (u, v, w))
        return int(sum(int(u[i] & v[j] & w[k]) for i, j, k in self.triples) & 1)

    def qubit_degrees(self) -> list[np.ndarray]:
        degs = [np.zeros(n, dtype=int) for n in self.block_sizes]
        for t in self.triples:
            for b in range(3):
                degs[b][t[b]] += 1
        return degs

    @property
    def depth(self) -> int:
        return max((int(d.max(initial=0)) for d in self.qubit_degrees()), default=0)


@dataclass(frozen=True)
class LogicalCczTensor:
    dims: tuple[int, int, int]
    entries: frozenset

    @property
    def nontrivial(self) -> bool:
        return bool(self.entries)


@dataclass(frozen=True)
class CupViolation:
    slot: int
    stabilizer: int
    pair: tuple[int, int]

    def __str__(self) -> str:
        return f"slot {self.slot + 1}: X-stabilizer {self.stabilizer} with cocycle pair {self.pair} gives f = 1"


def _mod2(x) -> np.ndarray:
    return (np.asarray(x).astype(np.int64) & 1).astype(np.uint8)


def _contract(T: np.ndarray, U: np.ndarray, V: np.ndarray, W: np.ndarray) -> np.ndarray:
    """out[a, b, c] = sum_ijk T_ijk U_ai V_bj W_ck mod 2."""
    t = np.tensordot(U.astype(np.float64), T.astype(np.float64), axes=(1, 0))  # (a, j, k)
    t = _mod2(t).astype(np.float64)
    t = np.tensordot(t, V.astype(np.float64), axes=(1, 1))  # (a, k, b)
    t = _mod2(t).astype(np.float64)
    t = np.tensordot(t, W.astype(np.float64), axes=(1, 1))  # (a, b, c)
    return _mod2(t)


def verify_cup_validity(delta: CczTensor, codes) -> CupViolation | None:
    """f must vanish when any slot holds an X stabilizer and the others hold ker Hz vectors."""
    codes = list(codes)
    if tuple(c.n for c in codes) != delta.block_sizes:
        raise ValueError(f"block sizes {delta.block_sizes} do not match codes {[c.n for c in codes]}")
    if not delta.triples:
        return None
    T = delta.dense()
    ker = [kernel_basis(c.hz).to_dense() for c in codes]
    stabs = [c.hx.to_dense() for c in codes]
    for slot in range(3):
        ops = list(ker)
        ops[slot] = stabs[slot]
        vals = _contract(T, *ops)
        moved = np.moveaxis(vals, slot, 0)
        nz = np.argwhere(moved)
        if len(nz):
            s, a, b = (int(x) for x in nz[0])
            return CupViolation(slot, s, (a, b))
    return None


def induced_logical_tensor(delta: CczTensor, bases, codes=None, check: bool = True):
    """(logical tensor, depth, nontrivial) from the normalized logical X representatives."""
    bases = list(bases)
    if check:
        if codes is None:
            raise ValueError("validity check needs the codes")
        bad = verify_cup_validity(delta, codes)
        if bad is not None:
            raise ValueError(f"tensor is not a valid cup product: {bad}")
    dims = tuple(b.k for b in bases)
    if delta.triples:
        vals = _contract(delta.dense(), *(b.x_reps.to_dense() for b in bases))
        entries = frozenset(tuple(int(x) for x in e) for e in np.argwhere(vals))
    else:
        entries = frozenset()
    lt = LogicalCczTensor(dims, entries)
    return lt, delta.depth, lt.nontrivial


@dataclass
class EquivariantCcz:
    """Triples ((s1, g), (s2, g + h2), (s3, g + h3)) for every g, grouped by sector triple."""

    group: FiniteAbelianGroup
    offset_sets: dict = field(default_factory=dict)  # (s1, s2, s3) -> set of (h2, h3) element indices

    def expand(self) -> CczTensor:
        G = self.group
        l = G.size
        add = G.add_table
        triples = set()
        for (s1, s2, s3), offs in self.offset_sets.items():
            for h2, h3 in offs:
                for g in range(l):
                    triples ^= {(s1 * l + g, s2 * l + int(add[g, h2]), s3 * l + int(add[g, h3]))}
        return CczTensor((3 * l,) * 3, frozenset(triples))


def _bt_group(code: CssCode) -> FiniteAbelianGroup | None:
    if code.recipe.get("construction") != "bt":
        return None
    return FiniteAbelianGroup(tuple(code.recipe["group"]["orders"]))


def _unknown_vectors(code: CssCode, G: FiniteAbelianGroup, perm, K, S, X):
    """Constraint and logical bit patterns of every offset pair (h2, h3) for one sector permutation.

    Constraint bits: f with an X stabilizer translate at the identity in one slot and
    cocycle basis vectors in the others; translation invariance makes the identity
    translate sufficient.  Returns (constraints[l*l, ...], logicals[l*l, ...]).
    """
    l = G.size
    add = G.add_table
    p0, p1, p2 = perm

    def contract(U, V, W):
        # out[u, v, w, h2, h3] = sum_g U[u, p0 l + g] V[v, p1 l + g + h2] W[w, p2 l + g + h3]
        out = np.zeros((U.shape[0], V.shape[0], W.shape[0], l, l), dtype=np.int64)
        Uf = U[:, p0 * l : (p0 + 1) * l]
        for g in np.flatnonzero(Uf.any(axis=0)):
            Vs = V[:, p1 * l + add[g]]  # (v, h2)
            Ws = W[:, p2 * l + add[g]]  # (w, h3)
            out += np.einsum("u,vh,wk->uvwhk", Uf[:, g].astype(np.int64), Vs.astype(np.int64), Ws.astype(np.int64))
        return (out & 1).astype(np.uint8)

    cons = [contract(S, K, K), contract(K, S, K), contract(K, K, S)]
    cons = np.concatenate([c.reshape(-1, l * l) for c in cons], axis=0).T  # (l*l, bits)
    logi = contract(X, X, X).reshape(-1, l * l).T
    return cons, logi


def _pack_bits(bits: np.ndarray, keys: np.ndarray) -> np.ndarray:
    """XOR of keys over set bits, row-wise."""
    out = np.zeros(bits.shape[0], dtype=np.uint64)
    for t in np.flatnonzero(bits.any(axis=0)):
        out[bits[:, t] == 1] ^= keys[t]
    return out


def _product_hash(tables: list[np.ndarray]):
    """All one-per-table choices: XOR-combined values and choice indices."""
    vals = np.zeros(1, dtype=np.uint64)
    idx = np.zeros((1, 0), dtype=np.int32)
    for t in tables:
        vals = (vals[:, None] ^ t[None, :]).reshape(-1)
        m = len(t)
        idx = np.concatenate([np.repeat(idx, m, axis=0), np.tile(np.arange(m, dtype=np.int32), len(idx))[:, None]], axis=1)
    return vals, idx


@dataclass
class SolveResult:
    delta: CczTensor | None
    equivariant: EquivariantCcz | None
    nodes: int
    reason: str = ""


def equivariant_solve(
    code: CssCode, depth_target: int = 2, budget: int = 5_000_000, seed: int = 0, projection: int = 16
) -> SolveResult:
    """Search translation-equivariant CCZ tensors with one offset pair per sector permutation.

    Sector-permutation subsets are tried in increasing size; each subset is a
    meet-in-the-middle over offset choices, matching hashed constraint
    patterns and requiring a nonzero logical tensor.  ``budget`` caps the
    number of enumerated half-combinations.
    """
    G = _bt_group(code)
    if G is None:
        return SolveResult(None, None, 0, "equivariant solver needs a tricycle code")
    if code.k == 0:
        return SolveResult(None, None, 0, "code encodes no logical qubits")
    l = G.size
    lb = logical_basis(code)
    K = kernel_basis(code.hz).to_dense()
    S = code.hx.to_dense()[:1]
    X = lb.x_reps.to_dense()
    rng = np.random.default_rng(seed)
    if K.shape[0] > projection:
        # random combinations of cocycles: every true solution survives, fakes are filtered later
        M = rng.integers(0, 2, size=(projection, K.shape[0]))
        K = _mod2(M @ K)
    tables = {}
    for p in PERMUTATIONS:
        cons, logi = _unknown_vectors(code, G, p, K, S, X)
        if p == PERMUTATIONS[0]:
            ckeys = rng.integers(1, np.iinfo(np.int64).max, size=cons.shape[1], dtype=np.int64).astype(np.uint64)
            lkeys = rng.integers(1, np.iinfo(np.int64).max, size=logi.shape[1], dtype=np.int64).astype(np.uint64)
        tables[p] = (_pack_bits(cons, ckeys), _pack_bits(logi, lkeys))
    nodes = 0
    for subset in _subset_order(depth_target):
        size = len(subset)
        half = (size + 1) // 2
        A, B = subset[:half], subset[half:]
        cost = l ** (2 * len(A)) + l ** (2 * len(B))
        if nodes + cost > budget:
            continue
        nodes += cost
        for hit in _mitm(A, B, tables):
            eq = EquivariantCcz(G, {})
            for p, choice in zip(subset, hit):
                h2, h3 = divmod(int(choice), l)
                eq.offset_sets.setdefault(p, set()).add((h2, h3))
            delta = eq.expand()
            # hashed and projected constraints admit false positives; recheck exactly
            if verify_cup_validity(delta, [code] * 3) is None:
                lt, _, nontrivial = induced_logical_tensor(delta, [lb] * 3, check=False)
                if nontrivial:
                    return SolveResult(delta, eq, nodes)
    return SolveResult(None, None, nodes, "no solution within budget")


def _subset_order(depth_target: int):
    """Permutation subsets by depth, fullest first within a depth."""
    subsets = [c for r in range(1, 7) for c in itertools.combinations(PERMUTATIONS, r)]
    subsets = [c for c in subsets if _subset_depth(c) <= depth_target]
    return sorted(subsets, key=lambda c: (_subset_depth(c), -len(c)))


def _subset_depth(subset) -> int:
    counts = {}
    for p in subset:
        for slot, s in enumerate(p):
            counts[(slot, s)] = counts.get((slot, s), 0) + 1
    return max(counts.values())


def _mitm(A, B, tables):
    """Yield offset choices (one per permutation in A + B) with zero constraint hash and nonzero logical hash."""
    lv, li = _product_hash([tables[p][0] for p in A])
    ll, _ = _product_hash([tables[p][1] for p in A])
    if B:
        rv, ri = _product_hash([tables[p][0] for p in B])
        rl, _ = _product_hash([tables[p][1] for p in B])
    else:
        rv, ri, rl = np.zeros(1, dtype=np.uint64), np.zeros((1, 0), dtype=np.int32), np.zeros(1, dtype=np.uint64)
    order = np.argsort(rv, kind="stable")
    rs = rv[order]
    lo = np.searchsorted(rs, lv, side="left")
    hi = np.searchsorted(rs, lv, side="right")
    for i in np.flatnonzero(hi > lo):
        for pos in range(lo[i], hi[i]):
            j = order[pos]
            if ll[i] != rl[j]:
                yield list(li[i]) + list(ri[j])


def propagated_error_channel(delta: CczTensor, p: float) -> list[tuple[tuple[tuple[int, int], ...], float]]:
    """Correlated Z errors left by a faulty CCZ layer: one channel per qubit of each block.

    The channel for qubit i of block b acts on (b, i) and on every partner that
    shares a triple with it in the other two blocks.
    """
    if not 0 <= p <= 1:
        raise ValueError("probability must lie in [0, 1]")
    partners = [[set() for _ in range(n)] for n in delta.block_sizes]
    for t in delta.triples:
        for b in range(3):
            for o in range(3):
                if o != b:
                    partners[b][t[b]].add((o, t[o]))
    out = []
    for b, n in enumerate(delta.block_sizes):
        for i in range(n):
            support = tuple(sorted({(b, i)} | partners[b][i]))
            out.append((support, float(p)))
    return out


def random_tensor(sizes, count: int, rng) -> CczTensor:
    n1, n2, n3 = sizes
    flat = rng.choice(n1 * n2 * n3, size=count, replace=False)
    return CczTensor(tuple(sizes), frozenset(tuple(int(x) for x in np.unravel_index(f, sizes)) for f in flat))


def write_triples(delta: CczTensor, path, fmt: str = "text") -> None:
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps({"block_sizes": list(delta.block_sizes), "triples": [list(t) for t in delta.sorted_triples()]}) + "\n")
    else:
        head = f"# blocks {' '.join(map(str, delta.block_sizes))}\n"
        path.write_text(head + "".join(f"{i} {j} {k}\n" for i, j, k in delta.sorted_triples()))


def read_triples(path) -> CczTensor:
    path = Path(path)
    text = path.read_text()
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        return CczTensor(tuple(obj["block_sizes"]), frozenset(tuple(t) for t in obj["triples"]))
    sizes, triples = None, []
    for ln in text.splitlines():
        ln = ln.strip()
        if ln.startswith("# blocks"):
            sizes = tuple(int(x) for x in ln.split()[2:5])
        elif ln and not ln.startswith("#"):
            triples.append(tuple(int(x) for x in ln.split()))
    if sizes is None:
        sizes = tuple(max(t[b] for t in triples) + 1 for b in range(3)) if triples else (0, 0, 0)
    return CczTensor(sizes, frozenset(triples))
