"""Parameter table for the registry pairs."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


from .ccz import equivariant_solve
from .chain_map import inclusion_chain_map, induced_logical_map, verify_chain_map
from .codes import Bounds, Exact
from .distance import code_distance, distance_search, random_logical_search
from .registry import TABLE_ROWS, build_pair, registry_load

__all__ = ["TableRow", "table_row", "table1"]


def _fmt(d) -> str:
    if d is None:
        return "-"
    if isinstance(d, Exact):
        return str(d.value)
    return f"[{d.lower},{'?' if d.upper is None else d.upper}]"


def _value(d):
    if isinstance(d, Exact):
        return {"exact": d.value}
    if isinstance(d, Bounds):
        return {"lower": d.lower, "upper": d.upper}
    return None


@dataclass
class TableRow:
    name: str
    n2: int
    k2: int
    n3: int
    k3: int
    d2: object = None
    d3: object = None
    injective: bool = False
    coupled: int = 0
    chain_map_ok: bool = False
    weights: tuple[int, int] = (0, 0)
    ccz_depth: int | None = None
    expected_2d: tuple | None = None
    expected_3d: tuple | None = None
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def nk_ok(self) -> bool:
        return (self.n2, self.k2) == tuple(self.expected_2d[:2]) and (self.n3, self.k3) == tuple(self.expected_3d[:2])

    def distance_ok(self) -> bool | None:
        """True when every exact distance matches and every upper bound is <= the published one."""
        verdicts = []
        for d, exp in ((self.d2, self.expected_2d), (self.d3, self.expected_3d)):
            if isinstance(d, Exact):
                verdicts.append(d.value == exp[2])
            elif isinstance(d, Bounds) and d.upper is not None:
                verdicts.append(d.lower <= exp[2] and d.upper <= exp[2])
        return all(verdicts) if verdicts else None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "2d": {"n": self.n2, "k": self.k2, "d": _value(self.d2), "expected": list(self.expected_2d)},
            "3d": {"n": self.n3, "k": self.k3, "d": _value(self.d3), "expected": list(self.expected_3d)},
            "nk_ok": self.nk_ok,
            "distance_ok": self.distance_ok(),
            "chain_map_ok": self.chain_map_ok,
            "gamma1_weights": list(self.weights),
            "injective": self.injective,
            "coupled": self.coupled,
            "ccz_depth": self.ccz_depth,
            "seconds": round(self.seconds, 3),
            "notes": self.notes,
        }

    def line(self) -> str:
        verdict = "PASS" if self.nk_ok and self.distance_ok() is not False else "FAIL"
        ccz = "-" if self.ccz_depth is None else str(self.ccz_depth)
        return (
            f"{self.name:15s} 2D [[{self.n2},{self.k2},{_fmt(self.d2)}]] 3D [[{self.n3},{self.k3},{_fmt(self.d3)}]] "
            f"injective={self.injective} coupled={self.coupled} ccz_depth={ccz} {verdict}"
        )


def table_row(name: str, distances: bool = True, weight_cap: int | None = None, isd_iterations: int = 40, ccz_budget: int = 0, seed: int = 0) -> TableRow:
    t0 = time.perf_counter()
    spec = registry_load(name)
    c2, c3 = build_pair(spec)
    row = TableRow(name, c2.n, c2.k, c3.n, c3.k, expected_2d=spec.expected_2d, expected_3d=spec.expected_3d)
    g = inclusion_chain_map(spec.classical_codes(), 1)
    row.chain_map_ok = verify_chain_map(g) is None
    lm = induced_logical_map(g, c2, c3)
    row.injective, row.coupled = lm.injective, lm.rank
    row.weights = lm.physical_weights
    if distances:
        p2 = code_distance(c2, weight_cap, isd_iterations=isd_iterations, seed=seed)
        row.d2 = p2.d
        # 2D logicals pushed through gamma_1 are 3D logicals of the same weight
        hints = []
        dz2 = p2.d_z
        w2 = getattr(dz2, "witness", None)
        if w2 is not None:
            hints.append(lm.gamma1_binary @ w2)
            row.notes.append(f"gamma_1 hint weight {int(hints[-1].sum())}")
        if isd_iterations:
            v = random_logical_search(c3, "Z", isd_iterations, seed)
            if v is not None:
                hints.append(v)
        row.d3 = distance_search(c3, "Z", weight_cap, hints, seed)
    if ccz_budget:
        res = equivariant_solve(c3, depth_target=2, budget=ccz_budget, seed=seed)
        if res.delta is not None:
            row.ccz_depth = res.delta.depth
        else:
            row.notes.append(f"ccz: {res.reason} ({res.nodes} nodes)")
    row.seconds = time.perf_counter() - t0
    return row


def table1(names=None, **kw) -> list[TableRow]:
    return [table_row(n, **kw) for n in (names or TABLE_ROWS)]
