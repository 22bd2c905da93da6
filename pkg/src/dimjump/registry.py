"""Named code pairs and JSON code configs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .codes import ClassicalCode, CssCode, build_lp, bt_direct
from .group_algebra import FiniteAbelianGroup, RMatrix, parse_element

__all__ = ["CodeSpec", "REGISTRY", "registry_load", "spec_from_config", "load_config", "build_pair", "build_code"]

_CYCLE3 = [["1", "1", "0"], ["0", "1", "1"], ["1", "0", "1"]]
_PENTAGON_B = [
    [1, 0, 0, 0, 1, 1, 0, 0, 1, 0],
    [1, 1, 0, 0, 0, 0, 1, 0, 0, 1],
    [0, 1, 1, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 1, 0, 0, 1, 0, 1],
]


@dataclass(frozen=True)
class CodeSpec:
    name: str
    orders: tuple[int, ...]
    construction: str  # "lp" (matrices A, B, C) or "bt" (polynomials a, b, c)
    matrices: dict = field(default_factory=dict)
    polynomials: dict = field(default_factory=dict)
    expected_2d: tuple[int, int, int] | None = None
    expected_3d: tuple[int, int, int] | None = None
    ccz_depth: int | None = None

    @property
    def group(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup(self.orders)

    def classical_codes(self) -> list[ClassicalCode]:
        G = self.group
        if self.construction == "bt":
            return [ClassicalCode(RMatrix.from_strings(G, [[self.polynomials[k]]])) for k in "abc" if k in self.polynomials]
        return [ClassicalCode(RMatrix.from_strings(G, self.matrices[k])) for k in "ABC" if k in self.matrices]

    def elements(self):
        G = self.group
        return tuple(parse_element(self.polynomials[k], G) for k in "abc")


def _s(rows):
    return [[str(v) for v in r] for r in rows]


REGISTRY: dict[str, CodeSpec] = {
    s.name: s
    for s in [
        CodeSpec("pentagon", (1,), "lp", {"A": _CYCLE3, "B": _s(_PENTAGON_B), "C": _CYCLE3}, {}, (45, 7, 3), (180, 8, 3), 4),
        CodeSpec("lifted-toric-2", (2,), "lp", {k: [["1", "x"], ["1", "1"]] for k in "ABC"}, {}, (16, 2, 4), (48, 3, 4), 2),
        CodeSpec(
            "lifted-toric-3", (2,), "lp",
            {k: [["1", "x", "0"], ["0", "1", "1"], ["1", "0", "1"]] for k in "ABC"}, {},
            (36, 2, 6), (162, 3, 6), 2,
        ),
        CodeSpec("bt-27", (3, 3), "bt", {}, {"a": "x^2*y + x^2*y^2", "b": "1 + x*y^2", "c": "x + x^2*y"}, (18, 2, 3), (27, 3, 3), 2),
        CodeSpec("bt-45", (3, 5), "bt", {}, {"a": "x + y^2", "b": "1 + x*y^2", "c": "x + x*y^3"}, (30, 2, 5), (45, 3, 4), 2),
        CodeSpec("bt-81", (3, 9), "bt", {}, {"a": "x*y^3 + x^2*y", "b": "1 + x*y^8", "c": "x^2*y^4 + x^2*y^6"}, (54, 2, 6), (81, 3, 5), 2),
        CodeSpec(
            "tt-210", (2, 5, 7), "bt", {},
            {"a": "y^2*z^2 + x*y^2*z^4", "b": "1 + x*y^2*z^3", "c": "y*z + y^4*z^2"},
            (140, 2, 8), (210, 3, 7), 2,
        ),
        CodeSpec("fig-s1", (3, 3), "bt", {}, {"a": "x*y^2 + x^2", "b": "x^2 + x^2*y", "c": "y^2 + x*y"}, None, (27, 3, 3), None),
    ]
}

TABLE_ROWS = ["pentagon", "lifted-toric-2", "lifted-toric-3", "bt-27", "bt-45", "bt-81", "tt-210"]


def registry_load(name: str) -> CodeSpec:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown code {name!r}; known: {', '.join(REGISTRY)}") from None


def spec_from_config(cfg: dict, name: str = "config") -> CodeSpec:
    """Parse ``{"group": {"orders": [...]}, "construction": "lp2|lp3|bt", "matrices"|"polynomials": ...}``."""
    try:
        orders = tuple(int(o) for o in cfg["group"]["orders"])
        construction = cfg["construction"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed code config: missing {exc}") from None
    if construction in ("lp2", "lp3"):
        mats = cfg.get("matrices")
        need = "AB" if construction == "lp2" else "ABC"
        if not isinstance(mats, dict) or any(k not in mats for k in need):
            raise ValueError(f"construction {construction} needs matrices {', '.join(need)}")
        return CodeSpec(name, orders, "lp", {k: _s(mats[k]) for k in need})
    if construction == "bt":
        polys = cfg.get("polynomials")
        if not isinstance(polys, dict) or any(k not in polys for k in "abc"):
            raise ValueError("construction bt needs polynomials a, b, c")
        return CodeSpec(name, orders, "bt", {}, {k: polys[k] for k in "abc"})
    raise ValueError(f"unknown construction {construction!r}")


def load_config(path) -> CodeSpec:
    cfg = json.loads(Path(path).read_text())
    return spec_from_config(cfg, Path(path).stem)


def build_code(spec: CodeSpec, dim: int = 3) -> CssCode:
    """The 3D member (three factors) or 2D member (first two factors) of a spec."""
    if dim not in (2, 3):
        raise ValueError("dim must be 2 or 3")
    codes = spec.classical_codes()
    if dim == 3 and len(codes) < 3:
        raise ValueError(f"{spec.name} has no third factor")
    name = f"{spec.name}/{dim}d"
    if spec.construction == "bt" and dim == 3:
        return bt_direct(*spec.elements(), name=name)
    return build_lp(codes[:dim], name=name)


def build_pair(spec: CodeSpec) -> tuple[CssCode, CssCode]:
    return build_code(spec, 2), build_code(spec, 3)
