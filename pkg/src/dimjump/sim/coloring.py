"""Proper edge coloring of bipartite Tanner graphs with max-degree many colors."""

from __future__ import annotations

import numpy as np

__all__ = ["bipartite_edge_coloring", "cnot_layers"]


def bipartite_edge_coloring(edges: list[tuple[int, int]]) -> dict[tuple[int, int], int]:
    """Color edges (u, v) of a bipartite graph (u on the left, v on the right) with Delta colors.

    Kempe-chain recoloring: for an uncolored edge pick colors a free at u and b
    free at v; if a is not free at v, swap a/b along the alternating path from v.
    """
    if not edges:
        return {}
    deg: dict = {}
    for u, v in edges:
        deg[("L", u)] = deg.get(("L", u), 0) + 1
        deg[("R", v)] = deg.get(("R", v), 0) + 1
    delta = max(deg.values())
    at: dict = {node: {} for node in deg}  # node -> color -> neighbour node

    def free(node):
        used = at[node]
        for c in range(delta):
            if c not in used:
                return c
        raise AssertionError("no free color")

    for u, v in edges:
        U, V = ("L", u), ("R", v)
        a, b = free(U), free(V)
        if a not in at[V]:
            c = a
        else:
            # walk the a/b path starting at V (first edge colored a) and swap colors
            path, node, col = [], V, a
            while col in at[node]:
                nxt = at[node][col]
                path.append((node, nxt, col))
                node, col = nxt, (b if col == a else a)
            for x, y, col in path:
                del at[x][col]
                del at[y][col]
            for x, y, col in path:
                new = b if col == a else a
                at[x][new] = y
                at[y][new] = x
            c = a
        at[U][c] = V
        at[V][c] = U
    out = {}
    for node, cols in at.items():
        if node[0] == "L":
            for c, other in cols.items():
                out[(node[1], other[1])] = c
    return out


def cnot_layers(H, check_qubits, data_qubits, ancilla_is_control: bool) -> list[list[tuple[int, int]]]:
    """CNOT layers measuring the rows of H with one ancilla per row."""
    dense = H.to_dense() if hasattr(H, "to_dense") else np.asarray(H)
    edges = [(int(r), int(c)) for r, c in zip(*np.nonzero(dense))]
    colors = bipartite_edge_coloring(edges)
    depth = max(colors.values(), default=-1) + 1
    layers = [[] for _ in range(depth)]
    for (r, c), col in sorted(colors.items()):
        a, d = check_qubits[r], data_qubits[c]
        layers[col].append((a, d) if ancilla_is_control else (d, a))
    return layers
