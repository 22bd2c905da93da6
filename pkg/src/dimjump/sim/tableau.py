"""Aaronson-Gottesman stabilizer tableau with destabilizers and general Pauli measurements."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import CliffordCircuit

__all__ = ["StabilizerTableau", "TableauRun", "tableau_run", "NonCliffordError"]


class NonCliffordError(ValueError):
    pass


def _g(x1, z1, x2, z2):
    """Exponent of i picked up when multiplying single-qubit Paulis (x1,z1)(x2,z2)."""
    x1 = x1.astype(np.int8)
    z1 = z1.astype(np.int8)
    x2 = x2.astype(np.int8)
    z2 = z2.astype(np.int8)
    return np.where(
        (x1 == 1) & (z1 == 1),
        z2 - x2,
        np.where((x1 == 1) & (z1 == 0), z2 * (2 * x2 - 1), np.where((x1 == 0) & (z1 == 1), x2 * (1 - 2 * z2), 0)),
    )


class StabilizerTableau:
    """Rows 0..n-1 are destabilizers, n..2n-1 stabilizers; row = (-1)^r X^x Z^z with Y = iXZ."""

    def __init__(self, n: int):
        self.n = n
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        idx = np.arange(n)
        self.x[idx, idx] = 1  # destabilizers X_i
        self.z[n + idx, idx] = 1  # stabilizers Z_i: |0...0>

    def copy(self) -> "StabilizerTableau":
        t = StabilizerTableau.__new__(StabilizerTableau)
        t.n, t.x, t.z, t.r = self.n, self.x.copy(), self.z.copy(), self.r.copy()
        return t

    # gates
    def h(self, q: int):
        self.r ^= self.x[:, q] & self.z[:, q]
        self.x[:, q], self.z[:, q] = self.z[:, q].copy(), self.x[:, q].copy()

    def cx(self, c: int, t: int):
        self.r ^= self.x[:, c] & self.z[:, t] & (self.x[:, t] ^ self.z[:, c] ^ 1)
        self.x[:, t] ^= self.x[:, c]
        self.z[:, c] ^= self.z[:, t]

    def pauli(self, kind: str, q: int):
        """Apply X, Y or Z on qubit q (flips the sign of anticommuting rows)."""
        if kind == "X":
            self.r ^= self.z[:, q]
        elif kind == "Z":
            self.r ^= self.x[:, q]
        elif kind == "Y":
            self.r ^= self.x[:, q] ^ self.z[:, q]
        elif kind != "I":
            raise ValueError(kind)

    # row arithmetic
    def _rowmult(self, targets: np.ndarray, src_x, src_z, src_r):
        """Replace each target row by (source) * (target row)."""
        if len(targets) == 0:
            return
        tx, tz = self.x[targets], self.z[targets]
        phase = _g(src_x[None, :], src_z[None, :], tx, tz).sum(axis=1) + 2 * (int(src_r) + self.r[targets].astype(np.int64))
        phase %= 4
        self.r[targets] = (phase == 2).astype(np.uint8)
        self.x[targets] = tx ^ src_x
        self.z[targets] = tz ^ src_z

    def _anticommuting(self, px, pz) -> np.ndarray:
        return ((self.x.astype(np.int64) @ pz + self.z.astype(np.int64) @ px) & 1).astype(bool)

    def _deterministic_sign(self, px, pz, anti) -> int:
        n = self.n
        sx, sz, sr = np.zeros(n, np.uint8), np.zeros(n, np.uint8), 0
        for i in np.flatnonzero(anti[:n]):
            row = n + i
            phase = (_g(self.x[row], self.z[row], sx, sz).sum() + 2 * (int(self.r[row]) + sr)) % 4
            sr = 1 if phase == 2 else 0
            sx ^= self.x[row]
            sz ^= self.z[row]
        if not (np.array_equal(sx, px) and np.array_equal(sz, pz)):
            raise AssertionError("deterministic Pauli is not in the stabilizer group")
        return sr

    def measure_pauli(self, px, pz, sign: int = 0, rng=None, forced: int | None = None) -> tuple[int, bool]:
        """Measure (-1)^sign X^px Z^pz.  Returns (outcome bit, deterministic).

        A random outcome is drawn from ``rng`` unless ``forced`` fixes it
        (used for post-selected state preparation).
        """
        px = np.asarray(px, dtype=np.uint8) & 1
        pz = np.asarray(pz, dtype=np.uint8) & 1
        n = self.n
        y = int(np.sum(px & pz)) % 4  # X^x Z^z with Y = iXZ: X Z = -i Y
        if y % 2:
            raise ValueError("Pauli with an odd number of Y factors is not Hermitian in this form")
        sign = (sign + y // 2) % 2  # convert XZ products to the Y convention
        anti = self._anticommuting(px, pz)
        stab_anti = np.flatnonzero(anti[n:])
        if stab_anti.size == 0:
            return int(self._deterministic_sign(px, pz, anti) ^ sign), True
        p = n + int(stab_anti[0])
        others = np.flatnonzero(anti)
        others = others[others != p]
        self._rowmult(others, self.x[p].copy(), self.z[p].copy(), self.r[p])
        if forced is not None:
            outcome = int(forced) & 1
        else:
            outcome = int((rng if rng is not None else np.random.default_rng()).integers(2))
        d = p - n
        self.x[d], self.z[d], self.r[d] = self.x[p], self.z[p], self.r[p]
        self.x[p], self.z[p], self.r[p] = px, pz, (sign ^ outcome)
        return outcome, False

    def peek_pauli(self, px, pz, sign: int = 0) -> int | None:
        """Deterministic outcome bit of measuring the Pauli, or None if random."""
        px = np.asarray(px, dtype=np.uint8) & 1
        pz = np.asarray(pz, dtype=np.uint8) & 1
        y = int(np.sum(px & pz))
        sign = (sign + y // 2) % 2
        anti = self._anticommuting(px, pz)
        if anti[self.n :].any():
            return None
        return int(self._deterministic_sign(px, pz, anti) ^ sign)

    def measure_z(self, q, rng=None, forced=None):
        px = np.zeros(self.n, np.uint8)
        pz = np.zeros(self.n, np.uint8)
        pz[q] = 1
        return self.measure_pauli(px, pz, 0, rng, forced)

    def measure_x(self, q, rng=None, forced=None):
        px = np.zeros(self.n, np.uint8)
        pz = np.zeros(self.n, np.uint8)
        px[q] = 1
        return self.measure_pauli(px, pz, 0, rng, forced)

    def reset_z(self, q, rng=None):
        out, _ = self.measure_z(q, rng)
        if out:
            self.pauli("X", q)

    def reset_x(self, q, rng=None):
        out, _ = self.measure_x(q, rng)
        if out:
            self.pauli("Z", q)

    def check_invariants(self) -> bool:
        """Stabilizers commute pairwise and, with destabilizers, form a symplectic basis."""
        n = self.n
        X, Z = self.x.astype(np.int64), self.z.astype(np.int64)
        form = (X @ Z.T + Z @ X.T) & 1
        want = np.zeros((2 * n, 2 * n), dtype=np.int64)
        idx = np.arange(n)
        want[idx, n + idx] = 1
        want[n + idx, idx] = 1
        return bool(np.array_equal(form, want))


@dataclass
class TableauRun:
    measurements: np.ndarray  # uint8 outcome bits
    deterministic: np.ndarray  # bool per measurement
    detectors: np.ndarray
    observables: np.ndarray
    tableau: StabilizerTableau


def tableau_run(circuit: CliffordCircuit, seed: int = 0, faults: dict | None = None) -> TableauRun:
    """Exact simulation; noise instructions are skipped unless ``faults`` maps an
    instruction index to a list of (qubit, Pauli letter) to inject there."""
    rng = np.random.default_rng(seed)
    t = StabilizerTableau(circuit.num_qubits)
    meas: list[int] = []
    det: list[bool] = []
    faults = faults or {}
    for idx, ins in enumerate(circuit.instructions):
        name = ins.name
        if name == "R":
            for q in ins.targets:
                t.reset_z(q, rng)
        elif name == "RX":
            for q in ins.targets:
                t.reset_x(q, rng)
        elif name == "CX":
            for c, tq in ins.targets:
                t.cx(c, tq)
        elif name == "H":
            for q in ins.targets:
                t.h(q)
        elif name in ("X", "Z"):
            for q in ins.targets:
                t.pauli(name, q)
        elif name in ("M", "MX"):
            for q in ins.targets:
                out, d = (t.measure_z if name == "M" else t.measure_x)(q, rng)
                meas.append(out)
                det.append(d)
        elif name == "FEEDBACK":
            pauli, rules = ins.extra
            for q, recs in rules:
                if sum(meas[r] for r in recs) % 2:
                    t.pauli(pauli, q)
        elif name in ("X_ERROR", "Z_ERROR", "DEPOLARIZE1", "DEPOLARIZE2"):
            for q, p in faults.get(idx, ()):
                t.pauli(p, q)
        elif name in ("DETECTOR", "OBSERVABLE", "TICK"):
            pass
        else:
            raise NonCliffordError(f"unsupported instruction {name}")
    m = np.array(meas, dtype=np.uint8)
    dets = np.array([int(m[list(d)].sum() % 2) if d else 0 for d in circuit.detectors], dtype=np.uint8)
    obs = np.array([int(m[list(o)].sum() % 2) if o else 0 for o in circuit.observables], dtype=np.uint8)
    return TableauRun(m, np.array(det, dtype=bool), dets, obs, t)
