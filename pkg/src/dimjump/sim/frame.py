"""Pauli-frame propagation, vectorized over a batch of shots or of single faults."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import CliffordCircuit

__all__ = ["FrameResult", "propagate_frames", "sample_fault_pattern", "PAULI_PAIRS", "fault_locations"]

_LETTERS = "IXYZ"
PAULI_PAIRS = [(a, b) for a in _LETTERS for b in _LETTERS if (a, b) != ("I", "I")]


@dataclass
class FrameResult:
    measurement_flips: np.ndarray  # (batch, num_measurements) bool
    detectors: np.ndarray  # (batch, num_detectors) bool
    observables: np.ndarray  # (batch, num_observables) bool


def fault_locations(circuit: CliffordCircuit):
    """Every elementary fault: (instruction index, ((qubit, Pauli), ...), probability)."""
    out = []
    for idx, ins in enumerate(circuit.instructions):
        p = ins.arg
        if p <= 0:
            continue
        if ins.name in ("X_ERROR", "Z_ERROR"):
            letter = ins.name[0]
            out.extend((idx, ((q, letter),), p) for q in ins.targets)
        elif ins.name == "DEPOLARIZE1":
            out.extend((idx, ((q, l),), p / 3) for q in ins.targets for l in "XYZ")
        elif ins.name == "DEPOLARIZE2":
            for a, b in ins.targets:
                for pa, pb in PAULI_PAIRS:
                    paulis = tuple((q, l) for q, l in ((a, pa), (b, pb)) if l != "I")
                    out.append((idx, paulis, p / 15))
    return out


def sample_fault_pattern(circuit: CliffordCircuit, rng: np.random.Generator) -> dict[int, list[tuple[int, str]]]:
    """One shot of the circuit's noise channel as explicit Paulis per noise instruction."""
    pattern: dict[int, list] = {}
    for idx, ins in enumerate(circuit.instructions):
        p = ins.arg
        if p <= 0:
            continue
        if ins.name in ("X_ERROR", "Z_ERROR"):
            hit = np.flatnonzero(rng.random(len(ins.targets)) < p)
            got = [(ins.targets[i], ins.name[0]) for i in hit]
        elif ins.name == "DEPOLARIZE1":
            hit = np.flatnonzero(rng.random(len(ins.targets)) < p)
            got = [(ins.targets[i], "XYZ"[rng.integers(3)]) for i in hit]
        elif ins.name == "DEPOLARIZE2":
            hit = np.flatnonzero(rng.random(len(ins.targets)) < p)
            got = []
            for i in hit:
                a, b = ins.targets[i]
                pa, pb = PAULI_PAIRS[rng.integers(15)]
                got += [(q, l) for q, l in ((a, pa), (b, pb)) if l != "I"]
        else:
            continue
        if got:
            pattern[idx] = got
    return pattern


def _apply(fx, fz, rows, q, letter):
    if letter in ("X", "Y"):
        fx[rows, q] ^= True
    if letter in ("Z", "Y"):
        fz[rows, q] ^= True


def propagate_frames(circuit: CliffordCircuit, injections: list[dict[int, list[tuple[int, str]]]]) -> FrameResult:
    """Propagate one Pauli frame per entry of ``injections`` (instruction index -> Paulis)."""
    batch = len(injections)
    n = circuit.num_qubits
    fx = np.zeros((batch, n), dtype=bool)
    fz = np.zeros((batch, n), dtype=bool)
    flips = np.zeros((batch, circuit.num_measurements), dtype=bool)
    by_instr: dict[int, list[tuple[int, int, str]]] = {}
    for row, inj in enumerate(injections):
        for idx, paulis in inj.items():
            by_instr.setdefault(idx, []).extend((row, q, l) for q, l in paulis)
    m = 0
    for idx, ins in enumerate(circuit.instructions):
        name = ins.name
        if name in ("R", "RX"):
            t = list(ins.targets)
            fx[:, t] = False
            fz[:, t] = False
        elif name == "CX":
            c = np.array([p[0] for p in ins.targets])
            t = np.array([p[1] for p in ins.targets])
            fx[:, t] ^= fx[:, c]
            fz[:, c] ^= fz[:, t]
        elif name == "H":
            t = list(ins.targets)
            fx[:, t], fz[:, t] = fz[:, t].copy(), fx[:, t].copy()
        elif name == "M":
            t = list(ins.targets)
            flips[:, m : m + len(t)] = fx[:, t]
            m += len(t)
        elif name == "MX":
            t = list(ins.targets)
            flips[:, m : m + len(t)] = fz[:, t]
            m += len(t)
        elif name == "FEEDBACK":
            pauli, rules = ins.extra
            for q, recs in rules:
                par = np.bitwise_xor.reduce(flips[:, list(recs)], axis=1)
                if pauli in ("X", "Y"):
                    fx[:, q] ^= par
                if pauli in ("Z", "Y"):
                    fz[:, q] ^= par
        elif idx in by_instr:
            for row, q, l in by_instr[idx]:
                _apply(fx, fz, row, q, l)
    dets = _parities(flips, circuit.detectors)
    obs = _parities(flips, circuit.observables)
    return FrameResult(flips, dets, obs)


def _parities(flips: np.ndarray, sets) -> np.ndarray:
    out = np.zeros((flips.shape[0], len(sets)), dtype=bool)
    for j, s in enumerate(sets):
        if s:
            out[:, j] = np.bitwise_xor.reduce(flips[:, list(s)], axis=1)
    return out
