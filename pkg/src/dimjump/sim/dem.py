"""Detector error models from an exhaustive single-fault sweep."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .circuit import CliffordCircuit, NoiseModel
from .decoder import BpOsdDecoder
from .frame import fault_locations, propagate_frames
from .tableau import tableau_run

__all__ = ["DetectorModel", "NondeterministicDetector", "build_detector_model", "decode_bp_osd"]


class NondeterministicDetector(ValueError):
    pass


@dataclass
class DetectorModel:
    """Columns of ``detector_matrix``/``observable_matrix`` are merged fault mechanisms."""

    num_detectors: int
    num_observables: int
    detector_matrix: np.ndarray  # (D, F) uint8
    observable_matrix: np.ndarray  # (O, F) uint8
    probabilities: np.ndarray  # (F,)
    sources: list[list[tuple]] = field(default_factory=list)  # elementary faults per column
    _decoder: BpOsdDecoder | None = field(default=None, repr=False)

    @property
    def num_faults(self) -> int:
        return len(self.probabilities)

    @property
    def faults(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], float]:
        """Fault dictionary: (flipped detectors, flipped observables) -> probability."""
        out = {}
        for j in range(self.num_faults):
            key = (tuple(np.flatnonzero(self.detector_matrix[:, j]).tolist()), tuple(np.flatnonzero(self.observable_matrix[:, j]).tolist()))
            out[key] = float(self.probabilities[j])
        return out

    def undetectable_logical_faults(self) -> list[int]:
        """Columns that flip an observable but no detector."""
        silent = ~self.detector_matrix.any(axis=0)
        return np.flatnonzero(silent & self.observable_matrix.any(axis=0)).tolist()

    def decoder(self, max_iter: int = 60) -> BpOsdDecoder:
        if self._decoder is None or self._decoder.max_iter != max_iter:
            self._decoder = BpOsdDecoder(self.detector_matrix, self.probabilities, max_iter=max_iter)
        return self._decoder

    def sample(self, shots: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Independent fault mechanisms: (detector bits, observable bits) per shot."""
        F = self.num_faults
        dets = np.zeros((shots, self.num_detectors), dtype=np.uint8)
        obs = np.zeros((shots, self.num_observables), dtype=np.uint8)
        if F == 0 or shots == 0:
            return dets, obs
        counts = rng.binomial(shots, self.probabilities)
        cols = np.repeat(np.arange(F), counts)
        rows = np.concatenate([rng.choice(shots, size=c, replace=False) for c in counts[counts > 0]] or [np.zeros(0, int)])
        hits = sparse.csr_matrix((np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(shots, F))
        dets = (hits @ sparse.csr_matrix(self.detector_matrix.T.astype(np.int32))).toarray() % 2
        obs = (hits @ sparse.csr_matrix(self.observable_matrix.T.astype(np.int32))).toarray() % 2
        return dets.astype(np.uint8), obs.astype(np.uint8)


def _merge(p: float, q: float) -> float:
    return p * (1 - q) + q * (1 - p)


def build_detector_model(circuit: CliffordCircuit, noise: NoiseModel | None = None, check_determinism: bool = True) -> DetectorModel:
    """Sweep every elementary fault of the circuit's noise instructions through a Pauli frame.

    ``noise`` is informational: the fault locations are the noise instructions
    already placed in the circuit by its builder.
    """
    D, O = len(circuit.detectors), len(circuit.observables)
    if check_determinism:
        for seed in (0, 1):
            run = tableau_run(circuit.without_noise(), seed=seed)
            if run.detectors.any():
                bad = int(np.flatnonzero(run.detectors)[0])
                raise NondeterministicDetector(f"detector {bad} fires in a noiseless run")
            if seed == 0:
                ref = run.observables.copy()
            elif not np.array_equal(ref, run.observables):
                raise NondeterministicDetector("an observable is not deterministic")
    locs = fault_locations(circuit)
    if not locs:
        return DetectorModel(D, O, np.zeros((D, 0), np.uint8), np.zeros((O, 0), np.uint8), np.zeros(0))
    res = propagate_frames(circuit, [{idx: list(paulis)} for idx, paulis, _ in locs])
    merged: dict[bytes, int] = {}
    det_cols, obs_cols, probs, sources = [], [], [], []
    for f, (idx, paulis, p) in enumerate(locs):
        d, o = res.detectors[f], res.observables[f]
        if not d.any() and not o.any():
            continue
        key = np.packbits(np.concatenate([d, o])).tobytes()
        j = merged.get(key)
        if j is None:
            merged[key] = len(probs)
            det_cols.append(d)
            obs_cols.append(o)
            probs.append(p)
            sources.append([(idx, paulis)])
        else:
            probs[j] = _merge(probs[j], p)
            sources[j].append((idx, paulis))
    Dm = np.array(det_cols, dtype=np.uint8).T.reshape(D, len(probs))
    Om = np.array(obs_cols, dtype=np.uint8).T.reshape(O, len(probs))
    return DetectorModel(D, O, Dm, Om, np.array(probs), sources)


def decode_bp_osd(model: DetectorModel, syndrome, max_iter: int = 60) -> np.ndarray:
    """Fault hypothesis (one bit per merged fault) reproducing ``syndrome`` exactly."""
    return model.decoder(max_iter).decode(syndrome)
