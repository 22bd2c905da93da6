"""A small stabilizer-circuit IR with noise annotations, detectors and observables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = ["NoiseModel", "Instruction", "CliffordCircuit", "CircuitBuilder", "GATES", "NOISE"]

GATES = {"R", "RX", "CX", "H", "M", "MX", "X", "Z", "FEEDBACK"}
NOISE = {"X_ERROR", "Z_ERROR", "DEPOLARIZE1", "DEPOLARIZE2"}
ANNOTATIONS = {"DETECTOR", "OBSERVABLE", "TICK"}


@dataclass(frozen=True)
class NoiseModel:
    """mode: code_capacity (data errors once), phenomenological (data + measurement flips each round)
    or circuit_level (two-qubit depolarizing after every CNOT, measurement flips)."""

    mode: str = "code_capacity"
    p: float = 0.0
    p_gate: float | None = None
    p_meas: float | None = None
    p_data: float | None = None
    data_pauli: str = "Z"  # code-capacity / phenomenological data error type: X, Z or DEPOLARIZE

    def __post_init__(self):
        if self.mode not in ("code_capacity", "phenomenological", "circuit_level", "none"):
            raise ValueError(f"unknown noise mode {self.mode!r}")
        for v in (self.p, self.gate, self.meas, self.data):
            if not 0.0 <= v <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")

    @classmethod
    def noiseless(cls) -> "NoiseModel":
        return cls("none", 0.0)

    @property
    def gate(self) -> float:
        if self.mode != "circuit_level":
            return 0.0
        return self.p if self.p_gate is None else self.p_gate

    @property
    def meas(self) -> float:
        if self.mode not in ("phenomenological", "circuit_level"):
            return 0.0
        return self.p if self.p_meas is None else self.p_meas

    @property
    def data(self) -> float:
        if self.mode not in ("code_capacity", "phenomenological"):
            return 0.0
        return self.p if self.p_data is None else self.p_data


@dataclass(frozen=True)
class Instruction:
    name: str
    targets: tuple = ()
    arg: float = 0.0
    # FEEDBACK: (pauli, ((qubit, records), ...)); OBSERVABLE: index
    extra: object = None


@dataclass
class CliffordCircuit:
    num_qubits: int
    blocks: dict[str, tuple[int, int]] = field(default_factory=dict)
    instructions: list[Instruction] = field(default_factory=list)

    @property
    def num_measurements(self) -> int:
        return sum(len(ins.targets) for ins in self.instructions if ins.name in ("M", "MX"))

    @property
    def detectors(self) -> list[tuple[int, ...]]:
        return [ins.targets for ins in self.instructions if ins.name == "DETECTOR"]

    @property
    def observables(self) -> list[tuple[int, ...]]:
        obs: dict[int, tuple] = {}
        for ins in self.instructions:
            if ins.name == "OBSERVABLE":
                obs[ins.extra] = tuple(sorted(set(obs.get(ins.extra, ())) ^ set(ins.targets)))
        return [obs[i] for i in sorted(obs)]

    def cnot_layers(self) -> list[tuple[tuple[int, int], ...]]:
        return [ins.targets for ins in self.instructions if ins.name == "CX"]

    def validate(self) -> None:
        for ins in self.instructions:
            if ins.name not in GATES | NOISE | ANNOTATIONS:
                raise ValueError(f"unknown instruction {ins.name}")
            if ins.name in ("CX", "DEPOLARIZE2"):
                used = [q for pair in ins.targets for q in pair]
                if len(used) != len(set(used)):
                    raise ValueError(f"{ins.name} layer reuses a qubit")
                qs = used
            elif ins.name in ("DETECTOR", "OBSERVABLE", "TICK"):
                qs = []
            elif ins.name == "FEEDBACK":
                qs = [q for q, _ in ins.extra[1]]
            else:
                qs = list(ins.targets)
            for q in qs:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"qubit {q} out of range")

    def without_noise(self) -> "CliffordCircuit":
        return CliffordCircuit(self.num_qubits, dict(self.blocks), [i for i in self.instructions if i.name not in NOISE])

    def count(self, name: str) -> int:
        return sum(len(i.targets) for i in self.instructions if i.name == name)


class CircuitBuilder:
    """Appends instructions and inserts the noise prescribed by a NoiseModel."""

    def __init__(self, noise: NoiseModel | None = None):
        self.noise = noise or NoiseModel.noiseless()
        self.circuit = CliffordCircuit(0)
        self._meas = 0

    def add_block(self, name: str, size: int) -> range:
        start = self.circuit.num_qubits
        self.circuit.blocks[name] = (start, size)
        self.circuit.num_qubits += size
        return range(start, start + size)

    def block(self, name: str) -> range:
        start, size = self.circuit.blocks[name]
        return range(start, start + size)

    def _emit(self, name, targets=(), arg=0.0, extra=None):
        self.circuit.instructions.append(Instruction(name, tuple(targets), float(arg), extra))

    def reset_z(self, qubits: Iterable[int]):
        self._emit("R", qubits)

    def reset_x(self, qubits: Iterable[int]):
        self._emit("RX", qubits)

    def cx(self, pairs: Sequence[tuple[int, int]]):
        pairs = [tuple(map(int, p)) for p in pairs]
        if not pairs:
            return
        self._emit("CX", pairs)
        if self.noise.gate > 0:
            self._emit("DEPOLARIZE2", pairs, self.noise.gate)

    def h(self, qubits):
        self._emit("H", qubits)

    def measure_z(self, qubits: Sequence[int], noisy: bool = True) -> list[int]:
        qubits = list(qubits)
        if noisy and self.noise.meas > 0:
            self._emit("X_ERROR", qubits, self.noise.meas)
        self._emit("M", qubits)
        recs = list(range(self._meas, self._meas + len(qubits)))
        self._meas += len(qubits)
        return recs

    def measure_x(self, qubits: Sequence[int], noisy: bool = True) -> list[int]:
        qubits = list(qubits)
        if noisy and self.noise.meas > 0:
            self._emit("Z_ERROR", qubits, self.noise.meas)
        self._emit("MX", qubits)
        recs = list(range(self._meas, self._meas + len(qubits)))
        self._meas += len(qubits)
        return recs

    def data_noise(self, qubits: Sequence[int]):
        p = self.noise.data
        if p <= 0:
            return
        kind = self.noise.data_pauli.upper()
        name = {"X": "X_ERROR", "Z": "Z_ERROR", "DEPOLARIZE": "DEPOLARIZE1"}[kind]
        self._emit(name, qubits, p)

    def feedback(self, pauli: str, rules: Sequence[tuple[int, Sequence[int]]]):
        """Apply ``pauli`` on each qubit whose record set has odd parity."""
        rules = tuple((int(q), tuple(int(r) for r in recs)) for q, recs in rules if len(recs))
        if rules:
            self._emit("FEEDBACK", (), 0.0, (pauli, rules))

    def detector(self, records: Iterable[int]):
        self._emit("DETECTOR", sorted(set(int(r) for r in records)))

    def observable(self, index: int, records: Iterable[int]):
        self._emit("OBSERVABLE", sorted(set(int(r) for r in records)), 0.0, int(index))

    def tick(self):
        self._emit("TICK")

    def build(self) -> CliffordCircuit:
        self.circuit.validate()
        return self.circuit
