"""Syndrome extraction, memory, teleportation and single-shot experiments."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from math import sqrt

import numpy as np

from ..chain_map import ChainMapR, LogicalCnotMap, cnot_schedule, inclusion_chain_map, induced_logical_map
from ..codes import CssCode, logical_basis
from ..f2 import BitMatrix, kernel_basis, rref, solve_in_span
from .circuit import CircuitBuilder, CliffordCircuit, NoiseModel
from .coloring import cnot_layers
from .decoder import BpOsdDecoder
from .dem import DetectorModel, build_detector_model
from .tableau import StabilizerTableau

__all__ = [
    "build_syndrome_extraction",
    "TeleportPair",
    "teleport_pair",
    "memory_circuit",
    "build_teleport_circuit",
    "TeleportReport",
    "verify_teleport_logical_action",
    "SingleShotDecoder",
    "single_shot_repair",
    "MonteCarloResult",
    "monte_carlo",
    "right_inverse",
    "normalized_rate",
]


def _support(v) -> list[int]:
    return np.flatnonzero(np.asarray(v)).tolist()


def right_inverse(H: BitMatrix) -> tuple[list[int], np.ndarray]:
    """(I, R): rows I of H are independent and H (R s_I) = s for every s in the column space."""
    if H.rows == 0:
        return [], np.zeros((H.cols, 0), dtype=np.uint8)
    rows = list(rref(H.T).pivots)
    HI = H.take_rows(rows)
    R = np.zeros((H.cols, len(rows)), dtype=np.uint8)
    for i in range(len(rows)):
        e = np.zeros(len(rows), dtype=np.uint8)
        e[i] = 1
        R[:, i] = solve_in_span(HI, e)
    return rows, R


def _linear_fix_rules(H: BitMatrix, data, records) -> list[tuple[int, list[int]]]:
    """Feedback rules applying the Pauli fix R s for syndrome records ``records``."""
    rows, R = right_inverse(H)
    rules = []
    for q in range(H.cols):
        recs = [records[rows[i]] for i in np.flatnonzero(R[q])]
        if recs:
            rules.append((data[q], recs))
    return rules


def _extract(b: CircuitBuilder, H: BitMatrix, data, anc, basis: str, layers=None) -> list[int]:
    """One round of ancilla-based measurement of the rows of H; returns the records."""
    if H.rows == 0:
        return []
    x = basis == "X"
    layers = layers if layers is not None else cnot_layers(H, list(anc), list(data), ancilla_is_control=x)
    (b.reset_x if x else b.reset_z)(anc)
    for layer in layers:
        b.cx(layer)
    return (b.measure_x if x else b.measure_z)(anc)


def build_syndrome_extraction(code: CssCode, basis: str = "both", noise: NoiseModel | None = None) -> CliffordCircuit:
    """One round: X checks then Z checks, one ancilla per check, edge-colored CNOT layers."""
    basis = basis.upper() if basis != "both" else "both"
    b = CircuitBuilder(noise)
    data = b.add_block("data", code.n)
    if basis in ("X", "both"):
        ax = b.add_block("anc_x", code.hx.rows)
        _extract(b, code.hx, data, ax, "X")
    if basis in ("Z", "both"):
        az = b.add_block("anc_z", code.hz.rows)
        _extract(b, code.hz, data, az, "Z")
    return b.build()


@dataclass
class TeleportPair:
    code2d: CssCode
    code3d: CssCode
    chain_map: ChainMapR
    logical: LogicalCnotMap
    name: str = ""

    @property
    def k_coupled(self) -> int:
        return self.logical.rank


def teleport_pair(spec, q: int = 1) -> TeleportPair:
    """Registry entry (or CodeSpec) -> 2D/3D codes with the inclusion chain map for row q."""
    from ..registry import CodeSpec, build_pair, registry_load

    if not isinstance(spec, CodeSpec):
        spec = registry_load(spec)
    c2, c3 = build_pair(spec)
    g = inclusion_chain_map(spec.classical_codes(), q)
    lm = induced_logical_map(g, c2, c3)
    return TeleportPair(c2, c3, g, lm, spec.name)


def memory_circuit(code: CssCode, rounds: int, noise: NoiseModel | None = None, basis: str = "X") -> CliffordCircuit:
    """Memory in the given basis: init, ``rounds`` extraction rounds, transversal readout.

    Detectors compare adjacent rounds and the final data readout with the
    last round; observables are the logical operators of that basis.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    noise = noise or NoiseModel.noiseless()
    basis = basis.upper()
    H = code.hx if basis == "X" else code.hz
    reps = logical_basis(code).x_reps if basis == "X" else logical_basis(code).z_reps
    b = CircuitBuilder(noise)
    data = b.add_block("data", code.n)
    anc = b.add_block("anc_" + basis.lower(), H.rows)
    layers = cnot_layers(H, list(anc), list(data), ancilla_is_control=basis == "X")
    (b.reset_x if basis == "X" else b.reset_z)(data)
    prev = None
    for r in range(rounds):
        if r == 0 or noise.mode == "phenomenological":
            b.data_noise(data)
        recs = _extract(b, H, data, anc, basis, layers)
        for c in range(H.rows):
            b.detector([recs[c]] + ([prev[c]] if prev else []))
        prev = recs
    final = (b.measure_x if basis == "X" else b.measure_z)(data, noisy=noise.mode == "circuit_level")
    Hd = H.to_dense()
    for c in range(H.rows):
        b.detector([final[q] for q in _support(Hd[c])] + [prev[c]])
    for j, rep in enumerate(reps):
        b.observable(j, [final[q] for q in _support(rep)])
    return b.build()


def build_teleport_circuit(pair: TeleportPair, direction: str = "to3D", rounds: int | None = None, noise: NoiseModel | None = None, gamma1: BitMatrix | None = None) -> CliffordCircuit:
    """One-bit teleportation through the homomorphic CNOT layer.

    to3D: X-basis experiment (3D prepared in |+> with a linear X fix, 2D rounds,
    CNOT layer, 2D Z readout with X feedback on 3D, final 3D X readout).
    to2D: Z-basis mirror (3D |0>, 2D |0> with a Z fix, CNOT layer, 3D X
    readout with Z feedback on 2D, 2D rounds, final 2D Z readout).
    """
    lm = pair.logical
    if not lm.injective:
        raise ValueError("teleportation needs an injective logical map")
    noise = noise or NoiseModel.noiseless()
    c2, c3 = pair.code2d, pair.code3d
    rounds = 3 if rounds is None else rounds
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    g1 = lm.gamma1_binary if gamma1 is None else gamma1
    sched = cnot_schedule(g1)
    kc = lm.rank
    src, tgt = lm.source_basis, lm.transversal_target
    b = CircuitBuilder(noise)
    d3 = b.add_block("data3d", c3.n)
    d2 = b.add_block("data2d", c2.n)
    a3x = b.add_block("anc3d_x", c3.hx.rows)
    a3z = b.add_block("anc3d_z", c3.hz.rows)
    a2x = b.add_block("anc2d_x", c2.hx.rows)
    a2z = b.add_block("anc2d_z", c2.hz.rows)
    L = {
        "3x": cnot_layers(c3.hx, list(a3x), list(d3), True),
        "3z": cnot_layers(c3.hz, list(a3z), list(d3), False),
        "2x": cnot_layers(c2.hx, list(a2x), list(d2), True),
        "2z": cnot_layers(c2.hz, list(a2z), list(d2), False),
    }
    cx_layer = [(d3[c], d2[t]) for c, t in sched]
    H3x, H3z, H2x, H2z = (m.to_dense() for m in (c3.hx, c3.hz, c2.hx, c2.hz))
    meas_noisy = noise.mode == "circuit_level"

    if direction == "to3D":
        g0 = pair.chain_map.binary(0).to_dense()  # 3D X checks x 2D X checks
        b.reset_x(d3)
        b.data_noise(d3)
        z3 = _extract(b, c3.hz, d3, a3z, "Z", L["3z"])
        b.feedback("X", _linear_fix_rules(c3.hz, d3, z3))
        x3 = _extract(b, c3.hx, d3, a3x, "X", L["3x"])
        for r in range(c3.hx.rows):
            b.detector([x3[r]])
        b.reset_x(d2)
        px = pz = None
        for r in range(rounds):
            if r == 0 or noise.mode == "phenomenological":
                b.data_noise(d2)
            x2 = _extract(b, c2.hx, d2, a2x, "X", L["2x"])
            for c in range(c2.hx.rows):
                b.detector([x2[c]] + ([px[c]] if px else []))
            z2 = _extract(b, c2.hz, d2, a2z, "Z", L["2z"])
            if pz:
                for c in range(c2.hz.rows):
                    b.detector([z2[c], pz[c]])
            px, pz = x2, z2
        b.cx(cx_layer)
        m2 = b.measure_z(d2, noisy=meas_noisy)
        rules = []
        for q in range(c3.n):
            recs: set[int] = set()
            for j in range(kc):
                if tgt.x_reps.get(j, q):
                    recs ^= {m2[i] for i in _support(src.z_reps.row(j))}
            rules.append((d3[q], sorted(recs)))
        b.feedback("X", rules)
        f3 = b.measure_x(d3, noisy=meas_noisy)
        for r in range(c3.hx.rows):
            recs = [f3[q] for q in _support(H3x[r])] + [x3[r]] + [px[j] for j in _support(g0[r])]
            b.detector(recs)
        for j in range(kc):
            b.observable(j, [f3[q] for q in _support(tgt.x_reps.row(j))])
    elif direction == "to2D":
        g2 = pair.chain_map.binary(2).to_dense()  # 3D Z checks x 2D Z checks
        b.reset_z(d3)
        b.data_noise(d3)
        x3 = _extract(b, c3.hx, d3, a3x, "X", L["3x"])
        b.feedback("Z", _linear_fix_rules(c3.hx, d3, x3))
        z3 = _extract(b, c3.hz, d3, a3z, "Z", L["3z"])
        for r in range(c3.hz.rows):
            b.detector([z3[r]])
        b.reset_z(d2)
        x2 = _extract(b, c2.hx, d2, a2x, "X", L["2x"])
        b.feedback("Z", _linear_fix_rules(c2.hx, d2, x2))
        z2 = _extract(b, c2.hz, d2, a2z, "Z", L["2z"])
        for c in range(c2.hz.rows):
            b.detector([z2[c]])
        b.cx(cx_layer)
        m3 = b.measure_x(d3, noisy=meas_noisy)
        rules = []
        for q in range(c2.n):
            recs = set()
            for j in range(kc):
                if src.z_reps.get(j, q):
                    recs ^= {m3[i] for i in _support(tgt.x_reps.row(j))}
            rules.append((d2[q], sorted(recs)))
        b.feedback("Z", rules)
        px, pz = x2, z2
        for r in range(rounds):
            if noise.mode == "phenomenological" or (r == 0 and noise.mode == "code_capacity"):
                b.data_noise(d2)
            nx = _extract(b, c2.hx, d2, a2x, "X", L["2x"])
            for c in range(c2.hx.rows):
                # the first round after the Z fix is deterministic on its own
                b.detector([nx[c]] + ([px[c]] if r else []))
            nz = _extract(b, c2.hz, d2, a2z, "Z", L["2z"])
            for c in range(c2.hz.rows):
                extra = [z3[k] for k in _support(g2[:, c])] if r == 0 else []
                b.detector([nz[c], pz[c]] + extra)
            px, pz = nx, nz
        f2 = b.measure_z(d2, noisy=meas_noisy)
        for c in range(c2.hz.rows):
            b.detector([f2[q] for q in _support(H2z[c])] + [pz[c]])
        for j in range(kc):
            b.observable(j, [f2[q] for q in _support(src.z_reps.row(j))])
    else:
        raise ValueError("direction must be 'to3D' or 'to2D'")
    return b.build()


# ---------------------------------------------------------------- verification


@dataclass
class TeleportReport:
    direction: str
    ok: bool
    checks: int
    mismatches: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _pauli_vec(n_total, offset, support_bits):
    v = np.zeros(n_total, dtype=np.uint8)
    s = np.asarray(support_bits, dtype=np.uint8)
    v[offset : offset + len(s)] = s
    return v


def _patterns(k: int) -> list[np.ndarray]:
    if k <= 3:
        return [np.array([(i >> j) & 1 for j in range(k)], dtype=np.uint8) for i in range(2**k)]
    pats = [np.zeros(k, np.uint8), np.ones(k, np.uint8)]
    for j in range(k):
        e = np.zeros(k, np.uint8)
        e[j] = 1
        pats.append(e)
    alt = (np.arange(k) % 2).astype(np.uint8)
    return pats + [alt, alt ^ 1]


def _project_rows(t: StabilizerTableau, H: BitMatrix, offset: int, kind: str, rng, forced=None):
    """Measure each row of H as an X- or Z-type Pauli on the block at ``offset``."""
    out = []
    zero = np.zeros(t.n, np.uint8)
    for row in H:
        v = _pauli_vec(t.n, offset, row)
        px, pz = (v, zero) if kind == "X" else (zero, v)
        out.append(t.measure_pauli(px, pz, 0, rng, forced)[0])
    return np.array(out, dtype=np.uint8)


def _apply_pauli(t: StabilizerTableau, kind: str, offset: int, bits):
    for q in _support(bits):
        t.pauli(kind, offset + q)


def _peek(t, kind, offset, bits):
    v = _pauli_vec(t.n, offset, bits)
    zero = np.zeros(t.n, np.uint8)
    return t.peek_pauli(v, zero) if kind == "X" else t.peek_pauli(zero, v)


def verify_teleport_logical_action(pair: TeleportPair, direction: str = "to3D", gamma1: BitMatrix | None = None, seed: int = 0) -> TeleportReport:
    """Noiseless tableau check that every coupled logical qubit arrives with the right sign.

    The source is prepared by forced stabilizer projections plus logical
    Paulis, in Z- and in X-basis product states; the destination is
    prepared with a measured syndrome round and a linear fix.  ``gamma1``
    replaces the CNOT layer (the expected action still comes from the pair).
    """
    lm = pair.logical
    c2, c3 = pair.code2d, pair.code3d
    kc = lm.rank
    src, tgt = lm.source_basis, lm.transversal_target
    sched = cnot_schedule(lm.gamma1_binary if gamma1 is None else gamma1)
    rng = np.random.default_rng(seed)
    n3, n2 = c3.n, c2.n
    o3, o2 = 0, n3
    report = TeleportReport(direction, True, 0)
    # per direction: (source code/offset, dest code/offset, source logicals, dest logicals)
    if direction == "to3D":
        S, so, D, do = c2, o2, c3, o3
        sz, sx = src.z_reps, src.x_reps
        dz, dx = tgt.z_reps, tgt.x_reps
        meas_kind, fb_kind = "Z", "X"
    elif direction == "to2D":
        S, so, D, do = c3, o3, c2, o2
        sz, sx = tgt.z_reps, tgt.x_reps
        dz, dx = src.z_reps, src.x_reps
        meas_kind, fb_kind = "X", "Z"
    else:
        raise ValueError("direction must be 'to3D' or 'to2D'")
    for basis in ("Z", "X"):
        for pat in _patterns(kc):
            t = StabilizerTableau(n3 + n2)
            # source logical state
            if basis == "Z":
                _project_rows(t, S.hx, so, "X", rng, forced=0)
                for j in _support(pat):
                    _apply_pauli(t, "X", so, sx.row(j))
            else:
                for q in range(S.n):
                    t.h(so + q)
                _project_rows(t, S.hz, so, "Z", rng, forced=0)
                for j in _support(pat):
                    _apply_pauli(t, "Z", so, sz.row(j))
            # destination code state: 3D in |+> (Z round + X fix), 2D in |0> (X round + Z fix)
            if direction == "to3D":
                for q in range(D.n):
                    t.h(do + q)
                syn = _project_rows(t, D.hz, do, "Z", rng)
                rows, R = right_inverse(D.hz)
                _apply_pauli(t, "X", do, (R @ syn[rows]) % 2)
            else:
                syn = _project_rows(t, D.hx, do, "X", rng)
                rows, R = right_inverse(D.hx)
                _apply_pauli(t, "Z", do, (R @ syn[rows]) % 2)
            for c, tq in sched:
                t.cx(o3 + c, o2 + tq)
            outcomes = np.zeros(S.n, dtype=np.uint8)
            for q in range(S.n):
                outcomes[q] = (t.measure_z if meas_kind == "Z" else t.measure_x)(so + q, rng)[0]
            fb_src = sz if meas_kind == "Z" else sx
            fb_dst = dx if fb_kind == "X" else dz
            for j in range(kc):
                if int(fb_src.row(j) @ outcomes) % 2:
                    _apply_pauli(t, fb_kind, do, fb_dst.row(j))
            # destination checks
            for kind, H in (("X", D.hx), ("Z", D.hz)):
                for i, row in enumerate(H):
                    got = _peek(t, kind, do, row)
                    report.checks += 1
                    if got != 0:
                        report.ok = False
                        report.mismatches.append(f"{basis} pattern {pat.tolist()}: destination {kind} check {i} -> {got}")
            reps = dz if basis == "Z" else dx
            for j in range(kc):
                got = _peek(t, basis, do, reps.row(j))
                report.checks += 1
                if got != int(pat[j]):
                    report.ok = False
                    report.mismatches.append(f"{basis} pattern {pat.tolist()}: logical {j} -> {got}, expected {int(pat[j])}")
    return report


# ---------------------------------------------------------------- single shot


class SingleShotDecoder:
    """Meta decoder on Mz and fix decoder on Hz, both BP+OSD-0."""

    def __init__(self, code: CssCode, p: float = 0.01, max_iter: int = 60):
        if code.mz is None:
            raise ValueError("single-shot repair needs meta checks")
        self.code = code
        self.meta = BpOsdDecoder(code.mz, p, max_iter)
        self.fix = BpOsdDecoder(code.hz, p, max_iter)
        self.left_null = kernel_basis(code.hz.T)  # y with y Hz = 0

    def in_image(self, s) -> bool:
        return not (self.left_null @ np.asarray(s, dtype=np.uint8)).any()


def single_shot_repair(code: CssCode, observed, decoder: SingleShotDecoder | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(repaired syndrome, X fix with Hz fix = repaired).

    Raises ValueError when meta decoding leaves a syndrome outside im(Hz).
    """
    dec = decoder or SingleShotDecoder(code)
    s = np.asarray(observed, dtype=np.uint8) & 1
    sigma = code.mz @ s
    s_err = dec.meta.decode(sigma) if sigma.any() else np.zeros_like(s)
    repaired = s ^ s_err
    if not dec.in_image(repaired):
        raise ValueError("repaired syndrome is outside im(Hz): meta decoding failed")
    fix = dec.fix.decode(repaired)
    return repaired, fix


# ---------------------------------------------------------------- Monte Carlo


@dataclass
class MonteCarloResult:
    experiment: str
    shots: int
    failures: int
    P: float
    p_L: float
    k: int
    rounds: int
    per_round: bool
    seed: int
    ci_low: float
    ci_high: float
    p: float = 0.0
    noise_mode: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def _wilson(f: int, n: int, z: float = 1.96) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    ph = f / n
    den = 1 + z * z / n
    mid = (ph + z * z / (2 * n)) / den
    half = z * sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


def normalized_rate(P: float, k: int, rounds: int = 1) -> float:
    """p_L = 1 - (1 - P)^(1 / (k rounds))."""
    if k <= 0 or rounds <= 0:
        raise ValueError("k and rounds must be positive")
    return 1.0 - (1.0 - P) ** (1.0 / (k * rounds))


def _count_dem_failures(dem: DetectorModel, shots: int, seed: int, chunk: int) -> int:
    failures = 0
    dec = dem.decoder()
    for ci, start in enumerate(range(0, shots, chunk)):
        m = min(chunk, shots - start)
        rng = np.random.default_rng([seed, ci])
        dets, obs = dem.sample(m, rng)
        if dem.num_faults == 0:
            failures += int(obs.any(axis=1).sum())
            continue
        keys, inv = np.unique(dets, axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        pred = np.zeros((len(keys), dem.num_observables), dtype=np.uint8)
        for u, syn in enumerate(keys):
            if syn.any():
                e = dec.decode(syn)
                pred[u] = (dem.observable_matrix.astype(np.int64) @ e) % 2
        failures += int((pred[inv] != obs).any(axis=1).sum())
    return failures


def _single_shot_failures(code: CssCode, noise: NoiseModel, shots: int, seed: int, chunk: int) -> int:
    """Phenomenological single-shot |0>-basis probe: one noisy Z round, repair and fix,
    then an ideal final decode; a failure is any flipped Z logical."""
    dec = SingleShotDecoder(code, max(noise.data, 1e-3))
    zr = logical_basis(code).z_reps.to_dense().astype(np.int64)
    Hz = code.hz.to_dense().astype(np.int64)
    p_data, p_meas = noise.data if noise.mode != "circuit_level" else noise.p, noise.meas if noise.mode != "code_capacity" else 0.0
    failures = 0
    for ci, start in enumerate(range(0, shots, chunk)):
        m = min(chunk, shots - start)
        rng = np.random.default_rng([seed, ci])
        e = (rng.random((m, code.n)) < p_data).astype(np.uint8)
        flips = (rng.random((m, code.hz.rows)) < p_meas).astype(np.uint8)
        obs = ((e.astype(np.int64) @ Hz.T) % 2).astype(np.uint8) ^ flips
        for i in np.flatnonzero(e.any(axis=1) | flips.any(axis=1)):
            try:
                _, fix = single_shot_repair(code, obs[i], dec)
            except ValueError:
                failures += 1
                continue
            resid = e[i] ^ fix
            syn = (Hz @ resid) % 2
            if syn.any():
                resid = resid ^ dec.fix.decode(syn)
            if ((zr @ resid) % 2).any():
                failures += 1
    return failures


def monte_carlo(
    experiment: str,
    codes,
    noise: NoiseModel,
    shots: int,
    seed: int = 0,
    rounds: int | None = None,
    per_round: bool = False,
    direction: str = "to3D",
    basis: str = "X",
    chunk: int = 20000,
) -> MonteCarloResult:
    """memory: ``codes`` is a CssCode; teleport: a TeleportPair; single_shot: a 3D CssCode."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if experiment == "memory":
        code = codes
        rounds = 1 if rounds is None else rounds
        k = code.k
        dem = build_detector_model(memory_circuit(code, rounds, noise, basis), noise)
        fails = _count_dem_failures(dem, shots, seed, chunk)
    elif experiment == "teleport":
        pair = codes
        rounds = 3 if rounds is None else rounds
        k = pair.k_coupled
        dem = build_detector_model(build_teleport_circuit(pair, direction, rounds, noise), noise)
        fails = _count_dem_failures(dem, shots, seed, chunk)
    elif experiment == "single_shot":
        code = codes
        rounds = 1
        k = code.k
        fails = _single_shot_failures(code, noise, shots, seed, chunk)
    else:
        raise ValueError(f"unknown experiment {experiment!r}")
    P = fails / shots
    pl = normalized_rate(P, k, rounds if per_round else 1)
    lo, hi = _wilson(fails, shots)
    return MonteCarloResult(experiment, shots, fails, P, pl, k, rounds, per_round, seed, lo, hi, noise.p, noise.mode)
