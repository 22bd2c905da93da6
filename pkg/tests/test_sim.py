import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dimjump.chain_map import cnot_schedule
from dimjump.f2 import BitMatrix
from dimjump.registry import TABLE_ROWS, registry_load, build_code
from dimjump.sim import (
    BpOsdDecoder,
    CircuitBuilder,
    CliffordCircuit,
    Instruction,
    NoiseModel,
    NondeterministicDetector,
    SingleShotDecoder,
    StabilizerTableau,
    bipartite_edge_coloring,
    build_detector_model,
    build_syndrome_extraction,
    build_teleport_circuit,
    cnot_layers,
    decode_bp_osd,
    memory_circuit,
    monte_carlo,
    normalized_rate,
    osd0,
    propagate_frames,
    right_inverse,
    sample_fault_pattern,
    single_shot_repair,
    tableau_run,
    teleport_pair,
    verify_teleport_logical_action,
)

# ---------------------------------------------------------------- tableau vs state vector

H1 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


def _apply1(psi, n, q, U):
    psi = psi.reshape([2] * n)
    psi = np.moveaxis(np.tensordot(U, psi, axes=(1, q)), 0, q)
    return psi.reshape(-1)


def _cx(psi, n, c, t):
    psi = psi.reshape([2] * n).copy()
    idx = [slice(None)] * n
    idx[c] = 1
    sub = psi[tuple(idx)]
    tt = t - (t > c)
    psi[tuple(idx)] = np.flip(sub, axis=tt)
    return psi.reshape(-1)


def _prob_one(psi, n, q):
    p = np.abs(psi.reshape([2] * n)) ** 2
    return float(np.moveaxis(p, q, 0)[1].sum())


gates = st.lists(
    st.one_of(
        st.tuples(st.just("H"), st.integers(0, 3)),
        st.tuples(st.just("X"), st.integers(0, 3)),
        st.tuples(st.just("Z"), st.integers(0, 3)),
        st.tuples(st.just("CX"), st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda p: p[0] != p[1])),
    ),
    max_size=25,
)


@settings(max_examples=80, deadline=None)
@given(gates)
def test_tableau_matches_state_vector(ops):
    n = 4
    psi = np.zeros(2**n, complex)
    psi[0] = 1
    t = StabilizerTableau(n)
    for name, arg in ops:
        if name == "H":
            psi = _apply1(psi, n, arg, H1)
            t.h(arg)
        elif name == "X":
            psi = _apply1(psi, n, arg, np.array([[0, 1], [1, 0]]))
            t.pauli("X", arg)
        elif name == "Z":
            psi = _apply1(psi, n, arg, np.diag([1, -1]))
            t.pauli("Z", arg)
        else:
            psi = _cx(psi, n, *arg)
            t.cx(*arg)
    assert t.check_invariants()
    for q in range(n):
        p1 = _prob_one(psi, n, q)
        z = np.zeros(n, np.uint8)
        z[q] = 1
        peek = t.peek_pauli(np.zeros(n, np.uint8), z)
        if np.isclose(p1, 0) or np.isclose(p1, 1):
            assert peek == int(round(p1))
        else:
            assert peek is None and np.isclose(p1, 0.5)


def test_bell_pair_correlations():
    t = StabilizerTableau(2)
    t.h(0)
    t.cx(0, 1)
    rng = np.random.default_rng(0)
    for px, pz in (([1, 1], [0, 0]), ([0, 0], [1, 1])):
        assert t.peek_pauli(np.array(px, np.uint8), np.array(pz, np.uint8)) == 0
    # the argument is the product X^x Z^z, so this is (XX)(ZZ) = -YY, which is +1 here
    assert t.peek_pauli(np.array([1, 1], np.uint8), np.array([1, 1], np.uint8)) == 0
    assert t.peek_pauli(np.array([1, 1], np.uint8), np.array([1, 1], np.uint8), sign=1) == 1
    a, det_a = t.measure_z(0, rng)
    b, det_b = t.measure_z(1, rng)
    assert not det_a and det_b and a == b


def test_forced_outcomes_and_resets():
    t = StabilizerTableau(1)
    assert t.measure_x(0, forced=1) == (1, False)
    assert t.measure_x(0) == (1, True)
    t.reset_z(0, np.random.default_rng(0))
    assert t.peek_pauli(np.array([0], np.uint8), np.array([1], np.uint8)) == 0
    t.reset_x(0, np.random.default_rng(0))
    assert t.peek_pauli(np.array([1], np.uint8), np.array([0], np.uint8)) == 0


# ---------------------------------------------------------------- coloring and circuits


@settings(max_examples=60)
@given(st.sets(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=40))
def test_edge_coloring_is_proper_with_delta_colors(edges):
    edges = sorted(edges)
    colors = bipartite_edge_coloring(edges)
    assert set(colors) == set(edges)
    if not edges:
        return
    delta = max(max(sum(1 for e in edges if e[0] == u) for u, _ in edges), max(sum(1 for e in edges if e[1] == v) for _, v in edges))
    assert max(colors.values()) < delta
    for side in (0, 1):
        seen = set()
        for e, c in colors.items():
            assert (e[side], c) not in seen
            seen.add((e[side], c))


@pytest.mark.parametrize("name", ["bt-27", "pentagon"])
def test_extraction_layers_cover_every_check_edge(name):
    code = build_code(registry_load(name), 3)
    H = code.hx
    layers = cnot_layers(H, list(range(code.n, code.n + H.rows)), list(range(code.n)), True)
    pairs = [p for layer in layers for p in layer]
    assert len(pairs) == H.nnz
    for layer in layers:
        used = [q for p in layer for q in p]
        assert len(used) == len(set(used))
    circ = build_syndrome_extraction(code)
    circ.validate()
    assert circ.count("CX") == code.hx.nnz + code.hz.nnz


def test_validate_rejects_reused_qubits():
    c = CliffordCircuit(2, {}, [Instruction("CX", ((0, 1), (1, 0)))])
    with pytest.raises(ValueError):
        c.validate()


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel("nope", 0.1)
    with pytest.raises(ValueError):
        NoiseModel("circuit_level", 1.5)
    m = NoiseModel("phenomenological", 0.01)
    assert (m.gate, m.meas, m.data) == (0.0, 0.01, 0.01)


def test_right_inverse(bt27):
    H = bt27[1].hz
    rows, R = right_inverse(H)
    Hd = H.to_dense()[rows].astype(int)
    assert np.array_equal((Hd @ R) % 2, np.eye(len(rows), dtype=int))


# ---------------------------------------------------------------- frames, DEM, decoding


@pytest.fixture(scope="module")
def noisy_memory(bt27):
    return memory_circuit(bt27[1], 2, NoiseModel("circuit_level", 0.01))


def test_frames_agree_with_tableau(noisy_memory):
    rng = np.random.default_rng(5)
    patterns = [sample_fault_pattern(noisy_memory, rng) for _ in range(1000)]
    res = propagate_frames(noisy_memory, patterns)
    for i, pat in enumerate(patterns):
        run = tableau_run(noisy_memory, seed=i, faults=pat)
        assert np.array_equal(run.detectors.astype(bool), res.detectors[i])
        assert np.array_equal(run.observables.astype(bool), res.observables[i])


@pytest.mark.parametrize("mode, faults", [("code_capacity", 27), ("phenomenological", 108)])
def test_memory_detector_model(bt27, mode, faults):
    code = bt27[1]
    circ = memory_circuit(code, 3, NoiseModel(mode, 0.001))
    dem = build_detector_model(circ)
    assert dem.num_detectors == code.hx.rows * 4
    assert len(dem.sources) == dem.num_faults == faults
    assert dem.undetectable_logical_faults() == []
    # every single fault is decoded to the right logical outcome
    for j in range(dem.num_faults):
        e = decode_bp_osd(dem, dem.detector_matrix[:, j])
        assert np.array_equal((dem.observable_matrix.astype(int) @ e) % 2, dem.observable_matrix[:, j])


def test_noiseless_memory_is_deterministic(bt27):
    run = tableau_run(memory_circuit(bt27[1], 3), seed=3)
    assert not run.detectors.any()


def test_nondeterministic_detector_is_reported():
    b = CircuitBuilder()
    q = b.add_block("q", 1)
    b.reset_x(q)
    rec = b.measure_z(q, noisy=False)
    b.detector(rec)
    with pytest.raises(NondeterministicDetector):
        # one of the two fixed determinism seeds draws outcome 1 for this 50/50 measurement
        build_detector_model(b.build())


def test_dem_sampling_matches_probabilities(bt27):
    dem = build_detector_model(memory_circuit(bt27[1], 1, NoiseModel("code_capacity", 0.05)))
    dets, _ = dem.sample(40000, np.random.default_rng(0))
    # each detector is the parity of its incident mechanisms
    for d in range(3):
        ps = dem.probabilities[dem.detector_matrix[d].astype(bool)]
        expect = (1 - np.prod(1 - 2 * ps)) / 2
        assert abs(dets[:, d].mean() - expect) < 0.01


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_bp_osd_always_reproduces_the_syndrome(seed):
    rng = np.random.default_rng(seed)
    H = rng.integers(0, 2, (8, 14), dtype=np.uint8)
    e = (rng.random(14) < 0.2).astype(np.uint8)
    s = (H.astype(int) @ e) % 2
    got = BpOsdDecoder(H, 0.05).decode(s)
    assert np.array_equal((H.astype(int) @ got) % 2, s)


def test_osd_rejects_syndromes_outside_the_column_space():
    H = np.array([[1, 1], [1, 1]], dtype=np.uint8)
    with pytest.raises(ValueError):
        osd0(H, np.array([1, 0], np.uint8), np.array([0, 1]))


# ---------------------------------------------------------------- single shot


def test_single_shot_repair_is_idempotent(bt27):
    code = bt27[1]
    dec = SingleShotDecoder(code)
    rng = np.random.default_rng(2)
    for _ in range(30):
        e = (rng.random(code.n) < 0.05).astype(np.uint8)
        flips = (rng.random(code.hz.rows) < 0.03).astype(np.uint8)
        try:
            repaired, fix = single_shot_repair(code, (code.hz @ e) ^ flips, dec)
        except ValueError:
            continue
        again, _ = single_shot_repair(code, repaired, dec)
        assert np.array_equal(again, repaired)
        assert np.array_equal(code.hz @ fix, repaired)


def test_single_shot_needs_metachecks(bt27):
    with pytest.raises(ValueError):
        SingleShotDecoder(bt27[0])


# ---------------------------------------------------------------- teleportation


@pytest.mark.parametrize("direction", ["to3D", "to2D"])
def test_teleport_logical_action(bt27_teleport, direction):
    rep = verify_teleport_logical_action(bt27_teleport, direction)
    assert rep.ok and rep.checks > 0 and not rep.mismatches


@pytest.mark.parametrize("direction", ["to3D", "to2D"])
def test_corrupted_cnot_layer_is_caught(bt27_teleport, direction):
    g = bt27_teleport.logical.gamma1_binary.to_dense().copy()
    cols = np.flatnonzero(g.any(axis=0))
    g[:, [cols[0], cols[1]]] = g[:, [cols[1], cols[0]]]
    rep = verify_teleport_logical_action(bt27_teleport, direction, gamma1=BitMatrix.from_dense(g))
    assert not rep.ok


@pytest.mark.parametrize("name", TABLE_ROWS)
def test_teleport_circuits_are_deterministic(name):
    pair = teleport_pair(name)
    for direction in ("to3D", "to2D"):
        circ = build_teleport_circuit(pair, direction, rounds=1)
        circ.validate()
        assert len(circ.observables) == pair.k_coupled
        # raises if any detector or observable depends on a random outcome
        build_detector_model(circ)


def test_teleport_cnot_layer_is_the_chain_map(bt27_teleport):
    circ = build_teleport_circuit(bt27_teleport, "to3D", rounds=1)
    n3 = bt27_teleport.code3d.n
    sched = {(c, n3 + t) for c, t in cnot_schedule(bt27_teleport.logical.gamma1_binary)}
    assert any(set(layer) == sched for layer in circ.cnot_layers())


# ---------------------------------------------------------------- Monte Carlo


def test_noiseless_monte_carlo_never_fails(bt27, bt27_teleport):
    code = bt27[1]
    assert monte_carlo("memory", code, NoiseModel.noiseless(), 500, rounds=2).failures == 0
    assert monte_carlo("single_shot", code, NoiseModel.noiseless(), 500).failures == 0
    for d in ("to3D", "to2D"):
        assert monte_carlo("teleport", bt27_teleport, NoiseModel.noiseless(), 500, direction=d).failures == 0


def test_monte_carlo_is_reproducible(bt27):
    noise = NoiseModel("phenomenological", 0.02)
    a = monte_carlo("memory", bt27[1], noise, 3000, seed=11, rounds=2)
    b = monte_carlo("memory", bt27[1], noise, 3000, seed=11, rounds=2)
    assert a.to_dict() == b.to_dict()
    assert a.ci_low <= a.P <= a.ci_high


def test_monte_carlo_rejects_bad_arguments(bt27):
    with pytest.raises(ValueError):
        monte_carlo("memory", bt27[1], NoiseModel(), 0)
    with pytest.raises(ValueError):
        monte_carlo("nope", bt27[1], NoiseModel(), 10)


def test_normalized_rate():
    assert normalized_rate(0.0, 3) == 0.0
    assert normalized_rate(0.3, 1) == pytest.approx(0.3)
    # k independent qubits failing at rate q give P = 1 - (1 - q)^k
    q = 0.01
    assert normalized_rate(1 - (1 - q) ** 6, 3, 2) == pytest.approx(q)
