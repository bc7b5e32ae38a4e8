import cmath
import math

import numpy as np
import pytest

from oddcycle.games import make_chsh_game, make_odd_cycle_game
from oddcycle.quantum import (
    MeasurementBasis,
    QuantumError,
    QubitStrategy,
    bell_phase_state,
    bias_and_approximality,
    canonical_odd_cycle_strategy,
    expectation,
    optimize_angles,
    win_probability,
    xor_error_functional,
)

from oracles import born_win_probability

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
EYE = np.eye(2, dtype=complex)
EPR = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)


def test_bell_phase_state_amplitudes():
    theta = 0.7
    st = bell_phase_state(theta)
    expected = np.array([0, 1 / math.sqrt(2), cmath.exp(1j * theta) / math.sqrt(2), 0])
    assert np.allclose(st.amplitudes, expected, atol=1e-15)
    assert abs(np.sum(np.abs(st.amplitudes) ** 2) - 1) < 1e-12


def test_state_rejects_unnormalized():
    with pytest.raises(QuantumError):
        from oddcycle.quantum import SharedState

        SharedState(np.array([1, 1, 0, 0], dtype=complex))


@pytest.mark.parametrize("angle", [0.0, 0.3, math.pi / 2, 2.1, -0.4])
def test_projector_completeness_and_idempotence(angle):
    basis = MeasurementBasis(angle)
    plus, minus = basis.projectors()
    assert np.max(np.abs(plus + minus - EYE)) < 1e-12
    assert np.max(np.abs(plus @ plus - plus)) < 1e-12
    assert np.max(np.abs(minus @ minus - minus)) < 1e-12
    assert np.max(np.abs(plus - plus.conj().T)) < 1e-12
    basis.validate()


def test_expectation_identity_is_one():
    st = bell_phase_state(1.1)
    assert abs(expectation(st, EYE, EYE) - 1.0) < 1e-12


def test_expectation_pauli_pairs_on_theta_zero():
    # hand expansion: sigma_z as sigma_z flips both signs, sigma_x as
    # sigma_x swaps |01> and |10>
    st = bell_phase_state(0.0)
    assert abs(expectation(st, SZ, SZ) - (-1.0)) < 1e-12
    assert abs(expectation(st, SX, SX) - 1.0) < 1e-12


def test_expectation_rejects_non_hermitian():
    st = bell_phase_state(0.0)
    bad = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(QuantumError):
        expectation(st, bad, EYE)


def test_win_probability_matches_closed_form_oracle():
    rng = np.random.default_rng(9)
    game = make_odd_cycle_game(5, 1)
    for _ in range(5):
        theta = float(rng.uniform(0, 2 * math.pi))
        alice = {x: float(rng.uniform(0, 2 * math.pi)) for x in range(5)}
        bob = {y: float(rng.uniform(0, 2 * math.pi)) for y in range(5)}
        flips = (int(rng.integers(0, 2)), int(rng.integers(0, 2)))
        qs = QubitStrategy(bell_phase_state(theta), alice, bob, *flips)
        expected = 0.0
        for (qa, qb, w), t in zip(game.pairs, game.targets):
            expected += float(w) * born_win_probability(
                theta, alice[qa[0]], bob[qb[0]], t, *flips
            )
        assert abs(win_probability(game, qs) - expected) < 1e-12


def test_win_probability_global_phase_invariance():
    game = make_odd_cycle_game(3, 1)
    qs = canonical_odd_cycle_strategy(3)
    base = win_probability(game, qs)
    shifted = QubitStrategy(
        type(qs.state)(qs.state.amplitudes * cmath.exp(0.9j), qs.state.phase),
        qs.alice_angles,
        qs.bob_angles,
        qs.alice_flip,
        qs.bob_flip,
    )
    assert abs(win_probability(game, shifted) - base) < 1e-12


def test_canonical_angle_tables():
    qs3 = canonical_odd_cycle_strategy(3)
    assert abs(qs3.alice_angles[0] - (-math.pi / 6)) < 1e-15
    assert abs(qs3.alice_angles[1] - math.pi / 2) < 1e-15
    assert abs(qs3.alice_angles[2] - 7 * math.pi / 6) < 1e-15
    assert abs(qs3.bob_angles[1] - (-2 * math.pi / 3)) < 1e-15
    qs5 = canonical_odd_cycle_strategy(5)
    assert abs(qs5.alice_angles[0] - (-math.pi / 10)) < 1e-15


def test_canonical_rejects_even_n():
    with pytest.raises(QuantumError):
        canonical_odd_cycle_strategy(4)


def test_canonical_beats_classical_n3():
    game = make_odd_cycle_game(3, 1)
    value = win_probability(game, canonical_odd_cycle_strategy(3))
    assert value > 5 / 6
    # closed form of the uniform-defect construction
    assert abs(value - math.cos(math.pi / 12) ** 2) < 1e-12


def test_all_angles_equal_stays_bounded():
    game = make_odd_cycle_game(3, 1)
    qs = QubitStrategy(bell_phase_state(0.0), {x: 0.3 for x in range(3)}, {y: 0.3 for y in range(3)})
    value = win_probability(game, qs)
    assert 0.0 <= value <= 1.0


def test_missing_angle_raises():
    game = make_odd_cycle_game(3, 1)
    qs = QubitStrategy(bell_phase_state(0.0), {0: 0.0, 1: 0.0}, {y: 0.0 for y in range(3)})
    with pytest.raises(QuantumError):
        win_probability(game, qs)


def test_depth_two_win_probability_is_product():
    qs = canonical_odd_cycle_strategy(3)
    v1 = win_probability(make_odd_cycle_game(3, 1), qs)
    v2 = win_probability(make_odd_cycle_game(3, 2), qs)
    assert abs(v2 - v1**2) < 1e-12


def test_chsh_optimal_bias():
    game = make_chsh_game(1)
    qs = QubitStrategy(
        bell_phase_state(0.0),
        {0: 0.0, 1: math.pi / 2},
        {0: -math.pi / 4, 1: math.pi / 4},
    )
    rec = bias_and_approximality(game, qs, 0.01)
    assert abs(rec["bias"] - 1 / math.sqrt(2)) < 1e-9
    assert rec["within"]


def test_bias_epsilon_near_one_always_within_for_nonnegative():
    game = make_chsh_game(1)
    qs = QubitStrategy(bell_phase_state(0.0), {0: 0.0, 1: 0.0}, {0: 0.0, 1: 0.0})
    rec = bias_and_approximality(game, qs, 1 - 1e-9, reference=1 / math.sqrt(2))
    assert rec["lower"] < 1e-8
    assert rec["within"] == (rec["bias"] >= rec["lower"])


def test_bias_perturbed_angles_sandwich():
    game = make_chsh_game(1)
    ref = 1 / math.sqrt(2)
    qs = QubitStrategy(
        bell_phase_state(0.0),
        {0: 1e-3, 1: math.pi / 2 + 1e-3},
        {0: -math.pi / 4, 1: math.pi / 4},
    )
    rec = bias_and_approximality(game, qs, 1e-4, reference=ref)
    # the perturbation costs O(eps^2), so the 1e-4 sandwich still holds
    assert rec["bias"] < ref
    assert rec["within"]
    tight = bias_and_approximality(game, qs, 1e-9, reference=ref)
    assert not tight["within"]


def test_bias_epsilon_out_of_range():
    game = make_chsh_game(1)
    qs = QubitStrategy(bell_phase_state(0.0), {0: 0.0, 1: 0.0}, {0: 0.0, 1: 0.0})
    with pytest.raises(QuantumError):
        bias_and_approximality(game, qs, 0.0)


def _optimal_chsh_observables():
    b_plus = (SZ + SX) / math.sqrt(2)
    b_minus = (SZ - SX) / math.sqrt(2)
    return [SZ, SX], {(0, 1): b_plus, (1, 0): b_minus}


def test_xor_error_functional_zero_at_optimum():
    a_ops, b_ops = _optimal_chsh_observables()
    assert xor_error_functional(a_ops, b_ops, EPR) < 1e-9


def test_xor_error_functional_sign_flip():
    a_ops, b_ops = _optimal_chsh_observables()
    flipped = {k: -v for k, v in b_ops.items()}
    value = xor_error_functional(a_ops, flipped, EPR)
    # each of the two terms becomes ||2 v||^2 with ||v|| = 1
    assert abs(value - 8.0) < 1e-9


def test_xor_error_functional_equal_observables():
    b_ops = {(0, 1): SZ, (1, 0): SX}
    value = xor_error_functional([SZ, SZ], b_ops, EPR)
    # the difference term degenerates to ||I (x) B psi||^2 = 1
    assert value >= 1.0 - 1e-12


def test_xor_error_functional_rejects_bad_observables():
    with pytest.raises(QuantumError):
        xor_error_functional([SZ, 0.5 * SX], {(0, 1): SZ, (1, 0): SX}, EPR)


def test_canonical_gap_scales_quadratically():
    # log-log fit of 1 - value over odd n in [3, 27]: slope at most -1.9
    ns = list(range(3, 28, 2))
    gaps = []
    for n in ns:
        game = make_odd_cycle_game(n, 1)
        gaps.append(1.0 - win_probability(game, canonical_odd_cycle_strategy(n)))
    assert all(a > b for a, b in zip(gaps, gaps[1:]))  # decreasing in n
    slope = np.polyfit(np.log(ns), np.log(gaps), 1)[0]
    assert slope <= -1.9


def test_xor_error_functional_perturbation_positive():
    a_ops, b_ops = _optimal_chsh_observables()
    angle = 1e-3
    rot = np.array(
        [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]], dtype=complex
    )
    perturbed = {k: rot @ v @ rot.conj().T for k, v in b_ops.items()}
    value = xor_error_functional(a_ops, perturbed, EPR)
    assert value > 0
    assert value < 1e-4  # small rotation, quadratically small functional


def test_optimize_angles_reaches_chsh_optimum():
    game = make_chsh_game(1)
    result = optimize_angles(game, seed=1, starts=6)
    assert abs(result["value"] - (2 + math.sqrt(2)) / 4) < 1e-9


def test_optimize_angles_depth_cap():
    with pytest.raises(QuantumError):
        optimize_angles(make_odd_cycle_game(3, 3))
