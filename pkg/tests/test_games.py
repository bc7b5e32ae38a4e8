from fractions import Fraction

import numpy as np
import pytest

from oddcycle.games import (
    DeterministicStrategy,
    GameError,
    StrategyError,
    classical_value_exact,
    classical_value_search,
    evaluate_strategy,
    make_chsh_game,
    make_odd_cycle_game,
    random_strategy,
    repetition_decay_check,
    strategy_from_coordinate_rule,
    strategy_power,
)
from oddcycle.torus import BudgetExceeded

from oracles import brute_force_value


def xmod2(game):
    return strategy_from_coordinate_rule(game, lambda x: x % 2)


def test_odd_cycle_shape_n3():
    g = make_odd_cycle_game(3, 1)
    assert len(g.alice_questions) == 3
    assert len(g.bob_questions) == 3
    assert len(g.pairs) == 6
    assert all(w == Fraction(1, 6) for _, _, w in g.pairs)
    assert g.weight_total() == 1


def test_odd_cycle_shape_depth2():
    g = make_odd_cycle_game(3, 2)
    assert len(g.alice_questions) == 9
    assert g.answers_per_question == 4
    assert g.weight_total() == 1


def test_odd_cycle_rejects_bad_input():
    with pytest.raises(GameError):
        make_odd_cycle_game(4)
    with pytest.raises(GameError):
        make_odd_cycle_game(1)
    with pytest.raises(GameError):
        make_odd_cycle_game(3, 0)


def test_xmod2_value_is_five_sixths():
    # hand enumeration: of the 6 (x, t) draws only (x=2, t=1) loses
    g = make_odd_cycle_game(3, 1)
    assert evaluate_strategy(g, xmod2(g)) == Fraction(5, 6)


def test_chsh_shape_and_constant_strategy():
    g = make_chsh_game(1)
    assert len(g.pairs) == 4
    zeros = DeterministicStrategy({q: 0 for q in g.alice_questions}, {q: 0 for q in g.bob_questions})
    # wins exactly on the three pairs with x AND y == 0
    assert evaluate_strategy(g, zeros) == Fraction(3, 4)
    g2 = make_chsh_game(2)
    assert len(g2.pairs) == 16
    assert all(w == Fraction(1, 16) for _, _, w in g2.pairs)


def test_chsh_identity_delta_matches_plain():
    plain = make_chsh_game(2)
    twisted = make_chsh_game(2, {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 0})
    assert plain.pairs == twisted.pairs
    assert plain.targets == twisted.targets


def test_chsh_delta_flip_changes_targets():
    flipped = make_chsh_game(1, {(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1})
    # the (1,1) pair target becomes 0: constant answers now win everywhere
    zeros = DeterministicStrategy(
        {q: 0 for q in flipped.alice_questions}, {q: 0 for q in flipped.bob_questions}
    )
    assert evaluate_strategy(flipped, zeros) == 1


def test_chsh_malformed_delta():
    with pytest.raises(GameError):
        make_chsh_game(1, {(0, 0): 0})
    with pytest.raises(GameError):
        make_chsh_game(1, {(0, 0): 2, (0, 1): 0, (1, 0): 0, (1, 1): 0})


def test_always_win_targets_give_value_one():
    from oddcycle.games import GameSpec

    g = make_odd_cycle_game(3, 1)
    always = GameSpec(
        g.kind, g.n, g.depth, g.alice_questions, g.bob_questions, g.pairs, tuple(0 for _ in g.targets)
    )
    zeros = DeterministicStrategy(
        {q: 0 for q in g.alice_questions}, {q: 0 for q in g.bob_questions}
    )
    assert evaluate_strategy(always, zeros) == 1


def test_missing_table_entry_raises():
    g = make_odd_cycle_game(3, 1)
    s = xmod2(g)
    del s.alice_table[(0,)]
    with pytest.raises(StrategyError):
        evaluate_strategy(g, s)


def test_exact_values_single_shot():
    for n in (3, 5, 7):
        report = classical_value_exact(make_odd_cycle_game(n, 1), mode="full")
        assert report.exact == Fraction(2 * n - 1, 2 * n)
        assert report.method == "exhaustive"
        # the witness attains the value exactly
        assert evaluate_strategy(make_odd_cycle_game(n, 1), report.witness) == report.exact


def test_full_matches_brute_force_oracle():
    g = make_odd_cycle_game(3, 1)
    assert classical_value_exact(g, mode="full").exact == brute_force_value(g)
    c = make_chsh_game(1)
    assert classical_value_exact(c, mode="full").exact == brute_force_value(c)


def test_best_response_agrees_with_full():
    for game in (
        make_odd_cycle_game(3, 1),
        make_odd_cycle_game(5, 1),
        make_chsh_game(1),
        make_chsh_game(2),
    ):
        assert classical_value_exact(game).exact == classical_value_exact(game, mode="full").exact


def test_full_mode_budget_refusal():
    with pytest.raises(BudgetExceeded):
        classical_value_exact(make_odd_cycle_game(3, 2), mode="full")
    with pytest.raises(BudgetExceeded):
        classical_value_exact(make_odd_cycle_game(5, 2))


def test_tensor_power_product_strategy():
    g1 = make_odd_cycle_game(3, 1)
    g2 = make_odd_cycle_game(3, 2)
    s1 = xmod2(g1)
    s2 = strategy_power(s1, 2)
    assert evaluate_strategy(g2, s2) == evaluate_strategy(g1, s1) ** 2


def test_product_witness_supermultiplicativity():
    # repeated value >= single value squared, via the product witness
    g1 = make_odd_cycle_game(3, 1)
    g2 = make_odd_cycle_game(3, 2)
    single = classical_value_exact(g1, mode="full")
    power = strategy_power(single.witness, 2)
    assert evaluate_strategy(g2, power) == single.exact**2


def test_search_deterministic_and_bounded():
    g = make_odd_cycle_game(3, 1)
    a = classical_value_search(g, seed=5, iterations=500)
    b = classical_value_search(g, seed=5, iterations=500)
    assert a.exact == b.exact
    assert a.witness.alice_table == b.witness.alice_table
    assert a.exact <= Fraction(5, 6)
    # reaches the optimum on the tiny instance
    assert a.exact == Fraction(5, 6)


def test_search_single_iteration_returns_initial():
    g = make_odd_cycle_game(5, 2)
    report = classical_value_search(g, seed=3, iterations=1)
    assert report.evaluations == 1
    assert report.value == report.notes["initial_value"]
    with pytest.raises(GameError):
        classical_value_search(g, iterations=0)


def test_search_value_is_achievable():
    g = make_odd_cycle_game(5, 2)
    report = classical_value_search(g, seed=1, iterations=2000)
    assert evaluate_strategy(g, report.witness) == report.exact


def test_random_strategy_evaluates():
    g = make_odd_cycle_game(5, 2)
    rng = np.random.default_rng(0)
    s = random_strategy(g, rng)
    value = evaluate_strategy(g, s)
    assert 0 <= value <= 1


def test_decay_check_examples():
    rec = repetition_decay_check(3, 2, 0.75)
    assert rec["gap"] == 0.25
    assert rec["in_regime"]
    assert abs(rec["bound_quantity"] - 2**0.5 / (3 * (np.log(2)) ** 0.5)) < 1e-12
    boundary = repetition_decay_check(3, 1, 0.9)
    assert boundary["bound_quantity"] is None
    assert "regime boundary" in boundary["note"]
    rec5 = repetition_decay_check(5, 2, 0.85)
    assert abs(rec5["gap"] - 0.15) < 1e-12


def test_game_serialization_round_trip():
    g = make_odd_cycle_game(3, 2)
    data = g.to_json()
    assert data["n"] == 3 and data["depth"] == 2
    assert len(data["weights"]) == len(g.pairs)
    s = xmod2(g)
    restored = DeterministicStrategy.from_json(s.to_json())
    assert restored.alice_table == s.alice_table
    assert restored.bob_table == s.bob_table


def test_value_report_serialization():
    g = make_odd_cycle_game(3, 1)
    report = classical_value_exact(g, mode="full")
    data = report.to_json()
    assert data["value"]["fraction"] == "5/6"
    assert data["method"] == "exhaustive"
    assert data["evaluations"] == 64
