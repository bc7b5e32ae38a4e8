"""Two-player games (odd-cycle and CHSH with tensor-power repetition),
deterministic strategies, and exact/heuristic classical value computation.

Questions are tuples in [n]^d; answers are d-bit vectors packed into ints
(bit i is coordinate i).  Both game families are XOR games with a unique
winning answer offset per question pair, which the exhaustive and search
paths exploit: for a fixed Alice table, Bob's best response at question y
is the mode of ``S_A(x) XOR target(x, y)`` over the draws that reach y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Optional

import numpy as np

from .torus import BudgetExceeded

DEFAULT_ALICE_TABLE_BUDGET = 1 << 26
DEFAULT_FULL_PAIR_BUDGET = 1 << 26


class GameError(ValueError):
    pass


class StrategyError(KeyError):
    pass


@dataclass(frozen=True)
class GameSpec:
    """A two-player game: question alphabets, referee distribution, and win
    predicate.  ``pairs`` lists the support as (alice_q, bob_q, weight);
    ``targets`` gives, per support pair, the packed XOR target t with
    win(a, b) iff a ^ b == t."""

    kind: str
    n: int
    depth: int
    alice_questions: tuple
    bob_questions: tuple
    pairs: tuple  # ((qa, qb, Fraction), ...)
    targets: tuple  # packed ints, aligned with pairs
    delta_table: Optional[dict] = None

    @property
    def answers_per_question(self) -> int:
        return 1 << self.depth

    def predicate(self, qa, qb, a: int, b: int) -> bool:
        """Total win predicate over the declared alphabets.  Pairs outside
        the support lose."""
        t = self._target_lookup().get((tuple(qa), tuple(qb)))
        if t is None:
            return False
        return (a ^ b) == t

    def _target_lookup(self) -> dict:
        if not hasattr(self, "_targets_by_pair"):
            lookup = {
                (qa, qb): t
                for (qa, qb, _), t in zip(self.pairs, self.targets)
            }
            object.__setattr__(self, "_targets_by_pair", lookup)
        return self._targets_by_pair

    def weight_total(self) -> Fraction:
        return sum((w for _, _, w in self.pairs), Fraction(0))

    def draws_by_bob(self) -> dict:
        """Map bob_q -> list of (alice_index, target).  Valid because all
        support weights are equal for the families built here."""
        if not hasattr(self, "_draws"):
            a_index = {q: i for i, q in enumerate(self.alice_questions)}
            draws: dict = {q: [] for q in self.bob_questions}
            for (qa, qb, _), t in zip(self.pairs, self.targets):
                draws[qb].append((a_index[qa], t))
            object.__setattr__(self, "_draws", draws)
        return self._draws

    def uniform_support_weight(self) -> Fraction:
        weights = {w for _, _, w in self.pairs}
        if len(weights) != 1:
            raise GameError("support weights are not uniform")
        return next(iter(weights))

    def to_json(self) -> dict:
        data = {
            "kind": self.kind,
            "n": self.n,
            "depth": self.depth,
            "alice_questions": [list(q) for q in self.alice_questions],
            "bob_questions": [list(q) for q in self.bob_questions],
            "answers_per_question": self.answers_per_question,
            "weights": [
                [list(qa), list(qb), str(w)] for qa, qb, w in self.pairs
            ],
        }
        if self.delta_table is not None:
            data["delta"] = [[list(k), v] for k, v in sorted(self.delta_table.items())]
        return data


def _coords(n: int, d: int):
    return tuple(product(range(n), repeat=d))


def make_odd_cycle_game(n: int, d: int = 1) -> GameSpec:
    """Odd-cycle game at repetition depth d.  Per coordinate the referee
    draws x uniform in [n] and t uniform in {0,1}; Bob's coordinate is
    (x+t) mod n and the pair wins iff a XOR b == t in every coordinate."""
    if n < 3 or n % 2 == 0:
        raise GameError("n must be odd and at least 3")
    if d < 1:
        raise GameError("repetition depth must be at least 1")
    questions = _coords(n, d)
    weight = Fraction(1, (2 * n) ** d)
    pairs = []
    targets = []
    for qa in questions:
        for t_bits in product((0, 1), repeat=d):
            qb = tuple((x + t) % n for x, t in zip(qa, t_bits))
            packed = sum(bit << i for i, bit in enumerate(t_bits))
            pairs.append((qa, qb, weight))
            targets.append(packed)
    return GameSpec("odd-cycle", n, d, questions, questions, tuple(pairs), tuple(targets))


def make_chsh_game(d: int = 1, delta_twist: Optional[dict] = None) -> GameSpec:
    """CHSH game at repetition depth d: questions uniform over {0,1}^d on
    each side, win iff a XOR b == x AND y componentwise.  An optional
    delta table {(x, y) -> bit} twists the target to (x AND y) XOR delta
    per coordinate."""
    if d < 1:
        raise GameError("repetition depth must be at least 1")
    delta = None
    if delta_twist is not None:
        delta = {}
        for key, value in delta_twist.items():
            delta[tuple(key)] = int(value)
        wanted = set(product((0, 1), repeat=2))
        if set(delta) != wanted or any(v not in (0, 1) for v in delta.values()):
            raise GameError("delta table must map {0,1}x{0,1} to {0,1}")
    questions = _coords(2, d)
    weight = Fraction(1, 4 ** d)
    pairs = []
    targets = []
    for qa in questions:
        for qb in questions:
            bits = []
            for x, y in zip(qa, qb):
                t = x & y
                if delta is not None:
                    t ^= delta[(x, y)]
                bits.append(t)
            pairs.append((qa, qb, weight))
            targets.append(sum(bit << i for i, bit in enumerate(bits)))
    return GameSpec("chsh", 2, d, questions, questions, tuple(pairs), tuple(targets), delta)


@dataclass
class DeterministicStrategy:
    """Answer tables for both players: question tuple -> packed answer."""

    alice_table: dict
    bob_table: dict

    def validate(self, game: GameSpec):
        k = game.answers_per_question
        for q in game.alice_questions:
            if q not in self.alice_table:
                raise StrategyError(f"alice table missing question {q}")
            if not (0 <= self.alice_table[q] < k):
                raise StrategyError(f"alice answer out of range at {q}")
        for q in game.bob_questions:
            if q not in self.bob_table:
                raise StrategyError(f"bob table missing question {q}")
            if not (0 <= self.bob_table[q] < k):
                raise StrategyError(f"bob answer out of range at {q}")

    def to_json(self) -> dict:
        return {
            "alice": [[list(q), a] for q, a in sorted(self.alice_table.items())],
            "bob": [[list(q), a] for q, a in sorted(self.bob_table.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DeterministicStrategy":
        return cls(
            {tuple(q): a for q, a in data["alice"]},
            {tuple(q): a for q, a in data["bob"]},
        )


def strategy_from_coordinate_rule(game: GameSpec, rule: Callable[[int], int]) -> DeterministicStrategy:
    """Product strategy applying ``rule`` (coordinate question -> bit) to
    every coordinate; both players use the same table."""
    table = {}
    for q in game.alice_questions:
        table[q] = sum((rule(x) & 1) << i for i, x in enumerate(q))
    return DeterministicStrategy(dict(table), dict(table))


def strategy_power(single: DeterministicStrategy, d: int) -> DeterministicStrategy:
    """d-fold product of a depth-1 strategy."""
    alice = {}
    bob = {}
    singles_a = {q[0]: a for q, a in single.alice_table.items()}
    singles_b = {q[0]: a for q, a in single.bob_table.items()}
    for q in product(sorted(singles_a), repeat=d):
        alice[q] = sum((singles_a[x] & 1) << i for i, x in enumerate(q))
    for q in product(sorted(singles_b), repeat=d):
        bob[q] = sum((singles_b[y] & 1) << i for i, y in enumerate(q))
    return DeterministicStrategy(alice, bob)


def random_strategy(game: GameSpec, rng) -> DeterministicStrategy:
    k = game.answers_per_question
    alice = {q: int(rng.integers(0, k)) for q in game.alice_questions}
    bob = {q: int(rng.integers(0, k)) for q in game.bob_questions}
    return DeterministicStrategy(alice, bob)


def evaluate_strategy(game: GameSpec, s: DeterministicStrategy) -> Fraction:
    """Exact winning probability of a deterministic strategy pair."""
    s.validate(game)
    total = Fraction(0)
    for (qa, qb, w), t in zip(game.pairs, game.targets):
        if (s.alice_table[qa] ^ s.bob_table[qb]) == t:
            total += w
    return total


@dataclass
class ValueReport:
    """Result of a value computation.  ``exact`` is set whenever the value
    is an exact rational; search results carry only the float bound."""

    value: float
    method: str
    exact: Optional[Fraction] = None
    witness: Optional[DeterministicStrategy] = None
    evaluations: int = 0
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        data = {
            "method": self.method,
            "value": {
                "float": self.value,
                "fraction": str(self.exact) if self.exact is not None else None,
            },
            "evaluations": self.evaluations,
        }
        if self.witness is not None:
            data["witness"] = self.witness.to_json()
        if self.notes:
            data["notes"] = dict(self.notes)
        return data


def _best_response_bob(game: GameSpec, alice_table: dict) -> tuple:
    """Bob's optimal table against a fixed Alice table, plus the win count
    (number of uniform draws won)."""
    draws = game.draws_by_bob()
    k = game.answers_per_question
    alice_list = [alice_table[q] for q in game.alice_questions]
    bob = {}
    won = 0
    for qb, entries in draws.items():
        counts = [0] * k
        for x_idx, t in entries:
            counts[alice_list[x_idx] ^ t] += 1
        best = max(range(k), key=lambda b: (counts[b], -b))
        bob[qb] = best
        won += counts[best]
    return bob, won


def classical_value_exact(
    game: GameSpec,
    mode: str = "alice-exhaustive-best-response",
    alice_budget: int = DEFAULT_ALICE_TABLE_BUDGET,
    full_budget: int = DEFAULT_FULL_PAIR_BUDGET,
    block: int = 1 << 18,
) -> ValueReport:
    """Exact maximum over deterministic strategies.

    ``full`` enumerates both tables outright; best-response mode enumerates
    Alice tables and optimizes each Bob answer independently per question,
    which is equivalent because the payoff decomposes over Bob questions.
    """
    k = game.answers_per_question
    nx = len(game.alice_questions)
    ny = len(game.bob_questions)
    if mode == "full":
        pair_count = k ** nx * k ** ny
        if pair_count > full_budget:
            raise BudgetExceeded(
                f"full search over {pair_count} strategy pairs exceeds budget; "
                "use alice-exhaustive-best-response or classical_value_search"
            )
        return _exact_full(game)
    if mode != "alice-exhaustive-best-response":
        raise GameError(f"unknown mode {mode!r}")
    table_count = k ** nx
    if table_count > alice_budget:
        raise BudgetExceeded(
            f"{table_count} alice tables exceed budget; use classical_value_search"
        )
    return _exact_alice_exhaustive(game, block)


def _exact_full(game: GameSpec) -> ValueReport:
    k = game.answers_per_question
    weight = game.uniform_support_weight()
    a_questions = game.alice_questions
    b_questions = game.bob_questions
    a_index = {q: i for i, q in enumerate(a_questions)}
    b_index = {q: i for i, q in enumerate(b_questions)}
    support = [
        (a_index[qa], b_index[qb], t)
        for (qa, qb, _), t in zip(game.pairs, game.targets)
    ]
    best_won = -1
    best_pair = None
    evaluations = 0
    for alice in product(range(k), repeat=len(a_questions)):
        for bob in product(range(k), repeat=len(b_questions)):
            evaluations += 1
            won = 0
            for ia, ib, t in support:
                if (alice[ia] ^ bob[ib]) == t:
                    won += 1
            if won > best_won:
                best_won = won
                best_pair = (alice, bob)
    exact = best_won * weight
    alice_table = {q: best_pair[0][i] for i, q in enumerate(a_questions)}
    bob_table = {q: best_pair[1][i] for i, q in enumerate(b_questions)}
    return ValueReport(
        value=float(exact),
        method="exhaustive",
        exact=exact,
        witness=DeterministicStrategy(alice_table, bob_table),
        evaluations=evaluations,
    )


def _exact_alice_exhaustive(game: GameSpec, block: int) -> ValueReport:
    k = game.answers_per_question
    nx = len(game.alice_questions)
    weight = game.uniform_support_weight()
    table_count = k ** nx
    draws = game.draws_by_bob()
    per_bob = [
        (
            np.array([x for x, _ in draws[qb]], dtype=np.int64),
            np.array([t for _, t in draws[qb]], dtype=np.uint8),
        )
        for qb in game.bob_questions
    ]
    radix = k ** np.arange(nx, dtype=np.int64)
    best_won = -1
    best_table_idx = -1
    for start in range(0, table_count, block):
        stop = min(start + block, table_count)
        idx = np.arange(start, stop, dtype=np.int64)
        tables = ((idx[:, None] // radix[None, :]) % k).astype(np.uint8)
        acc = np.zeros(stop - start, dtype=np.int64)
        row = np.arange(stop - start, dtype=np.int64) * k
        for xs, ts in per_bob:
            h = tables[:, xs] ^ ts[None, :]
            flat = h.astype(np.int64) + row[:, None]
            counts = np.bincount(flat.ravel(), minlength=(stop - start) * k)
            acc += counts.reshape(stop - start, k).max(axis=1)
        local_best = int(acc.argmax())
        if int(acc[local_best]) > best_won:
            best_won = int(acc[local_best])
            best_table_idx = start + local_best
    digits = [(best_table_idx // int(r)) % k for r in radix]
    alice_table = {q: digits[i] for i, q in enumerate(game.alice_questions)}
    bob_table, won = _best_response_bob(game, alice_table)
    assert won == best_won
    exact = best_won * weight
    return ValueReport(
        value=float(exact),
        method="alice-exhaustive-best-response",
        exact=exact,
        witness=DeterministicStrategy(alice_table, bob_table),
        evaluations=table_count,
    )


class _SearchState:
    """Incremental best-response bookkeeping for local search over Alice
    tables: per-Bob-question answer counts and their running maxima."""

    def __init__(self, game: GameSpec, alice: list):
        self.k = game.answers_per_question
        self.alice = alice
        draws = game.draws_by_bob()
        self.bob_questions = list(game.bob_questions)
        self.entries = []  # per bob question: list of (alice_idx, target)
        self.touching = [[] for _ in game.alice_questions]
        for yi, qb in enumerate(self.bob_questions):
            entry = list(draws[qb])
            self.entries.append(entry)
            for x, _ in entry:
                self.touching[x].append(yi)
        self.counts = []
        self.maxima = []
        for yi in range(len(self.bob_questions)):
            counts = [0] * self.k
            for x, t in self.entries[yi]:
                counts[self.alice[x] ^ t] += 1
            self.counts.append(counts)
            self.maxima.append(max(counts))
        self.total = sum(self.maxima)

    def delta_for(self, x: int, new_answer: int) -> int:
        old = self.alice[x]
        if new_answer == old:
            return 0
        delta = 0
        for yi in self.touching[x]:
            counts = self.counts[yi]
            before = self.maxima[yi]
            changed = {}
            for xx, t in self.entries[yi]:
                if xx == x:
                    changed[old ^ t] = changed.get(old ^ t, 0) - 1
                    changed[new_answer ^ t] = changed.get(new_answer ^ t, 0) + 1
            after = 0
            for b in range(self.k):
                after = max(after, counts[b] + changed.get(b, 0))
            delta += after - before
        return delta

    def apply(self, x: int, new_answer: int):
        old = self.alice[x]
        if new_answer == old:
            return
        for yi in self.touching[x]:
            counts = self.counts[yi]
            for xx, t in self.entries[yi]:
                if xx == x:
                    counts[old ^ t] -= 1
                    counts[new_answer ^ t] += 1
            self.maxima[yi] = max(counts)
        self.alice[x] = new_answer
        self.total = sum(self.maxima)


def classical_value_search(
    game: GameSpec,
    seed: int = 0,
    iterations: int = 100_000,
    target: Optional[float] = None,
    restart_after: int = 4,
) -> ValueReport:
    """Seeded iterated local search over Alice tables with Bob playing the
    best response.  Iteration 1 evaluates the seeded initial table; each
    further iteration re-optimizes one Alice answer (cycling through the
    questions) and restarts from a fresh random table after
    ``restart_after`` consecutive full passes without improvement.  The
    returned value is a valid lower bound on the classical value.
    """
    if iterations < 1:
        raise GameError("iterations must be at least 1")
    rng = np.random.default_rng(seed)
    k = game.answers_per_question
    nx = len(game.alice_questions)
    weight = game.uniform_support_weight()

    def fresh_state():
        alice = [int(rng.integers(0, k)) for _ in range(nx)]
        return _SearchState(game, alice)

    state = fresh_state()
    best_won = state.total
    best_alice = list(state.alice)
    initial_value = best_won * weight
    it = 1  # iteration 1: evaluation of the seeded initial table
    stale_passes = 0
    improved_this_pass = False
    position = 0
    while it < iterations:
        if target is not None and float(best_won * weight) >= target:
            break
        it += 1
        x = position
        position = (position + 1) % nx
        best_delta = 0
        best_answer = state.alice[x]
        for a in range(k):
            if a == state.alice[x]:
                continue
            delta = state.delta_for(x, a)
            if delta > best_delta:
                best_delta = delta
                best_answer = a
        if best_delta > 0:
            state.apply(x, best_answer)
            improved_this_pass = True
            if state.total > best_won:
                best_won = state.total
                best_alice = list(state.alice)
        if position == 0:
            if not improved_this_pass:
                stale_passes += 1
            else:
                stale_passes = 0
            improved_this_pass = False
            if stale_passes >= restart_after:
                state = fresh_state()
                stale_passes = 0
                if state.total > best_won:
                    best_won = state.total
                    best_alice = list(state.alice)
    alice_table = {q: best_alice[i] for i, q in enumerate(game.alice_questions)}
    bob_table, won = _best_response_bob(game, alice_table)
    exact = won * weight
    return ValueReport(
        value=float(exact),
        method="local-search",
        exact=exact,
        witness=DeterministicStrategy(alice_table, bob_table),
        evaluations=it,
        notes={
            "lower_bound_only": True,
            "seed": seed,
            "initial_value": float(initial_value),
        },
    )


def repetition_decay_check(n: int, d: int, value: float) -> dict:
    """Diagnostic record comparing 1 - value against sqrt(d)/(n sqrt(log d)).
    The constant in the decay statement is unknown, so nothing is asserted;
    d = 1 sits on the regime boundary (log d = 0)."""
    record = {
        "n": n,
        "d": d,
        "value": value,
        "gap": 1.0 - value,
        "in_regime": d <= n * n * math.log(n),
    }
    if d <= 1:
        record["bound_quantity"] = None
        record["note"] = "regime boundary: log d = 0 at d = 1"
    else:
        record["bound_quantity"] = math.sqrt(d) / (n * math.sqrt(math.log(d)))
    if not record["in_regime"]:
        record["note"] = "d outside stated regime d <= n^2 log n"
    return record
