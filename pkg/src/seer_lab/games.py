"""Seeded Monte Carlo simulation of the prediction games.

Each game draws a context uniformly per trial, samples the outcome tuple from
the chosen strategy's exact distribution (Born rule for quantum strategies,
the foil tables, or an optimal deterministic strategy), and scores the win
predicate.  Trials are partitioned across workers with disjoint counter-based
RNG streams, so results are bit-identical for a fixed (seed, workers) pair.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import classical, quantum, scenario

GAME_KINDS = ("seer_ncycle", "bipartite_os", "odd_cycle", "diachronic")
STRATEGIES = ("classical_best", "quantum", "foil")

_MASK64 = (1 << 64) - 1


def _worker_count(requested: Optional[int]) -> int:
    if requested is not None:
        if requested < 1:
            raise ValueError("workers must be positive")
        return requested
    env = os.environ.get("SEER_LAB_THREADS")
    return max(1, int(env)) if env else 1


@dataclass(frozen=True)
class GameSpec:
    kind: str
    strategy: str
    trials: int
    seed: int
    n: Optional[int] = None
    workers: Optional[int] = None

    def __post_init__(self):
        if self.kind not in GAME_KINDS:
            raise ValueError(f"unknown game kind {self.kind!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.kind == "diachronic":
            if self.n not in (None, 3):
                raise ValueError("the diachronic game is defined for n=3 only")
            object.__setattr__(self, "n", 3)
        else:
            if self.n is None or self.n < 3 or self.n % 2 == 0:
                raise ValueError(f"{self.kind} needs odd n >= 3")


@dataclass
class GameResult:
    kind: str
    strategy: str
    n: int
    trials: int
    seed: int
    workers: int
    wins: int
    empirical_rate: float
    expected_rate: float
    std_error: float
    sigma_distance: float

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "strategy": self.strategy,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "workers": self.workers,
            "wins": self.wins,
            "empirical_rate": self.empirical_rate,
            "expected_rate": self.expected_rate,
            "std_error": self.std_error,
            "sigma_distance": self.sigma_distance,
        }


@dataclass
class _SamplingModel:
    """Uniform context draw, per-context outcome distribution, win mask."""

    outcome_probs: np.ndarray  # (contexts, outcomes)
    win: np.ndarray  # (contexts, outcomes) boolean
    expected: float


def _model_from_table(
    table: scenario.CorrelationTable, win_predicate
) -> tuple[np.ndarray, np.ndarray]:
    contexts = table.contexts_present()
    n_out = 4
    probs = np.zeros((len(contexts), n_out))
    win = np.zeros((len(contexts), n_out), dtype=bool)
    for i, ctx in enumerate(contexts):
        for j, outcome in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
            probs[i, j] = table.prob(ctx, outcome)
            win[i, j] = win_predicate(ctx, outcome)
    return probs, win


def _bipartite_win(n: int):
    def predicate(ctx, outcome):
        a, b = ctx[0], ctx[1] - n
        return (outcome[0] == outcome[1]) if a == b else (outcome[0] != outcome[1])

    return predicate


def _deterministic_bipartite_table(n: int, payoff, bits_a, bits_b) -> scenario.CorrelationTable:
    contexts = tuple((cell.a, n + cell.b) for cell in payoff.cells)
    probs = {
        (cell.a, n + cell.b): {(bits_a[cell.a - 1], bits_b[cell.b - 1]): 1.0}
        for cell in payoff.cells
    }
    scen = scenario.Scenario(2 * n, contexts, wing_split=n)
    return scenario.CorrelationTable(scen, probs)


def _build_model(spec: GameSpec) -> _SamplingModel:
    n = spec.n
    if spec.kind == "seer_ncycle":
        return _seer_model(n, spec.strategy)
    if spec.kind == "bipartite_os":
        if spec.strategy == "quantum":
            table = quantum.mermin_table(n)
            expected = quantum.mermin_value(n)
        elif spec.strategy == "foil":
            table = scenario.build_bipartite_table("nonlocal_os_n", n)
            expected = 1.0
        else:
            bound = classical.local_bound("os_ring", n)
            table = _deterministic_bipartite_table(
                n, classical.os_ring_payoff(n), bound.witness_a, bound.witness_b
            )
            expected = bound.value
        probs, win = _model_from_table(table, _bipartite_win(n))
        return _SamplingModel(probs, win, expected)
    if spec.kind == "odd_cycle":
        if spec.strategy == "quantum":
            table = quantum.odd_cycle_table(n)
            expected = quantum.odd_cycle_game_value(n)
        elif spec.strategy == "foil":
            contexts, probs_map = [], {}
            for a in range(1, n + 1):
                for b in (a, a % n + 1):
                    ctx = (a, n + b)
                    contexts.append(ctx)
                    probs_map[ctx] = (
                        {(0, 0): 0.5, (1, 1): 0.5} if b == a else {(0, 1): 0.5, (1, 0): 0.5}
                    )
            scen = scenario.Scenario(2 * n, tuple(contexts), wing_split=n)
            table = scenario.CorrelationTable(scen, probs_map)
            expected = 1.0
        else:
            bound = classical.local_bound("odd_cycle", n)
            table = _deterministic_bipartite_table(
                n, classical.odd_cycle_payoff(n), bound.witness_a, bound.witness_b
            )
            expected = bound.value
        probs, win = _model_from_table(table, _bipartite_win(n))
        return _SamplingModel(probs, win, expected)
    if spec.kind == "diachronic":
        return _diachronic_model(spec.strategy)
    raise AssertionError(spec.kind)


def _seer_model(n: int, strategy: str) -> _SamplingModel:
    """Suitor picks an adjacent pair and predicts both boxes empty.

    quantum: the seer measures the pair on the star-polygon state; the win
    probability is the both-0 Born probability (order 1/n^2).  classical_best:
    the seer prepares the adversarial one-correlated-pair valuation with
    random position and filling, so the suitor wins with probability 1/(2n).
    foil: the perfect anti-correlation table never shows two empty boxes.
    """
    outcomes = ((0, 0), (0, 1), (1, 0), (1, 1))
    win = np.zeros((n, 4), dtype=bool)
    win[:, 0] = True  # (0, 0): the both-empty prediction comes true
    if strategy == "quantum":
        table = quantum.klyachko_table(n)
        probs = np.zeros((n, 4))
        for i, ctx in enumerate(table.contexts_present()):
            probs[i] = [table.prob(ctx, o) for o in outcomes]
        expected = quantum.seer_game_win_probability(n)
    elif strategy == "classical_best":
        # Marginal law of the opened pair under the adversarial preparation:
        # the correlated pair sits under the pick with probability 1/n.
        row = np.array(
            [1 / (2 * n), (n - 1) / (2 * n), (n - 1) / (2 * n), 1 / (2 * n)]
        )
        probs = np.tile(row, (n, 1))
        expected = 1 / (2 * n)
    elif strategy == "foil":
        row = np.array([0.0, 0.5, 0.5, 0.0])
        probs = np.tile(row, (n, 1))
        expected = 0.0
    else:
        raise AssertionError(strategy)
    return _SamplingModel(probs, win, expected)


def _diachronic_model(strategy: str) -> _SamplingModel:
    contexts = [(t, b, y) for t in (1, 2, 3) for b in (0, 1) for y in (1, 2, 3)]
    probs = np.zeros((18, 2))
    win = np.zeros((18, 2), dtype=bool)
    if strategy == "classical_best":
        pnc = classical.pnc_bound_diachronic()
        name = max(pnc.per_encoding, key=lambda k: (pnc.per_encoding[k], k))
        resp = pnc.best_responses[name]
        encoder = {
            "b": lambda t, b: b,
            "c1": lambda t, b: classical.c_function(1, t, b),
            "c2": lambda t, b: classical.c_function(2, t, b),
            "c3": lambda t, b: classical.c_function(3, t, b),
        }[name]
        expected = float(pnc.per_encoding[name])
    for i, (t, b, y) in enumerate(contexts):
        target = classical.c_function(y, t, b)
        win[i, target] = True
        if strategy == "quantum":
            p_win = quantum.diachronic_success_probability(t, b, y)
        elif strategy == "foil":
            p_win = 1.0
        else:
            p_win = 1.0 if resp[encoder(t, b) * 3 + (y - 1)] == target else 0.0
        probs[i, target] = p_win
        probs[i, 1 - target] = 1 - p_win
    if strategy == "quantum":
        expected = quantum.diachronic_quantum().r
    elif strategy == "foil":
        expected = 1.0
    return _SamplingModel(probs, win, expected)


def _simulate_chunk(model: _SamplingModel, seed: int, worker: int, count: int) -> int:
    rng = np.random.Generator(
        np.random.Philox(key=np.array([seed & _MASK64, worker], dtype=np.uint64))
    )
    cum = np.cumsum(model.outcome_probs, axis=1)
    n_ctx, n_out = model.outcome_probs.shape
    wins = 0
    for start in range(0, count, 1 << 20):
        size = min(1 << 20, count - start)
        ctx = rng.integers(0, n_ctx, size=size)
        u = rng.random(size)
        idx = (u[:, None] > cum[ctx]).sum(axis=1)
        np.clip(idx, 0, n_out - 1, out=idx)
        wins += int(model.win[ctx, idx].sum())
    return wins


def simulate(spec: GameSpec) -> GameResult:
    """Run the game and compare the empirical rate with the analytic value."""
    model = _build_model(spec)
    workers = _worker_count(spec.workers)
    counts = [
        spec.trials // workers + (1 if i < spec.trials % workers else 0)
        for i in range(workers)
    ]
    if workers == 1:
        wins = _simulate_chunk(model, spec.seed, 0, counts[0])
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_simulate_chunk, model, spec.seed, i, c)
                for i, c in enumerate(counts)
                if c
            ]
            wins = sum(f.result() for f in futures)
    empirical = wins / spec.trials
    expected = model.expected
    std_error = math.sqrt(max(expected * (1 - expected), 0.0) / spec.trials)
    if std_error > 0:
        sigma = abs(empirical - expected) / std_error
    else:
        sigma = 0.0 if empirical == expected else math.inf
    return GameResult(
        kind=spec.kind,
        strategy=spec.strategy,
        n=spec.n,
        trials=spec.trials,
        seed=spec.seed,
        workers=workers,
        wins=wins,
        empirical_rate=empirical,
        expected_rate=expected,
        std_error=std_error,
        sigma_distance=sigma,
    )


@dataclass
class EnsembleResult:
    n: int
    suitors: int
    strategy: str
    p_single: float
    p_any_win: float


def suitor_ensemble(n: int, suitors: int, strategy: str) -> EnsembleResult:
    """Chance that at least one of `suitors` independent players wins the
    n-box adjacent-pair game: 1 - (1 - p)^suitors for the analytic p."""
    if suitors < 0:
        raise ValueError("suitor count must be nonnegative")
    if strategy == "classical_best":
        p = 1 / (2 * n)
    elif strategy == "quantum":
        p = quantum.seer_game_win_probability(n)
    elif strategy == "foil":
        p = 0.0
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    p_any = -math.expm1(suitors * math.log1p(-p)) if p > 0 else 0.0
    return EnsembleResult(n, suitors, strategy, p, p_any)
