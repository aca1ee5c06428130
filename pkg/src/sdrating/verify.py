"""Randomized property checks of the closed-form scores against the oracle.

Each check returns a :class:`CheckResult` with the worst residual it saw, so a
run doubles as a numerical report. Results are deterministic given the seed.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass

import numpy as np

from . import oracle
from .core import (
    GameOutcome,
    GameRecord,
    Margin,
    Model,
    ModelParams,
    Ranking,
    RatingVector,
    WDLResult,
    WinDrawLoss,
    WinLoss,
)
from .engine import EngineConfig, replay
from .models import LOG_LIKELIHOODS, SCORE_DRIVEN_MODELS, SCORE_FUNCTIONS, ScoreFn

ZERO_SUM_TOL = 1e-12
EXPECTED_TOL = 1e-8
FD_TOL = 1e-6
FD_STEP = 1e-5
INVARIANCE_TOL = 1e-12
ELO_TOL = 1e-9
GRID = np.linspace(-5.0, 5.0, 101)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    cases: int

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<22} worst={self.worst:.3e}  tol={self.tolerance:.0e}  cases={self.cases}"


def _players(n: int) -> list[str]:
    return [f"P{i}" for i in range(n)]


def random_params(rng: np.random.Generator) -> ModelParams:
    return ModelParams(alpha=float(rng.uniform(0.25, 2.0)), delta=float(rng.uniform(0.1, 2.0)))


def random_outcome(model: Model, participants: list[str], rng: np.random.Generator) -> GameOutcome:
    """Any outcome in the support, chosen uniformly rather than by likelihood."""
    if model is Model.RANKING:
        return Ranking(tuple(participants[i] for i in rng.permutation(len(participants))))
    a, b = participants
    if model is Model.MARGIN:
        return Margin(a, b, int(rng.integers(0, 11)), int(rng.integers(0, 11)))
    if model is Model.WIN_DRAW_LOSS:
        return WinDrawLoss(a, b, list(WDLResult)[int(rng.integers(3))])
    return WinLoss(a, b) if rng.random() < 0.5 else WinLoss(b, a)


def random_case(
    model: Model, rng: np.random.Generator, max_players: int = 6, spread: float = 3.0
) -> tuple[RatingVector, GameOutcome, ModelParams]:
    """Random (ratings, outcome, params); the pool includes non-participants."""
    m = int(rng.integers(2, max_players + 1)) if model is Model.RANKING else 2
    pool = _players(m + int(rng.integers(0, 3)))
    ratings = RatingVector(zip(pool, rng.uniform(-spread, spread, len(pool)).tolist()))
    participants = [pool[i] for i in rng.choice(len(pool), size=m, replace=False)]
    return ratings, random_outcome(model, participants, rng), random_params(rng)


def category_outcomes(model: Model, participants: list[str]) -> list[GameOutcome]:
    """One representative outcome per category (every finishing order for rankings)."""
    a, b = participants[:2]
    if model is Model.WIN_LOSS:
        return [WinLoss(a, b), WinLoss(b, a)]
    if model is Model.WIN_DRAW_LOSS:
        return [WinDrawLoss(a, b, r) for r in WDLResult]
    if model is Model.MARGIN:
        return [Margin(a, b, pa, pb) for pa, pb in ((0, 0), (3, 0), (0, 3), (7, 2))]
    from itertools import permutations
    return [Ranking(p) for p in permutations(participants)]


def check_zero_sum(models, cases, rng, scores) -> CheckResult:
    worst = 0.0
    for model in models:
        for _ in range(cases):
            ratings, outcome, params = random_case(model, rng)
            worst = max(worst, abs(math.fsum(scores[model](ratings, outcome, params).values())))
    return CheckResult("zero-sum", worst <= ZERO_SUM_TOL, worst, ZERO_SUM_TOL, cases * len(models))


def check_zero_expected(models, cases, rng, scores) -> CheckResult:
    worst = 0.0
    for model in models:
        # margin cases stay at realistic scoring rates (|alpha * gap| <= 4)
        spread = 1.0 if model is Model.MARGIN else 3.0
        for _ in range(cases):
            ratings, outcome, params = random_case(model, rng, spread=spread)
            participants = list(outcome.participants)
            e = oracle.expected_score(model, participants, ratings, ratings, params, score_fn=scores[model])
            worst = max(worst, max(abs(v) for v in e.values()))
    return CheckResult("zero-expected-score", worst <= EXPECTED_TOL, worst, EXPECTED_TOL, cases * len(models))


def fd_residual(model, ratings, outcome, params, score_fn, step=FD_STEP) -> float:
    """Largest participant error, relative to max(1, |score|)."""
    exact = score_fn(ratings, outcome, params)
    approx = oracle.finite_diff_score(model, ratings, outcome, params, step)
    return max(abs(exact[p] - approx[p]) / max(1.0, abs(exact[p])) for p in outcome.participants)


def check_fd_agreement(models, cases, rng, scores) -> CheckResult:
    worst = 0.0
    for model in models:
        for _ in range(cases):
            ratings, outcome, params = random_case(model, rng)
            worst = max(worst, fd_residual(model, ratings, outcome, params, scores[model]))
    return CheckResult("fd-agreement", worst <= FD_TOL, worst, FD_TOL, cases * len(models))


def decreasing_violation(model, outcome, base: RatingVector, player: str, params, score_fn) -> float:
    """Largest increase between consecutive grid points (<= 0 when strictly decreasing)."""
    values = [score_fn(base.updated({player: float(r)}), outcome, params)[player] for r in GRID]
    return max(b - a for a, b in zip(values, values[1:]))


def check_monotone(models, rng, scores) -> CheckResult:
    worst = -math.inf
    count = 0
    params = ModelParams(alpha=1.0, delta=1.0)
    for model in models:
        participants = _players(3 if model is Model.RANKING else 2)
        base = RatingVector(zip(participants, rng.uniform(-1.0, 1.0, len(participants)).tolist()))
        for outcome in category_outcomes(model, participants):
            for player in outcome.participants:
                worst = max(worst, decreasing_violation(model, outcome, base, player, params, scores[model]))
                count += 1
    return CheckResult("decreasing-score", worst < 0.0, worst, 0.0, count)


def check_translation(models, cases, rng, scores) -> CheckResult:
    worst = 0.0
    for model in models:
        loglik = LOG_LIKELIHOODS[model]
        for _ in range(cases):
            ratings, outcome, params = random_case(model, rng)
            shifted = ratings.shifted(float(rng.uniform(-10.0, 10.0)))
            l0, l1 = loglik(ratings, outcome, params), loglik(shifted, outcome, params)
            worst = max(worst, abs(l0 - l1) / max(1.0, abs(l0)))
            s0, s1 = scores[model](ratings, outcome, params), scores[model](shifted, outcome, params)
            worst = max(worst, max(abs(s0[p] - s1[p]) / max(1.0, abs(s0[p])) for p in ratings))
    return CheckResult("translation-invariance", worst <= INVARIANCE_TOL, worst, INVARIANCE_TOL, cases * len(models))


def elo_equivalent_config(pool: Iterable[str]) -> EngineConfig:
    """Score-driven win/loss settings that reproduce classical Elo."""
    alpha = math.log(10.0) / 400.0
    return EngineConfig(Model.WIN_LOSS, ModelParams(alpha=alpha, k_factor=16.0 / alpha, r_init=1200.0), frozenset(pool))


def random_win_loss_log(players: list[str], games: int, rng: np.random.Generator) -> list[GameRecord]:
    log = []
    for t in range(1, games + 1):
        i, j = rng.choice(len(players), size=2, replace=False)
        log.append(GameRecord(t, WinLoss(players[i], players[j])))
    return log


def elo_deviation(log: list[GameRecord], players: list[str]) -> float:
    score_driven = replay(log, elo_equivalent_config(players)).as_array(players)
    classic = replay(log, EngineConfig(Model.ELO_CLASSIC, player_pool=frozenset(players))).as_array(players)
    return float(np.abs(score_driven - classic).max())


def check_elo_equivalence(logs: int, rng: np.random.Generator, players: int = 10, games: int = 200) -> CheckResult:
    pool = _players(players)
    worst = max(elo_deviation(random_win_loss_log(pool, games, rng), pool) for _ in range(logs))
    return CheckResult("elo-equivalence", worst <= ELO_TOL, worst, ELO_TOL, logs)


def sign_flip_mutation(scores: Mapping[Model, ScoreFn]) -> dict[Model, ScoreFn]:
    """Copy of ``scores`` with the draw-case score of the win/draw/loss model negated."""
    original = scores[Model.WIN_DRAW_LOSS]

    def flipped(ratings, outcome, params):
        s = original(ratings, outcome, params)
        if outcome.result is WDLResult.DRAW:
            return type(s)((p, -v) for p, v in s.items())
        return s

    return {**scores, Model.WIN_DRAW_LOSS: flipped}


def run_suite(
    models: Iterable[Model] = SCORE_DRIVEN_MODELS,
    cases: int = 200,
    seed: int = 0,
    scores: Mapping[Model, ScoreFn] | None = None,
    progress: Callable[[CheckResult], None] | None = None,
) -> list[CheckResult]:
    models = [Model.parse(m) for m in models]
    scores = dict(SCORE_FUNCTIONS if scores is None else scores)
    streams = np.random.SeedSequence(seed).spawn(6)
    rngs = [np.random.default_rng(s) for s in streams]
    checks = [
        lambda: check_zero_sum(models, cases, rngs[0], scores),
        lambda: check_zero_expected(models, min(cases, 200), rngs[1], scores),
        lambda: check_fd_agreement(models, cases, rngs[2], scores),
        lambda: check_monotone(models, rngs[3], scores),
        lambda: check_translation(models, cases, rngs[4], scores),
        lambda: check_elo_equivalence(max(1, min(cases, 100) // 10), rngs[5]),
    ]
    results = []
    for check in checks:
        result = check()
        results.append(result)
        if progress is not None:
            progress(result)
    return results
