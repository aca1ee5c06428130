"""Monte Carlo simulation of game logs driven by true, unobserved skills.

Outcomes are drawn from the model evaluated at the players' true skills and
then replayed through the rating engine, which never sees those skills.

Randomness comes from numpy's PCG64 bit generator. Replication ``i`` uses the
``i``-th child of ``SeedSequence(seed).spawn(replications)``, so results are
reproducible from the seed alone and independent of execution order.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np

from . import oracle
from .core import (
    GameOutcome,
    GameRecord,
    Margin,
    Model,
    ModelParams,
    PlayerId,
    Ranking,
    RatingHistory,
    RatingVector,
    ValidationError,
    WDLResult,
    WinDrawLoss,
    WinLoss,
    check_player_id,
)
from .engine import EngineConfig, init_ratings, replay, step
from .models import SCORE_FUNCTIONS, category_probabilities, elo_expected, sigmoid

RNG_ALGORITHM = "numpy.PCG64/SeedSequence.spawn"

RngLike = Union[np.random.Generator, int, None]


# -- skill trajectories ------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    level: float

    def at(self, t: int) -> float:
        return self.level


@dataclass(frozen=True)
class StepChange:
    level_before: float
    level_after: float
    change_time: int

    def at(self, t: int) -> float:
        return self.level_after if t >= self.change_time else self.level_before


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation between (time, level) knots, flat outside them."""

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self):
        knots = tuple((float(t), float(v)) for t, v in self.knots)
        if not knots:
            raise ValidationError("piecewise-linear skill needs at least one knot")
        if any(b[0] <= a[0] for a, b in zip(knots, knots[1:])):
            raise ValidationError("knot times must be strictly increasing")
        object.__setattr__(self, "knots", knots)

    def at(self, t: int) -> float:
        ts, vs = zip(*self.knots)
        return float(np.interp(t, ts, vs))


SkillPath = Union[Constant, StepChange, PiecewiseLinear]


class PairingKind(str, enum.Enum):
    UNIFORM_PAIRS = "uniform_pairs"
    ROUND_ROBIN = "round_robin"
    FULL_FIELD = "full_field"


@dataclass(frozen=True)
class Pairing:
    kind: PairingKind = PairingKind.UNIFORM_PAIRS
    m: int = 2

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", PairingKind(self.kind))
        except ValueError:
            raise ValidationError(f"unknown pairing {self.kind!r}") from None
        if self.kind is not PairingKind.FULL_FIELD:
            object.__setattr__(self, "m", 2)
        if self.m < 2:
            raise ValidationError(f"games need at least two participants, got m={self.m}")


@dataclass(frozen=True)
class SkillScenario:
    players: tuple[PlayerId, ...]
    skills: Mapping[PlayerId, SkillPath]
    pairing: Pairing = field(default_factory=Pairing)
    horizon: int = 500
    model: Model = Model.WIN_LOSS

    def __post_init__(self):
        players = tuple(check_player_id(p) for p in self.players)
        if len(set(players)) != len(players):
            raise ValidationError("duplicate players in scenario")
        if len(players) < 2:
            raise ValidationError("a scenario needs at least two players")
        object.__setattr__(self, "players", players)
        object.__setattr__(self, "model", Model.parse(self.model))
        missing = [p for p in players if p not in self.skills]
        if missing:
            raise ValidationError(f"no skill path for players: {', '.join(missing)}")
        if self.horizon < 1:
            raise ValidationError(f"horizon must be >= 1, got {self.horizon}")
        if self.pairing.m > len(players):
            raise ValidationError(f"m={self.pairing.m} exceeds the {len(players)} players")
        if self.model is not Model.RANKING and self.pairing.m != 2:
            raise ValidationError(f"{self.model.value} games need exactly two players, pairing has m={self.pairing.m}")

    def skills_at(self, t: int) -> RatingVector:
        return RatingVector((p, self.skills[p].at(t)) for p in self.players)

    def skill_matrix(self) -> np.ndarray:
        """True skills, shape (horizon, players), row ``t-1`` for game ``t``."""
        return np.array([[self.skills[p].at(t) for p in self.players] for t in range(1, self.horizon + 1)])


# -- sampling ----------------------------------------------------------------

def sample_outcome(
    model: Model | str,
    participants: Sequence[PlayerId],
    skills: RatingVector,
    params: ModelParams,
    rng: RngLike = None,
) -> GameOutcome:
    """Draw one outcome from the model evaluated at the true ``skills``."""
    model = Model.parse(model)
    rng = np.random.default_rng(rng)
    participants = tuple(participants)
    skills.require(participants)
    alpha = params.alpha
    if model is Model.RANKING:
        if len(participants) < 2 or len(set(participants)) != len(participants):
            raise ValidationError(f"a ranking needs two or more distinct players, got {participants!r}")
        remaining = list(participants)
        order = []
        while len(remaining) > 1:
            a = np.array([alpha * skills[p] for p in remaining])
            w = np.exp(a - a.max())
            pick = rng.choice(len(remaining), p=w / w.sum())
            order.append(remaining.pop(int(pick)))
        order.append(remaining[0])
        return Ranking(tuple(order))

    if len(participants) != 2:
        raise ValidationError(f"{model.value} games have exactly two players, got {len(participants)}")
    a, b = participants
    if model is Model.ELO_CLASSIC:
        return WinLoss(a, b) if rng.random() < elo_expected(skills[a], skills[b]) else WinLoss(b, a)
    x = alpha * (skills[a] - skills[b])
    if model is Model.WIN_LOSS:
        return WinLoss(a, b) if rng.random() < sigmoid(x) else WinLoss(b, a)
    if model is Model.MARGIN:
        return Margin(a, b, int(rng.poisson(math.exp(x))), int(rng.poisson(math.exp(-x))))
    if model is Model.WIN_DRAW_LOSS:
        probs = category_probabilities(x, params.delta)
        u = rng.random()
        if u < probs[WDLResult.A_WINS]:
            result = WDLResult.A_WINS
        elif u < probs[WDLResult.A_WINS] + probs[WDLResult.DRAW]:
            result = WDLResult.DRAW
        else:
            result = WDLResult.B_WINS
        return WinDrawLoss(a, b, result)
    raise ValidationError(f"cannot sample from {model.value}")


def draw_participants(pairing: Pairing, players: Sequence[PlayerId], t: int, rng: np.random.Generator) -> tuple[PlayerId, ...]:
    if pairing.kind is PairingKind.ROUND_ROBIN:
        pairs = list(itertools.combinations(players, 2))
        return pairs[(t - 1) % len(pairs)]
    n = len(players)
    if pairing.m == 2:
        i = int(rng.integers(n))
        j = int(rng.integers(n - 1))
        return (players[i], players[j + (j >= i)])
    idx = rng.choice(n, size=pairing.m, replace=False)
    return tuple(players[i] for i in idx)


def generate_log(scenario: SkillScenario, params: ModelParams, rng: RngLike = None) -> list[GameRecord]:
    """Sample a full game log, times 1..horizon, from the scenario's skills."""
    rng = np.random.default_rng(rng)
    log = []
    for t in range(1, scenario.horizon + 1):
        participants = draw_participants(scenario.pairing, scenario.players, t, rng)
        outcome = sample_outcome(scenario.model, participants, scenario.skills_at(t), params, rng)
        log.append(GameRecord(t, outcome))
    return log


def replication_rngs(seed: int, replications: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(replications)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


# -- simulation --------------------------------------------------------------

@dataclass(frozen=True)
class SimResult:
    """Replicated rating paths plus cross-replication aggregates.

    Aggregate arrays have shape (horizon, players); row ``t-1`` holds ratings
    after game ``t``.
    """

    players: tuple[PlayerId, ...]
    times: tuple[int, ...]
    histories: tuple[RatingHistory, ...]
    logs: tuple[tuple[GameRecord, ...], ...]
    skills: np.ndarray
    mean: np.ndarray
    band_low: np.ndarray
    band_high: np.ndarray
    r_init: float
    seed: int
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def replications(self) -> int:
        return len(self.histories)

    def paths(self) -> np.ndarray:
        """Ratings after each game, shape (replications, horizon, players)."""
        return np.stack([h.as_array(self.players)[1:] for h in self.histories])

    def long_run_gap(self, burn_in: float = 0.5) -> dict[PlayerId, float]:
        """Average of (mean rating - true skill) over the late part of the horizon.

        A descriptive statistic only: constant skills need not be matched by
        the long-run rating level.
        """
        start = int(len(self.times) * burn_in)
        gap = self.mean[start:] - self.skills[start:]
        return {p: float(gap[:, j].mean()) for j, p in enumerate(self.players)}


def aggregate(paths: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    mean = paths.mean(axis=0)
    low, high = np.percentile(paths, [2.5, 97.5], axis=0)
    # rounding can put the mean a few ulps outside a degenerate band
    return mean, np.minimum(low, mean), np.maximum(high, mean)


def run_simulation(scenario: SkillScenario, engine_config: EngineConfig, replications: int, seed: int) -> SimResult:
    if replications < 1:
        raise ValidationError(f"replications must be >= 1, got {replications}")
    config = engine_config.with_pool(scenario.players)
    histories, logs = [], []
    for rng in replication_rngs(seed, replications):
        log = generate_log(scenario, config.params, rng)
        histories.append(replay(log, config))
        logs.append(tuple(log))
    paths = np.stack([h.as_array(scenario.players)[1:] for h in histories])
    mean, low, high = aggregate(paths)
    return SimResult(
        players=scenario.players,
        times=tuple(range(1, scenario.horizon + 1)),
        histories=tuple(histories),
        logs=tuple(logs),
        skills=scenario.skill_matrix(),
        mean=mean,
        band_low=low,
        band_high=high,
        r_init=config.r_init,
        seed=seed,
    )


# -- one-step drift ----------------------------------------------------------

@dataclass(frozen=True)
class DriftEstimate:
    player: PlayerId
    gap: float
    mean: float
    stderr: float
    expected: Optional[float]
    replications: int

    @property
    def z(self) -> float:
        if self.expected is None or self.stderr == 0.0:
            return math.nan
        return (self.mean - self.expected) / self.stderr


def _opponent_sets(scenario: SkillScenario, player: PlayerId) -> list[tuple[PlayerId, ...]]:
    others = [p for p in scenario.players if p != player]
    return [tuple(c) for c in itertools.combinations(others, scenario.pairing.m - 1)]


def measure_drift(
    scenario: SkillScenario,
    engine_config: EngineConfig,
    player: PlayerId,
    replications: int,
    seed: int,
    max_expected_sets: int = 200,
) -> DriftEstimate:
    """Monte Carlo mean of one rating update for ``player`` from the initial state.

    Every replication plays one game at time 1 that includes ``player``; the
    opponents are drawn uniformly. The exact expectation ``K * E[score]`` from
    :func:`sdrating.oracle.expected_score`, averaged over opponent sets, is
    attached when the rating and generating models coincide.
    """
    if replications < 1:
        raise ValidationError(f"replications must be >= 1, got {replications}")
    config = engine_config.with_pool(scenario.players)
    ratings = init_ratings(config)
    skills = scenario.skills_at(1)
    sets = _opponent_sets(scenario, player)
    changes = np.empty(replications)
    for i, rng in enumerate(replication_rngs(seed, replications)):
        opponents = sets[rng.integers(len(sets))]
        participants = (player, *opponents)
        outcome = sample_outcome(scenario.model, participants, skills, config.params, rng)
        after = step(ratings, GameRecord(1, outcome), config)
        changes[i] = after[player] - ratings[player]

    expected = None
    same_model = config.model is scenario.model and config.model in SCORE_FUNCTIONS
    if same_model and len(sets) <= max_expected_sets:
        per_set = [
            oracle.expected_score(config.model, (player, *opp), ratings, skills, config.params)[player]
            for opp in sets
        ]
        expected = config.params.k_factor * math.fsum(per_set) / len(per_set)
    stderr = float(changes.std(ddof=1) / math.sqrt(replications)) if replications > 1 else math.nan
    return DriftEstimate(
        player=player,
        gap=skills[player] - ratings[player],
        mean=float(changes.mean()),
        stderr=stderr,
        expected=expected,
        replications=replications,
    )


# -- plot data ---------------------------------------------------------------

class PlotRow(NamedTuple):
    replication: Union[int, str]
    time: int
    player: PlayerId
    rating: float
    band_low: Optional[float] = None
    band_high: Optional[float] = None


AGGREGATE = "aggregate"
PLOT_COLUMNS = PlotRow._fields


def plot_data(result: SimResult, include_replications: bool = True) -> list[PlotRow]:
    """Long-format rows: one per (replication, time, player), then the aggregate rows."""
    rows = []
    if include_replications:
        for rep, hist in enumerate(result.histories):
            arr = hist.as_array(result.players)[1:]
            for ti, t in enumerate(result.times):
                for j, p in enumerate(result.players):
                    rows.append(PlotRow(rep, t, p, float(arr[ti, j])))
    for ti, t in enumerate(result.times):
        for j, p in enumerate(result.players):
            rows.append(PlotRow(
                AGGREGATE, t, p,
                float(result.mean[ti, j]), float(result.band_low[ti, j]), float(result.band_high[ti, j]),
            ))
    return rows


def aggregates_from_rows(rows: Sequence[PlotRow]) -> tuple[tuple[PlayerId, ...], tuple[int, ...], np.ndarray, np.ndarray, np.ndarray]:
    """Rebuild (players, times, mean, band_low, band_high) from aggregate rows."""
    agg = [r for r in rows if r.replication == AGGREGATE]
    players = tuple(dict.fromkeys(r.player for r in agg))
    times = tuple(dict.fromkeys(r.time for r in agg))
    col = {p: j for j, p in enumerate(players)}
    row = {t: i for i, t in enumerate(times)}
    shape = (len(times), len(players))
    mean, low, high = np.empty(shape), np.empty(shape), np.empty(shape)
    for r in agg:
        i, j = row[r.time], col[r.player]
        mean[i, j], low[i, j], high[i, j] = r.rating, r.band_low, r.band_high
    return players, times, mean, low, high


# -- scenario files ----------------------------------------------------------

def _skill_from_dict(entry: Mapping, where: str) -> SkillPath:
    kind = entry.get("kind", "constant")
    try:
        if kind == "constant":
            return Constant(float(entry["level"]))
        if kind == "step":
            return StepChange(float(entry["before"]), float(entry["after"]), int(entry["change_time"]))
        if kind == "piecewise_linear":
            return PiecewiseLinear(tuple((t, v) for t, v in entry["knots"]))
    except KeyError as exc:
        raise ValidationError(f"{where}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: {exc}") from None
    raise ValidationError(f"{where}.kind: unknown skill path {kind!r}")


def scenario_from_dict(data: Mapping) -> SkillScenario:
    """Build a scenario from its JSON form (see README for the schema)."""
    if not isinstance(data, Mapping):
        raise ValidationError("scenario must be a JSON object")
    try:
        players = tuple(data["players"])
    except KeyError:
        raise ValidationError("scenario: missing field 'players'") from None
    default = data.get("default_skill", {"kind": "constant", "level": 0.0})
    raw = data.get("skills", {})
    unknown = set(raw) - set(players)
    if unknown:
        raise ValidationError(f"skills: unknown players {sorted(unknown)}")
    skills = {p: _skill_from_dict(raw.get(p, default), f"skills.{p}") for p in players}
    pairing_raw = data.get("pairing", {"kind": "uniform_pairs"})
    if isinstance(pairing_raw, str):
        pairing_raw = {"kind": pairing_raw}
    pairing = Pairing(pairing_raw.get("kind", "uniform_pairs"), int(pairing_raw.get("m", 2)))
    horizon = data.get("horizon", 500)
    if not isinstance(horizon, int):
        raise ValidationError(f"horizon: expected an integer, got {horizon!r}")
    return SkillScenario(players, skills, pairing, horizon, data.get("model", "win_loss"))


def load_scenario(path: Union[str, Path]) -> tuple[SkillScenario, dict]:
    """Read a scenario file; returns the scenario and the raw mapping.

    The raw mapping carries the optional ``params``, ``replications`` and
    ``seed`` keys used by the command line.
    """
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    return scenario_from_dict(data), data
