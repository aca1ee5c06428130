"""Sequential replay of a game log under a score-driven model or classical Elo.

Each game moves every participant by ``K * score``; everyone else keeps their
rating unchanged. The pool is fixed for the whole replay, and games sharing a
time index must be serialized by the caller.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from .core import (
    GameRecord,
    LogOrderError,
    Model,
    ModelMismatchError,
    ModelParams,
    PlayerId,
    RatingHistory,
    RatingVector,
    ValidationError,
    check_player_id,
)
from .models import ELO_INIT, OUTCOME_TYPES, SCORE_FUNCTIONS, elo_classic_update


@dataclass(frozen=True)
class EngineConfig:
    model: Model
    params: ModelParams = field(default_factory=ModelParams)
    player_pool: frozenset[PlayerId] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        pool = frozenset(self.player_pool)
        for pid in pool:
            check_player_id(pid)
        object.__setattr__(self, "player_pool", pool)

    @property
    def r_init(self) -> float:
        return ELO_INIT if self.model is Model.ELO_CLASSIC else self.params.r_init

    def with_pool(self, players: Iterable[PlayerId]) -> "EngineConfig":
        return EngineConfig(self.model, self.params, frozenset(players))


def init_ratings(config: EngineConfig) -> RatingVector:
    """Every player in the pool starts at the same rating."""
    if not config.player_pool:
        raise ValidationError("player pool is empty")
    return RatingVector.uniform(sorted(config.player_pool), config.r_init)


def _check_compatible(record: GameRecord, model: Model) -> None:
    expected = OUTCOME_TYPES[model]
    if not isinstance(record.outcome, expected):
        raise ModelMismatchError(
            f"time {record.time_index}: {type(record.outcome).__name__} outcome "
            f"cannot be rated by the {model.value} model (expects {expected.__name__})"
        )


def step(ratings: RatingVector, record: GameRecord, config: EngineConfig) -> RatingVector:
    """Apply one game to ``ratings`` and return the new vector."""
    _check_compatible(record, config.model)
    outcome = record.outcome
    if config.model is Model.ELO_CLASSIC:
        return elo_classic_update(ratings, outcome)
    grads = SCORE_FUNCTIONS[config.model](ratings, outcome, config.params)
    k = config.params.k_factor
    return ratings.updated({pid: ratings[pid] + k * grads[pid] for pid in outcome.participants})


def replay(log: Iterable[GameRecord], config: EngineConfig) -> RatingHistory:
    """Fold :func:`step` over ``log``, recording each game's rating changes."""
    ratings = init_ratings(config)
    initial = ratings
    times: list[int] = []
    changes: list[dict[PlayerId, float]] = []
    for record in log:
        if times and record.time_index <= times[-1]:
            raise LogOrderError(
                f"time index {record.time_index} does not follow {times[-1]}; "
                "records must be strictly increasing"
            )
        missing = [pid for pid in record.outcome.participants if pid not in config.player_pool]
        if missing:
            raise ValidationError(f"time {record.time_index}: players not in pool: {', '.join(missing)}")
        ratings = step(ratings, record, config)
        times.append(record.time_index)
        changes.append({pid: ratings[pid] for pid in record.outcome.participants})
    return RatingHistory(initial, tuple(times), tuple(changes))
