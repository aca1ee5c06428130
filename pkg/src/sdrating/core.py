"""Domain types shared by every module: players, ratings, outcomes, histories.

No model math lives here. All types are immutable; constructing one with
violated invariants raises :class:`ValidationError`.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Union

import numpy as np

PlayerId = str


class RatingError(ValueError):
    """Base class for every error raised by this package."""


class ValidationError(RatingError):
    """An input violates a documented invariant."""


class ModelMismatchError(RatingError):
    """An outcome was fed to a model that cannot score it."""


class DegenerateLikelihoodError(RatingError):
    """The observed outcome has zero probability under the model."""


class LogOrderError(RatingError):
    """Game records are not in strictly increasing time order."""


class SizeLimitError(RatingError):
    """An enumeration would exceed the configured size cap."""


class Model(str, enum.Enum):
    WIN_LOSS = "win_loss"
    MARGIN = "margin"
    WIN_DRAW_LOSS = "wdl"
    RANKING = "ranking"
    ELO_CLASSIC = "elo_classic"

    @classmethod
    def parse(cls, name: Union[str, "Model"]) -> "Model":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValidationError(f"unknown model {name!r} (expected one of: {valid})") from None


def check_player_id(pid: object) -> PlayerId:
    if not isinstance(pid, str) or not pid or any(c.isspace() for c in pid):
        raise ValidationError(f"invalid player id {pid!r}: must be a non-empty string without whitespace")
    return pid


class _FrozenMap(Mapping):
    __slots__ = ("_data",)

    def __init__(self, entries: Union[Mapping[PlayerId, float], Iterable[tuple[PlayerId, float]]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data: dict[PlayerId, float] = {}
        for pid, value in items:
            check_player_id(pid)
            if pid in data:
                raise ValidationError(f"duplicate player {pid!r}")
            value = float(value)
            if not math.isfinite(value):
                raise ValidationError(f"non-finite value {value!r} for player {pid!r}")
            data[pid] = value
        self._data = data

    @classmethod
    def _trusted(cls, data: dict[PlayerId, float]):
        # keys already validated; only values need checking
        for pid, value in data.items():
            if not math.isfinite(value):
                raise ValidationError(f"non-finite value {value!r} for player {pid!r}")
        obj = cls.__new__(cls)
        obj._data = data
        return obj

    def __getitem__(self, pid: PlayerId) -> float:
        return self._data[pid]

    def __iter__(self) -> Iterator[PlayerId]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self._data!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, _FrozenMap):
            return type(self) is type(other) and self._data == other._data
        return NotImplemented

    def __hash__(self) -> int:
        return hash((type(self), frozenset(self._data.items())))

    def total(self) -> float:
        return math.fsum(self._data.values())


class RatingVector(_FrozenMap):
    """Current rating of every player in the pool."""

    __slots__ = ()

    @classmethod
    def uniform(cls, players: Iterable[PlayerId], value: float) -> "RatingVector":
        return cls((pid, value) for pid in players)

    def mean(self) -> float:
        if not self._data:
            raise ValidationError("mean of an empty rating vector")
        return self.total() / len(self._data)

    def updated(self, changes: Mapping[PlayerId, float]) -> "RatingVector":
        """Return a copy with the given entries replaced."""
        for pid in changes:
            if pid not in self._data:
                raise ValidationError(f"unknown player {pid!r}")
        merged = dict(self._data)
        merged.update((pid, float(v)) for pid, v in changes.items())
        return RatingVector._trusted(merged)

    def shifted(self, c: float) -> "RatingVector":
        return RatingVector._trusted({pid: r + c for pid, r in self._data.items()})

    def require(self, players: Iterable[PlayerId]) -> None:
        for pid in players:
            if pid not in self._data:
                raise ValidationError(f"unknown player {pid!r}")


class ScoreVector(_FrozenMap):
    """Gradient of an outcome's log-likelihood with respect to every rating.

    Non-participants carry an exact zero.
    """

    __slots__ = ()


class WDLResult(str, enum.Enum):
    A_WINS = "A"
    DRAW = "D"
    B_WINS = "B"


def _distinct_pair(a: PlayerId, b: PlayerId) -> None:
    check_player_id(a)
    check_player_id(b)
    if a == b:
        raise ValidationError(f"a game needs two distinct players, got {a!r} twice")


@dataclass(frozen=True)
class WinLoss:
    winner: PlayerId
    loser: PlayerId

    def __post_init__(self):
        _distinct_pair(self.winner, self.loser)

    @property
    def participants(self) -> tuple[PlayerId, ...]:
        return (self.winner, self.loser)


@dataclass(frozen=True)
class Margin:
    player_a: PlayerId
    player_b: PlayerId
    points_a: int
    points_b: int

    def __post_init__(self):
        _distinct_pair(self.player_a, self.player_b)
        for name in ("points_a", "points_b"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 0:
                raise ValidationError(f"{name} must be a non-negative integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @property
    def participants(self) -> tuple[PlayerId, ...]:
        return (self.player_a, self.player_b)

    @property
    def difference(self) -> int:
        return self.points_a - self.points_b


@dataclass(frozen=True)
class WinDrawLoss:
    player_a: PlayerId
    player_b: PlayerId
    result: WDLResult

    def __post_init__(self):
        _distinct_pair(self.player_a, self.player_b)
        try:
            object.__setattr__(self, "result", WDLResult(self.result))
        except ValueError:
            raise ValidationError(f"result must be one of A, D, B; got {self.result!r}") from None

    @property
    def participants(self) -> tuple[PlayerId, ...]:
        return (self.player_a, self.player_b)


@dataclass(frozen=True)
class Ranking:
    """A complete ranking of the participants, best first."""

    ranked: tuple[PlayerId, ...]

    def __post_init__(self):
        ranked = tuple(self.ranked)
        for pid in ranked:
            check_player_id(pid)
        if len(ranked) < 2:
            raise ValidationError("a ranking needs at least two players")
        if len(set(ranked)) != len(ranked):
            raise ValidationError(f"duplicate players in ranking {ranked!r}")
        object.__setattr__(self, "ranked", ranked)

    @property
    def participants(self) -> tuple[PlayerId, ...]:
        return self.ranked

    def rank_of(self, pid: PlayerId) -> int:
        """1-based finishing position of ``pid``."""
        return self.ranked.index(pid) + 1

    def ranks(self) -> dict[PlayerId, int]:
        return {pid: p for p, pid in enumerate(self.ranked, start=1)}

    @classmethod
    def from_ranks(cls, ranks: Mapping[PlayerId, int]) -> "Ranking":
        positions = sorted(ranks.values())
        if positions != list(range(1, len(ranks) + 1)):
            raise ValidationError(f"ranks must be a permutation of 1..{len(ranks)}, got {positions}")
        return cls(tuple(sorted(ranks, key=ranks.__getitem__)))


GameOutcome = Union[WinLoss, Margin, WinDrawLoss, Ranking]


@dataclass(frozen=True)
class GameRecord:
    time_index: int
    outcome: GameOutcome

    def __post_init__(self):
        t = self.time_index
        if isinstance(t, bool) or not isinstance(t, (int, np.integer)) or t < 0:
            raise ValidationError(f"time index must be a non-negative integer, got {t!r}")
        object.__setattr__(self, "time_index", int(t))


@dataclass(frozen=True)
class ModelParams:
    alpha: float = 1.0
    delta: float = 1.0
    k_factor: float = 0.1
    r_init: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "delta", "k_factor", "r_init"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.alpha <= 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}")
        if self.delta < 0:
            raise ValidationError(f"delta must be >= 0, got {self.delta}")
        if self.k_factor <= 0:
            raise ValidationError(f"k_factor must be > 0, got {self.k_factor}")


@dataclass(frozen=True)
class RatingHistory:
    """Ratings over a replayed log.

    Only the participants' new ratings are stored per game; full vectors are
    rebuilt on demand by carrying every other rating forward.
    """

    initial: RatingVector
    times: tuple[int, ...] = ()
    changes: tuple[Mapping[PlayerId, float], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if len(self.times) != len(self.changes):
            raise ValidationError("times and changes must have equal length")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def players(self) -> tuple[PlayerId, ...]:
        return tuple(self.initial)

    def vectors(self) -> Iterator[RatingVector]:
        """Yield the full rating vector after each game."""
        current = dict(self.initial)
        for change in self.changes:
            current.update(change)
            yield RatingVector._trusted(dict(current))

    def at(self, n_games: int) -> RatingVector:
        """Ratings after the first ``n_games`` games (0 gives the initial vector)."""
        if not 0 <= n_games <= len(self.times):
            raise IndexError(n_games)
        current = dict(self.initial)
        for change in self.changes[:n_games]:
            current.update(change)
        return RatingVector._trusted(current)

    def final(self) -> RatingVector:
        return self.at(len(self.times))

    def series(self, pid: PlayerId) -> list[tuple[int, float]]:
        """(time_index, rating after that game) for every game in the log."""
        rating = self.initial[pid]
        out = []
        for t, change in zip(self.times, self.changes):
            rating = change.get(pid, rating)
            out.append((t, rating))
        return out

    def games_played(self) -> dict[PlayerId, int]:
        counts = dict.fromkeys(self.initial, 0)
        for change in self.changes:
            for pid in change:
                counts[pid] += 1
        return counts

    def as_array(self, players: Iterable[PlayerId] | None = None) -> np.ndarray:
        """Array of shape (games + 1, players); row 0 holds the initial ratings."""
        order = list(self.players if players is None else players)
        col = {pid: j for j, pid in enumerate(order)}
        out = np.empty((len(self.times) + 1, len(order)))
        out[0] = [self.initial[pid] for pid in order]
        for row, change in enumerate(self.changes, start=1):
            out[row] = out[row - 1]
            for pid, r in change.items():
                if pid in col:
                    out[row, col[pid]] = r
        return out
