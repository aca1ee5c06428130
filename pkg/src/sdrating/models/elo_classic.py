"""Classical Elo reference with the conventional constants."""

from __future__ import annotations

from ..core import RatingVector, WinLoss
from ._common import check_outcome

ELO_K = 16.0
ELO_BASE = 10.0
ELO_SCALE = 400.0
ELO_INIT = 1200.0


def elo_expected(r_a: float, r_b: float) -> float:
    """Expected outcome of a player rated ``r_a`` against one rated ``r_b``."""
    return 1.0 / (1.0 + ELO_BASE ** (-(r_a - r_b) / ELO_SCALE))


def elo_classic_update(ratings: RatingVector, outcome: WinLoss) -> RatingVector:
    check_outcome(outcome, WinLoss, "classical Elo")
    ratings.require(outcome.participants)
    r_w, r_l = ratings[outcome.winner], ratings[outcome.loser]
    return ratings.updated({
        outcome.winner: r_w + ELO_K * (1.0 - elo_expected(r_w, r_l)),
        outcome.loser: r_l + ELO_K * (0.0 - elo_expected(r_l, r_w)),
    })
