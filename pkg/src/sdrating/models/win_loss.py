"""Logistic win/loss model.

P(winner beats loser) = 1 / (1 + exp(-alpha * (r_winner - r_loser))).
"""

from __future__ import annotations

from ..core import ModelParams, RatingVector, ScoreVector, WinLoss
from ._common import check_outcome, log_sigmoid, scatter, sigmoid


def win_probability(r_a: float, r_b: float, alpha: float) -> float:
    """Probability that a player rated ``r_a`` beats one rated ``r_b``."""
    return sigmoid(alpha * (r_a - r_b))


def win_loss_log_likelihood(ratings: RatingVector, outcome: WinLoss, params: ModelParams) -> float:
    check_outcome(outcome, WinLoss, "win/loss")
    ratings.require(outcome.participants)
    x = params.alpha * (ratings[outcome.winner] - ratings[outcome.loser])
    return log_sigmoid(x)


def win_loss_score(ratings: RatingVector, outcome: WinLoss, params: ModelParams) -> ScoreVector:
    check_outcome(outcome, WinLoss, "win/loss")
    ratings.require(outcome.participants)
    alpha = params.alpha
    # d/dx ln sigmoid(x) = sigmoid(-x); bounded in (0, alpha) for the winner
    g = alpha * sigmoid(-alpha * (ratings[outcome.winner] - ratings[outcome.loser]))
    return scatter(ratings, {outcome.winner: g, outcome.loser: -g})
