"""Ordered-logit win/draw/loss model with draw threshold ``delta``.

With x = alpha * (r_a - r_b):

    P(A wins) = sigmoid(x - delta)
    P(draw)   = sigmoid(delta - x) - sigmoid(-delta - x)
              = sinh(delta) / (cosh(delta) + cosh(x))
    P(B wins) = sigmoid(-x - delta)

``delta = 0`` removes draws entirely and recovers the win/loss model.
"""

from __future__ import annotations

import math

from ..core import (
    DegenerateLikelihoodError,
    ModelParams,
    RatingVector,
    ScoreVector,
    WDLResult,
    WinDrawLoss,
)
from ._common import LN2, check_outcome, log_cosh, log_sigmoid, logaddexp, scatter, sigmoid


def _check_draw(outcome: WinDrawLoss, params: ModelParams) -> None:
    if outcome.result is WDLResult.DRAW and params.delta == 0.0:
        raise DegenerateLikelihoodError(
            f"draw between {outcome.player_a} and {outcome.player_b} has zero probability when delta = 0"
        )


def log_draw_probability(x: float, delta: float) -> float:
    """ln P(draw), evaluated in log space so it never cancels or overflows."""
    if delta == 0.0:
        return -math.inf
    log_sinh_delta = delta + math.log(-math.expm1(-2.0 * delta)) - LN2
    return log_sinh_delta - logaddexp(log_cosh(delta), log_cosh(x))


def category_probabilities(x: float, delta: float) -> dict[WDLResult, float]:
    return {
        WDLResult.A_WINS: sigmoid(x - delta),
        WDLResult.DRAW: math.exp(log_draw_probability(x, delta)),
        WDLResult.B_WINS: sigmoid(-x - delta),
    }


def wdl_log_likelihood(ratings: RatingVector, outcome: WinDrawLoss, params: ModelParams) -> float:
    check_outcome(outcome, WinDrawLoss, "win/draw/loss")
    ratings.require(outcome.participants)
    _check_draw(outcome, params)
    x = params.alpha * (ratings[outcome.player_a] - ratings[outcome.player_b])
    if outcome.result is WDLResult.A_WINS:
        return log_sigmoid(x - params.delta)
    if outcome.result is WDLResult.B_WINS:
        return log_sigmoid(-x - params.delta)
    return log_draw_probability(x, params.delta)


def _draw_gradient(x: float, delta: float) -> float:
    # -sinh(x) / (cosh(delta) + cosh(x)), rewritten in exp(-|x|) to stay finite
    e = math.exp(-abs(x))
    value = (1.0 - e * e) / (1.0 + e * e + 2.0 * math.cosh(delta) * e)
    return -math.copysign(value, x) if x != 0.0 else 0.0


def wdl_score(ratings: RatingVector, outcome: WinDrawLoss, params: ModelParams) -> ScoreVector:
    check_outcome(outcome, WinDrawLoss, "win/draw/loss")
    ratings.require(outcome.participants)
    _check_draw(outcome, params)
    alpha, delta = params.alpha, params.delta
    x = alpha * (ratings[outcome.player_a] - ratings[outcome.player_b])
    if outcome.result is WDLResult.A_WINS:
        g = alpha * sigmoid(delta - x)
    elif outcome.result is WDLResult.B_WINS:
        g = -alpha * sigmoid(delta + x)
    else:
        g = alpha * _draw_gradient(x, delta)
    return scatter(ratings, {outcome.player_a: g, outcome.player_b: -g})
