"""Margin-of-victory model: the point difference is Skellam distributed.

With x = alpha * (r_a - r_b) the two Poisson rates are exp(x) and exp(-x), so
the product of rates is 1 and the Bessel argument is the constant 2:

    ln f(d) = x * d - 2 cosh(x) + ln I_d(2)

Only the difference of the points enters the likelihood.
"""

from __future__ import annotations

import math

from ..core import DegenerateLikelihoodError, Margin, ModelParams, RatingVector, ScoreVector
from ._bessel import log_bessel_i2
from ._common import check_outcome, scatter


# beyond this gap exp(|x|) overflows a double
MAX_GAP = 700.0


def _check_gap(x: float) -> float:
    if not abs(x) <= MAX_GAP:
        raise DegenerateLikelihoodError(
            f"scaled rating gap {x:.6g} is out of range for the margin model; "
            "ratings have diverged (a smaller K keeps the update stable)"
        )
    return x


def skellam_log_pmf(d: int, x: float) -> float:
    """Log-probability of point difference ``d`` at scaled rating gap ``x``."""
    _check_gap(x)
    return x * d - 2.0 * math.cosh(x) + log_bessel_i2(d)


def expected_difference(x: float) -> float:
    return 2.0 * math.sinh(x)


def difference_variance(x: float) -> float:
    return 2.0 * math.cosh(x)


def margin_log_likelihood(ratings: RatingVector, outcome: Margin, params: ModelParams) -> float:
    check_outcome(outcome, Margin, "margin")
    ratings.require(outcome.participants)
    x = params.alpha * (ratings[outcome.player_a] - ratings[outcome.player_b])
    return skellam_log_pmf(outcome.difference, x)


def margin_score(ratings: RatingVector, outcome: Margin, params: ModelParams) -> ScoreVector:
    check_outcome(outcome, Margin, "margin")
    ratings.require(outcome.participants)
    alpha = params.alpha
    x = _check_gap(alpha * (ratings[outcome.player_a] - ratings[outcome.player_b]))
    # unbounded: a narrow win over a much weaker opponent is negative
    g = alpha * (outcome.difference - 2.0 * math.sinh(x))
    return scatter(ratings, {outcome.player_a: g, outcome.player_b: -g})
