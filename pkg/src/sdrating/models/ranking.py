"""Plackett-Luce model for complete rankings of a subset of players.

Each place is filled by choosing among the remaining players with probability
proportional to exp(alpha * r). All sums of exponentials are carried as
suffix log-sum-exps so large ratings never overflow.
"""

from __future__ import annotations

import math

from ..core import ModelParams, Ranking, RatingVector, ScoreVector
from ._common import check_outcome, logaddexp, scatter


def _suffix_logsumexp(values: list[float]) -> list[float]:
    out = values[:]
    for p in range(len(values) - 2, -1, -1):
        out[p] = logaddexp(values[p], out[p + 1])
    return out


def _scaled(ratings: RatingVector, outcome: Ranking, params: ModelParams) -> list[float]:
    check_outcome(outcome, Ranking, "ranking")
    ratings.require(outcome.participants)
    return [params.alpha * ratings[pid] for pid in outcome.ranked]


def ranking_log_likelihood(ratings: RatingVector, outcome: Ranking, params: ModelParams) -> float:
    a = _scaled(ratings, outcome, params)
    lse = _suffix_logsumexp(a)
    return math.fsum(ap - lp for ap, lp in zip(a[:-1], lse[:-1]))


def ranking_score(ratings: RatingVector, outcome: Ranking, params: ModelParams) -> ScoreVector:
    a = _scaled(ratings, outcome, params)
    lse = _suffix_logsumexp(a)
    alpha = params.alpha
    grads = {}
    for p, pid in enumerate(outcome.ranked):
        # share of player p in every choice set it belonged to (places 1..p)
        share = math.fsum(math.exp(a[p] - lse[q]) for q in range(p + 1))
        grads[pid] = alpha * (1.0 - share)
    return scatter(ratings, grads)
