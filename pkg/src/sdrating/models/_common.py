"""Numerically stable scalar helpers and score-vector assembly."""

from __future__ import annotations

import math
from collections.abc import Mapping

from ..core import ModelMismatchError, PlayerId, RatingVector, ScoreVector

LN2 = math.log(2.0)


def sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def log_sigmoid(x: float) -> float:
    if x >= 0:
        return -math.log1p(math.exp(-x))
    return x - math.log1p(math.exp(x))


def logaddexp(a: float, b: float) -> float:
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def log_cosh(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - LN2


def check_outcome(outcome: object, expected: type, model: str) -> None:
    if not isinstance(outcome, expected):
        raise ModelMismatchError(
            f"{model} model cannot score a {type(outcome).__name__} outcome"
        )


def scatter(ratings: RatingVector, grads: Mapping[PlayerId, float]) -> ScoreVector:
    """Full score vector: ``grads`` for participants, exact zeros elsewhere."""
    return ScoreVector._trusted({pid: float(grads.get(pid, 0.0)) for pid in ratings})
