"""Outcome models: log-likelihoods and scores with respect to ratings."""

from __future__ import annotations

from typing import Callable

from ..core import (
    GameOutcome,
    Margin,
    Model,
    ModelMismatchError,
    ModelParams,
    Ranking,
    RatingVector,
    ScoreVector,
    WinDrawLoss,
    WinLoss,
)
from ._bessel import bessel_i2, log_bessel_i2
from ._common import log_sigmoid, sigmoid
from .elo_classic import ELO_BASE, ELO_INIT, ELO_K, ELO_SCALE, elo_classic_update, elo_expected
from .margin import margin_log_likelihood, margin_score, skellam_log_pmf
from .ranking import ranking_log_likelihood, ranking_score
from .wdl import category_probabilities, wdl_log_likelihood, wdl_score
from .win_loss import win_loss_log_likelihood, win_loss_score, win_probability

ScoreFn = Callable[[RatingVector, GameOutcome, ModelParams], ScoreVector]
LogLikFn = Callable[[RatingVector, GameOutcome, ModelParams], float]

OUTCOME_TYPES: dict[Model, type] = {
    Model.WIN_LOSS: WinLoss,
    Model.MARGIN: Margin,
    Model.WIN_DRAW_LOSS: WinDrawLoss,
    Model.RANKING: Ranking,
    Model.ELO_CLASSIC: WinLoss,
}

SCORE_FUNCTIONS: dict[Model, ScoreFn] = {
    Model.WIN_LOSS: win_loss_score,
    Model.MARGIN: margin_score,
    Model.WIN_DRAW_LOSS: wdl_score,
    Model.RANKING: ranking_score,
}

LOG_LIKELIHOODS: dict[Model, LogLikFn] = {
    Model.WIN_LOSS: win_loss_log_likelihood,
    Model.MARGIN: margin_log_likelihood,
    Model.WIN_DRAW_LOSS: wdl_log_likelihood,
    Model.RANKING: ranking_log_likelihood,
}

SCORE_DRIVEN_MODELS = tuple(SCORE_FUNCTIONS)


def _lookup(table: dict, model: Model | str):
    model = Model.parse(model)
    try:
        return table[model]
    except KeyError:
        raise ModelMismatchError(f"{model.value} has no log-likelihood or score") from None


def score(model: Model | str, ratings: RatingVector, outcome: GameOutcome, params: ModelParams) -> ScoreVector:
    return _lookup(SCORE_FUNCTIONS, model)(ratings, outcome, params)


def log_likelihood(model: Model | str, ratings: RatingVector, outcome: GameOutcome, params: ModelParams) -> float:
    return _lookup(LOG_LIKELIHOODS, model)(ratings, outcome, params)


__all__ = [
    "ELO_BASE", "ELO_INIT", "ELO_K", "ELO_SCALE",
    "LOG_LIKELIHOODS", "OUTCOME_TYPES", "SCORE_DRIVEN_MODELS", "SCORE_FUNCTIONS",
    "bessel_i2", "category_probabilities", "elo_classic_update", "elo_expected",
    "log_bessel_i2", "log_likelihood", "log_sigmoid", "margin_log_likelihood",
    "margin_score", "ranking_log_likelihood", "ranking_score", "score", "sigmoid",
    "skellam_log_pmf", "wdl_log_likelihood", "wdl_score", "win_loss_log_likelihood",
    "win_loss_score", "win_probability",
]
