"""Score-driven rating system: Elo generalized to any outcome distribution.

Ratings move by ``K`` times the gradient of the outcome log-likelihood. Four
outcome models are provided (win/loss, margin of victory, win/draw/loss and
full rankings) alongside classical Elo, a brute-force oracle, and a simulator
for studying how ratings track true skills.
"""

from .core import (
    DegenerateLikelihoodError,
    GameRecord,
    LogOrderError,
    Margin,
    Model,
    ModelMismatchError,
    ModelParams,
    Ranking,
    RatingError,
    RatingHistory,
    RatingVector,
    ScoreVector,
    SizeLimitError,
    ValidationError,
    WDLResult,
    WinDrawLoss,
    WinLoss,
)
from .engine import EngineConfig, init_ratings, replay, step
from .models import log_likelihood, score

__version__ = "0.1.0"

__all__ = [
    "DegenerateLikelihoodError", "EngineConfig", "GameRecord", "LogOrderError", "Margin",
    "Model", "ModelMismatchError", "ModelParams", "Ranking", "RatingError", "RatingHistory",
    "RatingVector", "ScoreVector", "SizeLimitError", "ValidationError", "WDLResult",
    "WinDrawLoss", "WinLoss", "init_ratings", "log_likelihood", "replay", "score", "step",
]
