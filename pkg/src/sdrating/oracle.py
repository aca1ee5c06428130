"""Brute-force reference machinery for checking the closed-form models.

Two independent routes to the quantities in :mod:`sdrating.models`:

* central finite differences of the log-likelihood, to check the scores;
* exact enumeration of the outcome space, with probabilities computed from
  first principles (plain sigmoids, the Plackett-Luce product, and a direct
  convolution of two Poisson laws rather than the Bessel series), to check
  expectations of the score.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .core import (
    DegenerateLikelihoodError,
    GameOutcome,
    Margin,
    Model,
    ModelMismatchError,
    ModelParams,
    PlayerId,
    Ranking,
    RatingVector,
    ScoreVector,
    SizeLimitError,
    ValidationError,
    WDLResult,
    WinDrawLoss,
    WinLoss,
)
from .models import LOG_LIKELIHOODS, SCORE_FUNCTIONS, ScoreFn

MAX_RANKING_SIZE = 8
DEFAULT_STEP = 1e-5
TAIL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class OutcomeSpace:
    """Every outcome of one game with its probability.

    ``tail_bound`` is an upper bound on the probability mass left out by
    truncation; it is zero for finite outcome spaces.
    """

    model: Model
    outcomes: tuple[tuple[GameOutcome, float], ...]
    tail_bound: float = 0.0

    def __len__(self) -> int:
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def total_mass(self) -> float:
        return math.fsum(p for _, p in self.outcomes)


def finite_diff_score(
    model: Model | str,
    ratings: RatingVector,
    outcome: GameOutcome,
    params: ModelParams,
    step: float = DEFAULT_STEP,
) -> ScoreVector:
    """Central-difference approximation of the score for every participant."""
    if not step > 0:
        raise ValidationError(f"step must be positive, got {step}")
    model = Model.parse(model)
    if model not in LOG_LIKELIHOODS:
        raise ModelMismatchError(f"{model.value} has no log-likelihood to differentiate")
    loglik = LOG_LIKELIHOODS[model]
    grads = {}
    for pid in outcome.participants:
        r = ratings[pid]
        up = loglik(ratings.updated({pid: r + step}), outcome, params)
        down = loglik(ratings.updated({pid: r - step}), outcome, params)
        if not (math.isfinite(up) and math.isfinite(down)):
            raise DegenerateLikelihoodError(f"log-likelihood is not finite around {pid}={r}")
        grads[pid] = (up - down) / (2.0 * step)
    return ScoreVector((pid, grads.get(pid, 0.0)) for pid in ratings)


def _logistic(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x)) if x > -700 else 0.0


def _poisson_log_pmf(k: np.ndarray, rate: float) -> np.ndarray:
    return k * math.log(rate) - rate - gammaln(k + 1)


def skellam_pmf_by_convolution(diffs: Sequence[int], x: float) -> np.ndarray:
    """P(Y_a - Y_b = d) for Poisson Y_a, Y_b with rates exp(x), exp(-x)."""
    lam_a, lam_b = math.exp(x), math.exp(-x)
    lam = max(lam_a, lam_b)
    diffs = np.asarray(diffs, dtype=int)
    n = int(lam + 20.0 * math.sqrt(lam) + 60) + int(np.abs(diffs).max(initial=0))
    k = np.arange(n)
    (lo_a, pa), (lo_b, pb) = (_nonzero_window(_poisson_log_pmf(k, rate)) for rate in (lam_a, lam_b))
    # lag j of the cross-correlation is sum_b P(Y_a = b + d) P(Y_b = b),
    # with d = lo_a - lo_b + j - (len(pb) - 1)
    full = np.correlate(pa, pb, mode="full")
    idx = diffs - (lo_a - lo_b) + len(pb) - 1
    inside = (idx >= 0) & (idx < len(full))
    out = np.zeros(len(diffs))
    out[inside] = full[idx[inside]]
    return out


def _nonzero_window(log_pmf: np.ndarray) -> tuple[int, np.ndarray]:
    # unimodal pmf: the entries that do not underflow form one contiguous block
    keep = np.flatnonzero(log_pmf > -745.0)
    lo, hi = int(keep[0]), int(keep[-1])
    return lo, np.exp(log_pmf[lo:hi + 1])


def _skellam_tail_bound(x: float, d_max: int, p_pos: float, p_neg: float) -> float:
    # I_{k+1}(2) <= I_k(2) / (k + 1), so each further step outward shrinks the
    # pmf by at least exp(+-x) / (k + 1): a geometric tail bound.
    bound = 0.0
    for rate, p_edge in ((math.exp(x), p_pos), (math.exp(-x), p_neg)):
        ratio = rate / (d_max + 1)
        if ratio >= 1.0:
            return math.inf
        bound += p_edge * ratio / (1.0 - ratio)
    return bound


def _margin_space(a: PlayerId, b: PlayerId, x: float, truncation: int | None) -> tuple[list, np.ndarray, float]:
    if truncation is not None:
        if truncation < 0:
            raise ValidationError(f"truncation must be non-negative, got {truncation}")
        d_max = int(truncation)
    else:
        d_max = 30
    while True:
        diffs = list(range(-d_max, d_max + 1))
        probs = skellam_pmf_by_convolution(diffs, x)
        bound = _skellam_tail_bound(x, d_max, probs[-1], probs[0])
        if truncation is not None or bound < TAIL_TOLERANCE:
            break
        d_max *= 2
    outcomes = [Margin(a, b, max(d, 0), max(-d, 0)) for d in diffs]
    return outcomes, probs, bound


def _plackett_luce_probability(strengths: Sequence[float]) -> float:
    # strengths are exp(alpha * r) in finishing order, already max-normalized
    prob = 1.0
    remaining = math.fsum(strengths)
    for w in strengths[:-1]:
        prob *= w / remaining
        remaining -= w
    return prob


def enumerate_outcomes(
    model: Model | str,
    participants: Sequence[PlayerId],
    ratings: RatingVector,
    params: ModelParams,
    truncation: int | None = None,
) -> OutcomeSpace:
    """Exhaustive list of outcomes of one game among ``participants``.

    For the margin model the point difference is truncated to
    ``[-truncation, truncation]``; with ``truncation=None`` the range grows
    until the omitted tail mass is provably below 1e-12.
    """
    model = Model.parse(model)
    participants = tuple(participants)
    ratings.require(participants)
    if len(set(participants)) != len(participants):
        raise ValidationError(f"duplicate participants {participants!r}")
    alpha = params.alpha
    if model is Model.RANKING:
        m = len(participants)
        if m < 2:
            raise ValidationError("a ranking needs at least two players")
        if m > MAX_RANKING_SIZE:
            raise SizeLimitError(f"{m}! rankings exceeds the enumeration cap of {MAX_RANKING_SIZE} players")
        top = max(alpha * ratings[p] for p in participants)
        weight = {p: math.exp(alpha * ratings[p] - top) for p in participants}
        outcomes = tuple(
            (Ranking(perm), _plackett_luce_probability([weight[p] for p in perm]))
            for perm in itertools.permutations(participants)
        )
        return OutcomeSpace(model, outcomes)

    if len(participants) != 2:
        raise ValidationError(f"{model.value} games have exactly two players, got {len(participants)}")
    a, b = participants
    x = alpha * (ratings[a] - ratings[b])
    if model is Model.WIN_LOSS:
        outcomes = ((WinLoss(a, b), _logistic(x)), (WinLoss(b, a), _logistic(-x)))
        return OutcomeSpace(model, outcomes)
    if model is Model.WIN_DRAW_LOSS:
        delta = params.delta
        upper, lower = _logistic(x - delta), _logistic(x + delta)
        outcomes = (
            (WinDrawLoss(a, b, WDLResult.A_WINS), upper),
            (WinDrawLoss(a, b, WDLResult.DRAW), lower - upper),
            (WinDrawLoss(a, b, WDLResult.B_WINS), 1.0 - lower),
        )
        if delta == 0.0:
            outcomes = tuple(o for o in outcomes if o[0].result is not WDLResult.DRAW)
        return OutcomeSpace(model, outcomes)
    if model is Model.MARGIN:
        margins, probs, bound = _margin_space(a, b, x, truncation)
        return OutcomeSpace(model, tuple(zip(margins, probs.tolist())), bound)
    raise ModelMismatchError(f"cannot enumerate outcomes for {model.value}")


def expected_score(
    model: Model | str,
    participants: Sequence[PlayerId],
    ratings_eval: RatingVector,
    ratings_truth: RatingVector,
    params: ModelParams,
    truncation: int | None = None,
    score_fn: ScoreFn | None = None,
) -> ScoreVector:
    """E[score at ``ratings_eval``] when outcomes are drawn at ``ratings_truth``.

    ``ratings_truth`` plays the role of the players' true skills. Passing the
    same vector twice gives the expectation under the model itself, which is
    zero.
    """
    model = Model.parse(model)
    space = enumerate_outcomes(model, participants, ratings_truth, params, truncation)
    fn = score_fn if score_fn is not None else SCORE_FUNCTIONS[model]
    terms: dict[PlayerId, list[float]] = {pid: [] for pid in ratings_eval}
    for outcome, prob in space:
        if prob == 0.0:
            continue
        s = fn(ratings_eval, outcome, params)
        for pid in participants:
            terms[pid].append(prob * s[pid])
    return ScoreVector((pid, math.fsum(v)) for pid, v in terms.items())
