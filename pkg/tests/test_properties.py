import math

from hypothesis import assume, given, settings, strategies as st

from sdrating import Margin, Model, ModelParams, Ranking, RatingVector, WDLResult, WinDrawLoss, WinLoss
from sdrating.models import LOG_LIKELIHOODS, SCORE_FUNCTIONS
from sdrating.oracle import finite_diff_score

ratings_value = st.floats(-4.0, 4.0, allow_nan=False)
params_st = st.builds(ModelParams, alpha=st.floats(0.2, 2.0), delta=st.floats(0.05, 2.0))


@st.composite
def cases(draw):
    model = draw(st.sampled_from([Model.WIN_LOSS, Model.MARGIN, Model.WIN_DRAW_LOSS, Model.RANKING]))
    n = draw(st.integers(2, 6))
    players = [f"P{i}" for i in range(n)]
    ratings = RatingVector(zip(players, draw(st.lists(ratings_value, min_size=n, max_size=n))))
    if model is Model.RANKING:
        m = draw(st.integers(2, n))
        outcome = Ranking(tuple(draw(st.permutations(players))[:m]))
    else:
        a, b = draw(st.permutations(players))[:2]
        if model is Model.WIN_LOSS:
            outcome = WinLoss(a, b)
        elif model is Model.MARGIN:
            outcome = Margin(a, b, draw(st.integers(0, 12)), draw(st.integers(0, 12)))
        else:
            outcome = WinDrawLoss(a, b, draw(st.sampled_from(list(WDLResult))))
    return model, ratings, outcome, draw(params_st)


@given(cases())
def test_scores_sum_to_zero(case):
    model, ratings, outcome, params = case
    s = SCORE_FUNCTIONS[model](ratings, outcome, params)
    assert abs(math.fsum(s.values())) <= 1e-12
    assert all(s[p] == 0.0 for p in ratings if p not in outcome.participants)


@given(cases(), st.floats(-50.0, 50.0))
def test_translation_invariance(case, shift):
    model, ratings, outcome, params = case
    s0 = SCORE_FUNCTIONS[model](ratings, outcome, params)
    s1 = SCORE_FUNCTIONS[model](ratings.shifted(shift), outcome, params)
    # shifting perturbs the rating differences by rounding of the order 50 * 2^-52
    assert all(abs(s0[p] - s1[p]) <= 1e-10 * max(1.0, abs(s0[p])) for p in ratings)


@settings(max_examples=200)
@given(cases())
def test_score_is_gradient(case):
    model, ratings, outcome, params = case
    s = SCORE_FUNCTIONS[model](ratings, outcome, params)
    fd = finite_diff_score(model, ratings, outcome, params)
    for p in outcome.participants:
        assert abs(s[p] - fd[p]) <= 1e-6 * max(1.0, abs(s[p]))


@given(cases())
def test_log_likelihood_is_non_positive(case):
    model, ratings, outcome, params = case
    assert LOG_LIKELIHOODS[model](ratings, outcome, params) <= 0.0


@given(cases())
def test_score_bounds(case):
    model, ratings, outcome, params = case
    alpha = params.alpha
    s = SCORE_FUNCTIONS[model](ratings, outcome, params)
    if model is Model.WIN_LOSS:
        assert 0.0 < s[outcome.winner] < alpha
    elif model is Model.WIN_DRAW_LOSS:
        a = s[outcome.player_a]
        low, high = {WDLResult.A_WINS: (0.0, alpha), WDLResult.DRAW: (-alpha, alpha), WDLResult.B_WINS: (-alpha, 0.0)}[outcome.result]
        assert low < a < high
    elif model is Model.RANKING:
        m = len(outcome.ranked)
        for rank, p in enumerate(outcome.ranked, start=1):
            if rank < m:
                assert alpha - alpha * rank < s[p] < alpha
            else:
                assert alpha - alpha * m < s[p] < 0.0


@given(cases(), st.floats(0.01, 3.0))
def test_score_decreases_in_own_rating(case, bump):
    model, ratings, outcome, params = case
    p = outcome.participants[0]
    assume(abs(ratings[p]) + bump < 5.0)
    before = SCORE_FUNCTIONS[model](ratings, outcome, params)[p]
    after = SCORE_FUNCTIONS[model](ratings.updated({p: ratings[p] + bump}), outcome, params)[p]
    assert after < before
