import math

import numpy as np
import pytest

from sdrating import (
    GameRecord,
    Margin,
    Model,
    ModelParams,
    Ranking,
    RatingHistory,
    RatingVector,
    ValidationError,
    WDLResult,
    WinDrawLoss,
    WinLoss,
)


@pytest.mark.parametrize("bad", ["", "a b", "x\t", None, 3])
def test_player_id_rejected(bad):
    with pytest.raises(ValidationError):
        RatingVector({bad: 0.0})


@pytest.mark.parametrize("value", [math.inf, -math.inf, math.nan])
def test_rating_vector_rejects_non_finite(value):
    with pytest.raises(ValidationError):
        RatingVector({"A": value})


def test_rating_vector_rejects_duplicates():
    with pytest.raises(ValidationError):
        RatingVector([("A", 1.0), ("A", 2.0)])


def test_rating_vector_is_immutable_mapping():
    r = RatingVector({"A": 1.0, "B": -1.0})
    r2 = r.updated({"A": 3.0})
    assert r["A"] == 1.0 and r2["A"] == 3.0 and r2["B"] == -1.0
    assert r.mean() == 0.0
    with pytest.raises(TypeError):
        r["A"] = 2.0
    with pytest.raises(ValidationError):
        r.updated({"Z": 0.0})
    with pytest.raises(ValidationError):
        r.updated({"A": math.nan})


@pytest.mark.parametrize("make", [
    lambda: WinLoss("A", "A"),
    lambda: Margin("A", "A", 1, 0),
    lambda: Margin("A", "B", -1, 0),
    lambda: Margin("A", "B", 1.5, 0),
    lambda: WinDrawLoss("A", "A", "D"),
    lambda: WinDrawLoss("A", "B", "X"),
    lambda: Ranking(("A",)),
    lambda: Ranking(("A", "B", "A")),
    lambda: GameRecord(-1, WinLoss("A", "B")),
])
def test_outcome_invariants(make):
    with pytest.raises(ValidationError):
        make()


def test_ranking_rank_conversions():
    r = Ranking(["C", "A", "B"])
    assert r.ranked == ("C", "A", "B")
    assert r.ranks() == {"C": 1, "A": 2, "B": 3}
    assert r.rank_of("B") == 3
    assert Ranking.from_ranks({"A": 2, "B": 3, "C": 1}) == r
    with pytest.raises(ValidationError):
        Ranking.from_ranks({"A": 1, "B": 1})


def test_wdl_result_coerced_from_letter():
    assert WinDrawLoss("A", "B", "D").result is WDLResult.DRAW


@pytest.mark.parametrize("kwargs", [{"alpha": 0}, {"alpha": -1}, {"delta": -0.1}, {"k_factor": 0}, {"r_init": math.inf}])
def test_model_params_invariants(kwargs):
    with pytest.raises(ValidationError):
        ModelParams(**kwargs)


def test_model_parse():
    assert Model.parse("WDL") is Model.WIN_DRAW_LOSS
    with pytest.raises(ValidationError):
        Model.parse("probit")


def test_history_carries_ratings_forward():
    initial = RatingVector({"A": 0.0, "B": 0.0, "C": 0.0})
    h = RatingHistory(initial, (3, 7), ({"A": 1.0, "B": -1.0}, {"B": 0.5, "C": -0.5}))
    assert h.series("A") == [(3, 1.0), (7, 1.0)]
    assert h.series("C") == [(3, 0.0), (7, -0.5)]
    assert h.final() == RatingVector({"A": 1.0, "B": 0.5, "C": -0.5})
    assert h.at(0) == initial
    assert h.games_played() == {"A": 1, "B": 2, "C": 1}
    np.testing.assert_array_equal(h.as_array(["A", "B", "C"]), [[0, 0, 0], [1, -1, 0], [1, 0.5, -0.5]])
    assert [v["B"] for v in h.vectors()] == [-1.0, 0.5]
