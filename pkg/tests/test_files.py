import io

import pytest

from sdrating import GameRecord, LogOrderError, Margin, Model, Ranking, ValidationError, WinDrawLoss, WinLoss
from sdrating.files import (
    LogFormatError,
    format_record,
    log_schema,
    parse_game_log,
    ratings_table,
    read_plot_data,
    read_pool,
    write_game_log,
)
from sdrating.sim import PlotRow


def parse(text):
    return parse_game_log(io.StringIO(text))


def test_parse_each_schema():
    assert parse("#model=win_loss\n1,A,B\n") == (Model.WIN_LOSS, [GameRecord(1, WinLoss("A", "B"))])
    assert parse("#model=margin\n3, A, 21, B, 17\n")[1] == [GameRecord(3, Margin("A", "B", 21, 17))]
    assert parse("#model=wdl\n1,A,B,d\n")[1] == [GameRecord(1, WinDrawLoss("A", "B", "D"))]
    assert parse("#model=ranking\n1,C>A>B\n")[1] == [GameRecord(1, Ranking(("C", "A", "B")))]


def test_comments_and_blank_lines_ignored():
    model, records = parse("# results\n\n#model=win_loss\n# round 1\n1,A,B\n\n2,B,A\n")
    assert len(records) == 2


def test_elo_log_uses_win_loss_schema():
    assert log_schema("elo_classic") is Model.WIN_LOSS
    model, records = parse("#model=elo_classic\n1,A,B\n")
    assert model is Model.ELO_CLASSIC and records[0].outcome == WinLoss("A", "B")


@pytest.mark.parametrize("text, line, field", [
    ("1,A,B\n", 1, None),
    ("#model=chess\n1,A,B\n", 1, "model"),
    ("#model=win_loss\n1,A,B\nx,A,B\n", 3, "t"),
    ("#model=win_loss\n1,A,B,C\n", 2, None),
    ("#model=win_loss\n1,A,A\n", 2, None),
    ("#model=margin\n1,A,-2,B,0\n", 2, "points_a"),
    ("#model=wdl\n1,A,B,X\n", 2, "result"),
    ("#model=ranking\n1,A>>B\n", 2, "ranking"),
    ("#model=ranking\n1,A\n", 2, None),
])
def test_format_errors_cite_line(text, line, field):
    with pytest.raises(LogFormatError) as info:
        parse(text)
    assert info.value.line == line
    assert info.value.field == field
    assert f"line {line}" in str(info.value)


def test_decreasing_time_cites_line():
    with pytest.raises(LogOrderError, match="line 4"):
        parse("#model=win_loss\n1,A,B\n5,A,B\n4,B,A\n")
    with pytest.raises(LogOrderError, match="line 3"):
        parse("#model=win_loss\n1,A,B\n1,B,A\n")


def test_write_then_parse_round_trip():
    records = [
        GameRecord(1, Ranking(("B", "A", "C"))),
        GameRecord(4, Ranking(("A", "C", "B"))),
    ]
    buf = io.StringIO()
    write_game_log(records, "ranking", buf)
    buf.seek(0)
    assert parse_game_log(buf) == (Model.RANKING, records)
    assert format_record(GameRecord(2, Margin("X", "Y", 3, 0))) == "2,X,3,Y,0"
    assert format_record(GameRecord(2, WinDrawLoss("X", "Y", "B"))) == "2,X,Y,B"


def test_reserved_characters_rejected_on_write():
    with pytest.raises(ValidationError):
        format_record(GameRecord(1, WinLoss("a,b", "c")))


def test_ratings_table_order():
    table = ratings_table({"B": 0.5, "A": 0.5, "C": -1.0}, {"A": 2, "B": 1})
    assert table.splitlines() == [
        "player,rating,games_played",
        "A,0.500000,2",
        "B,0.500000,1",
        "C,-1.000000,0",
    ]


def test_read_pool(tmp_path):
    path = tmp_path / "pool.txt"
    path.write_text("# players\nA\n\nB\n")
    assert read_pool(path) == ["A", "B"]
    path.write_text("A\nbad id\n")
    with pytest.raises(LogFormatError):
        read_pool(path)


def test_plot_data_header_checked():
    with pytest.raises(ValidationError):
        read_plot_data(io.StringIO("a,b,c\n"))
    rows = read_plot_data(io.StringIO("replication,time,player,rating,band_low,band_high\n0,1,A,0.25,,\n"))
    assert rows == [PlotRow(0, 1, "A", 0.25, None, None)]
