"""Flat-file formats: game logs, rating tables and plot data.

Game log: one game per line, comma separated, preceded by a ``#model=<name>``
directive. Other lines starting with ``#`` and blank lines are ignored.

    win_loss  t,winner,loser
    margin    t,player_a,points_a,player_b,points_b
    wdl       t,player_a,player_b,result        (result is A, D or B)
    ranking   t,first>second>...>last
"""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import TextIO, Union

from .core import (
    GameRecord,
    LogOrderError,
    Margin,
    Model,
    PlayerId,
    Ranking,
    RatingError,
    ValidationError,
    WinDrawLoss,
    WinLoss,
)
from .sim import AGGREGATE, PLOT_COLUMNS, PlotRow

PathLike = Union[str, Path]

# outcome schema carried by each model's logs
LOG_SCHEMAS: dict[Model, tuple[str, ...]] = {
    Model.WIN_LOSS: ("t", "winner", "loser"),
    Model.MARGIN: ("t", "player_a", "points_a", "player_b", "points_b"),
    Model.WIN_DRAW_LOSS: ("t", "player_a", "player_b", "result"),
    Model.RANKING: ("t", "ranking"),
}
_SCHEMA_OF = {**{m: m for m in LOG_SCHEMAS}, Model.ELO_CLASSIC: Model.WIN_LOSS}
_RESERVED = set(",>#")


class LogFormatError(ValidationError):
    def __init__(self, line: int, field: str | None, message: str):
        self.line = line
        self.field = field
        where = f"line {line}" + (f", field '{field}'" if field else "")
        super().__init__(f"{where}: {message}")


def log_schema(model: Model | str) -> Model:
    """Outcome schema used by ``model`` (classical Elo reads win/loss logs)."""
    return _SCHEMA_OF[Model.parse(model)]


def _int_field(value: str, line: int, name: str, minimum: int = 0) -> int:
    try:
        n = int(value)
    except ValueError:
        raise LogFormatError(line, name, f"expected an integer, got {value!r}") from None
    if n < minimum:
        raise LogFormatError(line, name, f"must be >= {minimum}, got {n}")
    return n


def _player_field(value: str, line: int, name: str) -> PlayerId:
    if not value or any(c.isspace() for c in value):
        raise LogFormatError(line, name, f"invalid player id {value!r}")
    return value


def _parse_record(schema: Model, fields: list[str], line: int) -> GameRecord:
    names = LOG_SCHEMAS[schema]
    if len(fields) != len(names):
        raise LogFormatError(line, None, f"expected {len(names)} fields ({','.join(names)}), got {len(fields)}")
    t = _int_field(fields[0], line, "t")
    if schema is Model.WIN_LOSS:
        outcome = WinLoss(_player_field(fields[1], line, "winner"), _player_field(fields[2], line, "loser"))
    elif schema is Model.MARGIN:
        outcome = Margin(
            _player_field(fields[1], line, "player_a"),
            _player_field(fields[3], line, "player_b"),
            _int_field(fields[2], line, "points_a"),
            _int_field(fields[4], line, "points_b"),
        )
    elif schema is Model.WIN_DRAW_LOSS:
        result = fields[3].upper()
        if result not in ("A", "D", "B"):
            raise LogFormatError(line, "result", f"expected A, D or B, got {fields[3]!r}")
        outcome = WinDrawLoss(_player_field(fields[1], line, "player_a"), _player_field(fields[2], line, "player_b"), result)
    else:
        ranked = tuple(_player_field(p.strip(), line, "ranking") for p in fields[1].split(">"))
        outcome = Ranking(ranked)
    return GameRecord(t, outcome)


def parse_game_log(stream: Iterable[str]) -> tuple[Model, list[GameRecord]]:
    """Parse a game log; errors name the offending line and field."""
    model = None
    records: list[GameRecord] = []
    for lineno, raw in enumerate(stream, start=1):
        text = raw.strip()
        if not text:
            continue
        if text.startswith("#"):
            key, _, value = text[1:].partition("=")
            if key.strip().lower() == "model":
                if model is not None:
                    raise LogFormatError(lineno, "model", "duplicate #model directive")
                try:
                    model = Model.parse(value)
                except ValidationError as exc:
                    raise LogFormatError(lineno, "model", str(exc)) from None
            continue
        if model is None:
            raise LogFormatError(lineno, None, "missing '#model=<name>' header before the first record")
        fields = [f.strip() for f in text.split(",")]
        try:
            record = _parse_record(log_schema(model), fields, lineno)
        except LogFormatError:
            raise
        except RatingError as exc:
            raise LogFormatError(lineno, None, str(exc)) from None
        if records and record.time_index <= records[-1].time_index:
            raise LogOrderError(
                f"line {lineno}, field 't': time index {record.time_index} does not follow "
                f"{records[-1].time_index}; records must be strictly increasing"
            )
        records.append(record)
    if model is None:
        raise LogFormatError(1, "model", "missing '#model=<name>' header")
    return model, records


def read_game_log(path: PathLike) -> tuple[Model, list[GameRecord]]:
    with open(path, encoding="utf-8") as fh:
        return parse_game_log(fh)


def _check_writable(pid: PlayerId) -> PlayerId:
    if _RESERVED & set(pid):
        raise ValidationError(f"player id {pid!r} contains a character reserved by the log format")
    return pid


def format_record(record: GameRecord) -> str:
    o = record.outcome
    t = record.time_index
    if isinstance(o, WinLoss):
        fields = [_check_writable(o.winner), _check_writable(o.loser)]
    elif isinstance(o, Margin):
        fields = [_check_writable(o.player_a), str(o.points_a), _check_writable(o.player_b), str(o.points_b)]
    elif isinstance(o, WinDrawLoss):
        fields = [_check_writable(o.player_a), _check_writable(o.player_b), o.result.value]
    else:
        fields = [">".join(_check_writable(p) for p in o.ranked)]
    return ",".join([str(t), *fields])


def write_game_log(records: Iterable[GameRecord], model: Model | str, out: Union[PathLike, TextIO]) -> None:
    model = Model.parse(model)
    lines = [f"#model={model.value}", *(format_record(r) for r in records)]
    text = "\n".join(lines) + "\n"
    if isinstance(out, (str, Path)):
        Path(out).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def read_pool(path: PathLike) -> list[PlayerId]:
    """One player id per line; blank lines and ``#`` comments ignored."""
    pool = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        text = raw.strip()
        if text and not text.startswith("#"):
            pool.append(_player_field(text, lineno, "player"))
    return pool


def ratings_table(ratings: Mapping[PlayerId, float], games: Mapping[PlayerId, int]) -> str:
    """CSV of final ratings, highest first, ties broken by player id."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["player", "rating", "games_played"])
    for pid in sorted(ratings, key=lambda p: (-ratings[p], p)):
        writer.writerow([pid, f"{ratings[pid]:.6f}", games.get(pid, 0)])
    return buf.getvalue()


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_plot_data(rows: Iterable[PlotRow], out: Union[PathLike, TextIO]) -> None:
    """Long-format CSV at full float precision."""
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="") as fh:
            write_plot_data(rows, fh)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PLOT_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def read_plot_data(source: Union[PathLike, TextIO]) -> list[PlotRow]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8", newline="") as fh:
            return read_plot_data(fh)
    reader = csv.reader(source)
    header = next(reader, None)
    if tuple(header or ()) != PLOT_COLUMNS:
        raise ValidationError(f"plot data header must be {','.join(PLOT_COLUMNS)}, got {header}")
    rows = []
    for rep, t, player, rating, low, high in reader:
        rows.append(PlotRow(
            rep if rep == AGGREGATE else int(rep),
            int(t),
            player,
            float(rating),
            float(low) if low else None,
            float(high) if high else None,
        ))
    return rows
