"""Command-line front end: ``rate``, ``verify`` and ``simulate``.

Exit codes: 0 success, 1 validation or ingestion error, 2 property failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from . import files, sim, verify
from .core import Model, ModelMismatchError, ModelParams, RatingError
from .engine import EngineConfig, replay
from .models import SCORE_DRIVEN_MODELS, SCORE_FUNCTIONS

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PROPERTY = 2

_PARAM_KEYS = {"alpha": "alpha", "delta": "delta", "k": "k_factor", "r_init": "r_init"}


class CliError(Exception):
    pass


def _read_json(path: str, what: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {what} {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{what} {path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise CliError(f"{what} {path}: expected a JSON object")
    return data


def resolve_params(args: argparse.Namespace, config: Mapping[str, Any]) -> ModelParams:
    """Flags override the config mapping, which overrides the defaults."""
    values = {}
    for key, field in _PARAM_KEYS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            values[field] = flag
        elif key in config:
            try:
                values[field] = float(config[key])
            except (TypeError, ValueError):
                raise CliError(f"config field '{key}': expected a number, got {config[key]!r}") from None
    return ModelParams(**values)


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", help="win_loss, margin, wdl, ranking or elo_classic")
    p.add_argument("--alpha", type=float, help="scaling constant (default 1)")
    p.add_argument("--delta", type=float, help="draw threshold for wdl (default 1)")
    p.add_argument("--k", type=float, help="K-factor (default 0.1)")
    p.add_argument("--r-init", dest="r_init", type=float, help="initial rating (default 0)")


def cmd_rate(args: argparse.Namespace) -> int:
    config = _read_json(args.config, "config") if args.config else {}
    try:
        log_model, records = files.read_game_log(args.log)
    except OSError as exc:
        raise CliError(f"cannot read log {args.log}: {exc.strerror}") from None
    model = Model.parse(args.model or config.get("model") or log_model)
    if files.log_schema(model) is not files.log_schema(log_model):
        raise ModelMismatchError(f"log declares #model={log_model.value}, cannot rate it with {model.value}")
    if args.pool:
        pool = files.read_pool(args.pool)
    else:
        pool = sorted({p for r in records for p in r.outcome.participants})
    engine_config = EngineConfig(model, resolve_params(args, config), frozenset(pool))
    history = replay(records, engine_config)

    table = files.ratings_table(history.final(), history.games_played())
    if args.out:
        Path(args.out).write_text(table)
    else:
        sys.stdout.write(table)
    if args.history:
        players = sorted(pool)
        rows = [
            sim.PlotRow(0, t, p, vec[p])
            for t, vec in zip(history.times, history.vectors())
            for p in players
        ]
        files.write_plot_data(rows, args.history)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    models = [Model.parse(m) for m in args.model] if args.model else list(SCORE_DRIVEN_MODELS)
    for m in models:
        if m not in SCORE_FUNCTIONS:
            raise CliError(f"verify covers score-driven models only, not {m.value}")
    scores = verify.sign_flip_mutation(SCORE_FUNCTIONS) if args.inject_sign_flip else None
    print(f"verifying {', '.join(m.value for m in models)}: cases={args.cases} seed={args.seed}")
    results = verify.run_suite(models, args.cases, args.seed, scores, progress=lambda r: print(r.line(), flush=True))
    failed = [r.name for r in results if not r.passed]
    summary = f"FAILED: {', '.join(failed)}" if failed else "all properties hold"
    print(summary)
    if args.out:
        Path(args.out).write_text("".join(r.line() + "\n" for r in results) + summary + "\n")
    return EXIT_PROPERTY if failed else EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        scenario, raw = sim.load_scenario(args.scenario)
    except OSError as exc:
        raise CliError(f"cannot read scenario {args.scenario}: {exc.strerror}") from None
    params = resolve_params(args, raw.get("params", {}))
    model = Model.parse(args.model or raw.get("rating_model") or scenario.model)
    engine_config = EngineConfig(model, params, frozenset(scenario.players))
    replications = args.replications if args.replications is not None else int(raw.get("replications", 100))
    seed = args.seed if args.seed is not None else int(raw.get("seed", 0))

    result = sim.run_simulation(scenario, engine_config, replications, seed)
    if args.out:
        files.write_plot_data(sim.plot_data(result, include_replications=not args.aggregate_only), args.out)
    if args.emit_log:
        files.write_game_log(result.logs[0], files.log_schema(scenario.model), args.emit_log)

    paths = result.paths()
    drift_mean = np.abs(paths.mean(axis=2) - result.r_init).max()
    print(f"scenario: {len(scenario.players)} players, {scenario.horizon} games, {replications} replications, "
          f"seed={seed}, rng={result.rng_algorithm}")
    print(f"conservation: max |mean rating - r_init| = {drift_mean:.3e}")
    gaps = result.long_run_gap()
    print("player,final_mean,band_low,band_high,band_width,long_run_gap")
    for j, p in enumerate(result.players):
        lo, hi = result.band_low[-1, j], result.band_high[-1, j]
        print(f"{p},{result.mean[-1, j]:.6f},{lo:.6f},{hi:.6f},{hi - lo:.6f},{gaps[p]:+.6f}")

    skills0 = scenario.skills_at(1)
    offset = [p for p in scenario.players if skills0[p] != result.r_init]
    if offset:
        print("drift (one step from the initial ratings):")
        for p in offset:
            est = sim.measure_drift(scenario, engine_config, p, args.drift_replications, seed)
            expected = "n/a" if est.expected is None else f"{est.expected:+.6f}"
            agrees = np.sign(est.mean) == np.sign(est.gap)
            print(f"  {p}: gap={est.gap:+.4f} mean={est.mean:+.6f} stderr={est.stderr:.6f} "
                  f"expected={expected} sign_matches_gap={'yes' if agrees else 'no'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sdrating", description="Score-driven rating system.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="replay a game log and print final ratings")
    p.add_argument("log", help="game log file")
    p.add_argument("--config", help="JSON file with model/alpha/delta/k/r_init")
    p.add_argument("--pool", help="file listing the player pool, one id per line")
    p.add_argument("--out", help="write the ratings table here instead of stdout")
    p.add_argument("--history", help="write the full rating history in plot-data format")
    p.add_argument("--seed", type=int, help=argparse.SUPPRESS)
    _add_model_flags(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--model", action="append", help="restrict to a model (repeatable)")
    p.add_argument("--cases", type=int, default=200, help="random cases per model and property")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write the report to this file")
    p.add_argument("--inject-sign-flip", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="simulate ratings from a skill scenario")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--replications", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="plot-data CSV to write")
    p.add_argument("--aggregate-only", action="store_true", help="omit per-replication rows from --out")
    p.add_argument("--emit-log", help="write the first replication's game log here")
    p.add_argument("--drift-replications", type=int, default=500)
    _add_model_flags(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, RatingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
