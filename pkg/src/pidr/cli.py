"""Command-line front end.

Subcommands: ``sweep`` (CSV over an nbar grid), ``optimize`` (one strategy at
one operating point with the per-stage trace), ``validate`` (Monte Carlo
against the analytic error probability), ``bounds`` (benchmark table), and
``fig2`` (the four standard comparison CSVs).

All output is deterministic for fixed flags and seed: reals are formatted
``%.12e``, rows are explicitly sorted, files are written with LF newlines and
no timestamps.  Exit status is 0 on success, 1 on usage errors, 2 on
numerical failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Sequence

import numpy as np

from .bounds import gain_db, helstrom_bound, sql_limit
from .cascade import (
    nested_sequence,
    strategy_global,
    strategy_identical,
    strategy_nested,
)
from .errors import NumericalFailure, PidrError
from .model import DeviceParams, PRESETS, Priors, operating_point_from_nbar
from .montecarlo import simulate_cascade
from .numerics import Rng

SWEEP_HEADER = "nbar,strategy,segments,eta,nu,tau,xi,p0,pe,p_sql,p_helstrom,gain_db,fractions"

_FIG2_CURVES = [
    ("nested", 1), ("nested", 2), ("nested", 3), ("nested", 4), ("nested", 6),
    ("identical", 2), ("identical", 15), ("global", 4),
]


class UsageError(PidrError):
    """Invalid flag combination or value."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the contract wants 1
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _fmt(x: float) -> str:
    return "%.12e" % x


def _device_from_args(args: argparse.Namespace) -> DeviceParams:
    base = PRESETS[args.preset]
    return DeviceParams(
        eta=base.eta if args.eta is None else args.eta,
        nu=base.nu if args.nu is None else args.nu,
        tau=base.tau if args.tau is None else args.tau,
        xi=base.xi if args.xi is None else args.xi,
    )


def _add_device_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS), default="ideal")
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--xi", type=float, default=None)
    p.add_argument("--p0", type=float, default=0.5)


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nbar-min", type=float, default=0.05)
    p.add_argument("--nbar-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=60)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pidr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="CSV of error probabilities over an nbar grid")
    _add_grid_flags(p)
    p.add_argument("--strategy", action="append",
                   choices=["identical", "nested", "global"], default=None)
    p.add_argument("--segments", action="append", type=int, default=None)
    _add_device_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("optimize", help="one strategy at one operating point")
    p.add_argument("--nbar", type=float, required=True)
    p.add_argument("--strategy", choices=["identical", "nested", "global"],
                   required=True)
    p.add_argument("--segments", type=int, required=True)
    _add_device_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("validate", help="Monte Carlo check of the analytic P_E")
    p.add_argument("--nbar", type=float, required=True)
    p.add_argument("--strategy", choices=["identical", "nested", "global"],
                   required=True)
    p.add_argument("--segments", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    _add_device_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("bounds", help="Helstrom / SQL benchmark table")
    _add_grid_flags(p)
    p.add_argument("--p0", type=float, default=0.5)
    p.add_argument("--out", default=None)

    p = sub.add_parser("fig2", help="standard comparison curves (4 CSV files)")
    _add_grid_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    return parser


def _check_grid(args: argparse.Namespace) -> np.ndarray:
    if not args.nbar_min > 0.0:
        raise UsageError("--nbar-min must be > 0")
    if args.nbar_max < args.nbar_min:
        raise UsageError("--nbar-max must be >= --nbar-min")
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    return np.geomspace(args.nbar_min, args.nbar_max, args.points)


def _check_p0(p0: float) -> Priors:
    if not 0.0 < p0 < 1.0:
        raise UsageError("--p0 must be strictly inside (0, 1)")
    return Priors.from_p0(p0)


def _run_strategy(name: str, n: int, op, priors, params, rng: Rng):
    if n < 1:
        raise UsageError("--segments must be >= 1")
    if name == "identical":
        return strategy_identical(n, op, priors, params)
    if name == "nested":
        return strategy_nested(n, op, priors, params)
    return strategy_global(n, op, priors, params, rng)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def cmd_sweep(args: argparse.Namespace) -> int:
    grid = _check_grid(args)
    params = _device_from_args(args)
    priors = _check_p0(args.p0)
    if args.p0 != 0.5:
        raise UsageError("sweep reports gain over SQL, which is defined for "
                         "equal priors only; --p0 must be 0.5")
    strategies = args.strategy or ["identical"]
    segment_list = args.segments or [1]
    if any(n < 1 for n in segment_list):
        raise UsageError("--segments must be >= 1")
    pairs = sorted({(s, n) for s in strategies for n in segment_list})
    max_nested = max((n for s, n in pairs if s == "nested"), default=0)
    lines = [SWEEP_HEADER]
    for i, nbar in enumerate(float(v) for v in grid):
        op = operating_point_from_nbar(nbar)
        p_sql = sql_limit(nbar)
        p_hel = helstrom_bound(nbar, priors)
        rng = Rng(args.seed).split(i)
        nested_vals = (
            nested_sequence(max_nested, op, priors, params) if max_nested else []
        )
        for strat, n in pairs:
            if strat == "nested":
                partition, result = nested_vals[n - 1]
            else:
                partition, result = _run_strategy(strat, n, op, priors, params, rng)
            pe = result.p_error
            g = gain_db(pe, p_sql) if pe > 0.0 else math.inf
            lines.append(",".join([
                _fmt(nbar), strat, str(n),
                _fmt(params.eta), _fmt(params.nu), _fmt(params.tau), _fmt(params.xi),
                _fmt(priors.p0), _fmt(pe), _fmt(p_sql), _fmt(p_hel), _fmt(g),
                ";".join(_fmt(f) for f in partition.fractions),
            ]))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    if args.segments < 1:
        raise UsageError("--segments must be >= 1")
    params = _device_from_args(args)
    priors = _check_p0(args.p0)
    if args.nbar < 0.0:
        raise UsageError("--nbar must be >= 0")
    op = operating_point_from_nbar(args.nbar)
    partition, result = _run_strategy(
        args.strategy, args.segments, op, priors, params, Rng(args.seed)
    )
    lines = [
        f"strategy   : {args.strategy}",
        f"segments   : {args.segments}",
        f"nbar       : {_fmt(args.nbar)}",
        f"eta        : {_fmt(params.eta)}",
        f"nu         : {_fmt(params.nu)}",
        f"tau        : {_fmt(params.tau)}",
        f"xi         : {_fmt(params.xi)}",
        f"p0         : {_fmt(priors.p0)}",
        f"seed       : {args.seed}",
        "fractions  : " + ";".join(_fmt(f) for f in partition.fractions),
    ]
    for s in result.stages:
        beta = "noop" if s.noop else _fmt(s.beta_star)
        lines.append(
            f"stage {s.index}: alpha_i={_fmt(s.alpha_i)} p0_i={_fmt(s.p0_i)} "
            f"p1_i={_fmt(s.p1_i)} beta={beta} pe={_fmt(s.pe_stage)}"
        )
    lines.append(f"P_E        : {_fmt(result.p_error)}")
    lines.append(f"P_Helstrom : {_fmt(helstrom_bound(args.nbar, priors))}")
    if priors.p0 == 0.5:
        p_sql = sql_limit(args.nbar)
        lines.append(f"P_SQL      : {_fmt(p_sql)}")
        g = gain_db(result.p_error, p_sql) if result.p_error > 0.0 else math.inf
        lines.append(f"gain_dB    : {_fmt(g)}")
    else:
        lines.append("P_SQL      : n/a (equal priors only)")
        lines.append("gain_dB    : n/a (equal priors only)")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.segments < 1:
        raise UsageError("--segments must be >= 1")
    params = _device_from_args(args)
    priors = _check_p0(args.p0)
    if args.nbar < 0.0:
        raise UsageError("--nbar must be >= 0")
    op = operating_point_from_nbar(args.nbar)
    rng = Rng(args.seed)
    partition, result = _run_strategy(
        args.strategy, args.segments, op, priors, params, rng
    )
    mc = simulate_cascade(partition, op, priors, params, args.trials, rng)
    pe = result.p_error
    sigma = math.sqrt(max(pe * (1.0 - pe), 0.0) / args.trials)
    diff = abs(mc.p_hat - pe)
    ok = diff <= 4.0 * sigma if sigma > 0.0 else mc.errors in (0, args.trials)
    lines = [
        f"strategy    : {args.strategy}",
        f"segments    : {args.segments}",
        f"nbar        : {_fmt(args.nbar)}",
        f"trials      : {args.trials}",
        f"seed        : {args.seed}",
        "fractions   : " + ";".join(_fmt(f) for f in partition.fractions),
        f"analytic P_E: {_fmt(pe)}",
        f"mc p_hat    : {_fmt(mc.p_hat)}",
        f"mc std_err  : {_fmt(mc.std_err)}",
        f"|diff|      : {_fmt(diff)}",
        f"4*sigma     : {_fmt(4.0 * sigma)}",
        f"result      : {'PASS' if ok else 'FAIL'} (4-sigma criterion)",
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    grid = _check_grid(args)
    if not 0.0 <= args.p0 <= 1.0:
        raise UsageError("--p0 must lie in [0, 1]")
    priors = Priors.from_p0(args.p0)
    lines = ["nbar,p0,p_helstrom,p_sql"]
    for nbar in (float(v) for v in grid):
        p_sql = _fmt(sql_limit(nbar)) if args.p0 == 0.5 else "nan"
        lines.append(",".join([
            _fmt(nbar), _fmt(args.p0), _fmt(helstrom_bound(nbar, priors)), p_sql,
        ]))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def fig2_tables(grid: Sequence[float], seed: int) -> dict[str, list[str]]:
    """The four fig2 CSV bodies keyed by file stem."""
    priors = Priors.equal()
    curve_names = [f"{s}_{n}" for s, n in _FIG2_CURVES]
    tables: dict[str, list[str]] = {}
    for preset_name in ("ideal", "nonideal"):
        params = PRESETS[preset_name]
        err_lines = ["nbar,helstrom,sql," + ",".join(curve_names)]
        gain_lines = ["nbar,helstrom," + ",".join(curve_names)]
        for i, nbar in enumerate(grid):
            op = operating_point_from_nbar(nbar)
            p_sql = sql_limit(nbar)
            p_hel = helstrom_bound(nbar, priors)
            nested_vals = nested_sequence(6, op, priors, params)
            pes = []
            for strat, n in _FIG2_CURVES:
                if strat == "nested":
                    pes.append(nested_vals[n - 1][1].p_error)
                elif strat == "identical":
                    pes.append(strategy_identical(n, op, priors, params)[1].p_error)
                else:
                    rng = Rng(seed).split(i)
                    pes.append(strategy_global(n, op, priors, params, rng)[1].p_error)
            err_lines.append(",".join(
                [_fmt(nbar), _fmt(p_hel), _fmt(p_sql)] + [_fmt(p) for p in pes]
            ))
            gains = [gain_db(p, p_sql) if p > 0.0 else math.inf for p in pes]
            gain_lines.append(",".join(
                [_fmt(nbar), _fmt(gain_db(p_hel, p_sql) if p_hel > 0.0 else math.inf)]
                + [_fmt(g) for g in gains]
            ))
        tables[f"fig2_error_{preset_name}"] = err_lines
        tables[f"fig2_gain_{preset_name}"] = gain_lines
    return tables


def cmd_fig2(args: argparse.Namespace) -> int:
    grid = [float(v) for v in _check_grid(args)]
    os.makedirs(args.out, exist_ok=True)
    for stem, lines in fig2_tables(grid, args.seed).items():
        path = os.path.join(args.out, stem + ".csv")
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        sys.stdout.write(path + "\n")
    return 0


_COMMANDS = {
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "validate": cmd_validate,
    "bounds": cmd_bounds,
    "fig2": cmd_fig2,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except PidrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
