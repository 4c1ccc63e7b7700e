"""
Command-line experiment runner.

    quann select-pattern --q 10
    quann boolean-rep --g-table xor.csv
    quann dynamics --p 0.8918547337153693 --steps 11000 --drop 1000
    quann rqa --mode summary --radii sigma:0.5:2.0:0.1
    quann corr-dim --dims 3:9 --epochs 4
    quann rec-plot --radii sigma:2
    quann prob-scan --dims 3:8

Settings merge as built-in defaults, then --config FILE, then flags.
Exit codes: 0 ok, 2 verification failed, 3 guard or numerical limit,
64 usage, 65 bad input data, 1 anything unexpected.
"""
from __future__ import annotations
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .config_store import ensure_runtime_folders, load_settings, new_run_folder, settings_for
from .errors import ConfigError, QuannError
from .experiments.common import run_folder
from .experiments.dynamics import run_dynamics
from .experiments.patterns import run_boolean_rep, run_select_pattern
from .experiments.recurrence import run_corr_dim, run_prob_scan, run_rec_plot, run_rqa
from .logging_setup import setup_logging
from .state import ExperimentConfig

log = logging.getLogger(__name__)
runs_log = logging.getLogger("runs")

# flag dest -> settings key
_SETTING_FLAGS = ("preset", "arch", "p", "steps", "drop", "dim", "lag", "radii", "env",
                  "workers", "mode", "epochs", "epoch_size", "dims", "p_start", "p_stop",
                  "p_step", "out")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def _common(parser: argparse.ArgumentParser, config: bool = True) -> None:
    if config:
        parser.add_argument("--config", help="JSON settings file")
    parser.add_argument("--out", help="output folder (default runs/<timestamp>_<command>/)")
    parser.add_argument("--verbose", action="store_true", help="debug output on the console")
    parser.add_argument("--quiet", action="store_true", help="warnings and errors only")


def _network(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--preset", help="built-in network (example3)")
    group.add_argument("--arch", help="JSON architecture file")
    parser.add_argument("--p", type=float, help="firing probability of the initial network state")
    parser.add_argument("--steps", type=int, help="recorded iterations, counting l=0")
    parser.add_argument("--drop", type=int, help="leading iterations dropped as transients")
    parser.add_argument("--env", help="'uniform' or a 1-based environment eigenstate")
    parser.add_argument("--workers", type=int, help="processes for p sweeps")


def _embedding(parser: argparse.ArgumentParser, dims: bool = False) -> None:
    if dims:
        parser.add_argument("--dims", help="embedding dimensions A:B")
    else:
        parser.add_argument("--dim", type=int, help="embedding dimension")
    parser.add_argument("--lag", help="embedding lag, integer or 'auto'")
    parser.add_argument("--radii", help="r1,r2,... or sigma:START:STOP:STEP or sigma:X")


def _p_range(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p-start", dest="p_start", type=float)
    parser.add_argument("--p-stop", dest="p_stop", type=float)
    parser.add_argument("--p-step", dest="p_step", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quann", description="Quantum artificial neural network experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select-pattern", help="firing pattern selection on a feedforward network")
    _common(p)
    p.add_argument("--q", required=True, help="target firing pattern, e.g. 101")
    p.add_argument("--m", type=int, help="input neurons (must match len(q))")
    p.add_argument("--psi0", help="'uniform' (default), a bit pattern or a re,im CSV file")

    p = sub.add_parser("boolean-rep", help="Boolean function representation")
    _common(p, config=False)
    p.add_argument("--g-table", dest="g_table", required=True, help="CSV rows h,g(h) as bit strings")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)

    p = sub.add_parser("dynamics", help="mean firing energy series")
    _common(p)
    _network(p)
    _p_range(p)
    p.add_argument("--sweep", action="store_true", help="sweep p over --p-start..--p-stop")

    p = sub.add_parser("rqa", help="diagonal recurrence statistics")
    _common(p)
    _network(p)
    _embedding(p)
    p.add_argument("--mode", choices=["summary", "eigenstates", "epochs"])
    p.add_argument("--epochs", type=int)
    p.add_argument("--epoch-size", dest="epoch_size", type=int)

    p = sub.add_parser("corr-dim", help="correlation dimension per epoch and dimension")
    _common(p)
    _network(p)
    _embedding(p, dims=True)
    p.add_argument("--epochs", type=int)
    p.add_argument("--epoch-size", dest="epoch_size", type=int)

    p = sub.add_parser("rec-plot", help="recurrence plot as a PGM image")
    _common(p)
    _network(p)
    _embedding(p)

    p = sub.add_parser("prob-scan", help="probability of fully recurrent lines over p")
    _common(p)
    _network(p)
    _embedding(p, dims=True)
    _p_range(p)
    return parser


def _merged_config(args: argparse.Namespace) -> ExperimentConfig:
    settings = settings_for(load_settings(args.config), args.command, getattr(args, "mode", None))
    flags: Dict[str, Any] = {k: getattr(args, k) for k in _SETTING_FLAGS
                             if getattr(args, k, None) is not None}
    if "preset" in flags:
        settings["arch"] = None
    settings.update(flags)
    return ExperimentConfig.from_settings(args.command, settings)


def _out_dir(out: Optional[str], command: str) -> Path:
    if out:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        return path
    return new_run_folder(command)


def _dispatch(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "select-pattern":
        psi0 = args.psi0 or load_settings(args.config)["psi0"]
        out_dir = _out_dir(args.out, cmd)
        result = run_select_pattern(args.q, psi0, out_dir, m=args.m)
        runs_log.info("%s | q=%s | %s | %s", cmd, args.q, result.verdict, out_dir)
        return 0
    if cmd == "boolean-rep":
        out_dir = _out_dir(args.out, cmd)
        result = run_boolean_rep(Path(args.g_table), out_dir, n=args.n, m=args.m)
        runs_log.info("%s | %s | %s | %s", cmd, args.g_table, result.verdict, out_dir)
        return 0

    cfg = _merged_config(args)
    out_dir = run_folder(cfg)
    if cmd == "dynamics":
        sweep = args.sweep or any(getattr(args, k) is not None for k in ("p_start", "p_stop", "p_step"))
        result = run_dynamics(cfg, out_dir, sweep=sweep)
        runs_log.info("%s | %d p value(s) | %d rows | %s", cmd, result.p_values, result.rows, out_dir)
        return 0
    runner = {"rqa": run_rqa, "corr-dim": run_corr_dim, "rec-plot": run_rec_plot,
              "prob-scan": run_prob_scan}[cmd]
    result = runner(cfg, out_dir)
    runs_log.info("%s | p=%s | %d rows | %s", cmd, cfg.p, result.rows, out_dir)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code
    except SystemExit as e:  # --help
        return int(e.code or 0)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    ensure_runtime_folders()
    setup_logging(level)
    try:
        return _dispatch(args)
    except QuannError as e:
        log.error("%s failed: %s", args.command, e)
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code
    except Exception:
        log.exception("Unexpected failure in %s", args.command)
        return 1


if __name__ == "__main__":
    sys.exit(main())
