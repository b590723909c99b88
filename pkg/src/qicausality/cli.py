"""Command-line entry point: ``qic {bounds,simulate,fuzz,fig2}``.

Exit codes: 0 success, 1 property violation, 2 usage, 3 unsupported
parameter, 4 I/O failure. Probabilities are printed with 10 digits after the
decimal point. JSON outputs carry a run manifest under ``"manifest"``; CSV
files written with ``--out`` get a sibling ``<out>.manifest.json``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from . import __version__
from .bounds import bounds, naive_p, solve_p_prime, teleport_p
from .entropy import von_neumann_entropy
from .games import (
    GameConfig,
    PairedIC1,
    UnsupportedParameter,
    channel_strategy,
    naive_strategy,
    run_qic_v1,
    run_qic_v2,
    teleportation_strategy,
)
from .propcheck import SUITES, FuzzConfig, corrupted_entropy, run_suite

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3
EXIT_IO = 4

BOUNDS_HEADER = ("n", "m", "p_naive", "p_teleport", "p_prime", "q_prime")
FIG2_HEADER = ("n", "p_naive", "p_teleport", "p_prime")


class UsageError(Exception):
    pass


def fmt(p: float) -> str:
    return f"{p:.10f}"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _manifest(command: str, args: argparse.Namespace, started: str) -> dict:
    flags = {k: v for k, v in vars(args).items() if k not in ("func", "command")}
    return {
        "command": command,
        "flags": flags,
        "seed": flags.get("seed"),
        "toolkit_version": __version__,
        "started": started,
        "finished": _now(),
    }


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _strategy_arg(text: str) -> tuple:
    if text in ("naive", "teleport"):
        return (text,)
    if text.startswith("channel:"):
        try:
            lams = tuple(float(v) for v in text[len("channel:"):].split(","))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad lambda list in {text!r}")
        return ("channel", lams)
    raise argparse.ArgumentTypeError("strategy must be naive, teleport or channel:<l1,l2,...>")


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text)


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        _write_text(out, text)
    sys.stdout.write(text)


def _csv_text(header: Sequence[str], rows: list[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write_csv_with_manifest(out: str, text: str, manifest: dict) -> None:
    _write_text(out, text)
    _write_text(out + ".manifest.json", json.dumps(manifest, sort_keys=True, indent=2) + "\n")


def cmd_bounds(args: argparse.Namespace, started: str) -> int:
    ns = args.n_list if args.n_list is not None else ([args.n] if args.n is not None else [])
    if not ns:
        raise UsageError("need at least one n (--n-list or --n)")
    rows = []
    for n in ns:
        if n < 1 or not 0 <= args.m <= n:
            raise UsageError(f"invalid pair m={args.m}, n={n}")
        r = bounds(args.m, n)
        rows.append((n, args.m, fmt(r.p_naive), fmt(r.p_teleport), fmt(r.p_prime), fmt(r.q_prime)))
    text = _csv_text(BOUNDS_HEADER, rows)
    if args.out:
        _write_csv_with_manifest(args.out, text, _manifest("bounds", args, started))
    sys.stdout.write(text)
    return EXIT_OK


def _build_strategy(choice: tuple, n: int, m: int):
    kind = choice[0]
    if kind == "naive":
        return naive_strategy(n, m)
    if kind == "teleport":
        if m != 1:
            raise UnsupportedParameter("teleportation strategy needs m = 1")
        return teleportation_strategy(PairedIC1(n))
    lams = choice[1]
    if len(lams) != n:
        raise UsageError(f"channel strategy lists {len(lams)} lambdas for n={n}")
    return channel_strategy(lams)


def cmd_simulate(args: argparse.Namespace, started: str) -> int:
    mode = "exact" if args.mode == "exact" else "monte_carlo"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        cfg = GameConfig(args.n, args.m, args.trials, args.seed, args.version, mode)
    strategy = _build_strategy(args.strategy, args.n, args.m)
    run = run_qic_v1 if args.version == 1 else run_qic_v2
    res = run(strategy, cfg)
    payload = {
        "p_hat": float(fmt(res.p_hat)),
        "std_err": float(fmt(res.std_err)),
        "trials": res.trials,
        "mode": args.mode,
        "manifest": _manifest("simulate", args, started),
    }
    _emit_json(payload, args.out)
    return EXIT_OK


def cmd_fuzz(args: argparse.Namespace, started: str) -> int:
    cfg = FuzzConfig(args.trials, args.seed, args.max_dim)
    entropy = corrupted_entropy if args.corrupt_entropy else von_neumann_entropy
    violations = run_suite(args.suite, cfg, entropy, args.workers)
    payload = {
        "suite": args.suite,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "max_dim": cfg.max_subsystem_dim,
        "tolerance": cfg.tolerance,
        "violation_count": len(violations),
        "violations": [v.to_dict() for v in violations],
        "manifest": _manifest("fuzz", args, started),
    }
    _emit_json(payload, args.out)
    return EXIT_VIOLATION if violations else EXIT_OK


def fig2_rows(n_max: int) -> list[tuple]:
    return [(n, fmt(naive_p(1, n)), fmt(teleport_p(n)), fmt(solve_p_prime(1, n))) for n in range(2, n_max + 1)]


def cmd_fig2(args: argparse.Namespace, started: str) -> int:
    if args.n_max < 2:
        raise UsageError("--n-max must be >= 2")
    text = _csv_text(FIG2_HEADER, fig2_rows(args.n_max))
    _write_csv_with_manifest(args.out, text, _manifest("fig2", args, started))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qic", description="Bounds, simulations and entropy fuzzing for the QIC game.")
    p.add_argument("--version-info", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="CSV of P_N, P_T, P' and Q' for given m and n values")
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--n", type=int)
    b.add_argument("--n-list", type=_int_list)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("simulate", help="play the QIC game with a built-in strategy")
    s.add_argument("--strategy", type=_strategy_arg, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--mode", choices=("exact", "mc"), default="exact")
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--version", type=int, choices=(1, 2), default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate)

    f = sub.add_parser("fuzz", help="randomized entropic inequality checks")
    f.add_argument("--suite", choices=sorted(SUITES), required=True)
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--max-dim", type=int, choices=(2, 3, 4), default=4)
    f.add_argument("--workers", type=int, default=1)
    f.add_argument("--out")
    f.add_argument("--corrupt-entropy", action="store_true", help=argparse.SUPPRESS)
    f.set_defaults(func=cmd_fuzz)

    g = sub.add_parser("fig2", help="CSV of the m = 1 curves for n = 2..n-max")
    g.add_argument("--n-max", type=int, required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_fig2)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = _now()
    try:
        return args.func(args, started)
    except UnsupportedParameter as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (UsageError, ValueError) as exc:
        print(f"usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
