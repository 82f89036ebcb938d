"""Batch command-line front end.

Every subcommand prints a JSON (or per-check) summary to stdout and, when
an output directory is given (--out or LYAPUNOV_LAB_OUT), writes exactly
one manifest.json plus the data CSVs for the run. All CSV numbers carry 17
significant digits so re-parsing round-trips exactly; rerunning a command
with the same parameters and seed reproduces every emitted number bit for
bit (--no-timestamps makes the whole directory byte-identical).

Exit codes: 0 success, 1 failed verification or aborted run, 2 usage or
parameter error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from typing import Iterable, Optional, Sequence

import numpy as np

from . import __version__, bounds, chain, estimators, gaussian, recursion, verification
from .errors import (
    DegenerateDivisorError,
    MemoryBudgetError,
    TruncationBudgetError,
)
from .laws import RngStream, law_from_name
from .util import ordered_map

__all__ = ["RunManifest", "dispatch", "main"]


@dataclass
class RunManifest:
    """Reproducibility record written next to every run's data files."""

    command: str
    parameters: dict
    seed: int
    artifact_version: str
    started_at: Optional[str]
    finished_at: Optional[str]
    results: dict


def _fmt17(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt17(v) for v in row])


def _now(enabled: bool) -> Optional[str]:
    return datetime.now(timezone.utc).isoformat() if enabled else None


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (results dict, {filename: (header, rows)})


def _require_n(args) -> None:
    if args.n is None:
        raise ValueError("--n is required (on the command line or in the config file)")


def _cmd_simulate(args) -> tuple[dict, dict]:
    _require_n(args)
    law = law_from_name(args.law)
    rng = RngStream(args.seed, args.stream_id)
    if args.model == "exact":
        if args.law != "bernoulli":
            raise ValueError("exact integer mode is defined for the bernoulli law only")
        traj = recursion.run_exact(args.n, rng)
        series = traj.log_abs_series()
        results = {"model": "exact", "n": args.n, "log_abs_final": float(series[-1])}
        files = {"series.csv": (("step", "log_abs_value"), enumerate(series))}
    elif args.model == "vt":
        if args.law != "gaussian":
            raise ValueError("the division recursion draws gaussian coefficients; use --law gaussian")
        out = recursion.run_vt(args.n, rng)
        results = {"model": "vt", "n": args.n, "rate": float(out[-1]) / args.n}
        files = {"series.csv": (("step", "log_abs_value"), enumerate(out))}
    elif args.model == "fib":
        if args.law != "bernoulli":
            raise ValueError("the two-term recursion draws sign coefficients; use --law bernoulli")
        out = recursion.run_fibonacci(args.n, rng)
        results = {"model": "fib", "n": args.n, "rate": float(out[-1]) / args.n}
        files = {"series.csv": (("step", "log_abs_value"), enumerate(out))}
    else:
        run = chain.run_chain(law, args.n, rng, w=chain.WeightParameter(args.c), trunc_tol=args.trunc_tol)
        results = {
            "model": "chain",
            "n": args.n,
            "law": args.law,
            "c": args.c,
            "log_norm": run.final_state.log_norm,
            "support": int(run.final_state.coords.size),
            "dropped_mass": run.final_state.dropped_mass,
        }
        files = {
            "increments.csv": (("step", "increment"), enumerate(run.increments, start=1)),
            "weighted_offsets.csv": (
                ("checkpoint", "weighted_offset"),
                zip(run.checkpoint_steps, run.weighted_offsets),
            ),
            "tail_means.csv": (("index", "tail_mean"), enumerate(run.tail_means)),
        }
    return results, files


def _gamma_one(args, stream: int) -> estimators.GrowthEstimate:
    rng = RngStream(args.seed, stream)
    if args.model == "chain":
        law = law_from_name(args.law)
        run = chain.run_chain(law, args.n, rng, w=chain.WeightParameter(args.c))
        est = estimators.gamma_from_increments(run.increments, args.batch_length)
        if args.c > 0.0:
            offset = float(run.weighted_offsets[-1]) / args.n
            est = estimators.GrowthEstimate(
                est.gamma_hat + offset, est.stderr, est.n_steps, 1, estimators.Method.WEIGHTED_NORM
            )
        return est
    if args.model == "exact":
        traj = recursion.run_exact(args.n, rng)
        return estimators.gamma_from_last_coordinate(traj.log_abs_series(), args.window_fraction)
    if args.model == "fib":
        series = recursion.run_fibonacci(args.n, rng)
        return estimators.gamma_from_last_coordinate(
            series, args.window_fraction, method=estimators.Method.FIBONACCI_PAIR
        )
    series = recursion.run_vt(args.n, rng)
    return estimators.gamma_from_last_coordinate(
        series, args.window_fraction, method=estimators.Method.VT_SUM_SQUARES
    )


def _cmd_gamma(args) -> tuple[dict, dict]:
    _require_n(args)
    ests = ordered_map(lambda j: _gamma_one(args, j), range(args.trajectories), args.threads)
    est = estimators.pool_estimates(ests)
    results = {
        "gamma_hat": est.gamma_hat,
        "stderr": est.stderr,
        "n": est.n_steps,
        "method": est.method.value,
        "n_trajectories": est.n_trajectories,
        "law": args.law,
        "seed": args.seed,
    }
    return results, {}


def _cmd_alpha(args) -> tuple[dict, dict]:
    res = bounds.alpha_bound(args.sigma2, args.fourth_moment, args.zeta_sq_factor)
    return asdict(res), {}


def _cmd_eta(args) -> tuple[dict, dict]:
    res = gaussian.eta(args.quad_order, args.grid, args.convention)
    results = {
        "eta_hat": res.eta_hat,
        "argmax_rho": res.argmax_rho,
        "quad_order": res.quad_order,
        "grid_size": int(res.rho_grid.size),
    }
    files = {"eta_grid.csv": (("rho", "mean_f"), zip(res.rho_grid, res.mean_f))}
    return results, files


def _cmd_couple(args) -> tuple[dict, dict]:
    _require_n(args)
    trace = gaussian.couple(args.n, RngStream(args.seed, args.stream_id), args.rho0)
    results = {
        "mean_log_b": trace.mean_log_b,
        "final_log_a2": float(trace.log_a2[-1]),
        "final_rho": float(trace.rho[-1]),
        "n": args.n,
        "rho0": args.rho0,
    }
    files = {
        "trace.csv": (
            ("step", "rho", "log_a2", "log_b"),
            zip(range(args.n + 1), trace.rho, trace.log_a2, trace.log_b),
        )
    }
    return results, files


def _cmd_lo(args) -> tuple[dict, dict]:
    coeffs = [int(tok) for tok in args.coeffs.split(",") if tok.strip()]
    res = bounds.lo_max_atom(coeffs)
    results = {
        "k": res.k,
        "coefficients": list(res.coefficients),
        "max_atom": res.atom_string(),
        "max_atom_float": float(res.max_atom),
    }
    return results, {}


def _cmd_tails(args) -> tuple[dict, dict]:
    law = law_from_name(args.law)
    stats = verification.tail_statistics(
        law, args.n, args.chains, args.seed, args.max_index, threads=args.threads
    )
    results = {
        "alpha": stats["alpha"],
        "max_z": stats["max_z"],
        "passed": stats["passed"],
        "chains": args.chains,
        "n": args.n,
    }
    files = {
        "tails.csv": (
            ("index", "tail_mean", "alpha_power", "stderr"),
            zip(stats["indices"], stats["means"], stats["alpha_powers"], stats["stderrs"]),
        )
    }
    return results, files


def _cmd_verify(args) -> tuple[dict, dict]:
    checks = verification.run_suite(args.suite, args.seed, args.threads)
    for cr in checks:
        print(verification.format_line(cr))
    failed = sum(1 for c in checks if not c.passed)
    print(f"verify --suite {args.suite}: {len(checks) - failed}/{len(checks)} checks passed")
    results = {"suite": args.suite, "checks_total": len(checks), "checks_failed": failed}
    files = {
        "checks.csv": (
            ("name", "expected", "observed", "tolerance", "passed"),
            [(c.name, c.expected, c.observed, c.tolerance, c.passed) for c in checks],
        )
    }
    return results, files


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser, seed_default: int = 0) -> None:
    p.add_argument("--seed", type=int, default=seed_default, help="64-bit unsigned seed")
    p.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    p.add_argument("--out", type=str, default=None, help="output directory (default: $LYAPUNOV_LAB_OUT)")
    p.add_argument("--config", type=str, default=None, help="JSON file of parameter defaults; flags win")
    p.add_argument("--no-timestamps", action="store_true", help="omit timestamps for byte-identical reruns")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lyapunov-lab",
        description="Simulate random full-history linear recursions and verify their growth-rate laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one trajectory of a model and dump its series")
    p.add_argument("--model", choices=["exact", "vt", "fib", "chain"], required=True)
    p.add_argument("--law", choices=["bernoulli", "gaussian"], default="bernoulli")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--stream-id", type=int, default=0)
    p.add_argument("--c", type=float, default=0.0, help="weight exponent (chain model)")
    p.add_argument("--trunc-tol", type=float, default=chain.DEFAULT_TRUNC_TOL)
    _add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("gamma", help="estimate a growth exponent with a confidence interval")
    p.add_argument("--model", choices=["chain", "exact", "fib", "vt"], required=True)
    p.add_argument("--law", choices=["bernoulli", "gaussian"], default="bernoulli")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--trajectories", type=int, default=1)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--batch-length", type=int, default=None)
    p.add_argument("--window-fraction", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("alpha", help="contraction constant for given moments")
    p.add_argument("--sigma2", type=float, required=True)
    p.add_argument("--fourth-moment", type=float, required=True)
    p.add_argument("--zeta-sq-factor", type=float, default=7.0)
    _add_common(p)
    p.set_defaults(func=_cmd_alpha)

    p = sub.add_parser("eta", help="worst-case expected contraction by quadrature")
    p.add_argument("--quad-order", type=int, default=80)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--convention", choices=["minus", "plus"], default="minus")
    _add_common(p)
    p.set_defaults(func=_cmd_eta)

    p = sub.add_parser("couple", help="two-chain coupling trace")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--rho0", type=float, default=0.0)
    p.add_argument("--stream-id", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_couple)

    p = sub.add_parser("lo", help="exact largest atom of a signed integer sum")
    p.add_argument("--coeffs", type=str, required=True, help="comma-separated nonzero integers")
    _add_common(p)
    p.set_defaults(func=_cmd_lo)

    p = sub.add_parser("tails", help="coordinate tail means across chains vs the alpha^i bound")
    p.add_argument("--law", choices=["bernoulli", "gaussian"], default="bernoulli")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--chains", type=int, default=100)
    p.add_argument("--max-index", type=int, default=50)
    _add_common(p)
    p.set_defaults(func=_cmd_tails)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument(
        "--suite",
        choices=["paper-constants", "inequalities", "consistency", "all"],
        default="all",
    )
    _add_common(p, seed_default=verification.DEFAULT_SEED)
    p.set_defaults(func=_cmd_verify)

    return parser


def _subcommand_defaults(parser: argparse.ArgumentParser, command: str) -> dict:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            sub = action.choices[command]
            return {a.dest: a.default for a in sub._actions if a.dest != "help"}
    return {}


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill parameters the command line left at their defaults; flags win."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise ValueError("config file must hold a JSON object of parameter values")
    defaults = _subcommand_defaults(parser, args.command)
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise ValueError(f"config key {key!r} is not a parameter of this command")
        if getattr(args, dest) == defaults.get(dest):
            setattr(args, dest, value)


def dispatch(argv: Sequence[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    started = _now(not args.no_timestamps)
    try:
        _apply_config(args, parser)
        results, files = args.func(args)
    except (ValueError, MemoryBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateDivisorError, TruncationBudgetError) as exc:
        print(f"run aborted: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3

    if args.command != "verify":
        print(json.dumps(results, sort_keys=True, indent=2))

    out_dir = args.out or os.environ.get("LYAPUNOV_LAB_OUT")
    if out_dir:
        try:
            os.makedirs(out_dir, exist_ok=True)
            for name, (header, rows) in files.items():
                _write_csv(os.path.join(out_dir, name), header, rows)
            params = {
                k: v
                for k, v in vars(args).items()
                if k not in ("func", "out", "config", "no_timestamps", "command")
            }
            manifest = RunManifest(
                command=args.command,
                parameters=params,
                seed=args.seed,
                artifact_version=__version__,
                started_at=started,
                finished_at=_now(not args.no_timestamps),
                results=results,
            )
            with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
                json.dump(asdict(manifest), fh, sort_keys=True, indent=2)
                fh.write("\n")
        except OSError as exc:
            print(f"i/o error: {exc}", file=sys.stderr)
            return 3

    if args.command == "verify" and results["checks_failed"] > 0:
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))
