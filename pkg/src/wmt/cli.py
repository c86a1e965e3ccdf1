"""Command-line front end.

Every subcommand prints its numbers with 17 significant digits and, when an
output path is given, writes deterministic JSON/CSV plus a run manifest
(`<output>.manifest.json`) recording the subcommand, resolved parameters,
seed, version, and timestamp: enough to reproduce the files byte for byte
with the same build (the manifest itself carries the only timestamp).

Exit codes: 0 success, 1 invalid input or infeasible profile, 2 numeric
non-convergence, 3 argument errors.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .core import from_reduced, make_weight_params
from .errors import ConvergenceError, DomainError
from .families import cc_phi, moser_profile, moser_value, cc_weighted_norm
from .functionals import QuadratureConfig, functional_i, functional_j
from .inequalities import concentration_level_cap, crossing_point, diagnose
from .optimize import (
    OptimizerConfig,
    beta_sweep,
    default_optimizer_grid,
    maximize,
    sweep_rows_to_csv,
)
from .profiles import load_profile, profile_to_json_dict, save_profile
from .serialize import dump_to, fmt_float
from .shooting import ShootingConfig, shoot
from .suites import run_inequality_suites

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_NO_CONVERGENCE = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits with 2
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunManifest:
    """Reproduction record written next to every output file."""

    subcommand: str
    parameters: dict
    seed: int | None
    version: str
    timestamp: str
    outputs: list[str]

    def to_json_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "seed": self.seed,
            "version": self.version,
            "timestamp": self.timestamp,
            "outputs": self.outputs,
        }


def _parse_betas(spec: str) -> list[float]:
    """`lo:hi:step` (inclusive upper end) or a comma-separated list."""
    try:
        if ":" in spec:
            lo, hi, step = (float(x) for x in spec.split(":"))
            if step <= 0 or hi < lo:
                raise ValueError
            count = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return [lo + i * step for i in range(count)]
        return [float(x) for x in spec.split(",") if x]
    except ValueError as exc:
        raise DomainError(f"cannot parse beta specification {spec!r}") from exc


def _manifest(args: argparse.Namespace, outputs: list[Path]) -> None:
    if not outputs:
        return
    params = {
        key: (str(val) if isinstance(val, Path) else val)
        for key, val in sorted(vars(args).items())
        if key != "func" and not key.startswith("_")
    }
    manifest = RunManifest(
        subcommand=args.subcommand,
        parameters=params,
        seed=getattr(args, "seed", None),
        version=__version__,
        timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(),
        outputs=[str(path) for path in outputs],
    )
    target = outputs[0]
    dump_to(target.with_name(target.name + ".manifest.json"), manifest.to_json_dict())


def _print_kv(pairs: list[tuple[str, object]]) -> None:
    for key, val in pairs:
        if isinstance(val, bool):
            text = "true" if val else "false"
        elif isinstance(val, float):
            text = fmt_float(val)
        elif val is None:
            text = "absent"
        else:
            text = str(val)
        print(f"{key} = {text}")


def _cmd_params(args) -> int:
    p = make_weight_params(args.beta)
    _print_kv([("beta", p.beta), ("gamma", p.gamma), ("alpha_beta", p.alpha_beta)])
    if args.out:
        dump_to(args.out, {"beta": p.beta, "gamma": p.gamma, "alpha_beta": p.alpha_beta})
        _manifest(args, [args.out])
    return EXIT_OK


def _cmd_eval(args) -> int:
    psi, beta = load_profile(args.profile)
    p = make_weight_params(beta)
    q = QuadratureConfig(nodes_per_cell=args.nodes_per_cell)
    report = functional_i(psi, p, q)
    j_value = functional_j(from_reduced(psi, p), p, q)
    _print_kv(
        [
            ("beta", beta),
            ("i", report.i_value),
            ("gamma", report.gamma_value),
            ("j", j_value),
            ("trunc", report.truncation_bound),
            ("feasible", report.feasible),
            ("certified", report.certified),
        ]
    )
    if args.out:
        doc = report.to_json_dict()
        doc["j"] = j_value
        dump_to(args.out, doc)
        _manifest(args, [args.out])
    if not report.feasible:
        return EXIT_INVALID_INPUT
    return EXIT_OK


def _cmd_moser(args) -> int:
    p = make_weight_params(args.beta)
    rows = []
    for k in (float(x) for x in args.k.split(",")):
        psi = moser_profile(k, p)
        rep = functional_i(psi, p)
        closed = moser_value(k)
        rows.append(
            {
                "k": k,
                "closed_form": closed,
                "quadrature": rep.i_value,
                "abs_diff": abs(rep.i_value - closed),
                "gamma": rep.gamma_value,
            }
        )
        print(
            f"k = {fmt_float(k)}: closed = {fmt_float(closed)}, quadrature = "
            f"{fmt_float(rep.i_value)}, gamma = {fmt_float(rep.gamma_value)}"
        )
    if args.out:
        dump_to(args.out, {"beta": args.beta, "rows": rows})
        _manifest(args, [args.out])
    return EXIT_OK


def _cmd_ccfun(args) -> int:
    p = make_weight_params(args.beta)
    rep = functional_i(cc_phi(p), p)
    norm = cc_weighted_norm(p)
    sigma_star = rep.i_value - concentration_level_cap()
    _print_kv(
        [
            ("beta", p.beta),
            ("i_value", rep.i_value),
            ("i1", norm.i1),
            ("i2", norm.i2),
            ("total", norm.total),
            ("sigma_star", sigma_star),
        ]
    )
    if args.out:
        dump_to(
            args.out,
            {
                "beta": p.beta,
                "i_value": rep.i_value,
                "i1": norm.i1,
                "i2": norm.i2,
                "total": norm.total,
                "sigma_star": sigma_star,
            },
        )
        _manifest(args, [args.out])
    return EXIT_OK


def _cmd_bounds(args) -> int:
    results = run_inequality_suites(seed=args.seed, trials=args.trials)
    total_violations = 0
    for res in results.values():
        total_violations += res.violations
        print(
            f"{res.name}: trials = {res.trials}, violations = {res.violations}, "
            f"worst margin = {fmt_float(res.worst_margin)}"
        )
    if args.out:
        dump_to(args.out, {name: r.to_json_dict() for name, r in results.items()})
        _manifest(args, [args.out])
    return EXIT_OK if total_violations == 0 else EXIT_NO_CONVERGENCE


def _cmd_diagnose(args) -> int:
    psi, beta = load_profile(args.profile)
    p = make_weight_params(beta)
    diag = diagnose(psi, p)
    _print_kv(sorted(diag.to_json_dict().items()))
    if args.out:
        dump_to(args.out, diag.to_json_dict())
        _manifest(args, [args.out])
    return EXIT_OK


def _cmd_optimize(args) -> int:
    p = make_weight_params(args.beta)
    grid = None
    if args.grid or args.tmax:
        grid = default_optimizer_grid(
            n=args.grid or 2048, t_max=args.tmax or 50.0, beta=args.beta
        )
    cfg = OptimizerConfig(grid=grid, restarts=args.restarts)
    result = None
    if args.restarts:
        result = beta_sweep([args.beta], cfg, seed=args.seed)[0]["_result"]
    if result is None:
        result = maximize(p, cfg, cc_phi(p))
    diag_a = crossing_point(result.profile, p)
    _print_kv(
        [
            ("beta", p.beta),
            ("i_value", result.i_value),
            ("gamma_value", result.gamma_value),
            ("iterations", result.iterations),
            ("converged", result.converged),
            ("stationarity_residual", result.stationarity_residual),
            ("crossing_a", diag_a),
        ]
    )
    outputs = []
    if args.out:
        base = Path(args.out)
        profile_path = base.with_name(base.name + ".profile.json")
        save_profile(result.profile, p.beta, profile_path)
        report = result.to_json_dict()
        report["crossing_a"] = diag_a
        dump_to(base, report)
        outputs = [base, profile_path]
        _manifest(args, outputs)
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def _cmd_sweep(args) -> int:
    betas = _parse_betas(args.betas)
    for beta in betas:
        if not 0.0 <= beta < 1.0:
            raise DomainError(f"beta must lie in [0, 1), got {beta}")
    args.beta_hint = betas[0] if betas else 0.0
    cfg = OptimizerConfig(restarts=args.restarts)
    rows = beta_sweep(betas, cfg, seed=args.seed)
    csv_text = sweep_rows_to_csv(rows)
    print(csv_text, end="")
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        _manifest(args, [Path(args.out)])
    if any(not row["converged"] for row in rows):
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _cmd_elshoot(args) -> int:
    p = make_weight_params(args.beta)
    cfg = ShootingConfig(
        lambda_init=args.lam,
        slope_coeff_init=args.slope,
        t_end=args.tend,
    )
    result = shoot(cfg, p)
    _print_kv(
        [
            ("beta", p.beta),
            ("lambda", result.lambda_),
            ("slope_coeff", result.slope_coeff),
            ("i_value", result.i_value),
            ("gamma_value", result.gamma_value),
            ("el_residual_norm", result.residual_norm),
            ("flux_residual", result.flux_residual),
            ("energy_residual", result.energy_residual),
            ("converged", result.converged),
        ]
    )
    if args.out:
        base = Path(args.out)
        doc = profile_to_json_dict(result.profile, p.beta)
        doc.update(result.to_json_dict())
        dump_to(base, doc)
        _manifest(args, [base])
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def build_parser() -> _Parser:
    parser = _Parser(prog="wmt", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    sp = sub.add_parser("params", help="problem constants for one beta")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_params)

    sp = sub.add_parser("eval", help="I/Gamma/J of a profile JSON file")
    sp.add_argument("--profile", type=Path, required=True)
    sp.add_argument("--nodes-per-cell", type=int, default=8)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("moser", help="closed form vs quadrature for a k list")
    sp.add_argument("--k", type=str, required=True, help="comma-separated k values")
    sp.add_argument("--beta", type=float, default=0.0)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_moser)

    sp = sub.add_parser("ccfun", help="witness value and norm decomposition")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_ccfun)

    sp = sub.add_parser("bounds", help="randomized inequality suites")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("diagnose", help="concentration diagnostics of a profile")
    sp.add_argument("--profile", type=Path, required=True)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_diagnose)

    sp = sub.add_parser("optimize", help="single constrained maximization")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--grid", type=int, default=None, help="node count")
    sp.add_argument("--tmax", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=0)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_optimize)

    sp = sub.add_parser("sweep", help="beta sweep CSV")
    sp.add_argument("--betas", type=str, required=True, help="lo:hi:step or list")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--restarts", type=int, default=3)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("elshoot", help="Euler-Lagrange shooting run")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--lam", type=float, default=25.0)
    sp.add_argument("--slope", type=float, default=0.35)
    sp.add_argument("--tend", type=float, default=60.0)
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=_cmd_elshoot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
