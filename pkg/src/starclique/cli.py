"""Command-line interface: simulations, spectra, optimal times, phase
diagrams, and cross-evaluator verification, all emitting machine-readable
files.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 resource budget exceeded.  Output files are written to a temporary name
and renamed into place, so a partial file is never left behind; nothing is
written at all on a configuration error.  Relative --out paths resolve
against $STARCLIQUE_OUT_DIR when it is set.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import asymptotics as asym
from . import collapsed as cw
from . import full_walk as fw
from .graph import ArcClass, LeafPhase, build_graph, leaves_from_alpha
from .spectral import EigenbasisEvaluator, audit_closed_forms
from .trace import ProbabilityTrace
from .verify import run_checks

DEFAULT_ARC_BUDGET = 10**7

_MODES = ("full", "collapsed", "closed", "asymptotic")
_PHASES = {"reverse": LeafPhase.REVERSAL, "plain": LeafPhase.PLAIN}


class ConfigError(Exception):
    """Invalid command configuration; maps to exit code 2."""


class ArcBudgetError(Exception):
    """Arc count beyond the configured budget; maps to exit code 3."""


@dataclass(frozen=True)
class Sizes:
    n: int
    m: int
    alpha: float | None


def _resolve_sizes(args: argparse.Namespace) -> Sizes:
    if args.n is None:
        raise ConfigError("--n is required")
    if args.n < 3:
        raise ConfigError(f"--n must be at least 3, got {args.n}")
    if args.alpha is not None and args.m is not None:
        raise ConfigError("--alpha and --m are mutually exclusive")
    if args.alpha is None and args.m is None:
        raise ConfigError("one of --alpha or --m is required")
    if args.alpha is not None:
        if args.alpha < 0:
            raise ConfigError(f"--alpha must be nonnegative, got {args.alpha}")
        return Sizes(n=args.n, m=leaves_from_alpha(args.n, args.alpha), alpha=args.alpha)
    if args.m < 1:
        raise ConfigError(f"--m must be at least 1, got {args.m}")
    return Sizes(n=args.n, m=args.m, alpha=None)


def _check_arc_budget(sizes: Sizes, budget: int) -> None:
    arcs = sizes.n * (sizes.n - 1) + 2 * sizes.m
    if arcs > budget:
        raise ArcBudgetError(
            f"full evaluation needs {arcs} arcs, beyond the budget of {budget}; "
            "raise --arc-budget or use --mode collapsed"
        )


def _out_path(args: argparse.Namespace, default_name: str) -> str:
    path = args.out if args.out else default_name
    if not os.path.isabs(path):
        path = os.path.join(os.environ.get("STARCLIQUE_OUT_DIR", "."), path)
    return path


def _atomic_write(path: str, write) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".starclique-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as stream:
            write(stream)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _trace_metadata(sizes: Sizes, mode: str, phase: LeafPhase) -> dict[str, str]:
    return {
        "n": str(sizes.n),
        "m": str(sizes.m),
        "alpha": "" if sizes.alpha is None else repr(float(sizes.alpha)),
        "mode": mode,
        "leaf_phase": phase.value,
        "version": __version__,
    }


def _write_trace(args: argparse.Namespace, trace: ProbabilityTrace, name: str) -> str:
    fmt = args.format or "csv"
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}")
    path = _out_path(args, f"{name}.{fmt}")
    _atomic_write(path, trace.to_csv if fmt == "csv" else trace.to_json)
    return path


# ---------------------------------------------------------------------------
# commands


def _cmd_simulate(args: argparse.Namespace) -> int:
    sizes = _resolve_sizes(args)
    if args.steps is None or args.steps < 1:
        raise ConfigError("--steps must be at least 1")
    if args.mode not in _MODES:
        raise ConfigError(f"unknown mode {args.mode!r}")
    phase = _PHASES[args.leaf_phase]
    steps = args.steps

    if args.mode == "full":
        _check_arc_budget(sizes, args.arc_budget)
        graph = build_graph(sizes.n, sizes.m)
        trace = fw.evolve(graph, fw.initial_state(graph), steps, phase)
    elif args.mode == "collapsed":
        ops = cw.build_reduced_operators(sizes.n, sizes.m, phase)
        trace = cw.evolve_collapsed(
            ops, cw.collapsed_initial_state(sizes.n, sizes.m), steps
        )
    elif args.mode == "closed":
        if phase is not LeafPhase.REVERSAL:
            raise ConfigError("closed mode evaluates the phase-reversal walk only")
        evaluator = EigenbasisEvaluator(sizes.n, sizes.m)
        times = np.arange(steps + 1)
        states = evaluator.state_series(times)
        clique_in = states[:, ArcClass.CLIQUE_IN]
        star_in = states[:, ArcClass.STAR_IN]
        trace = ProbabilityTrace(
            times=times.astype(np.int64),
            p_hub=np.abs(clique_in) ** 2 + np.abs(star_in) ** 2,
            psi_clique_in=clique_in,
            psi_star_in=star_in,
        )
    else:  # asymptotic
        if phase is not LeafPhase.REVERSAL:
            raise ConfigError("asymptotic mode evaluates the phase-reversal walk only")
        if sizes.alpha is None:
            raise ConfigError("asymptotic mode requires --alpha")
        times = np.arange(steps + 1, dtype=np.int64)
        p = np.array(
            [asym.probability_approx(sizes.n, sizes.alpha, int(t)) for t in times]
        )
        clique_in = np.empty(steps + 1, dtype=np.complex128)
        star_in = np.empty(steps + 1, dtype=np.complex128)
        for t in times:
            est = asym.coefficient_estimates(sizes.n, sizes.alpha, int(t))
            clique_in[t] = est.c1 * est.k1
            star_in[t] = -est.c1 * est.s1
        trace = ProbabilityTrace(
            times=times, p_hub=p, psi_clique_in=clique_in, psi_star_in=star_in
        )

    trace = ProbabilityTrace(
        times=trace.times,
        p_hub=trace.p_hub,
        psi_clique_in=trace.psi_clique_in,
        psi_star_in=trace.psi_star_in,
        metadata=_trace_metadata(sizes, args.mode, phase),
    )
    path = _write_trace(args, trace, f"trace_n{sizes.n}_m{sizes.m}_{args.mode}")
    print(path)
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    sizes = _resolve_sizes(args)
    fmt = args.format or "json"
    if fmt != "json":
        raise ConfigError("spectrum reports are JSON only")
    audit = audit_closed_forms(sizes.n, sizes.m)
    worst = max(audit.report.residuals)
    if not worst < 1e-10:
        print(f"spectral residual {worst:.3e} exceeds 1e-10", file=sys.stderr)
        return 1
    payload = {
        "version": __version__,
        "alpha": sizes.alpha,
        "spectrum": audit.report.to_json_dict(),
        "closed_form_audit": audit.to_json_dict(),
    }
    path = _out_path(args, f"spectrum_n{sizes.n}_m{sizes.m}.json")
    _atomic_write(path, lambda s: (json.dump(payload, s, indent=1), s.write("\n")))
    print(path)
    return 0


def _cmd_optimal_time(args: argparse.Namespace) -> int:
    sizes = _resolve_sizes(args)
    t_exact = asym.optimal_time_exact(sizes.n, sizes.m)
    alpha = sizes.alpha
    if alpha is None:
        alpha = math.log(sizes.m) / math.log(sizes.n) if sizes.m > 1 else 0.0
    t_branch = asym.optimal_time_branch(sizes.n, alpha)
    ops = cw.build_reduced_operators(sizes.n, sizes.m, LeafPhase.REVERSAL)
    psi = cw.collapsed_initial_state(sizes.n, sizes.m).amplitudes
    for _ in range(t_exact):
        psi = ops.evolution @ psi
    p_at_t = float(
        abs(psi[ArcClass.CLIQUE_IN]) ** 2 + abs(psi[ArcClass.STAR_IN]) ** 2
    )
    record = {
        "n": sizes.n,
        "m": sizes.m,
        "alpha": alpha,
        "t_opt_exact": t_exact,
        "t_opt_branch": t_branch,
        "p_at_t_opt": p_at_t,
    }
    for key, value in record.items():
        print(f"{key}={value}")
    if args.out:
        path = _out_path(args, "")
        _atomic_write(path, lambda s: (json.dump(record, s, indent=1), s.write("\n")))
    return 0


def _parse_grid(text: str, kind) -> list:
    try:
        return [kind(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}: {exc}") from exc


def _cmd_phase_diagram(args: argparse.Namespace) -> int:
    alphas = _parse_grid(args.alphas, float)
    n_grid = _parse_grid(args.n_grid, int)
    if len(set(alphas)) < 2:
        raise ConfigError("phase diagram needs at least 2 alpha values")
    if len(set(n_grid)) < 4:
        raise ConfigError("phase diagram needs at least 4 clique sizes")
    if any(a < 0 for a in alphas):
        raise ConfigError("alpha values must be nonnegative")
    if any(n < 3 for n in n_grid):
        raise ConfigError("clique sizes must be at least 3")
    fits = [asym.exponent_fit(alpha, n_grid) for alpha in alphas]

    fmt = args.format or "csv"
    if fmt == "csv":
        def write(stream: io.TextIOBase) -> None:
            stream.write(f"# version={__version__}\n")
            stream.write(f"# n_grid={','.join(str(n) for n in n_grid)}\n")
            stream.write("alpha,fitted_exponent,theory_exponent,fit_residual\n")
            for fit in fits:
                stream.write(
                    f"{fit.alpha:.17g},{fit.fitted_exponent:.17g},"
                    f"{fit.theory_exponent:.17g},{fit.fit_residual:.17g}\n"
                )
    elif fmt == "json":
        payload = {
            "version": __version__,
            "n_grid": list(n_grid),
            "rows": [
                {
                    "alpha": fit.alpha,
                    "fitted_exponent": fit.fitted_exponent,
                    "theory_exponent": fit.theory_exponent,
                    "fit_residual": fit.fit_residual,
                    "samples": [list(s) for s in fit.samples],
                }
                for fit in fits
            ],
        }

        def write(stream: io.TextIOBase) -> None:
            json.dump(payload, stream, indent=1)
            stream.write("\n")
    else:
        raise ConfigError(f"unknown format {fmt!r}")

    path = _out_path(args, f"phase_diagram.{fmt}")
    _atomic_write(path, write)
    print(path)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    sizes = _resolve_sizes(args)
    if args.steps is None or args.steps < 1:
        raise ConfigError("--steps must be at least 1")
    _check_arc_budget(sizes, args.arc_budget)
    report = run_checks(
        sizes.n,
        sizes.m,
        steps=args.steps,
        seed=args.seed,
        leaf_phase=_PHASES[args.leaf_phase],
        full_vs_collapsed_tol=args.tol_oracle,
        commutation_tol=args.tol_commutation,
        unitarity_tol=args.tol_unitarity,
        conjugation_tol=args.tol_conjugation,
        residual_tol=args.tol_residual,
        eigenbasis_tol=args.tol_eigenbasis,
        inject_leaf_phase_flip=args.inject_leaf_phase_flip,
    )
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(
            f"{status} {check.name}: max deviation {check.max_deviation:.3e} "
            f"(tolerance {check.tolerance:.1e})"
        )
    if args.out:
        path = _out_path(args, "")
        _atomic_write(
            path, lambda s: (json.dump(report.to_json_dict(), s, indent=1), s.write("\n"))
        )
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# parser


def _add_size_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="clique size N (>= 3)")
    parser.add_argument(
        "--alpha", type=float, help="leaf exponent; leaf count is floor(N**alpha)"
    )
    parser.add_argument("--m", type=int, help="explicit leaf count (overrides --alpha)")


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="output path (default: derived name)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starclique",
        description="Quantum-walk search for the glue vertex of a clique "
        "with a pendant star.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="emit a hub-probability trace")
    _add_size_options(sim)
    _add_output_options(sim)
    sim.add_argument("--steps", type=int, help="number of walk steps (>= 1)")
    sim.add_argument("--mode", choices=_MODES, default="collapsed")
    sim.add_argument("--leaf-phase", choices=tuple(_PHASES), default="reverse")
    sim.add_argument("--arc-budget", type=int, default=DEFAULT_ARC_BUDGET)
    sim.set_defaults(func=_cmd_simulate)

    spectrum = sub.add_parser("spectrum", help="emit the reduced-walk eigensystem")
    _add_size_options(spectrum)
    _add_output_options(spectrum)
    spectrum.set_defaults(func=_cmd_spectrum)

    opt = sub.add_parser("optimal-time", help="optimal running time and its probability")
    _add_size_options(opt)
    opt.add_argument("--out", help="optional JSON output path")
    opt.set_defaults(func=_cmd_optimal_time)

    phase = sub.add_parser("phase-diagram", help="fit scaling exponents over a grid")
    phase.add_argument(
        "--alphas", default="0,0.5,1,1.5,2", help="comma-separated alpha grid"
    )
    phase.add_argument(
        "--n-grid",
        default="256,1024,4096,16384,65536",
        help="comma-separated clique sizes (>= 4 distinct values)",
    )
    _add_output_options(phase)
    phase.set_defaults(func=_cmd_phase_diagram)

    ver = sub.add_parser("verify", help="run the cross-evaluator checks")
    _add_size_options(ver)
    ver.add_argument("--steps", type=int, default=200)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--leaf-phase", choices=tuple(_PHASES), default="reverse")
    ver.add_argument("--arc-budget", type=int, default=DEFAULT_ARC_BUDGET)
    ver.add_argument("--out", help="optional JSON report path")
    ver.add_argument("--tol-oracle", type=float, default=1e-10)
    ver.add_argument("--tol-commutation", type=float, default=1e-12)
    ver.add_argument("--tol-unitarity", type=float, default=1e-12)
    ver.add_argument("--tol-conjugation", type=float, default=1e-13)
    ver.add_argument("--tol-residual", type=float, default=1e-10)
    ver.add_argument("--tol-eigenbasis", type=float, default=1e-10)
    ver.add_argument(
        "--inject-leaf-phase-flip",
        action="store_true",
        help="self-test hook: corrupt the full evolution's leaf phase",
    )
    ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArcBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
