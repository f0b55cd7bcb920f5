"""Command-line front end.

Exit codes: 0 success, 1 domain error (unstable point, invalid parameters),
2 usage error.  Domain errors print a single ``error: kind=... message=...``
line on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .model import (
    ConsistencyError,
    ConvergenceError,
    DriveConfig,
    InstabilityError,
    OperatingPoint,
    ParameterDomainError,
    PhysicalParams,
    scale,
)
from .oracle import compare_with_closed_form
from .spectra import DEFAULT_POWER_MW, PowerCalibration
from .steady import drift_matrix, eigenvalues_closed, eigenvalues_numeric, solve_intracavity
from .sweep import (
    DEFAULT_FRACTIONS,
    DEFAULT_M_MAX,
    DEFAULT_M_STEPS,
    SweepTable,
    default_m_grid,
    fig1_dataset,
    fig2_dataset,
    spectrum_sweep,
)

OUTPUT_DIR_ENV = "SHGSQUEEZE_OUTPUT_DIR"

SCALED_FLAGS = ("m", "eta", "fraction")
PHYSICAL_FLAGS = ("gamma_c", "gamma_s", "mu", "alpha_in", "beta_in", "phi")

_ERROR_KINDS = {
    InstabilityError: "instability",
    ConsistencyError: "consistency",
    ConvergenceError: "convergence",
    ParameterDomainError: "parameter_domain",
}


def _fraction_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _build_parser() -> argparse.ArgumentParser:
    io_opts = argparse.ArgumentParser(add_help=False)
    io_opts.add_argument("--format", choices=("csv", "json"), default="csv")
    io_opts.add_argument("--output", metavar="PATH", help="write the table here instead of stdout")

    point = argparse.ArgumentParser(add_help=False)
    g = point.add_argument_group("scaled operating point")
    g.add_argument("--m", type=float, help="scaled intracavity photon number")
    drive = g.add_mutually_exclusive_group()
    drive.add_argument("--eta", type=float, help="scaled harmonic drive eta_in")
    drive.add_argument("--fraction", type=float, help="harmonic drive as a fraction of 1 + m")
    p = point.add_argument_group("physical operating point")
    p.add_argument("--gamma-c", type=float)
    p.add_argument("--gamma-s", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--alpha-in", type=float, help="fundamental drive modulus")
    p.add_argument("--beta-in", type=float, help="harmonic drive modulus")
    p.add_argument("--phi", type=float, help="fundamental drive phase (rad)")

    omega = argparse.ArgumentParser(add_help=False)
    omega.add_argument("--omega-max", type=float, default=10.0)
    omega.add_argument("--omega-steps", type=int, default=21)

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--m-max", type=float, default=DEFAULT_M_MAX)
    grid.add_argument("--m-steps", type=int, default=DEFAULT_M_STEPS)
    grid.add_argument("--fractions", type=_fraction_list, default=DEFAULT_FRACTIONS,
                      help="comma-separated drive fractions (default 0,0.5,0.75)")

    parser = argparse.ArgumentParser(prog="shgsqueeze", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("steady-state", parents=[point, io_opts],
                   help="solve the intracavity fixed point in physical units")
    sub.add_parser("stability", parents=[point, io_opts], help="drift eigenvalues and stability")
    sp = sub.add_parser("spectrum", parents=[point, omega, io_opts],
                        help="squeezing spectra at one point or over a frequency grid")
    sp.add_argument("--with-oracle", action="store_true",
                    help="add linear-response oracle columns and their deviation")
    sub.add_parser("fig1", parents=[grid, io_opts], help="zero-frequency squeezing vs m")
    f2 = sub.add_parser("fig2", parents=[grid, io_opts], help="output power vs m")
    f2.add_argument("--power-calibration", type=float, default=DEFAULT_POWER_MW,
                    help="mW per (2m + eta_in)^2 (default %(default)s)")
    oc = sub.add_parser("oracle-check", parents=[point, omega, io_opts],
                        help="max deviation between oracle and closed-form spectra")
    oc.add_argument("--random", type=int, default=0, metavar="N",
                    help="also check N random stable points (m, eta_in, omega) drawn with --seed")
    oc.add_argument("--seed", type=int, default=0)
    oc.add_argument("--tol", type=float, default=1e-10)
    return parser


def _given(args, names) -> list[str]:
    return [n for n in names if getattr(args, n, None) is not None]


def _resolve_point(args, parser, allow_scaled=True):
    """Return ``(point, params, phi, physical)`` from either flag family."""
    scaled = _given(args, SCALED_FLAGS)
    physical = _given(args, PHYSICAL_FLAGS)
    if scaled and physical:
        parser.error("scaled flags (--m/--eta/--fraction) and physical flags cannot be mixed")
    if scaled:
        if not allow_scaled:
            parser.error("this command needs physical flags (--gamma-c, --mu, --alpha-in, ...)")
        if args.m is None:
            parser.error("--m is required with --eta/--fraction")
        if args.fraction is not None:
            point = OperatingPoint.from_fraction(args.m, args.fraction)
        else:
            point = OperatingPoint(args.m, args.eta if args.eta is not None else 0.0)
        return point, None, 0.0, None
    missing = [f"--{n.replace('_', '-')}" for n in ("gamma_c", "mu", "alpha_in")
               if getattr(args, n) is None]
    if missing:
        parser.error("missing operating point: give --m [--eta|--fraction] or " + ", ".join(missing))
    params = PhysicalParams(args.gamma_c, args.gamma_s or 0.0, args.mu)
    phi = args.phi or 0.0
    drive = DriveConfig.in_phase(args.alpha_in, args.beta_in or 0.0, phi)
    steady = solve_intracavity(params, drive)
    return scale(params, steady, drive), params, phi, (drive, steady)


def _omega_grid(args, parser) -> np.ndarray:
    if args.omega_max < 0 or not math.isfinite(args.omega_max):
        parser.error("--omega-max must be finite and >= 0")
    if args.omega_max == 0:
        return np.array([0.0])
    if args.omega_steps < 2:
        parser.error("--omega-steps must be >= 2")
    return np.linspace(0.0, args.omega_max, args.omega_steps)


def _cmd_steady_state(args, parser) -> SweepTable:
    point, params, phi, (drive, steady) = _resolve_point(args, parser, allow_scaled=False)
    columns = [("alpha_in", "sqrt(1/s)"), ("alpha_amp", ""), ("alpha_phase", "rad"), ("n", ""),
               ("residual", "sqrt(1/s)"), ("m", ""), ("eta_in", ""), ("fraction", "")]
    row = [drive.alpha_in_amp, steady.alpha_amp, steady.alpha_phase, steady.n, steady.residual,
           point.m, point.eta_in, point.fraction]
    meta = {"command": "steady-state", "gamma_c": params.gamma_c, "gamma_s": params.gamma_s,
            "mu": params.mu, "beta_in": drive.beta_in_amp, "phi": phi}
    return SweepTable(columns, [row], meta)


def _cmd_stability(args, parser) -> SweepTable:
    point, params, phi, physical = _resolve_point(args, parser)
    gamma_unit = "1/s" if params else "gamma"
    rep = eigenvalues_closed(params or PhysicalParams(1.0, 0.0, 1.0), point)
    columns = [("m", ""), ("eta_in", ""), ("fraction", ""), ("margin", ""),
               ("lambda_minus", gamma_unit), ("lambda_plus", gamma_unit), ("stable", "bool")]
    row = [point.m, point.eta_in, rep.fraction, rep.margin, rep.lambda_minus, rep.lambda_plus,
           float(rep.stable)]
    if physical:
        lam = eigenvalues_numeric(drift_matrix(params, physical[1], physical[0]))
        columns += [("lambda_minus_numeric", gamma_unit), ("lambda_plus_numeric", gamma_unit)]
        row += list(lam)
    return SweepTable(columns, [row], {"command": "stability"})


def _cmd_spectrum(args, parser) -> SweepTable:
    point, params, phi, _ = _resolve_point(args, parser)
    return spectrum_sweep(point, _omega_grid(args, parser), args.with_oracle, params, phi)


def _cmd_fig1(args, parser) -> SweepTable:
    if args.m_max < 0 or args.m_steps < 1:
        parser.error("--m-max must be >= 0 and --m-steps >= 1")
    return fig1_dataset(default_m_grid(args.m_max, args.m_steps), args.fractions)


def _cmd_fig2(args, parser) -> SweepTable:
    if args.m_max < 0 or args.m_steps < 1:
        parser.error("--m-max must be >= 0 and --m-steps >= 1")
    return fig2_dataset(default_m_grid(args.m_max, args.m_steps), args.fractions,
                        PowerCalibration(args.power_calibration))


def _cmd_oracle_check(args, parser) -> SweepTable:
    worst = 0.0
    checked = 0
    if _given(args, SCALED_FLAGS + PHYSICAL_FLAGS) or not args.random:
        if _given(args, SCALED_FLAGS + PHYSICAL_FLAGS):
            point, params, phi, _ = _resolve_point(args, parser)
        else:
            point, params, phi = OperatingPoint(2.5, 1.75), None, 0.0
        grid = _omega_grid(args, parser)
        worst = compare_with_closed_form(point, grid, params, phi)
        checked += grid.size
    rng = np.random.default_rng(args.seed)
    for m, eta, w in _random_stable_points(rng, args.random):
        worst = max(worst, compare_with_closed_form(OperatingPoint(m, eta), [w]))
        checked += 1
    table = SweepTable([("samples", ""), ("max_rel_error", ""), ("tolerance", "")],
                       [[checked, worst, args.tol]],
                       {"command": "oracle-check", "seed": args.seed, "random": args.random})
    args.failed = not worst <= args.tol
    return table


def _random_stable_points(rng, count, m_max=50.0, eta_max=50.0, omega_max=100.0):
    """Uniform draws on [0, m_max] x [0, eta_max] x [0, omega_max], rejecting unstable points."""
    out = []
    while len(out) < count:
        m, eta, w = rng.uniform(0, m_max), rng.uniform(0, eta_max), rng.uniform(0, omega_max)
        if eta < 1.0 + m:
            out.append((m, eta, w))
    return out


_COMMANDS = {
    "steady-state": _cmd_steady_state,
    "stability": _cmd_stability,
    "spectrum": _cmd_spectrum,
    "fig1": _cmd_fig1,
    "fig2": _cmd_fig2,
    "oracle-check": _cmd_oracle_check,
}


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not target.is_absolute():
        target = Path(base) / target
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)


def _error_line(kind: str, message: str) -> str:
    return f"error: kind={kind} message={json.dumps(message)}\n"


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        table = _COMMANDS[args.command](args, parser)
        _write(table.dumps(args.format), args.output)
    except SystemExit as exc:
        return int(exc.code or 0)
    except tuple(_ERROR_KINDS) as exc:
        kind = next(k for cls, k in _ERROR_KINDS.items() if isinstance(exc, cls))
        sys.stderr.write(_error_line(kind, str(exc)))
        return 1
    if getattr(args, "failed", False):
        sys.stderr.write(_error_line("tolerance", "oracle deviation exceeds --tol"))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
