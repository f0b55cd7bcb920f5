"""Classical fixed point of the driven doubler and its linear stability.

For the in-phase family the intracavity modulus x = |alpha| solves the cubic

    mu x^3 + (gamma + 2 sqrt(mu) |beta_in|) x - sqrt(2 gamma_c) |alpha_in| = 0,

which is strictly increasing on [0, inf) and therefore has a single
non-negative root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    ConsistencyError,
    ConvergenceError,
    DriveConfig,
    OperatingPoint,
    PhysicalParams,
    SteadyState,
    unscale,
    wrap_angle,
)

RESIDUAL_TOL = 1e-9
NEWTON_RTOL = 1e-12
NEWTON_MAXITER = 200


def required_pump(params: PhysicalParams, n: float, beta_in_amp: float) -> float:
    """Fundamental drive modulus |alpha_in| that sustains ``n`` intracavity photons."""
    if n < 0 or beta_in_amp < 0:
        raise ValueError("n and beta_in_amp must be >= 0")
    x = math.sqrt(n)
    loss = params.gamma + params.mu * n + 2.0 * math.sqrt(params.mu) * beta_in_amp
    return x * loss / math.sqrt(2.0 * params.gamma_c)


def fixed_point_residual(params: PhysicalParams, steady: SteadyState, drive: DriveConfig) -> float:
    """Defect of the fixed-point relation, expressed in units of alpha_in."""
    x = steady.alpha_amp
    loss = params.gamma + params.mu * x * x + 2.0 * math.sqrt(params.mu) * drive.beta_in_amp
    return drive.alpha_in_amp - x * loss / math.sqrt(2.0 * params.gamma_c)


def _bracketed_newton(f, x_lo, x_hi, x0=None, rtol=NEWTON_RTOL, maxiter=NEWTON_MAXITER):
    """Newton iteration safeguarded by bisection on an increasing ``f``.

    ``f`` returns ``(value, derivative)``; ``f(x_lo) <= 0 <= f(x_hi)`` is required.
    """
    x = 0.5 * (x_lo + x_hi) if x0 is None else x0
    for _ in range(maxiter):
        fx, dfx = f(x)
        if fx == 0.0:
            return x
        if fx < 0:
            x_lo = x
        else:
            x_hi = x
        step_ok = dfx > 0
        if step_ok:
            dx = fx / dfx
            if abs(dx) <= rtol * abs(x):
                return x - dx
            x_new = x - dx
            step_ok = x_lo < x_new < x_hi
        if not step_ok:
            x_new = 0.5 * (x_lo + x_hi)
        if abs(x_new - x) <= rtol * abs(x_new) or x_hi - x_lo <= rtol * abs(x_hi):
            return x_new
        x = x_new
    raise ConvergenceError(f"fixed-point cubic did not converge in {maxiter} iterations")


def solve_intracavity(params: PhysicalParams, drive: DriveConfig) -> SteadyState:
    """Intracavity steady state for the given drives (in-phase family)."""
    mu = params.mu
    linear = params.gamma + 2.0 * math.sqrt(mu) * drive.beta_in_amp
    source = math.sqrt(2.0 * params.gamma_c) * drive.alpha_in_amp

    if source == 0.0 or source / linear == 0.0:
        # root underflows: it lies below the smallest representable positive float
        x = 0.0
    else:
        def f(x):
            return mu * x ** 3 + linear * x - source, 3.0 * mu * x * x + linear

        # mu x^3 >= 0 puts the root below source / linear; the cubic is convex on
        # x >= 0, so Newton started there descends monotonically onto the root
        x_hi = source / linear
        for _ in range(NEWTON_MAXITER):
            if f(x_hi)[0] >= 0:
                break
            x_hi *= 2.0
        else:
            raise ConvergenceError("could not bracket the fixed-point root")
        x = _bracketed_newton(f, 0.0, x_hi, x0=x_hi)

    steady = SteadyState(x, wrap_angle(drive.phi))
    res = fixed_point_residual(params, steady, drive)
    return SteadyState(x, steady.alpha_phase, res)


def realize(params: PhysicalParams, point: OperatingPoint, phi: float = 0.0):
    """Physical drive and steady state that map onto ``point``.

    Returns
    -------
    drive : DriveConfig
    steady : SteadyState
    """
    n, beta_in_amp = unscale(params, point)
    alpha_in_amp = required_pump(params, n, beta_in_amp)
    drive = DriveConfig.in_phase(alpha_in_amp, beta_in_amp, phi)
    steady = SteadyState(math.sqrt(n), wrap_angle(phi))
    steady = SteadyState(steady.alpha_amp, steady.alpha_phase,
                         fixed_point_residual(params, steady, drive))
    return drive, steady


def check_consistency(params: PhysicalParams, steady: SteadyState, drive: DriveConfig) -> None:
    res = fixed_point_residual(params, steady, drive)
    if abs(res) > RESIDUAL_TOL * max(1.0, drive.alpha_in_amp):
        raise ConsistencyError(f"steady state does not match the drive (residual {res:.3e})")
    if steady.alpha_amp > 0 and abs(wrap_angle(steady.alpha_phase - drive.phi)) > 1e-12:
        raise ConsistencyError("intracavity field is not in phase with the fundamental drive")


@dataclass(frozen=True)
class DriftMatrix:
    """Linearized drift over the doubled basis (delta a, delta a^dagger)."""

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def diagonal(self) -> complex:
        return complex(self.matrix[0, 0])

    @property
    def off_diagonal(self) -> complex:
        return complex(self.matrix[0, 1])


def drift_matrix(params: PhysicalParams, steady: SteadyState, drive: DriveConfig) -> DriftMatrix:
    check_consistency(params, steady, drive)
    d = -(params.gamma + 2.0 * params.mu * steady.n)
    alpha = steady.alpha
    o = 2.0 * math.sqrt(params.mu) * drive.beta_in - params.mu * alpha * alpha
    mat = np.array([[d, o], [o.conjugate(), d]], dtype=complex)
    return DriftMatrix(mat)


@dataclass(frozen=True)
class StabilityReport:
    lambda_minus: float
    lambda_plus: float
    stable: bool
    fraction: float
    margin: float


def eigenvalues_closed(params: PhysicalParams, point: OperatingPoint) -> StabilityReport:
    """Drift eigenvalues -gamma[(1 + 2m) +- B] in closed form."""
    g = params.gamma
    m, eta = point.m, point.eta_in
    # -(1+2m) + B == eta - (1+m); written this way lambda_plus is exactly 0 at threshold
    lam_plus = g * (eta - (1.0 + m))
    lam_minus = -g * (1.0 + 3.0 * m + eta)
    f = point.fraction
    return StabilityReport(lam_minus, lam_plus, point.stable, f, 1.0 - f)


def eigenvalues_numeric(dm: DriftMatrix) -> tuple[float, float]:
    """Eigenvalues of the drift matrix via LAPACK, sorted ascending.

    The doubled-basis matrix has a real diagonal and conjugate off-diagonals,
    so its spectrum is real; imaginary round-off is dropped.
    """
    ev = np.linalg.eigvals(dm.matrix)
    ev = np.sort(ev.real)
    return float(ev[0]), float(ev[1])
