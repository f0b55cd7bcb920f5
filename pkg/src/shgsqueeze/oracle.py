"""Output noise spectra from the linearized Langevin equations.

This is an independent route to the harmonic squeezing spectra: it never
touches the closed-form expressions in :mod:`shgsqueeze.spectra`.  The
fluctuations obey

    d/dt v = A v + L xi,        w_out = M v + N xi,

with v = (da, da^dagger) and the input noise basis

    xi = (da_in, da_in^dagger, db_in, db_in^dagger, dw_in, dw_in^dagger).

Fourier convention: x(omega) = int e^{+i omega t} x(t) dt, so the response is
(-i omega I - A)^{-1}.  Coherent/vacuum inputs give
<xi_i(omega) xi_j(omega')> = C_ij delta(omega + omega') with C[x, x^dagger] = 1.

Quadratures are X_theta = w e^{-i theta} + w^dagger e^{i theta}; with this
normalization vacuum noise is exactly 1 and the phase-extremal spectra are
1 + 2 <w^dagger w> -+ 2 |<w w>|.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .model import (
    InstabilityError,
    OperatingPoint,
    PhysicalParams,
    SteadyState,
    DriveConfig,
    wrap_angle,
)
from .spectra import spectrum
from .steady import check_consistency, drift_matrix, realize

HARMONIC = "harmonic"
FUNDAMENTAL = "fundamental"

_VACUUM = np.zeros((6, 6))
_VACUUM[0, 1] = _VACUUM[2, 3] = _VACUUM[4, 5] = 1.0
_VACUUM.setflags(write=False)


@dataclass(frozen=True)
class LinearResponseSystem:
    A: np.ndarray
    L: np.ndarray
    M_b: np.ndarray
    N_b: np.ndarray
    M_a: np.ndarray
    N_a: np.ndarray
    C: np.ndarray
    gamma: float

    def outputs(self, target: str) -> tuple[np.ndarray, np.ndarray]:
        if target == HARMONIC:
            return self.M_b, self.N_b
        if target == FUNDAMENTAL:
            return self.M_a, self.N_a
        raise ValueError(f"unknown output mode {target!r}; expected 'harmonic' or 'fundamental'")


@dataclass(frozen=True)
class OracleSpectrum:
    omega_tilde: float
    n_corr: float
    a_corr: complex
    s_minus: float
    s_plus: float
    nu: float

    @property
    def min_quadrature_angle(self) -> float:
        """Quadrature angle in (-pi/2, pi/2] that attains ``s_minus``."""
        return wrap_angle(self.nu + math.pi) / 2.0


def _min_angle(nu: float) -> float:
    # e^{-2i theta} <w w> is real negative when 2 theta = nu + pi
    return 0.5 * (nu + math.pi)


def build_system(params: PhysicalParams, steady: SteadyState, drive: DriveConfig) -> LinearResponseSystem:
    check_consistency(params, steady, drive)
    A = np.array(drift_matrix(params, steady, drive).matrix)
    alpha = steady.alpha
    sq_mu = math.sqrt(params.mu)
    kc = math.sqrt(2.0 * params.gamma_c)
    ks = math.sqrt(2.0 * params.gamma_s)

    L = np.zeros((2, 6), dtype=complex)
    L[0, 0] = kc
    L[0, 2] = 2.0 * sq_mu * alpha.conjugate()
    L[0, 4] = ks
    L[1, 1] = kc
    L[1, 3] = 2.0 * sq_mu * alpha
    L[1, 5] = ks

    M_b = np.diag([2.0 * sq_mu * alpha, 2.0 * sq_mu * alpha.conjugate()]).astype(complex)
    N_b = np.zeros((2, 6))
    N_b[0, 2] = N_b[1, 3] = -1.0
    M_a = np.diag([kc, kc]).astype(complex)
    N_a = np.zeros((2, 6))
    N_a[0, 0] = N_a[1, 1] = -1.0

    mats = (A, L, M_b, N_b, M_a, N_a)
    for a in mats:
        a.setflags(write=False)
    return LinearResponseSystem(*mats, _VACUUM, params.gamma)


def _inv2(z: np.ndarray) -> np.ndarray:
    a, b, c, d = z[0, 0], z[0, 1], z[1, 0], z[1, 1]
    det = a * d - b * c
    return np.array([[d, -b], [-c, a]]) / det


def _eigenvalues2(a: np.ndarray) -> tuple[complex, complex]:
    half_tr = 0.5 * (a[0, 0] + a[1, 1])
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    root = cmath.sqrt(half_tr * half_tr - det)
    return half_tr - root, half_tr + root


def _transfer(sys: LinearResponseSystem, omega: float, target: str) -> np.ndarray:
    M, N = sys.outputs(target)
    z = -1j * omega * np.eye(2) - sys.A
    return M @ _inv2(z) @ sys.L + N


def _require_stable(sys: LinearResponseSystem) -> None:
    lam = _eigenvalues2(sys.A)
    # a point within a few ulps of threshold cannot be told apart from marginal
    margin = 16.0 * np.finfo(float).eps * max(abs(lam[0]), abs(lam[1]))
    if max(lam[0].real, lam[1].real) >= -margin:
        raise InstabilityError(
            f"drift matrix is not strictly stable (eigenvalues {lam[0]:.6g}, {lam[1]:.6g})")


def _quadrature(g_pos: np.ndarray, g_neg: np.ndarray, C: np.ndarray, theta: float) -> float:
    rot = np.array([cmath.exp(-1j * theta), cmath.exp(1j * theta)])
    row_pos = rot @ g_pos
    row_neg = rot @ g_neg
    return float((row_pos @ C @ row_neg).real)


def quadrature_spectrum(sys: LinearResponseSystem, omega_tilde: float, theta: float,
                        target: str = HARMONIC) -> float:
    """Noise spectrum of the output quadrature X_theta, vacuum = 1."""
    _require_stable(sys)
    omega = omega_tilde * sys.gamma
    return _quadrature(_transfer(sys, omega, target), _transfer(sys, -omega, target), sys.C, theta)


def oracle_spectrum(sys: LinearResponseSystem, omega_tilde: float,
                    target: str = HARMONIC) -> OracleSpectrum:
    """Phase-extremal output spectra at ``omega_tilde`` by direct contraction.

    The extremal values are evaluated as quadrature spectra at the optimal
    angle rather than as 1 + 2n -+ 2|a|; the two agree algebraically, but the
    latter loses digits to cancellation close to threshold.
    """
    _require_stable(sys)
    omega = omega_tilde * sys.gamma
    g_pos = _transfer(sys, omega, target)
    g_neg = _transfer(sys, -omega, target)
    K = g_pos @ sys.C @ g_neg.T
    a_corr = complex(K[0, 0])
    n_corr = float(K[1, 0].real)
    nu = wrap_angle(cmath.phase(a_corr)) if a_corr != 0 else 0.0

    theta = _min_angle(nu)
    s_minus = _quadrature(g_pos, g_neg, sys.C, theta)
    s_plus = _quadrature(g_pos, g_neg, sys.C, theta + 0.5 * math.pi)
    return OracleSpectrum(float(omega_tilde), n_corr, a_corr, s_minus, s_plus, nu)


def system_for_point(point: OperatingPoint, params: PhysicalParams | None = None,
                     phi: float = 0.0) -> LinearResponseSystem:
    params = params or PhysicalParams(1.0, 0.0, 1.0)
    drive, steady = realize(params, point, phi)
    return build_system(params, steady, drive)


def compare_with_closed_form(point: OperatingPoint, omega_grid, params: PhysicalParams | None = None,
                             phi: float = 0.0) -> float:
    """Largest relative deviation of oracle S-+ from the closed form over a grid."""
    sys = system_for_point(point, params, phi)
    worst = 0.0
    for w in np.asarray(omega_grid, dtype=float).ravel():
        ref = spectrum(point, float(w))
        got = oracle_spectrum(sys, float(w))
        worst = max(worst,
                    abs(got.s_minus - ref.s_minus) / abs(ref.s_minus),
                    abs(got.s_plus - ref.s_plus) / abs(ref.s_plus))
    return worst


def mean_harmonic_output(params: PhysicalParams, steady: SteadyState, drive: DriveConfig) -> complex:
    """Classical harmonic output amplitude sqrt(mu) alpha^2 - beta_in."""
    return math.sqrt(params.mu) * steady.alpha ** 2 - drive.beta_in
