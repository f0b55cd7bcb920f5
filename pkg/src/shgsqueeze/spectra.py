"""Closed-form squeezing spectra, squeezed-quadrature phase and output power."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    DriveConfig,
    InstabilityError,
    OperatingPoint,
    ParameterDomainError,
    wrap_angle,
)

DEFAULT_POWER_MW = 2.6


@dataclass(frozen=True)
class SpectrumSample:
    omega_tilde: float
    s_minus: float
    s_plus: float
    theta_s: float

    @property
    def theta_a(self) -> float:
        return wrap_angle(self.theta_s + 0.5 * math.pi)


@dataclass(frozen=True)
class PowerCalibration:
    """Harmonic output power per (2m + eta_in)^2, in mW.

    The default puts the undriven doubler at m = 2.5 at 65 mW.
    """

    c: float = DEFAULT_POWER_MW

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ParameterDomainError(f"power calibration must be finite and > 0, got {self.c}")


def _require_stable(point: OperatingPoint) -> None:
    if not point.stable:
        raise InstabilityError(
            f"operating point m={point.m}, eta_in={point.eta_in} is at or beyond the "
            f"instability threshold eta_in = 1 + m (fraction {point.fraction:.6g})")


def _lorentzians(point: OperatingPoint, omega_tilde: float) -> tuple[float, float]:
    # S- = 1 - 8mB / (w^2 + (1+2m+B)^2),  S+ = 1 + 8mB / (w^2 + (1+2m-B)^2)
    # with 1+2m-B = (1+m) - eta formed directly: forming B first can round a
    # stable point onto the threshold
    m, eta = point.m, point.eta_in
    w2 = omega_tilde * omega_tilde
    weight = 8.0 * m * point.B
    s_minus = 1.0 - weight / (w2 + (1.0 + 3.0 * m + eta) ** 2)
    s_plus = 1.0 + weight / (w2 + ((1.0 + m) - eta) ** 2)
    return s_minus, s_plus


def squeezed_phase(drive: DriveConfig) -> float:
    """Squeezed-quadrature angle 2*varphi - pi, in (-pi, pi]."""
    return wrap_angle(2.0 * drive.varphi - math.pi)


def spectrum(point: OperatingPoint, omega_tilde: float, phi: float = 0.0) -> SpectrumSample:
    """Phase-optimized squeezing/antisqueezing spectra of the harmonic output.

    Parameters
    ----------
    point : OperatingPoint
        Must be strictly below threshold.
    omega_tilde : float
        Analysis frequency in units of the cavity damping gamma.
    phi : float
        Fundamental drive phase; only affects ``theta_s``.
    """
    if not math.isfinite(omega_tilde):
        raise ParameterDomainError(f"omega_tilde must be finite, got {omega_tilde}")
    _require_stable(point)
    s_minus, s_plus = _lorentzians(point, omega_tilde)
    theta_s = squeezed_phase(DriveConfig.in_phase(0.0, 0.0, phi))
    return SpectrumSample(float(omega_tilde), s_minus, s_plus, theta_s)


def zero_frequency_extrema(point: OperatingPoint) -> tuple[float, float]:
    """Best squeezing and worst antisqueezing, both reached at zero frequency."""
    _require_stable(point)
    return _lorentzians(point, 0.0)


def output_power(point: OperatingPoint, cal: PowerCalibration | None = None) -> float:
    """Classical harmonic output power in mW, c * (2m + eta_in)^2."""
    cal = cal or PowerCalibration()
    return cal.c * (2.0 * point.m + point.eta_in) ** 2
