"""Physical parameters, drive fields and the scaled coordinates (m, eta_in).

All quantities downstream are expressed in the scaled coordinates

    m      = mu * n / gamma                (intracavity photon number)
    eta_in = 2 * sqrt(mu) * |beta_in| / gamma   (harmonic drive)
    w~     = omega / gamma                 (analysis frequency)

so that the instability threshold sits at ``eta_in = 1 + m`` for any gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PHASE_TOL = 1e-12


class ParameterDomainError(ValueError):
    """A parameter lies outside its physical domain."""


class InstabilityError(ValueError):
    """The operating point is unstable or marginal (eta_in >= 1 + m)."""


class ConsistencyError(ValueError):
    """A steady state does not solve the fixed-point equation for its drive."""


class ConvergenceError(RuntimeError):
    pass


def wrap_angle(x: float) -> float:
    """Normalize an angle to (-pi, pi]."""
    r = math.remainder(x, 2.0 * math.pi)
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise ParameterDomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class PhysicalParams:
    """Cavity rates and two-photon coupling, all in s^-1.

    Attributes
    ----------
    gamma_c : float
        Input coupling rate of the fundamental mode (> 0).
    gamma_s : float
        Intracavity loss rate (>= 0).
    mu : float
        Two-photon coupling rate per photon (> 0).
    """

    gamma_c: float
    gamma_s: float
    mu: float

    def __post_init__(self):
        _check_finite(gamma_c=self.gamma_c, gamma_s=self.gamma_s, mu=self.mu)
        if self.gamma_c <= 0:
            raise ParameterDomainError(f"gamma_c must be > 0, got {self.gamma_c}")
        if self.gamma_s < 0:
            raise ParameterDomainError(f"gamma_s must be >= 0, got {self.gamma_s}")
        if self.mu <= 0:
            raise ParameterDomainError(f"mu must be > 0, got {self.mu}")

    @property
    def gamma(self) -> float:
        return self.gamma_c + self.gamma_s


@dataclass(frozen=True)
class DriveConfig:
    """Coherent drives of the fundamental (alpha_in) and harmonic (beta_in).

    Only the in-phase family ``varphi = 2 phi + pi (mod 2 pi)`` is
    representable; any other phase pair is rejected at construction.
    Use :meth:`in_phase` to build one without spelling out ``varphi``.
    """

    alpha_in_amp: float
    phi: float
    beta_in_amp: float
    varphi: float

    def __post_init__(self):
        _check_finite(alpha_in_amp=self.alpha_in_amp, phi=self.phi,
                      beta_in_amp=self.beta_in_amp, varphi=self.varphi)
        if self.alpha_in_amp < 0 or self.beta_in_amp < 0:
            raise ParameterDomainError("drive amplitudes must be >= 0")
        defect = wrap_angle(self.varphi - 2.0 * self.phi - math.pi)
        if abs(defect) > PHASE_TOL:
            raise ParameterDomainError(
                f"harmonic drive phase {self.varphi!r} violates varphi = 2*phi + pi "
                f"(defect {defect:.3e} rad)")

    @classmethod
    def in_phase(cls, alpha_in_amp: float, beta_in_amp: float, phi: float = 0.0) -> "DriveConfig":
        return cls(alpha_in_amp, phi, beta_in_amp, wrap_angle(2.0 * phi + math.pi))

    @property
    def alpha_in(self) -> complex:
        return self.alpha_in_amp * complex(math.cos(self.phi), math.sin(self.phi))

    @property
    def beta_in(self) -> complex:
        return self.beta_in_amp * complex(math.cos(self.varphi), math.sin(self.varphi))


@dataclass(frozen=True)
class OperatingPoint:
    """Scaled operating point (m, eta_in)."""

    m: float
    eta_in: float

    def __post_init__(self):
        _check_finite(m=self.m, eta_in=self.eta_in)
        if self.m < 0 or self.eta_in < 0:
            raise ParameterDomainError(f"m and eta_in must be >= 0, got ({self.m}, {self.eta_in})")

    @classmethod
    def from_fraction(cls, m: float, fraction: float) -> "OperatingPoint":
        """Point driven at ``fraction`` of the instability drive, eta_in = f (1 + m)."""
        _check_finite(fraction=fraction)
        if fraction < 0:
            raise ParameterDomainError(f"fraction must be >= 0, got {fraction}")
        return cls(m, fraction * (1.0 + m))

    @property
    def B(self) -> float:
        return self.eta_in + self.m

    @property
    def fraction(self) -> float:
        return self.eta_in / (1.0 + self.m)

    @property
    def stable(self) -> bool:
        return self.eta_in < 1.0 + self.m


@dataclass(frozen=True)
class SteadyState:
    """Classical intracavity fixed point alpha = alpha_amp * exp(i alpha_phase)."""

    alpha_amp: float
    alpha_phase: float
    residual: float = 0.0

    def __post_init__(self):
        _check_finite(alpha_amp=self.alpha_amp, alpha_phase=self.alpha_phase)
        if self.alpha_amp < 0:
            raise ParameterDomainError(f"alpha_amp must be >= 0, got {self.alpha_amp}")

    @property
    def n(self) -> float:
        return self.alpha_amp ** 2

    @property
    def alpha(self) -> complex:
        return self.alpha_amp * complex(math.cos(self.alpha_phase), math.sin(self.alpha_phase))


def scale(params: PhysicalParams, steady: SteadyState, drive: DriveConfig) -> OperatingPoint:
    """Map a physical steady state and drive onto scaled coordinates."""
    g = params.gamma
    m = params.mu * steady.n / g
    eta_in = 2.0 * math.sqrt(params.mu) * drive.beta_in_amp / g
    return OperatingPoint(m, eta_in)


def unscale(params: PhysicalParams, point: OperatingPoint) -> tuple[float, float]:
    """Inverse of :func:`scale`: returns ``(n, beta_in_amp)``."""
    g = params.gamma
    n = point.m * g / params.mu
    beta_in_amp = point.eta_in * g / (2.0 * math.sqrt(params.mu))
    return n, beta_in_amp


def db_from_linear(s):
    """Spectrum value relative to vacuum, in dB (10 log10)."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(~(s_arr > 0)):
        raise ParameterDomainError(f"spectrum value must be > 0 for dB conversion, got {s!r}")
    out = 10.0 * np.log10(s_arr)
    return float(out) if out.ndim == 0 else out


def suppression_percent(s):
    """Noise suppression below vacuum in percent, (1 - s) * 100."""
    out = (1.0 - np.asarray(s, dtype=float)) * 100.0
    return float(out) if out.ndim == 0 else out
