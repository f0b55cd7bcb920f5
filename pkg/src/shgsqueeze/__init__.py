"""Quantum noise of a singly resonant frequency doubler driven in both modes."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    ConsistencyError,
    ConvergenceError,
    DriveConfig,
    InstabilityError,
    OperatingPoint,
    ParameterDomainError,
    PhysicalParams,
    SteadyState,
    db_from_linear,
    scale,
    suppression_percent,
    unscale,
    wrap_angle,
)
from .steady import (  # noqa: E402
    DriftMatrix,
    StabilityReport,
    drift_matrix,
    eigenvalues_closed,
    eigenvalues_numeric,
    realize,
    required_pump,
    solve_intracavity,
)
from .spectra import (  # noqa: E402
    PowerCalibration,
    SpectrumSample,
    output_power,
    spectrum,
    squeezed_phase,
    zero_frequency_extrema,
)
from .oracle import (  # noqa: E402
    LinearResponseSystem,
    OracleSpectrum,
    build_system,
    compare_with_closed_form,
    oracle_spectrum,
    quadrature_spectrum,
)
from .sweep import SweepTable, fig1_dataset, fig2_dataset, spectrum_sweep  # noqa: E402
