"""Plot-ready sweep tables and their CSV/JSON serializations."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .model import InstabilityError, OperatingPoint, ParameterDomainError, db_from_linear, suppression_percent
from .oracle import oracle_spectrum, system_for_point
from .spectra import PowerCalibration, output_power, spectrum, zero_frequency_extrema

DEFAULT_FRACTIONS = (0.0, 0.5, 0.75)
DEFAULT_M_MAX = 20.0
DEFAULT_M_STEPS = 401


@dataclass(frozen=True)
class SweepTable:
    """Rows of finite floats ordered strictly by the first column.

    ``columns`` holds ``(name, unit)`` pairs; ``metadata`` echoes the inputs
    that produced the table.
    """

    columns: tuple
    rows: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple((str(n), str(u)) for n, u in self.columns))
        object.__setattr__(self, "rows", tuple(tuple(float(v) for v in r) for r in self.rows))
        width = len(self.columns)
        prev = -math.inf
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} values, expected {width}")
            if not all(math.isfinite(v) for v in row):
                raise ValueError(f"row {i} contains non-finite values: {row}")
            if row[0] <= prev:
                raise ValueError(f"rows must be strictly increasing in {self.columns[0][0]!r}")
            prev = row[0]

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.columns]

    def column(self, name: str) -> np.ndarray:
        j = self.names.index(name)
        return np.array([r[j] for r in self.rows])

    def row_at(self, key: float) -> dict:
        """Row whose sweep variable equals ``key`` (to 1e-12), as a dict."""
        for r in self.rows:
            if abs(r[0] - key) <= 1e-12 * max(1.0, abs(key)):
                return dict(zip(self.names, r))
        raise KeyError(key)

    def to_csv(self) -> str:
        buf = io.StringIO()
        meta = dict(self.metadata, columns=[list(c) for c in self.columns])
        for key, value in meta.items():
            buf.write(f"# {key}={json.dumps(value, sort_keys=True)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.names)
        for r in self.rows:
            writer.writerow([f"{v:.17g}" for v in r])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        meta = {}
        body = []
        for line in text.splitlines():
            if line.startswith("# "):
                key, _, value = line[2:].partition("=")
                meta[key] = json.loads(value)
            elif line.strip():
                body.append(line)
        reader = csv.reader(body)
        header = next(reader)
        columns = meta.pop("columns", [[h, ""] for h in header])
        if [c[0] for c in columns] != header:
            raise ValueError("CSV header does not match the column metadata")
        return cls(columns, [[float(v) for v in r] for r in reader], meta)

    def to_json(self) -> str:
        obj = {"metadata": self.metadata,
               "columns": [{"name": n, "unit": u} for n, u in self.columns],
               "rows": [list(r) for r in self.rows]}
        return json.dumps(obj, indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SweepTable":
        obj = json.loads(text)
        columns = [(c["name"], c["unit"]) for c in obj["columns"]]
        return cls(columns, obj["rows"], obj["metadata"])

    def dumps(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


def default_m_grid(m_max: float = DEFAULT_M_MAX, steps: int = DEFAULT_M_STEPS) -> np.ndarray:
    # i * m_max / (steps - 1) keeps round values such as 2.5 exact on the default grid
    if steps < 2:
        return np.array([float(m_max)])
    return np.arange(steps) * float(m_max) / (steps - 1)


def fraction_label(f: float) -> str:
    return f"f{f:g}"


def _check_grid(grid, name: str) -> np.ndarray:
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise ParameterDomainError(f"{name} grid is empty")
    if not np.all(np.isfinite(grid)):
        raise ParameterDomainError(f"{name} grid contains non-finite values")
    if np.any(np.diff(grid) <= 0):
        raise ParameterDomainError(f"{name} grid must be strictly increasing")
    return grid


def _check_fractions(fractions) -> tuple:
    fractions = tuple(float(f) for f in fractions)
    for f in fractions:
        if not 0.0 <= f < 1.0:
            raise InstabilityError(
                f"drive fraction {f} is outside [0, 1); f >= 1 is at or above the instability")
    return fractions


def _grid_meta(grid: np.ndarray) -> dict:
    return {"min": float(grid[0]), "max": float(grid[-1]), "points": int(grid.size)}


def fig1_dataset(m_grid=None, fractions=DEFAULT_FRACTIONS) -> SweepTable:
    """Zero-frequency squeezing and antisqueezing (dB) against m, per drive fraction."""
    m_grid = _check_grid(default_m_grid() if m_grid is None else m_grid, "m")
    if m_grid[0] < 0:
        raise ParameterDomainError("m must be >= 0")
    fractions = _check_fractions(fractions)

    columns = [("m", "")]
    for f in fractions:
        lab = fraction_label(f)
        columns += [(f"s_minus_db_{lab}", "dB"), (f"s_plus_db_{lab}", "dB"),
                    (f"suppression_pct_{lab}", "%")]
    rows = []
    for m in m_grid:
        row = [m]
        for f in fractions:
            s_minus, s_plus = zero_frequency_extrema(OperatingPoint.from_fraction(m, f))
            row += [db_from_linear(s_minus), db_from_linear(s_plus), suppression_percent(s_minus)]
        rows.append(row)
    meta = {"table": "fig1", "version": __version__, "m_grid": _grid_meta(m_grid),
            "fractions": list(fractions), "omega_tilde": 0.0}
    return SweepTable(columns, rows, meta)


def fig2_dataset(m_grid=None, fractions=DEFAULT_FRACTIONS, cal: PowerCalibration | None = None) -> SweepTable:
    """Classical harmonic output power (mW) against m, per drive fraction."""
    cal = cal or PowerCalibration()
    m_grid = _check_grid(default_m_grid() if m_grid is None else m_grid, "m")
    if m_grid[0] < 0:
        raise ParameterDomainError("m must be >= 0")
    fractions = _check_fractions(fractions)

    columns = [("m", "")] + [(f"p_out_mw_{fraction_label(f)}", "mW") for f in fractions]
    rows = [[m] + [output_power(OperatingPoint.from_fraction(m, f), cal) for f in fractions]
            for m in m_grid]
    meta = {"table": "fig2", "version": __version__, "m_grid": _grid_meta(m_grid),
            "fractions": list(fractions), "power_calibration_mw": cal.c}
    return SweepTable(columns, rows, meta)


def spectrum_sweep(point: OperatingPoint, omega_grid, with_oracle: bool = False,
                   params=None, phi: float = 0.0) -> SweepTable:
    """Frequency-resolved spectra at one operating point, optionally cross-checked."""
    omega_grid = _check_grid(omega_grid, "omega")
    columns = [("omega_tilde", ""), ("s_minus", ""), ("s_plus", ""), ("theta_s", "rad")]
    if with_oracle:
        columns += [("oracle_s_minus", ""), ("oracle_s_plus", ""), ("max_rel_dev", "")]
        sys = system_for_point(point, params, phi)
    rows = []
    for w in omega_grid:
        s = spectrum(point, float(w), phi)
        row = [s.omega_tilde, s.s_minus, s.s_plus, s.theta_s]
        if with_oracle:
            o = oracle_spectrum(sys, float(w))
            dev = max(abs(o.s_minus - s.s_minus) / s.s_minus, abs(o.s_plus - s.s_plus) / s.s_plus)
            row += [o.s_minus, o.s_plus, dev]
        rows.append(row)
    meta = {"table": "spectrum", "version": __version__, "m": point.m, "eta_in": point.eta_in,
            "fraction": point.fraction, "phi": phi, "omega_grid": _grid_meta(omega_grid),
            "with_oracle": bool(with_oracle)}
    return SweepTable(columns, rows, meta)
