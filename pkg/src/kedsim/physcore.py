"""Units, physical constants, and the sampling grids shared by all modules.

All inner-loop numerics run in dimensionless *solver units* with

    hbar = m = 1,   length unit = ``length_unit`` micrometres,

which fixes the time unit to ``m (length_unit um)^2 / hbar``.  For a caesium
atom and a 1 um length unit that is about 2.086 ms, so laboratory
microsecond-scale dynamics map onto small solver times while wavenumbers of
order 10^2 / um keep their numeric value.  ``UnitSystem`` performs every
conversion at the API boundary; nothing at 1e-34 scale ever enters a loop.

User-facing units are fixed per dimension tag:

    length      um
    time        us
    mass        kg
    velocity    cm/s
    wavenumber  1/um
    energy      hbar/us
    rate        1/us
    momentum    kg m/s
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

#: CODATA reduced Planck constant, J s.
HBAR_SI = 1.054571817e-34

#: Caesium-133 atomic mass, kg.
CS_MASS_KG = 2.2e-25


class SimulationError(Exception):
    """Base class for every error raised by this package."""


class UnitError(SimulationError):
    """Unknown dimension tag or unusable unit system."""


class GridError(SimulationError):
    """Grid or series invariant violated."""


class IntegrationError(SimulationError):
    """Non-finite samples handed to a quadrature."""


class CoverageError(SimulationError):
    """Time window does not span the passage of the packet."""


class ValidationError(SimulationError):
    """A parameter object violates its declared invariants."""


@dataclass(frozen=True)
class UnitSystem:
    """Physical constants and scale factors for user <-> solver conversion.

    ``time_unit`` is not free: solver units require hbar = m = 1, which pins
    it to ``mass * (length_unit um)^2 / hbar`` (reported in us).
    """

    hbar: float = HBAR_SI        # J s
    mass: float = CS_MASS_KG     # kg
    length_unit: float = 1.0     # um

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0 and self.length_unit > 0):
            raise ValidationError("UnitSystem requires hbar, mass, length_unit > 0")

    @property
    def time_unit(self) -> float:
        """Solver time unit in us, m*Lambda^2/hbar."""
        lam_m = self.length_unit * 1e-6
        return self.mass * lam_m**2 / self.hbar * 1e6

    @property
    def momentum_unit(self) -> float:
        """Solver momentum unit in kg m/s (mass times Lambda/T, and
        um/us = m/s numerically)."""
        return self.mass * self.length_unit / self.time_unit


# supported dimension tags -> (to_solver, from_solver) scale factor builders
def _scale(units: UnitSystem, dimension: str) -> float:
    T = units.time_unit
    lam = units.length_unit
    if dimension == "length":          # um
        return 1.0 / lam
    if dimension == "time":            # us
        return 1.0 / T
    if dimension == "mass":            # kg
        return 1.0 / units.mass
    if dimension == "velocity":        # cm/s; 1 cm/s = 1e-2 um/us
        return 1e-2 * T / lam
    if dimension == "wavenumber":      # 1/um
        return lam
    if dimension == "energy":          # hbar/us
        return T
    if dimension == "rate":            # 1/us
        return T
    if dimension == "momentum":        # kg m/s
        return 1.0 / units.momentum_unit
    raise UnitError(f"unknown dimension tag {dimension!r}")


def to_solver_units(value, dimension: str, units: UnitSystem):
    """Convert ``value`` from its user unit to dimensionless solver units."""
    return value * _scale(units, dimension)


def from_solver_units(value, dimension: str, units: UnitSystem):
    """Inverse of :func:`to_solver_units`."""
    return value / _scale(units, dimension)


@dataclass(frozen=True)
class WavenumberGrid:
    """Uniform, strictly positive wavenumber grid (1/um)."""

    k_min: float
    k_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise GridError("WavenumberGrid needs n_points >= 2")
        if not (0 < self.k_min < self.k_max):
            raise GridError("WavenumberGrid requires 0 < k_min < k_max")

    @property
    def spacing(self) -> float:
        return (self.k_max - self.k_min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.k_min, self.k_max, self.n_points)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid (us)."""

    t_min: float
    t_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise GridError("TimeGrid needs n_points >= 2")
        if not self.t_max > self.t_min:
            raise GridError("TimeGrid requires t_max > t_min")

    @property
    def spacing(self) -> float:
        return (self.t_max - self.t_min) / (self.n_points - 1)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.n_points)


class TimeSeries:
    """Samples of a real- or complex-valued function on a TimeGrid."""

    def __init__(self, grid: TimeGrid, values):
        values = np.asarray(values)
        if values.shape != (grid.n_points,):
            raise GridError(
                f"TimeSeries needs {grid.n_points} samples, got shape {values.shape}")
        self.grid = grid
        self.values = values

    def real_checked(self, tol: float = 1e-10) -> "TimeSeries":
        """Drop an imaginary part that is pure numerical residue.

        Rate-like series are real by construction (Hermitian kernels); any
        imaginary content above ``tol`` relative to the real peak signals a
        genuine bug and raises.
        """
        if not np.iscomplexobj(self.values):
            return self
        scale = np.max(np.abs(self.values.real)) or 1.0
        resid = np.max(np.abs(self.values.imag)) / scale
        if resid > tol:
            raise GridError(f"imaginary residue {resid:.2e} exceeds {tol:.0e}")
        return TimeSeries(self.grid, self.values.real.copy())

    def __len__(self):
        return self.grid.n_points


def trapezoid_integral(series: TimeSeries) -> float:
    """Composite trapezoid integral over the series' grid.

    Exact for integrands affine in t.  Raises ``IntegrationError`` naming the
    first offending index if any sample is non-finite.
    """
    v = series.values
    bad = ~np.isfinite(v)
    if bad.any():
        idx = int(np.argmax(bad))
        raise IntegrationError(f"non-finite sample at index {idx}")
    return np.trapezoid(v, dx=series.grid.spacing)
