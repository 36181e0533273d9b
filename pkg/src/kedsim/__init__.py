"""Quantum kinetic-energy densities and their operational measurement.

Free one-dimensional wave packets with positive momentum support; the three
quantization orderings of the kinetic-energy density; detection by photon
absorption inside an imaginary square barrier; Kijowski arrival times; and a
split-step grid propagator used as an independent cross-check.
"""

from .physcore import (
    CS_MASS_KG,
    HBAR_SI,
    CoverageError,
    GridError,
    IntegrationError,
    SimulationError,
    TimeGrid,
    TimeSeries,
    UnitError,
    UnitSystem,
    ValidationError,
    WavenumberGrid,
    from_solver_units,
    to_solver_units,
    trapezoid_integral,
)
from .wavepacket import (
    GaussianSpec,
    WavePacket,
    build_superposition,
    default_grid,
    first_moment_k,
    free_value,
    free_values,
    shifted,
)
from .ked import (
    DensityTriple,
    densities_at,
    densities_series,
    kinetic_energy_mean,
    time_sum_rules,
)
from .absorber import (
    BarrierSpec,
    ScatteringSolution,
    detection_rate,
    large_v_rate,
    normalized_rate,
    solve_barrier,
)
from .detection import LaserSpec, deconvolve, finite_gamma_rate
from .arrival import ExpansionReport, expansion_report, kijowski_distribution
from .tdse_oracle import (
    GridState,
    PropagationResult,
    aligned_domain,
    oracle_rate,
    propagate,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR_SI", "CS_MASS_KG",
    "SimulationError", "UnitError", "GridError", "IntegrationError",
    "CoverageError", "ValidationError",
    "UnitSystem", "WavenumberGrid", "TimeGrid", "TimeSeries",
    "to_solver_units", "from_solver_units", "trapezoid_integral",
    "GaussianSpec", "WavePacket", "default_grid", "build_superposition",
    "shifted", "first_moment_k", "free_values", "free_value",
    "DensityTriple", "densities_at", "densities_series", "time_sum_rules",
    "kinetic_energy_mean",
    "BarrierSpec", "ScatteringSolution", "solve_barrier", "detection_rate",
    "normalized_rate", "large_v_rate",
    "LaserSpec", "finite_gamma_rate", "deconvolve",
    "ExpansionReport", "kijowski_distribution", "expansion_report",
    "GridState", "PropagationResult", "aligned_domain", "propagate",
    "oracle_rate",
    "__version__",
]
