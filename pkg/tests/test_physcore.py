import math

import numpy as np
import pytest

from kedsim.physcore import (
    CS_MASS_KG,
    HBAR_SI,
    GridError,
    IntegrationError,
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

DIMENSIONS = ("length", "time", "mass", "velocity", "wavenumber", "energy",
              "rate", "momentum")


# ---------------------------------------------------------------------------
# unit system

def test_time_unit_from_si_arithmetic(units):
    # independent derivation: T = m Lambda^2 / hbar, in microseconds
    lam_m = 1.0e-6
    t_seconds = CS_MASS_KG * lam_m**2 / HBAR_SI
    assert units.time_unit == pytest.approx(t_seconds * 1e6, rel=1e-14)
    assert units.time_unit == pytest.approx(2086.154745021031, rel=1e-15)


def test_momentum_unit_from_si_arithmetic(units):
    lam_m = 1.0e-6
    t_seconds = CS_MASS_KG * lam_m**2 / HBAR_SI
    assert units.momentum_unit == pytest.approx(CS_MASS_KG * lam_m / t_seconds,
                                                rel=1e-14)
    # ... which is just hbar / Lambda
    assert units.momentum_unit == pytest.approx(HBAR_SI / lam_m, rel=1e-14)


def test_velocity_conversion_cs_fast_component(units):
    # 18.96 cm/s -> solver wavenumber-like speed (= k for hbar = m = 1)
    assert to_solver_units(18.96, "velocity", units) == pytest.approx(
        395.53493965598744, rel=1e-15)


def test_momentum_round_trip_caption_value(units):
    p = 2.673e-26  # kg m/s
    k = to_solver_units(p, "momentum", units)
    assert from_solver_units(k, "momentum", units) == pytest.approx(p, rel=1e-12)
    # hbar k with k in 1/um must reproduce p: k = p Lambda / hbar
    assert k == pytest.approx(p * 1e-6 / HBAR_SI, rel=1e-12)


def test_round_trip_every_dimension(units):
    rng = np.random.default_rng(314)
    for dim in DIMENSIONS:
        vals = rng.uniform(1e-3, 1e3, size=125)
        back = from_solver_units(to_solver_units(vals, dim, units), dim, units)
        assert np.max(np.abs(back / vals - 1.0)) < 1e-12, dim


def test_conversion_linearity(units):
    rng = np.random.default_rng(99)
    a, b = rng.uniform(0.5, 2.0, size=2)
    for dim in DIMENSIONS:
        assert to_solver_units(a + b, dim, units) == pytest.approx(
            to_solver_units(a, dim, units) + to_solver_units(b, dim, units),
            rel=1e-14)


def test_unknown_dimension_tag(units):
    with pytest.raises(UnitError):
        to_solver_units(1.0, "charge", units)
    with pytest.raises(UnitError):
        from_solver_units(1.0, "frequency", units)


def test_unit_system_positivity():
    with pytest.raises(ValidationError):
        UnitSystem(hbar=0.0, mass=CS_MASS_KG, length_unit=1.0)
    with pytest.raises(ValidationError):
        UnitSystem(hbar=HBAR_SI, mass=-1.0, length_unit=1.0)


def test_rate_is_inverse_time(units):
    r = 50.0  # 1/us
    assert to_solver_units(r, "rate", units) == pytest.approx(
        r * units.time_unit, rel=1e-14)
    assert to_solver_units(3.0, "time", units) * to_solver_units(
        1.0 / 3.0, "rate", units) == pytest.approx(1.0, rel=1e-14)


def test_energy_rate_consistency(units):
    # energy in hbar/us converts with the same factor as rate (E = hbar w)
    assert to_solver_units(1.9, "energy", units) == pytest.approx(
        to_solver_units(1.9, "rate", units), rel=1e-14)


# ---------------------------------------------------------------------------
# grids and series

def test_wavenumber_grid_basics():
    g = WavenumberGrid(1.0, 3.0, 5)
    assert g.spacing == pytest.approx(0.5)
    assert np.allclose(g.points, [1.0, 1.5, 2.0, 2.5, 3.0])


def test_wavenumber_grid_rejects_bad_bounds():
    with pytest.raises(GridError):
        WavenumberGrid(0.0, 3.0, 5)
    with pytest.raises(GridError):
        WavenumberGrid(-1.0, 3.0, 5)
    with pytest.raises(GridError):
        WavenumberGrid(2.0, 2.0, 5)
    with pytest.raises(GridError):
        WavenumberGrid(1.0, 3.0, 1)


def test_time_grid_basics():
    g = TimeGrid(0.0, 6.0, 2001)
    assert g.spacing == pytest.approx(0.003)
    assert g.times[0] == 0.0 and g.times[-1] == 6.0 and g.times.size == 2001
    with pytest.raises(GridError):
        TimeGrid(1.0, 1.0, 10)
    with pytest.raises(GridError):
        TimeGrid(0.0, 1.0, 1)


def test_time_series_shape_check():
    g = TimeGrid(0.0, 1.0, 11)
    with pytest.raises(GridError):
        TimeSeries(g, np.zeros(10))


def test_real_checked_accepts_roundoff_and_rejects_residue():
    g = TimeGrid(0.0, 1.0, 11)
    vals = np.ones(11) + 1e-14j
    out = TimeSeries(g, vals).real_checked()
    assert out.values.dtype.kind == "f"
    with pytest.raises(GridError):
        TimeSeries(g, np.ones(11) + 1e-3j).real_checked()


def test_trapezoid_constant_and_linear_exact():
    g = TimeGrid(0.0, 2.0, 21)
    assert trapezoid_integral(TimeSeries(g, np.full(21, 3.0))) == pytest.approx(6.0)
    # trapezoid is exact on linear integrands
    assert trapezoid_integral(TimeSeries(g, 5.0 * g.times)) == pytest.approx(10.0)


def test_trapezoid_gaussian_spectral_accuracy():
    # endpoints deep in the tail -> error far below h^2 scaling
    g = TimeGrid(-8.0, 8.0, 2001)
    vals = np.exp(-0.5 * g.times**2) / math.sqrt(2.0 * math.pi)
    assert trapezoid_integral(TimeSeries(g, vals)) == pytest.approx(1.0, abs=1e-12)


def test_trapezoid_rejects_non_finite_with_index():
    g = TimeGrid(0.0, 1.0, 11)
    vals = np.ones(11)
    vals[7] = np.nan
    with pytest.raises(IntegrationError, match="index 7"):
        trapezoid_integral(TimeSeries(g, vals))
