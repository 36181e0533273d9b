import numpy as np
import pytest

from kedsim.physcore import CoverageError, TimeGrid, WavenumberGrid, trapezoid_integral
from kedsim.wavepacket import GaussianSpec, build_superposition, default_grid, shifted
from kedsim.arrival import expansion_report, kijowski_distribution

X_EVAL = 4.0


def _solver_velocity_cm_s(units, k_solver):
    return k_solver / units.time_unit * 100.0


@pytest.fixture(scope="module")
def quasi_mono(units):
    # sigma_k / k0 = 1/20: narrow enough that the expansion hierarchy is
    # cleanly visible at x = 4 um
    spec = GaussianSpec(delta_x=0.5,
                        mean_velocity=_solver_velocity_cm_s(units, 20.0))
    grid = WavenumberGrid(12.0, 28.0, 1024)
    return build_superposition([spec], grid, units)


@pytest.fixture(scope="module")
def transit_grid(units):
    return TimeGrid(0.0, 0.4 * units.time_unit, 2001)


@pytest.fixture(scope="module")
def report(quasi_mono, transit_grid):
    return expansion_report(quasi_mono, X_EVAL, transit_grid)


def test_distribution_normalized_and_nonnegative(quasi_mono, transit_grid):
    pk = kijowski_distribution(quasi_mono, X_EVAL, transit_grid)
    assert pk.values.min() >= 0.0
    assert trapezoid_integral(pk) == pytest.approx(0.9999999997811939,
                                                   rel=1e-12)


def test_expansion_hierarchy_pinned(report):
    expected = (0.012343264736152588, 0.0010813552731936014,
                3.000360804431052e-05)
    for got, ref in zip(report.sup_distances, expected):
        assert got == pytest.approx(ref, rel=1e-8)
    d0, d1, d2 = report.sup_distances
    assert d0 > d1 > d2


def test_expansion_orders_normalized(report):
    assert trapezoid_integral(report.order1) == pytest.approx(1.0, abs=1e-4)
    assert trapezoid_integral(report.order2) == pytest.approx(1.0, abs=1e-4)
    # the second-order correction integrates to zero over a full transit
    assert abs(trapezoid_integral(report.order2)
               - trapezoid_integral(report.order1)) < 1e-6


def test_order0_is_speed_times_density(units, report, quasi_mono, transit_grid):
    from kedsim.ked import densities_series
    dens = densities_series(quasi_mono, X_EVAL, transit_grid)
    v0_um_us = quasi_mono.k0 / units.time_unit * units.length_unit**2
    assert np.allclose(report.order0.values, v0_um_us * dens["rho"].values,
                       rtol=1e-10)


def test_order1_is_flux(report, quasi_mono, transit_grid):
    from kedsim.ked import densities_series
    dens = densities_series(quasi_mono, X_EVAL, transit_grid)
    assert np.allclose(report.order1.values, dens["flux"].values, rtol=1e-10)


def test_near_monochromatic_limit(units):
    # sigma_k / k0 = 1/160: all descriptions collapse onto v0 rho.  The
    # broad packet needs a longer flight (x = 16) for the transit to fit.
    spec = GaussianSpec(delta_x=4.0,
                        mean_velocity=_solver_velocity_cm_s(units, 20.0))
    grid = WavenumberGrid(18.0, 22.0, 1024)
    packet = build_superposition([spec], grid, units)
    rep = expansion_report(packet, 16.0, TimeGrid(0.0, 1.6 * units.time_unit,
                                                  2001))
    assert rep.sup_distances[0] < 2e-4
    assert rep.sup_distances[2] < rep.sup_distances[0]


def test_translation_covariance(quasi_mono, transit_grid):
    a = 0.8
    moved = shifted(quasi_mono, a)
    pk = kijowski_distribution(quasi_mono, X_EVAL, transit_grid)
    pk_moved = kijowski_distribution(moved, X_EVAL + a, transit_grid)
    assert np.allclose(pk.values, pk_moved.values, rtol=1e-10,
                       atol=1e-14 * pk.values.max())


def test_random_packets_unit_integral(units):
    rng = np.random.default_rng(77)
    for _ in range(10):
        k0 = rng.uniform(15.0, 60.0)
        dx = rng.uniform(0.3, 1.2)
        spec = GaussianSpec(delta_x=dx,
                            mean_velocity=_solver_velocity_cm_s(units, k0))
        packet = build_superposition([spec], default_grid([spec], units),
                                     units)
        x = 4.0
        t_mid = x / k0 * units.time_unit
        grid = TimeGrid(0.0, 2.2 * t_mid, 1501)
        pk = kijowski_distribution(packet, x, grid)
        assert pk.values.min() >= 0.0
        assert trapezoid_integral(pk) == pytest.approx(1.0, abs=1e-3)


def test_coverage_guard(quasi_mono, units):
    # a window that ends mid-transit leaves the endpoint hot
    grid = TimeGrid(0.0, 0.2 * units.time_unit, 501)
    with pytest.raises(CoverageError):
        kijowski_distribution(quasi_mono, X_EVAL, grid)
