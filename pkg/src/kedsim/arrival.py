"""Kijowski's arrival-time distribution and its (k - k0) expansion.

For a positive-momentum packet the distribution

    Pi_K(t) = (hbar/m) |(2 pi)^{-1/2} int dk sqrt(k) psi~(k) e^{ikx}
                                      e^{-i hbar k^2 t/2m}|^2

is positive and normalized to one.  Expanding k^{1/2} about the first moment
k0 gives, order by order,

    order 0:  v0 rho(x,t)
    order 1:  J(x,t)                      (the flux)
    order 2:  J + Delta/(2 p0),  Delta = tau1 - tau2.

sqrt(k) acts diagonally in k representation, exact on positive support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ked import densities_series
from .physcore import (
    CoverageError,
    TimeGrid,
    TimeSeries,
    to_solver_units,
)
from .wavepacket import WavePacket

_COVERAGE_TOL = 1e-2


@dataclass(frozen=True)
class ExpansionReport:
    """Kijowski distribution, its first three expansion orders, and the
    sup-norm distance of each order from Pi_K (relative to its peak).

    order2 = order1 + Delta/(2 p0) pointwise by construction; all four
    series share one TimeGrid.
    """

    kijowski: TimeSeries
    order0: TimeSeries
    order1: TimeSeries
    order2: TimeSeries
    sup_distances: tuple


def kijowski_distribution(packet: WavePacket, x: float,
                          tgrid: TimeGrid) -> TimeSeries:
    """Pi_K(t) at x (1/us), non-negative by construction."""
    units = packet.units
    k, amp, w = packet.solver_arrays()
    x_s = to_solver_units(x, "length", units)
    t = to_solver_units(tgrid.times, "time", units)
    U = np.exp(1j * np.outer(k, np.full(t.size, x_s)) - 0.5j * np.outer(k**2, t))
    g = (w * amp * np.sqrt(k)) @ U
    vals = np.abs(g) ** 2 / (2 * np.pi) / units.time_unit
    peak = vals.max()
    if peak <= 0 or max(vals[0], vals[-1]) > _COVERAGE_TOL * peak:
        raise CoverageError(
            f"window [{tgrid.t_min}, {tgrid.t_max}] us does not cover the "
            f"arrival: endpoint value {max(vals[0], vals[-1]):.3e} vs peak "
            f"{peak:.3e}")
    return TimeSeries(tgrid, vals)


def expansion_report(packet: WavePacket, x: float,
                     tgrid: TimeGrid) -> ExpansionReport:
    """All four series plus their sup distances from Pi_K.

    For strongly bimodal packets the expansion about a single k0 need not
    converge; distances are reported without asserting any ordering.
    """
    pik = kijowski_distribution(packet, x, tgrid)
    dens = densities_series(packet, x, tgrid)
    units = packet.units
    lam = units.length_unit
    # v0 rho: v0 = hbar k0/m is k0 in solver units; express in um/us
    v0_um_us = to_solver_units(packet.k0, "wavenumber", units) * lam / units.time_unit
    order0 = TimeSeries(tgrid, v0_um_us * dens["rho"].values)
    order1 = dens["flux"]
    # Delta/(2 p0) with p0 = hbar k0: [hbar/us/um] / [hbar/um] = 1/us
    order2 = TimeSeries(tgrid,
                        order1.values + dens["delta"].values / (2.0 * packet.k0))
    peak = pik.values.max()
    sup = tuple(
        float(np.abs(s.values - pik.values).max() / peak)
        for s in (order0, order1, order2))
    return ExpansionReport(pik, order0, order1, order2, sup)
