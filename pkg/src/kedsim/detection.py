"""Finite-gamma first-photon detection rate and its deconvolution.

With the atomic decay rate gamma kept fixed, the normalized detection rate
picks up a per-(k, k') delay kernel

    Pi_N(t) ~ int int dk dk' conj(psi~(k')) psi~(k) k k'
              gamma / (gamma + i hbar (k^2 - k'^2)/m) e^{-i hbar (k^2-k'^2) t/2m}

and relates to the ideal distribution by a convolution Pi = Pi_id * W with
the detector response of an atom at rest.  In Fourier space (convention
F(nu) = int f e^{-i nu t} dt):

    1/W~(nu) = 1 + (gamma/Omega^2 + 2/gamma)(i nu) + (3/Omega^2)(i nu)^2
               + (2/(gamma Omega^2))(i nu)^3
             -> 1 + 2 i nu / gamma          as Omega -> infinity.

Deconvolution multiplies the padded DFT by 1/W~; in the Omega -> infinity
limit this is exactly Pi_id = Pi + (2/gamma) dPi/dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .physcore import (
    SimulationError,
    TimeGrid,
    TimeSeries,
    ValidationError,
    to_solver_units,
    trapezoid_integral,
)
from .wavepacket import WavePacket

_PAD_FACTOR = 4          # zero padding; the 1/W~ multiplier grows ~ nu
_EDGE_SUPPORT_TOL = 1e-6  # endpoint support threshold before the DFT


class UnsupportedModeError(SimulationError):
    """Requested deconvolution mode not available for these parameters."""


class WrapAroundError(SimulationError):
    """Rate has endpoint support; circular deconvolution would wrap."""


@dataclass(frozen=True)
class LaserSpec:
    """Rabi frequency and decay rate of the detection laser (1/us each).

    ``rabi = math.inf`` selects the saturated-kernel limit in which only
    gamma appears.
    """

    rabi: float
    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValidationError(f"gamma must be > 0, got {self.gamma}")
        if not self.rabi > 0:
            raise ValidationError(f"rabi must be > 0, got {self.rabi}")

    def barrier_height(self) -> float:
        """V = hbar Omega^2 / (2 gamma), in hbar/us."""
        if math.isinf(self.rabi):
            raise ValidationError("barrier height undefined for rabi = inf")
        return self.rabi**2 / (2.0 * self.gamma)

    def low_saturation(self, packet: WavePacket, factor: float = 1.0) -> bool:
        """True when hbar*gamma exceeds the packet's kinetic-energy scale by
        ``factor`` (the regime where the one-channel reduction holds)."""
        units = packet.units
        gamma_s = to_solver_units(self.gamma, "rate", units)
        k, amp, w = packet.solver_arrays()
        e_kin = 0.5 * np.sum(w * np.abs(amp) ** 2 * k**2)
        return gamma_s >= factor * e_kin


def finite_gamma_rate(packet: WavePacket, laser: LaserSpec,
                      tgrid: TimeGrid) -> TimeSeries:
    """Normalized finite-gamma detection rate Pi_N(t) (1/us).

    Double quadrature of the delay kernel over (k, k'); the kernel is
    Hermitian, so the series is real up to rounding.  Normalized to unit
    trapezoid integral on ``tgrid`` (the closed form fixes Pi only up to a
    constant).
    """
    units = packet.units
    k, amp, w = packet.solver_arrays()
    gamma_s = to_solver_units(laser.gamma, "rate", units)
    t = to_solver_units(tgrid.times, "time", units)

    A = w * amp * k
    kb2 = k[:, None] ** 2                 # bra
    kk2 = k[None, :] ** 2                 # ket
    # the (kbar, k) beat oscillates as exp(+i(kbar^2-k^2)t/2); attaching
    # gamma/(gamma + i(kbar^2-k^2)) makes the response causal (delay, not
    # advance), i.e. the convolution with (gamma/2)exp(-gamma t/2) theta(t)
    kern = gamma_s / (gamma_s + 1j * (kb2 - kk2))
    M = np.conj(A)[:, None] * kern * A[None, :]
    U = np.exp(-0.5j * np.outer(k**2, t))
    raw = np.einsum("kt,kt->t", np.conj(U), M @ U)
    series = TimeSeries(tgrid, raw).real_checked()
    total = trapezoid_integral(series)
    if not np.isfinite(total) or total <= 0:
        raise ValidationError(f"finite-gamma rate integral {total!r} not positive")
    return TimeSeries(tgrid, series.values / total)


def _inv_w_tilde(nu: np.ndarray, laser: LaserSpec) -> np.ndarray:
    inu = 1j * nu
    g = laser.gamma
    if math.isinf(laser.rabi):
        return 1.0 + 2.0 * inu / g
    o2 = laser.rabi**2
    return 1.0 + (g / o2 + 2.0 / g) * inu + (3.0 / o2) * inu**2 \
        + (2.0 / (g * o2)) * inu**3


def deconvolve(rate: TimeSeries, laser: LaserSpec,
               mode: str = "fourier") -> TimeSeries:
    """Remove the detector delay from ``rate``, returning Pi_id on its grid.

    fourier    -- zero-pad 4x, multiply the DFT by 1/W~(nu), invert; the full
                  cubic polynomial for finite Omega, its 1 + 2 i nu/gamma
                  limit for Omega = inf.
    timedomain -- Pi + (2/gamma) dPi/dt with a spectral derivative on the
                  same padded grid (Omega = inf only).

    The rate must be negligible at both window ends (below 1e-6 of peak),
    otherwise the circular transform wraps the signal around.
    """
    if mode not in ("fourier", "timedomain"):
        raise UnsupportedModeError(f"unknown mode {mode!r}")
    if mode == "timedomain" and not math.isinf(laser.rabi):
        raise UnsupportedModeError(
            "timedomain deconvolution is defined only for rabi = inf")
    v = np.asarray(rate.values, dtype=float)
    peak = np.abs(v).max()
    if peak > 0 and max(abs(v[0]), abs(v[-1])) > _EDGE_SUPPORT_TOL * peak:
        raise WrapAroundError(
            f"endpoint support {max(abs(v[0]), abs(v[-1])) / peak:.2e} of peak "
            f"exceeds {_EDGE_SUPPORT_TOL:.0e}; widen the time window")

    n = v.size
    npad = _PAD_FACTOR * n
    dt = rate.grid.spacing                       # us
    nu = 2.0 * np.pi * np.fft.fftfreq(npad, d=dt)  # rad/us, matches gamma units
    spec = np.fft.fft(v, n=npad)
    if mode == "fourier":
        out = np.fft.ifft(spec * _inv_w_tilde(nu, laser))[:n]
    else:
        deriv = np.fft.ifft(spec * (1j * nu))[:n]
        out = v + (2.0 / laser.gamma) * deriv
    # imaginary residue is rounding noise on a real input; discard
    return TimeSeries(rate.grid, out.real.copy())
