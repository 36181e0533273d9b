"""Free 1D wave packets with positive-momentum support, in k representation.

A packet is stored as a complex amplitude psi~(k) on a uniform, strictly
positive wavenumber grid.  Position-space values come from direct oscillatory
quadrature of

    psi_f(x,t) = (2 pi)^{-1/2} \\int_0^inf dk psi~(k) e^{ikx} e^{-i hbar k^2 t / 2m},

trapezoid rule on the k grid, with spatial derivatives taken spectrally as
(ik)^n under the integral.  Everything internal is hbar = m = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .physcore import (
    SimulationError,
    UnitSystem,
    WavenumberGrid,
    from_solver_units,
    to_solver_units,
)

# endpoint leakage thresholds, relative to the amplitude maximum
_EDGE_TOL = 1e-6
_EDGE_TOL_PINNED = 1e-4   # lower endpoint sitting on the positivity floor

# a packet mean must sit at least this many momentum-spreads above k = 0,
# bounding negative-k leakage below ~3e-5 in norm
_POSITIVITY_MARGIN = 4.0

_MIN_POINTS_PER_SPREAD = 8.0


class ConstructionError(SimulationError):
    """Packet construction violates a declared invariant."""


class ResolutionError(SimulationError):
    """Wavenumber grid too coarse for the requested packet."""


class RangeError(SimulationError):
    """(x, t) outside the aliasing-safe window of the k grid."""


@dataclass(frozen=True)
class GaussianSpec:
    """One minimum-uncertainty Gaussian component.

    The component has spatial width ``delta_x`` at time ``focus_time``,
    centred on ``focus_position``, and is phased so that free evolution
    focuses it there (it is minimal-uncertainty exactly then).
    """

    delta_x: float             # um
    mean_velocity: float       # cm/s
    focus_position: float = 0.0   # um
    focus_time: float = 0.0       # us
    weight: complex = 1.0

    def __post_init__(self):
        if not self.delta_x > 0:
            raise ConstructionError(f"delta_x must be > 0, got {self.delta_x}")


class WavePacket:
    """Positive-momentum packet: amplitude psi~(k) on a WavenumberGrid.

    Invariants checked at construction: unit norm (trapezoid) to 1e-8, and
    no truncation leakage -- endpoint |psi~| below 1e-6 of its maximum.  The
    lower endpoint is exempted up to 1e-4 when the grid is pinned at the
    positivity floor (k_min within one spacing of zero): a positive-momentum
    packet may carry a physically real, small tail at k -> 0+ that no
    admissible grid can push below 1e-6.
    """

    def __init__(self, grid: WavenumberGrid, amplitude, units: UnitSystem):
        amplitude = np.asarray(amplitude, dtype=complex)
        if amplitude.shape != (grid.n_points,):
            raise ConstructionError(
                f"amplitude needs {grid.n_points} samples, got {amplitude.shape}")
        norm = np.trapezoid(np.abs(amplitude) ** 2, dx=grid.spacing)
        if abs(norm - 1.0) > 1e-8:
            raise ConstructionError(f"packet norm {norm!r} differs from 1 by > 1e-8")
        peak = np.abs(amplitude).max()
        lo = np.abs(amplitude[0]) / peak
        hi = np.abs(amplitude[-1]) / peak
        if hi > _EDGE_TOL:
            raise ConstructionError(
                f"upper-endpoint amplitude {hi:.2e} of max exceeds {_EDGE_TOL:.0e}: "
                "extend k_max")
        pinned = grid.k_min <= grid.spacing
        if lo > (_EDGE_TOL_PINNED if pinned else _EDGE_TOL):
            raise ConstructionError(
                f"lower-endpoint amplitude {lo:.2e} of max is truncation leakage: "
                "extend k_min toward 0")
        self.grid = grid
        self.amplitude = amplitude
        self.units = units

    # --- solver-side views -------------------------------------------------
    def solver_arrays(self):
        """(k, psi~, trapezoid weights), all in solver units."""
        lam = self.units.length_unit
        k = self.grid.points * lam
        amp = self.amplitude / np.sqrt(lam)
        w = np.full(k.size, k[1] - k[0])
        w[0] /= 2
        w[-1] /= 2
        return k, amp, w

    # --- derived moments ---------------------------------------------------
    @property
    def k0(self) -> float:
        """First moment of |psi~|^2, 1/um."""
        return first_moment_k(self)

    @property
    def p0(self) -> float:
        """Mean momentum hbar k0, kg m/s."""
        k0_s = to_solver_units(self.k0, "wavenumber", self.units)
        return from_solver_units(k0_s, "momentum", self.units)

    @property
    def v0(self) -> float:
        """Mean velocity hbar k0 / m, cm/s."""
        k0_s = to_solver_units(self.k0, "wavenumber", self.units)
        return from_solver_units(k0_s, "velocity", self.units)


def default_grid(specs, units: UnitSystem, n_points: int = 2048,
                 span_sigmas: float = 8.0, floor: float = 1e-6) -> WavenumberGrid:
    """Grid covering every component to ``span_sigmas`` momentum-spreads.

    The lower bound is clamped at a small positive floor; for packets whose
    slow component presses against k = 0 the grid is then "pinned" and the
    relaxed lower-endpoint rule of WavePacket applies.
    """
    lo, hi = [], []
    for spec in specs:
        k_c = to_solver_units(spec.mean_velocity, "velocity", units)
        sigma = 1.0 / (2.0 * to_solver_units(spec.delta_x, "length", units))
        lo.append(k_c - span_sigmas * sigma)
        hi.append(k_c + span_sigmas * sigma)
    lam = units.length_unit
    k_lo = max(min(lo) / lam, floor)
    k_hi = max(hi) / lam
    return WavenumberGrid(k_lo, k_hi, n_points)


def build_superposition(specs, grid: WavenumberGrid, units: UnitSystem) -> WavePacket:
    """Coherent, renormalized sum of Gaussian components on ``grid``.

    Each component nu contributes

        w_nu (2 dx^2/pi)^{1/4} e^{-dx^2 (k-k_nu)^2} e^{-i k x_f} e^{+i k^2 t_f/2}

    (solver units), i.e. a minimum-uncertainty Gaussian of spatial width dx
    focused at x_f at time t_f.  Weights are applied before the global
    renormalization, so equal weights of any magnitude give the same state.
    """
    specs = list(specs)
    if not specs:
        raise ConstructionError("need at least one GaussianSpec")
    lam = units.length_unit
    k = grid.points * lam                      # solver wavenumbers
    amp = np.zeros(k.size, dtype=complex)
    for i, spec in enumerate(specs):
        k_c = to_solver_units(spec.mean_velocity, "velocity", units)
        dx = to_solver_units(spec.delta_x, "length", units)
        sigma = 1.0 / (2.0 * dx)
        if k_c < _POSITIVITY_MARGIN * sigma:
            raise ConstructionError(
                f"spec {i} ({spec!r}): mean momentum {k_c:.4g} sits below "
                f"{_POSITIVITY_MARGIN} momentum-spreads ({_POSITIVITY_MARGIN * sigma:.4g}); "
                "positive-momentum support not guaranteed")
        if grid.spacing * lam > sigma / _MIN_POINTS_PER_SPREAD:
            raise ResolutionError(
                f"spec {i}: grid spacing {grid.spacing:.4g} gives fewer than "
                f"{_MIN_POINTS_PER_SPREAD:.0f} points per momentum-spread {sigma / lam:.4g}")
        x_f = to_solver_units(spec.focus_position, "length", units)
        t_f = to_solver_units(spec.focus_time, "time", units)
        amp += (complex(spec.weight) * (2 * dx**2 / np.pi) ** 0.25
                * np.exp(-dx**2 * (k - k_c) ** 2)
                * np.exp(-1j * k * x_f)
                * np.exp(0.5j * k**2 * t_f))
    norm = np.trapezoid(np.abs(amp) ** 2, dx=grid.spacing)   # user-unit measure
    if not norm > 0:
        raise ConstructionError("superposition has zero norm")
    return WavePacket(grid, amp / np.sqrt(norm), units)


def shifted(packet: WavePacket, a: float) -> WavePacket:
    """Packet translated by ``a`` um: psi~(k) -> psi~(k) e^{-ika}."""
    a_s = to_solver_units(a, "length", packet.units)
    k, _, _ = packet.solver_arrays()
    return WavePacket(packet.grid, packet.amplitude * np.exp(-1j * k * a_s),
                      packet.units)


def first_moment_k(packet: WavePacket) -> float:
    """k0 = int |psi~(k)|^2 k dk, in 1/um."""
    k = packet.grid.points
    return np.trapezoid(np.abs(packet.amplitude) ** 2 * k, dx=packet.grid.spacing)


def _window_guard(packet: WavePacket, x_s, t_s):
    """Trapezoid quadrature of e^{i(kx - k^2 t/2)} needs the phase advance per
    grid step below pi at every k; check at both grid ends."""
    k, _, _ = packet.solver_arrays()
    dk = k[1] - k[0]
    adv = np.maximum(np.abs(x_s - k[0] * t_s), np.abs(x_s - k[-1] * t_s)) * dk
    worst = np.max(adv)
    if worst >= np.pi:
        raise RangeError(
            f"(x, t) outside the aliasing-safe window: phase advance per k step "
            f"{worst:.3f} >= pi; need |x/len_unit - k t/time_unit| < pi/dk = "
            f"{np.pi / dk:.4g} (solver units) at both grid ends")


def free_values(packet: WavePacket, x, t, derivative_order: int = 0) -> np.ndarray:
    """Vectorized d^n psi_f / dx^n over broadcast (x, t) arrays.

    x in um, t in us; output in um^{-(n + 1/2)}.
    """
    if derivative_order not in (0, 1, 2):
        raise ValueError("derivative_order must be 0, 1 or 2")
    units = packet.units
    x_s = np.asarray(to_solver_units(x, "length", units), dtype=float)
    t_s = np.asarray(to_solver_units(t, "time", units), dtype=float)
    x_s, t_s = np.broadcast_arrays(x_s, t_s)
    shape = x_s.shape
    xf = x_s.ravel()
    tf = t_s.ravel()
    _window_guard(packet, xf, tf)

    k, amp, w = packet.solver_arrays()
    coef = (w * amp * (1j * k) ** derivative_order) / np.sqrt(2 * np.pi)
    out = np.empty(xf.size, dtype=complex)
    # chunked so the (samples x k) phase matrix stays cache-friendly
    step = max(1, 1_000_000 // k.size)
    for i in range(0, xf.size, step):
        sl = slice(i, i + step)
        phase = np.exp(1j * np.outer(xf[sl], k) - 0.5j * np.outer(tf[sl], k**2))
        out[sl] = phase @ coef
    out *= units.length_unit ** -(derivative_order + 0.5)
    return out.reshape(shape)


def free_value(packet: WavePacket, x: float, t: float,
               derivative_order: int = 0) -> complex:
    """d^n psi_f / dx^n at a single point (x um, t us)."""
    return complex(free_values(packet, x, t, derivative_order))
