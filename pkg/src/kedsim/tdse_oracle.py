"""Independent grid propagation under H = p^2/2m - i V chi_[a, a+L](x).

Second-order split-step Fourier evolution used as the brute-force check on
the closed-form absorber path: exact spectral kinetic steps on a periodic
position grid alternate with exact potential half-steps, a pointwise
e^{-V dt / 2 hbar} on the barrier cells.  The sharp indicator chi is sampled
by cell-center membership; aligning the barrier edges with cell boundaries
(see aligned_domain) keeps the edge error at the quadratic level the
convergence tests assume.

The domain must enclose every lobe for the whole run -- there is no absorbing
layer except the physical barrier, so boundary contamination is treated as a
hard error, not damped away.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .absorber import BarrierSpec
from .physcore import (
    SimulationError,
    TimeGrid,
    TimeSeries,
    ValidationError,
    to_solver_units,
)
from .wavepacket import WavePacket, free_values

_BOUNDARY_TOL = 1e-8
# Two intrinsic fields sit above the strict amplitude rule without ever
# touching the occupancy bookkeeping: the static far-field floor left by
# truncating a physical k -> 0 tail (~1e-7 of peak), and the broadband
# ripple the sharp absorber mask radiates each split step (~1e-3 of peak in
# amplitude but ~1e-7 in probability).  When the strict rule trips, the
# guard therefore falls back to what it is actually for -- norm-carrying
# reflected/transmitted lobes reaching the edges -- by bounding the outer
# band's probability content and capping the raw amplitude.
_BAND_CELLS = 32
_BAND_NORM_TOL = 1e-6
_AMP_CEIL = 1e-2


class StabilityError(SimulationError):
    """Time step too coarse for the kinetic bandwidth or absorption scale."""


class BoundaryError(SimulationError):
    """A lobe of the wavefunction reached the periodic domain edge."""


@dataclass
class GridState:
    """Snapshot of the wavefunction on the uniform position grid.

    psi is stored in solver normalization (sum |psi|^2 dx_solver = norm);
    the grid is x_min + i (x_max - x_min)/n_x, i = 0..n_x-1, in um.
    """

    x_min: float      # um
    x_max: float      # um
    n_x: int
    psi: np.ndarray
    t: float          # us


class PropagationResult:
    """Sequence of (t [us], norm, barrier occupancy [um]) records."""

    def __init__(self, times, norms, occupancy, barrier, units,
                 final_state=None):
        self.times = np.asarray(times)
        self.norms = np.asarray(norms)
        self.occupancy = np.asarray(occupancy)
        self.barrier = barrier
        self.units = units
        self.final_state = final_state

    def __len__(self):
        return self.times.size

    def __getitem__(self, i):
        return (self.times[i], self.norms[i], self.occupancy[i])

    def __iter__(self):
        return iter(zip(self.times, self.norms, self.occupancy))


def aligned_domain(barrier: BarrierSpec, x_lo: float, x_hi: float,
                   dx_target: float):
    """(x_min, x_max, n_x) covering [x_lo, x_hi] with barrier edges exactly on
    cell boundaries and n_x a power of two.

    The spacing is L/ceil(L/dx_target) so an integer number of cells tiles
    the barrier, the grid is placed so x = offset_a falls on a cell boundary,
    and the domain grows (never shrinks) to the next power of two.
    """
    a = barrier.offset_a
    m_cells = max(1, int(np.ceil(barrier.L / dx_target)))
    dx = barrier.L / m_cells
    n_left = int(np.ceil((a - x_lo) / dx - 0.5))
    need = n_left + int(np.ceil((x_hi - a) / dx + 0.5))
    n_x = 1 << int(np.ceil(np.log2(need)))
    x_min = a - (n_left + 0.5) * dx
    return x_min, x_min + n_x * dx, n_x


def propagate(initial: WavePacket, barrier: BarrierSpec, domain, n_x: int,
              dt: float, tgrid: TimeGrid,
              keep_final_state: bool = False) -> PropagationResult:
    """Split-step run from tgrid.t_min to tgrid.t_max.

    The initial state is the free packet synthesized on the grid at
    tgrid.t_min.  ``dt`` (us) is an upper bound on the step; the actual step
    divides the window exactly.  Preconditions: hbar k_max^2/2m dt < 0.1
    (packet bandwidth) and V dt/hbar < 0.1.  Records (t, norm, occupancy)
    at every step, t = t_min included.

    Aborts with BoundaryError on boundary contamination: amplitude beyond
    1e-8 of the initial peak flags a record, which is tolerated only while
    the outer bands stay probabilistically empty (spectral-truncation floor
    and absorber-edge ripple; see the constants above) -- an actual lobe
    reaching either edge aborts with the offending time.
    """
    units = initial.units
    if n_x < 2 or (n_x & (n_x - 1)) != 0:
        raise ValidationError(f"n_x must be a power of two, got {n_x}")
    x_lo, x_hi = domain
    if not x_hi > x_lo:
        raise ValidationError("domain must satisfy x_max > x_min")

    T = units.time_unit
    lam = units.length_unit
    V = to_solver_units(barrier.V, "energy", units)
    L = to_solver_units(barrier.L, "length", units)
    a = to_solver_units(barrier.offset_a, "length", units)
    t0 = tgrid.t_min / T
    t1 = tgrid.t_max / T
    span = t1 - t0

    k_pk, _, _ = initial.solver_arrays()
    dt_s = dt / T
    kin = 0.5 * k_pk[-1] ** 2 * dt_s
    absb = V * dt_s
    if kin >= 0.1 or absb >= 0.1:
        raise StabilityError(
            f"dt = {dt} us too coarse: kinetic phase/step {kin:.3f}, "
            f"absorption V dt/hbar {absb:.3f} (both must stay < 0.1)")

    nst = int(np.ceil(span / dt_s * (1.0 - 1e-12)))
    dt_s = span / nst

    xg = np.linspace(x_lo / lam, x_hi / lam, n_x, endpoint=False)
    dx = xg[1] - xg[0]
    kx = 2.0 * np.pi * np.fft.fftfreq(n_x, d=dx)
    exp_kin = np.exp(-0.5j * kx**2 * dt_s)
    bar = (xg > a) & (xg < a + L)
    f_half = np.exp(-0.5 * V * dt_s)

    psi = free_values(initial, xg * lam, tgrid.t_min, 0) * np.sqrt(lam)
    peak0 = np.abs(psi).max()

    nb = min(_BAND_CELLS, n_x // 8)

    def record(step, psi):
        t_us = (t0 + step * dt_s) * T
        edge = max(abs(psi[0]), abs(psi[-1]))
        if edge > _BOUNDARY_TOL * peak0:
            a2b = np.abs(psi[:nb]) ** 2, np.abs(psi[-nb:]) ** 2
            band = max(a2b[0].sum(), a2b[1].sum()) * dx
            if band > _BAND_NORM_TOL or edge > _AMP_CEIL * peak0:
                raise BoundaryError(
                    f"boundary contamination at t = {t_us:.4f} us: edge "
                    f"amplitude {edge / peak0:.2e} of peak, outer-band norm "
                    f"{band:.2e}; enlarge the domain")
        a2 = np.abs(psi) ** 2
        return t_us, a2.sum() * dx, a2[bar].sum() * dx * lam   # occupancy in um

    times = np.empty(nst + 1)
    norms = np.empty(nst + 1)
    occ = np.empty(nst + 1)
    times[0], norms[0], occ[0] = record(0, psi)
    fft, ifft = np.fft.fft, np.fft.ifft
    for s in range(nst):
        if V > 0:
            psi[bar] *= f_half
        psi = ifft(fft(psi) * exp_kin)
        if V > 0:
            psi[bar] *= f_half
        times[s + 1], norms[s + 1], occ[s + 1] = record(s + 1, psi)
    final = None
    if keep_final_state:
        final = GridState(x_min=x_lo, x_max=x_hi, n_x=n_x, psi=psi,
                          t=tgrid.t_max)
    return PropagationResult(times, norms, occ, barrier, units, final)


def oracle_rate(result: PropagationResult, tgrid: TimeGrid) -> TimeSeries:
    """Pi(t) = (2V/hbar) * occupancy, resampled onto ``tgrid`` (1/us)."""
    units = result.units
    V = to_solver_units(result.barrier.V, "energy", units)
    occ_s = result.occupancy / units.length_unit
    pi_rec = 2.0 * V * occ_s / units.time_unit        # 1/us at record times
    t = tgrid.times
    if t[0] < result.times[0] - 1e-12 or t[-1] > result.times[-1] + 1e-12:
        raise ValidationError(
            f"requested grid [{t[0]}, {t[-1]}] us outside the recorded range "
            f"[{result.times[0]:.4f}, {result.times[-1]:.4f}] us")
    return TimeSeries(tgrid, np.interp(t, result.times, pi_rec))
