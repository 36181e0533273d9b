"""Finite photon-scattering rate: measured rate, detector delay, and its
removal by deconvolution.

At finite gamma the measured rate is the ideal large-V distribution smeared
by the first-photon response W(t) = (gamma/2) exp(-gamma t/2).  Dividing by
W-tilde in the frequency domain restores the ideal curve.
"""

import argparse
from pathlib import Path

import numpy as np

from kedsim import (
    CS_MASS_KG,
    HBAR_SI,
    GaussianSpec,
    LaserSpec,
    TimeGrid,
    UnitSystem,
    build_superposition,
    deconvolve,
    default_grid,
    finite_gamma_rate,
    large_v_rate,
)


def build_packet(units):
    specs = [
        GaussianSpec(delta_x=0.031, mean_velocity=18.96, focus_time=2.0,
                     weight=2.0 ** -0.5),
        GaussianSpec(delta_x=0.031, mean_velocity=5.34, focus_time=2.0,
                     weight=2.0 ** -0.5),
    ]
    return build_superposition(specs, default_grid(specs, units), units)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=".")
    ap.add_argument("--gammas", nargs="+", type=float,
                    default=[20.0, 50.0, 200.0], help="scattering rates, 1/us")
    args = ap.parse_args()

    units = UnitSystem(hbar=HBAR_SI, mass=CS_MASS_KG, length_unit=1.0)
    packet = build_packet(units)
    # padded window: the deconvolution needs the rate to vanish at both ends
    grid = TimeGrid(-2.0, 8.0, 2501)
    ideal = large_v_rate(packet, grid)
    t_peak_ideal = grid.times[np.argmax(ideal.values)]

    print("   gamma   low-sat   peak delay (us)   sup|rec - ideal|/peak")
    curves = {}
    for g in args.gammas:
        laser = LaserSpec(rabi=np.inf, gamma=g)
        rate = finite_gamma_rate(packet, laser, grid)
        rec = deconvolve(rate, laser)
        delay = grid.times[np.argmax(rate.values)] - t_peak_ideal
        err = np.abs(rec.values - ideal.values).max() / ideal.values.max()
        print(f"  {g:6.1f}   {str(laser.low_saturation(packet)):>7}"
              f"   {delay:13.4f}   {err:.2e}")
        curves[g] = (rate, rec)

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    g_show = args.gammas[len(args.gammas) // 2]
    rate, rec = curves[g_show]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(grid.times, ideal.values, "k", lw=1.6, label="ideal (large V)")
    ax.plot(grid.times, rate.values, lw=1.1,
            label=f"measured, gamma = {g_show:g}/us")
    ax.plot(grid.times, rec.values, "--", lw=1.1, label="deconvolved")
    ax.set_xlim(0.0, 6.0)
    ax.set_xlabel("t (us)")
    ax.set_ylabel("normalized rate (1/us)")
    ax.legend(frameon=False)
    fig.tight_layout()
    out = Path(args.out) / "finite_gamma.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
