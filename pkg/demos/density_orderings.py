"""Compare the three kinetic-energy-density orderings at a fixed point.

tau1 = |d psi/dx|^2 / 2m is non-negative; tau2 = -Re[psi* psi''] / 2m dips
below zero while the two velocity classes interfere; tau3 is their average.
The difference Delta = tau1 - tau2 equals (hbar^2/4m) d2rho/dx2 and
integrates to zero over a full transit.
"""

import argparse
from pathlib import Path

import numpy as np

from kedsim import (
    CS_MASS_KG,
    HBAR_SI,
    GaussianSpec,
    TimeGrid,
    UnitSystem,
    build_superposition,
    default_grid,
    densities_series,
    trapezoid_integral,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=".", help="directory for the png")
    ap.add_argument("--x", type=float, default=0.0, help="evaluation point (um)")
    args = ap.parse_args()

    units = UnitSystem(hbar=HBAR_SI, mass=CS_MASS_KG, length_unit=1.0)
    specs = [
        GaussianSpec(delta_x=0.031, mean_velocity=18.96, focus_time=2.0,
                     weight=2.0 ** -0.5),
        GaussianSpec(delta_x=0.031, mean_velocity=5.34, focus_time=2.0,
                     weight=2.0 ** -0.5),
    ]
    packet = build_superposition(specs, default_grid(specs, units), units)

    grid = TimeGrid(0.0, 6.0, 2001)
    dens = densities_series(packet, args.x, grid)
    t = grid.times

    tau1 = dens["tau1"].values
    tau2 = dens["tau2"].values
    neg = t[tau2 < 0.0]
    print(f"peak tau1 = {tau1.max():.2f} hbar/us per um")
    print(f"min  tau2 = {tau2.min():.2f}  ({tau2.min() / tau1.max():+.3f} of "
          "the tau1 peak)")
    if neg.size:
        print(f"tau2 < 0 for t in [{neg[0]:.3f}, {neg[-1]:.3f}] us "
              f"({neg.size} of {t.size} samples)")

    # time-integral checks: int tau1 dt -> p0/2, int Delta dt -> 0
    i1 = trapezoid_integral(dens["tau1"])
    idelta = trapezoid_integral(dens["delta"])
    print(f"int tau1  dt = {i1:.4f} hbar/um   (p0/2 = {0.5 * packet.k0:.4f})")
    print(f"int Delta dt / int tau1 dt = {idelta / i1:+.2e}")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(t, tau1, label=r"$\tau^{(1)}$", lw=1.4)
    ax.plot(t, tau2, "--", label=r"$\tau^{(2)}$", lw=1.2)
    ax.plot(t, dens["tau3"].values, "-.", label=r"$\tau^{(3)}$", lw=1.2)
    ax.axhline(0, color="0.7", lw=0.6)
    ax.set_xlabel("t (us)")
    ax.set_ylabel("kinetic energy density (hbar/us per um)")
    ax.legend(frameon=False)
    fig.tight_layout()
    out = Path(args.out) / "density_orderings.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
