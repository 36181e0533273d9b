"""Kijowski's arrival-time distribution and its moment expansion.

For a nearly monochromatic packet Pi_K(t) at a screen reduces, order by
order, to v0 rho (order 0), the flux J (order 1), and J plus the Delta
correction (order 2).
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
    WavenumberGrid,
    build_superposition,
    expansion_report,
    trapezoid_integral,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=".")
    ap.add_argument("--spread", type=float, default=0.05,
                    help="relative momentum spread sigma_k / k0")
    args = ap.parse_args()

    units = UnitSystem(hbar=HBAR_SI, mass=CS_MASS_KG, length_unit=1.0)
    # k0 = 20 in solver units; delta_x fixes sigma_k = 1/(2 delta_x)
    k0 = 20.0
    delta_x = 1.0 / (2.0 * args.spread * k0)
    spec = GaussianSpec(delta_x=delta_x,
                        mean_velocity=k0 / units.time_unit * 100.0)
    grid = WavenumberGrid(k0 - 8 * args.spread * k0, k0 + 8 * args.spread * k0,
                          1024)
    packet = build_superposition([spec], grid, units)

    x_screen = 4.0
    tgrid = TimeGrid(0.0, 0.4 * units.time_unit, 2001)
    rep = expansion_report(packet, x_screen, tgrid)

    print(f"sigma_k / k0 = {args.spread}")
    print(f"int Pi_K dt = {trapezoid_integral(rep.kijowski):.10f}")
    for i, d in enumerate(rep.sup_distances):
        print(f"  sup |order{i} - Pi_K| / peak = {d:.4e}")

    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    t = tgrid.times
    fig, (ax, axd) = plt.subplots(2, 1, figsize=(7, 5.6), sharex=True,
                                  height_ratios=[2, 1])
    ax.plot(t, rep.kijowski.values, "k", lw=1.6, label=r"$\Pi_K$")
    ax.plot(t, rep.order0.values, ":", lw=1.2, label=r"$v_0\rho$")
    ax.plot(t, rep.order1.values, "--", lw=1.1, label="flux J")
    ax.plot(t, rep.order2.values, "-.", lw=1.1, label="second order")
    ax.set_ylabel("arrival rate (1/us)")
    ax.legend(frameon=False, fontsize=9)
    for vals, style, lab in ((rep.order0.values, ":", "order 0"),
                             (rep.order1.values, "--", "order 1"),
                             (rep.order2.values, "-.", "order 2")):
        axd.plot(t, vals - rep.kijowski.values, style, lw=1.1, label=lab)
    axd.axhline(0, color="0.7", lw=0.6)
    axd.set_xlabel("t (us)")
    axd.set_ylabel("residual (1/us)")
    axd.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    out = Path(args.out) / "arrival_expansion.png"
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
