"""Build the two-Gaussian caesium packet and look at its basic numbers.

Two minimum-uncertainty components (18.96 and 5.34 cm/s, delta_x = 0.031 um)
are focused at x = 0, t = 2 us.  The script prints the derived solver scales,
the packet momentum, and the spreading of the position density around the
focus.
"""

import argparse

import numpy as np

from kedsim import (
    CS_MASS_KG,
    HBAR_SI,
    GaussianSpec,
    UnitSystem,
    build_superposition,
    default_grid,
    free_values,
)


def density_moments(packet, t, x):
    rho = np.abs(free_values(packet, x, t, 0)) ** 2
    w = rho / np.trapezoid(rho, x)
    mean = np.trapezoid(w * x, x)
    var = np.trapezoid(w * (x - mean) ** 2, x)
    return mean, np.sqrt(var)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--weights", nargs=2, type=float, default=[1.0, 1.0],
                    help="relative amplitudes of the fast/slow component")
    args = ap.parse_args()

    units = UnitSystem(hbar=HBAR_SI, mass=CS_MASS_KG, length_unit=1.0)
    w = np.asarray(args.weights) / np.linalg.norm(args.weights)
    specs = [
        GaussianSpec(delta_x=0.031, mean_velocity=18.96, focus_time=2.0,
                     weight=w[0]),
        GaussianSpec(delta_x=0.031, mean_velocity=5.34, focus_time=2.0,
                     weight=w[1]),
    ]
    grid = default_grid(specs, units)
    packet = build_superposition(specs, grid, units)

    print(f"solver time unit  m lambda^2/hbar = {units.time_unit:.6f} us")
    print(f"wavenumber grid   [{grid.k_min:.3g}, {grid.k_max:.6g}] 1/um, "
          f"{grid.n_points} points")
    print(f"mean wavenumber   k0 = {packet.k0:.6f} 1/um")
    print(f"mean momentum     p0 = {packet.p0:.6e} kg m/s")

    x = np.linspace(-4.0, 8.0, 6001)
    print("\n   t (us)   <x> (um)   sigma_x (um)")
    for t in (0.0, 1.0, 2.0, 3.0, 4.0, 6.0):
        mean, sig = density_moments(packet, t, x)
        print(f"   {t:6.2f}   {mean:8.4f}   {sig:10.4f}")
    print("\nthe width passes through its minimum at the focus t = 2 us;")
    print("the beat between the two velocity classes keeps sigma_x above the")
    print("single-component value everywhere else.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
