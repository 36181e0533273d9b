"""Command-line front end: config-driven scenarios, CSV emission, plots.

Configs are flat ``key = value`` lines under bracketed section headers;
``[gaussian]`` and ``[barrier]`` may repeat, each occurrence appending one
entry.  ``#`` starts a comment.  When a section (or key) is absent the
built-in two-Gaussian caesium scenario supplies it; a config that defines
any [gaussian] (or [barrier]) replaces the default list wholesale.

Keys:

    [units]    hbar_si, mass_kg, length_um
    [grid]     k_min, k_max (1/um or "auto"), k_points,
               t_min_us, t_max_us, t_points, eval_x_um
    [gaussian] delta_x_um, velocity_cm_s, focus_x_um, focus_t_us, weight
    [barrier]  v_hbar_us, l_um, offset_um
    [laser]    gamma_per_us, omega_per_us ("inf" allowed)
    [output]   dir

Every CSV opens with a ``# units:`` comment, then the header row; floats are
printed with 17 significant digits so reruns are byte-identical and values
round-trip exactly.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import absorber, arrival, detection, ked, tdse_oracle, wavepacket
from .physcore import (
    SimulationError,
    TimeGrid,
    UnitSystem,
    WavenumberGrid,
    trapezoid_integral,
)

ENV_OUT_DIR = "KEDSIM_OUT"

DEFAULT_CONFIG = """\
[units]
hbar_si = 1.054571817e-34
mass_kg = 2.2e-25
length_um = 1.0

[grid]
k_min = auto
k_max = auto
k_points = 2048
t_min_us = 0.0
t_max_us = 6.0
t_points = 2001
eval_x_um = 0.0

[gaussian]
delta_x_um = 0.031
velocity_cm_s = 18.96
focus_x_um = 0.0
focus_t_us = 2.0
weight = 0.7071067811865476

[gaussian]
delta_x_um = 0.031
velocity_cm_s = 5.34
focus_x_um = 0.0
focus_t_us = 2.0
weight = 0.7071067811865476

[barrier]
v_hbar_us = 1.9
l_um = 0.21
offset_um = 0.0

[barrier]
v_hbar_us = 950.0
l_um = 0.42
offset_um = 0.0

[laser]
gamma_per_us = 50.0
omega_per_us = inf
"""


class ConfigError(SimulationError):
    """Carries every violated constraint, not only the first."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n" +
                         "\n".join(f"  - {v}" for v in self.violations))


def _parse_weight(s: str) -> complex:
    return complex(s.replace(" ", ""))


def _parse_k_bound(s: str):
    return None if s.strip().lower() == "auto" else float(s)


def _parse_pos_rate(s: str) -> float:
    return math.inf if s.strip().lower() in ("inf", "infinity") else float(s)


# section -> key -> parser
_SCHEMA = {
    "units": {"hbar_si": float, "mass_kg": float, "length_um": float},
    "grid": {"k_min": _parse_k_bound, "k_max": _parse_k_bound, "k_points": int,
             "t_min_us": float, "t_max_us": float, "t_points": int,
             "eval_x_um": float},
    "gaussian": {"delta_x_um": float, "velocity_cm_s": float, "focus_x_um": float,
                 "focus_t_us": float, "weight": _parse_weight},
    "barrier": {"v_hbar_us": float, "l_um": float, "offset_um": float},
    "laser": {"gamma_per_us": float, "omega_per_us": _parse_pos_rate},
    "output": {"dir": str},
}
_REPEATABLE = ("gaussian", "barrier")


def _parse_sections(text: str, violations: list):
    """Raw text -> {section: dict or list of dicts}; grammar errors collected."""
    out = {name: [] if name in _REPEATABLE else {} for name in _SCHEMA}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SCHEMA:
                violations.append(f"line {lineno}: unknown section [{name}]")
                current = None
                continue
            current = name
            if name in _REPEATABLE:
                out[name].append({})
            continue
        if "=" not in line:
            violations.append(f"line {lineno}: expected 'key = value', got {line!r}")
            continue
        if current is None:
            violations.append(f"line {lineno}: key outside any section")
            continue
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        schema = _SCHEMA[current]
        if key not in schema:
            violations.append(f"line {lineno}: unknown key {key!r} in [{current}]")
            continue
        try:
            parsed = schema[key](val)
        except ValueError:
            violations.append(f"line {lineno}: cannot parse {key} = {val!r}")
            continue
        target = out[current][-1] if current in _REPEATABLE else out[current]
        target[key] = parsed
    return out


@dataclass
class ScenarioConfig:
    """Validated scenario: user-unit parameters for every stage."""

    units: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    gaussians: list = field(default_factory=list)
    barriers: list = field(default_factory=list)
    laser: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    def build_units(self) -> UnitSystem:
        u = self.units
        return UnitSystem(hbar=u["hbar_si"], mass=u["mass_kg"],
                          length_unit=u["length_um"])

    def build_specs(self):
        return [wavepacket.GaussianSpec(
            delta_x=g["delta_x_um"], mean_velocity=g["velocity_cm_s"],
            focus_position=g["focus_x_um"], focus_time=g["focus_t_us"],
            weight=g["weight"]) for g in self.gaussians]

    def build_packet(self, n_k: int | None = None) -> wavepacket.WavePacket:
        units = self.build_units()
        specs = self.build_specs()
        n = n_k or self.grid["k_points"]
        if self.grid["k_min"] is None or self.grid["k_max"] is None:
            grid = wavepacket.default_grid(specs, units, n_points=n)
        else:
            grid = WavenumberGrid(self.grid["k_min"], self.grid["k_max"], n)
        return wavepacket.build_superposition(specs, grid, units)

    def build_tgrid(self, n_t: int | None = None) -> TimeGrid:
        g = self.grid
        return TimeGrid(g["t_min_us"], g["t_max_us"], n_t or g["t_points"])

    def build_barriers(self):
        return [absorber.BarrierSpec(V=b["v_hbar_us"], L=b["l_um"],
                                     offset_a=b["offset_um"])
                for b in self.barriers]

    def build_laser(self) -> detection.LaserSpec:
        return detection.LaserSpec(rabi=self.laser["omega_per_us"],
                                   gamma=self.laser["gamma_per_us"])

    @property
    def eval_x(self) -> float:
        return self.grid["eval_x_um"]


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate; raises ConfigError listing every violation."""
    violations: list = []
    defaults = _parse_sections(DEFAULT_CONFIG, violations)
    assert not violations, "internal: default config must parse clean"
    raw = _parse_sections(text, violations)

    merged = {}
    for name in _SCHEMA:
        if name in _REPEATABLE:
            merged[name] = raw[name] if raw[name] else [dict(d) for d in defaults[name]]
        else:
            merged[name] = {**defaults[name], **raw[name]}
    # every key of a repeated section must be present in each entry
    for name in _REPEATABLE:
        for i, entry in enumerate(merged[name]):
            for key in _SCHEMA[name]:
                if key not in entry:
                    violations.append(f"[{name}] entry {i + 1}: missing key {key!r}")
    # "dir" is optional; all other singleton keys are defaulted already

    def check(cond, msg):
        if not cond:
            violations.append(msg)

    u, g = merged["units"], merged["grid"]
    check(u["hbar_si"] > 0, "[units] hbar_si must be > 0")
    check(u["mass_kg"] > 0, "[units] mass_kg must be > 0")
    check(u["length_um"] > 0, "[units] length_um must be > 0")
    check(g["k_points"] >= 2, "[grid] k_points must be >= 2")
    check(g["t_points"] >= 2, "[grid] t_points must be >= 2")
    check(g["t_max_us"] > g["t_min_us"], "[grid] t_max_us must exceed t_min_us")
    if g["k_min"] is not None and g["k_max"] is not None:
        check(0 < g["k_min"] < g["k_max"],
              "[grid] need 0 < k_min < k_max (or 'auto')")
    for i, gz in enumerate(merged["gaussian"]):
        if "delta_x_um" in gz:
            check(gz["delta_x_um"] > 0,
                  f"[gaussian] entry {i + 1}: delta_x_um must be > 0")
        if "velocity_cm_s" in gz:
            check(gz["velocity_cm_s"] > 0,
                  f"[gaussian] entry {i + 1}: velocity_cm_s must be > 0 "
                  "(positive-momentum packets only)")
    for i, b in enumerate(merged["barrier"]):
        if "v_hbar_us" in b:
            check(b["v_hbar_us"] > 0, f"[barrier] entry {i + 1}: v_hbar_us must be > 0")
        if "l_um" in b:
            check(b["l_um"] > 0, f"[barrier] entry {i + 1}: l_um must be > 0")
    las = merged["laser"]
    check(las["gamma_per_us"] > 0, "[laser] gamma_per_us must be > 0")
    check(las["omega_per_us"] > 0, "[laser] omega_per_us must be > 0 (or inf)")

    if violations:
        raise ConfigError(violations)
    return ScenarioConfig(units=merged["units"], grid=merged["grid"],
                          gaussians=merged["gaussian"], barriers=merged["barrier"],
                          laser=merged["laser"], output=merged["output"])


# ---------------------------------------------------------------------------
# output helpers

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(path: Path, names, columns, units_note: str):
    lines = [f"# units: {units_note}", ",".join(names)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def render_fig1_plot(csv_path: Path, png_path: Path):
    """Static plot rendered from the CSV (not from in-memory arrays)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # genfromtxt(names=True) would mistake the leading "# units:" line for
    # the header row, so strip comment lines first.
    body = [ln for ln in Path(csv_path).read_text().splitlines()
            if not ln.startswith("#")]
    data = np.genfromtxt(body, delimiter=",", names=True)
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    t = data["t_us"]
    ax.plot(t, data["tau1"], "-", color="tab:blue", lw=1.4, label=r"$\tau^{(1)}$")
    ax.plot(t, data["tau2"], "--", color="tab:red", lw=1.2, label=r"$\tau^{(2)}$")
    ax.plot(t, data["tau3"], "-.", color="tab:green", lw=1.2, label=r"$\tau^{(3)}$")
    ax.plot(t, data["pin_scaled_v1"], "^", color="k", ms=3, markevery=40,
            ls="none", label=r"$p_0\Pi_N/2$, weak barrier")
    ax.plot(t, data["pin_scaled_v2"], "o", mfc="none", mec="tab:purple", ms=3.5,
            markevery=40, ls="none", label=r"$p_0\Pi_N/2$, strong barrier")
    ax.set_xlabel(r"$t$ ($\mu$s)")
    ax.set_ylabel(r"kinetic energy density at $x=0$  ($\hbar/\mu$s per $\mu$m)")
    ax.axhline(0.0, color="0.7", lw=0.6)
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(png_path, dpi=160)
    plt.close(fig)


def _emit_plot(render, *args):
    """Plot emission is best-effort: any failure degrades to CSV-only."""
    try:
        render(*args)
        return True
    except Exception as exc:  # noqa: BLE001 - deliberate catch-all
        print(f"warning: plot skipped ({type(exc).__name__}: {exc}); "
              "CSV output kept", file=sys.stderr)
        return False


class _Stage:
    """Names the failing stage on any simulation error."""

    def __init__(self, name):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, etype, exc, tb):
        if exc is not None and isinstance(exc, SimulationError):
            exc.args = (f"[stage: {self.name}] {exc}",)
        return False


# ---------------------------------------------------------------------------
# subcommands

def _detection_pin(packet, barrier, tgrid):
    rate = absorber.detection_rate(packet, barrier, tgrid)
    return absorber.normalized_rate(rate)


def cmd_fig1(cfg: ScenarioConfig, args, out_dir: Path) -> int:
    if len(cfg.barriers) != 2:
        raise ConfigError([f"fig1 needs exactly 2 [barrier] entries, got "
                           f"{len(cfg.barriers)}"])
    with _Stage("packet construction"):
        packet = cfg.build_packet(args.grid_k)
        tgrid = cfg.build_tgrid(args.grid_t)
    with _Stage("densities"):
        dens = ked.densities_series(packet, cfg.eval_x, tgrid)
    barriers = cfg.build_barriers()
    with _Stage("detection rates"):
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                pins = list(pool.map(
                    lambda b: _detection_pin(packet, b, tgrid), barriers))
        else:
            pins = [_detection_pin(packet, b, tgrid) for b in barriers]

    k0 = packet.k0
    pin_scaled = [0.5 * k0 * p.values for p in pins]   # p0 Pi_N / 2, hbar/us/um
    csv_path = out_dir / "fig1.csv"
    with _Stage("csv emission"):
        write_csv(
            csv_path,
            ["t_us", "tau1", "tau2", "tau3", "pin_scaled_v1", "pin_scaled_v2"],
            [tgrid.times, dens["tau1"].values, dens["tau2"].values,
             dens["tau3"].values, pin_scaled[0], pin_scaled[1]],
            "t_us [us]; tau1,tau2,tau3,pin_scaled_v1,pin_scaled_v2 [hbar/us per um]")
    made_plot = _emit_plot(render_fig1_plot, csv_path, out_dir / "fig1.png")

    # summary with the sum-rule checks
    tau1_int = trapezoid_integral(dens["tau1"])
    flux_int = trapezoid_integral(dens["flux"])
    delta_int = trapezoid_integral(dens["delta"])
    print(f"wrote {csv_path}" + (f" and {out_dir / 'fig1.png'}" if made_plot else ""))
    print(f"  sum rules at x = {cfg.eval_x} um over "
          f"[{tgrid.t_min}, {tgrid.t_max}] us:")
    print(f"    int tau1 dt = {tau1_int:.6g} hbar/um   "
          f"(p0/2 = {0.5 * k0:.6g}, rel dev {tau1_int / (0.5 * k0) - 1:+.2e})")
    print(f"    int flux dt = {flux_int:.8f}   (target 1)")
    print(f"    int delta dt / int tau1 dt = {delta_int / tau1_int:+.2e}   (target 0)")
    print(f"    min tau2 = {dens['tau2'].values.min():.4g} hbar/us/um "
          f"({dens['tau2'].values.min() / dens['tau1'].values.max():+.3f} of tau1 peak)")
    ref = 2.0 * dens["tau1"].values / k0
    for b, p in zip(barriers, pins):
        sd = np.abs(p.values - ref).max() / ref.max()
        print(f"    sup |Pi_N - (2/p0) tau1| / peak = {sd:.4f}   "
              f"at V = {b.V} hbar/us, L = {b.L} um")
    return 0


def cmd_densities(cfg, args, out_dir: Path) -> int:
    with _Stage("packet construction"):
        packet = cfg.build_packet(args.grid_k)
        tgrid = cfg.build_tgrid(args.grid_t)
    with _Stage("densities"):
        dens = ked.densities_series(packet, cfg.eval_x, tgrid)
    path = out_dir / "densities.csv"
    write_csv(path,
              ["t_us", "rho", "flux", "tau1", "tau2", "tau3", "delta"],
              [tgrid.times] + [dens[c].values
                               for c in ("rho", "flux", "tau1", "tau2", "tau3",
                                         "delta")],
              "t_us [us]; rho [1/um]; flux [1/us]; tau1,tau2,tau3,delta "
              "[hbar/us per um]")
    print(f"wrote {path}")
    return 0


def cmd_absorb(cfg, args, out_dir: Path) -> int:
    with _Stage("packet construction"):
        packet = cfg.build_packet(args.grid_k)
        tgrid = cfg.build_tgrid(args.grid_t)
    barriers = cfg.build_barriers()
    with _Stage("detection rates"):
        def one(b):
            rate = absorber.detection_rate(packet, b, tgrid)
            return rate, absorber.normalized_rate(rate)
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                results = list(pool.map(one, barriers))
        else:
            results = [one(b) for b in barriers]
    with _Stage("large-V limit"):
        lv = absorber.large_v_rate(packet, tgrid,
                                   offset_a=barriers[0].offset_a if barriers else 0.0)
    names, cols = ["t_us"], [tgrid.times]
    for i, (rate, pin) in enumerate(results, start=1):
        names += [f"pi_v{i}", f"pin_v{i}"]
        cols += [rate.values, pin.values]
        print(f"  barrier {i}: V = {barriers[i-1].V} hbar/us, "
              f"L = {barriers[i-1].L} um, int Pi dt = "
              f"{trapezoid_integral(rate):.6f}")
    names.append("large_v_limit")
    cols.append(lv.values)
    path = out_dir / "absorb.csv"
    write_csv(path, names, cols, "t_us [us]; rates [1/us]")
    print(f"wrote {path}")
    return 0


def cmd_detect(cfg, args, out_dir: Path) -> int:
    with _Stage("packet construction"):
        packet = cfg.build_packet(args.grid_k)
        tgrid = cfg.build_tgrid(args.grid_t)
        laser = cfg.build_laser()
        if args.gamma is not None or args.omega is not None:
            laser = detection.LaserSpec(
                rabi=args.omega if args.omega is not None else laser.rabi,
                gamma=args.gamma if args.gamma is not None else laser.gamma)
    # Deconvolution needs negligible endpoint support, which a window tight
    # around the transit usually lacks.  Compute on a grid widened by whole
    # steps (user samples stay an exact subset), emit the requested window.
    dt = tgrid.spacing
    n_pad = int(math.ceil(2.0 / dt))
    wide = TimeGrid(tgrid.t_min - n_pad * dt, tgrid.t_max + n_pad * dt,
                    tgrid.n_points + 2 * n_pad)
    with _Stage("finite-gamma rate"):
        rate = detection.finite_gamma_rate(packet, laser, wide)
    with _Stage("deconvolution"):
        ideal = detection.deconvolve(rate, laser, mode=args.mode)
    with _Stage("large-V limit"):
        lv = absorber.large_v_rate(packet, wide)
    sl = slice(n_pad, n_pad + tgrid.n_points)
    path = out_dir / "detect.csv"
    write_csv(path, ["t_us", "pi_n_gamma", "pi_id", "large_v_limit"],
              [tgrid.times, rate.values[sl], ideal.values[sl], lv.values[sl]],
              f"t_us [us]; rates [1/us] (normalized over the padded window); "
              f"gamma = {laser.gamma} 1/us, omega = {laser.rabi} 1/us, "
              f"mode = {args.mode}")
    low = laser.low_saturation(packet)
    print(f"wrote {path}")
    print(f"  low-saturation regime (hbar*gamma >= kinetic scale): {low}")
    print(f"  sup |Pi_id - large_v| / peak = "
          f"{np.abs(ideal.values - lv.values).max() / lv.values.max():.4e}")
    return 0


def cmd_arrival(cfg, args, out_dir: Path) -> int:
    with _Stage("packet construction"):
        packet = cfg.build_packet(args.grid_k)
        tgrid = cfg.build_tgrid(args.grid_t)
    with _Stage("arrival expansion"):
        rep = arrival.expansion_report(packet, cfg.eval_x, tgrid)
    path = out_dir / "arrival.csv"
    write_csv(path, ["t_us", "kijowski", "order0", "order1", "order2"],
              [tgrid.times, rep.kijowski.values, rep.order0.values,
               rep.order1.values, rep.order2.values],
              "t_us [us]; all rates [1/us]")
    print(f"wrote {path}")
    print(f"  int Pi_K dt = {trapezoid_integral(rep.kijowski):.8f}")
    print("  sup distances from Pi_K (of peak): "
          + ", ".join(f"order{i} = {d:.4e}" for i, d in enumerate(rep.sup_distances)))
    return 0


def cmd_validate(cfg, args, out_dir: Path) -> int:
    """Cross-check the closed-form path against the grid oracle (first
    barrier entry) plus the cheap structural invariants."""
    checks = []

    def check(name, ok, detail):
        checks.append((name, bool(ok), detail))
        print(f"  {'PASS' if ok else 'FAIL'}  {name}  ({detail})")

    with _Stage("packet construction"):
        packet = cfg.build_packet(args.grid_k)
        units = packet.units
    rng = np.random.default_rng(7)
    vals, dims = [], ["length", "time", "mass", "velocity", "wavenumber",
                      "energy", "rate", "momentum"]
    from .physcore import from_solver_units, to_solver_units
    worst = 0.0
    for dim in dims:
        for v in rng.uniform(0.1, 10.0, size=5):
            rt = from_solver_units(to_solver_units(v, dim, units), dim, units)
            worst = max(worst, abs(rt / v - 1.0))
    check("unit round-trip", worst < 1e-12, f"max rel err {worst:.2e}")

    barrier = cfg.build_barriers()[0]
    with _Stage("closed-form rate"):
        tgrid = cfg.build_tgrid(args.grid_t)
        pi_closed = absorber.detection_rate(packet, barrier, tgrid)
    check("Pi(t) >= 0", np.all(pi_closed.values >= -1e-15 * pi_closed.values.max()),
          f"min {pi_closed.values.min():.2e}")
    pin = absorber.normalized_rate(pi_closed)
    check("normalized rate unit integral",
          abs(trapezoid_integral(pin) - 1.0) < 1e-10,
          f"defect {trapezoid_integral(pin) - 1.0:.2e}")

    with _Stage("grid oracle"):
        k_s, _, _ = packet.solver_arrays()
        v_s = barrier.V * units.time_unit
        dt = 0.0999 / max(0.5 * k_s[-1] ** 2, v_s) * units.time_unit
        x_min, x_max, n_x = tdse_oracle.aligned_domain(
            barrier, barrier.offset_a - 1.8, barrier.offset_a + 1.6, 6.6e-4)
        run_grid = TimeGrid(tgrid.t_min - 1.5, tgrid.t_max - 1.0, 2)
        res = tdse_oracle.propagate(packet, barrier, (x_min, x_max), n_x, dt,
                                    run_grid)
        sub = TimeGrid(tgrid.t_min, run_grid.t_max, 1001)
        pi_o = tdse_oracle.oracle_rate(res, sub)
        pi_c = absorber.detection_rate(packet, barrier, sub)
    sup = np.abs(pi_o.values - pi_c.values).max() / pi_c.values.max()
    check("closed form vs grid oracle (sup of peak)", sup < 1e-3, f"{sup:.2e}")

    dn = -np.gradient(res.norms, res.times)                    # 1/us
    pi_rec = 2 * v_s * (res.occupancy / units.length_unit) / units.time_unit
    ipk = int(np.argmax(pi_rec))
    rel = abs(dn[ipk] - pi_rec[ipk]) / pi_rec[ipk]
    check("-dN/dt equals (2V/hbar) occupancy at peak", rel < 1e-4, f"{rel:.2e}")

    absorbed = 1.0 - res.norms[-1]
    tot = np.trapezoid(pi_rec, res.times)
    check("int Pi dt equals 1 - final norm",
          abs(tot - absorbed) < 1e-4, f"diff {abs(tot - absorbed):.2e}")

    ok = all(c[1] for c in checks)
    print(f"validate: {'all checks passed' if ok else 'FAILURES present'}")
    return 0 if ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kedsim",
        description="Kinetic-energy densities of free wave packets and their "
                    "operational measurement by an imaginary absorbing barrier.")
    p.add_argument("--config", metavar="PATH",
                   help="scenario config file (defaults to the built-in "
                        "two-Gaussian caesium scenario)")
    p.add_argument("--out", metavar="DIR",
                   help=f"output directory (default ${ENV_OUT_DIR} or ./kedsim_out)")
    p.add_argument("--threads", type=int, default=1, metavar="N",
                   help="worker threads for (V, L) sweeps")
    p.add_argument("--grid-k", type=int, metavar="N", dest="grid_k",
                   help="override wavenumber grid points")
    p.add_argument("--grid-t", type=int, metavar="N", dest="grid_t",
                   help="override time grid points")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("fig1", help="densities + scaled detection rates, CSV + plot")
    sub.add_parser("densities", help="density/flux/tau series CSV")
    sub.add_parser("absorb", help="Pi, Pi_N and the large-V limit per barrier")
    d = sub.add_parser("detect", help="finite-gamma rate and its deconvolution")
    d.add_argument("--gamma", type=float, help="override [laser] gamma_per_us")
    d.add_argument("--omega", type=float, help="override [laser] omega_per_us")
    d.add_argument("--mode", choices=["fourier", "timedomain"], default="fourier")
    sub.add_parser("arrival", help="Kijowski distribution and expansion orders")
    sub.add_parser("validate", help="closed form vs grid oracle cross-checks")
    return p


_COMMANDS = {
    "fig1": cmd_fig1,
    "densities": cmd_densities,
    "absorb": cmd_absorb,
    "detect": cmd_detect,
    "arrival": cmd_arrival,
    "validate": cmd_validate,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "mode"):
        args.mode = "fourier"
    try:
        if args.config:
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                raise ConfigError([f"cannot read config file: {exc}"]) from exc
        else:
            text = DEFAULT_CONFIG
        cfg = parse_config(text)
        out_dir = Path(args.out or cfg.output.get("dir")
                       or os.environ.get(ENV_OUT_DIR) or "./kedsim_out")
        out_dir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, args, out_dir)
    except ConfigError as exc:
        print(f"kedsim {args.command}: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"kedsim {args.command}: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
