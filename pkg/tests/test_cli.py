import shutil
import subprocess
import sys

import numpy as np
import pytest

from kedsim.cli import ConfigError, DEFAULT_CONFIG, main, parse_config

FAST = ["--grid-k", "512", "--grid-t", "301"]


def run_cli(tmp_path, *argv):
    return main(["--out", str(tmp_path), *argv])


def read_csv(path):
    body = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return np.genfromtxt(body, delimiter=",", names=True)


# -- config parsing -----------------------------------------------------------

def test_default_scenario():
    cfg = parse_config("")
    assert len(cfg.gaussians) == 2
    assert len(cfg.barriers) == 2
    assert cfg.laser["gamma_per_us"] == 50.0
    assert cfg.grid["k_min"] is None          # auto
    assert cfg.eval_x == 0.0
    assert parse_config(DEFAULT_CONFIG).grid == cfg.grid


def test_partial_override_keeps_other_defaults():
    cfg = parse_config("[grid]\nt_points = 301\n")
    assert cfg.grid["t_points"] == 301
    assert cfg.grid["t_max_us"] == 6.0
    assert len(cfg.gaussians) == 2            # untouched sections defaulted


def test_gaussian_list_replaced_wholesale():
    cfg = parse_config(
        "[gaussian]\ndelta_x_um = 0.05\nvelocity_cm_s = 12.0\n"
        "focus_x_um = 0.0\nfocus_t_us = 1.0\nweight = 1.0\n")
    assert len(cfg.gaussians) == 1
    assert cfg.gaussians[0]["delta_x_um"] == 0.05


def test_complex_weight_accepted():
    cfg = parse_config(
        "[gaussian]\ndelta_x_um = 0.05\nvelocity_cm_s = 12.0\n"
        "focus_x_um = 0.0\nfocus_t_us = 1.0\nweight = 0.6+0.8j\n")
    assert cfg.gaussians[0]["weight"] == 0.6 + 0.8j


def test_all_violations_reported_at_once():
    bad = """\
[grid]
k_points = 1
t_min_us = 5.0
t_max_us = 1.0
typo_key = 3
[barrier]
v_hbar_us = 0.0
l_um = -0.1
offset_um = 0.0
[laser]
gamma_per_us = -2
[nosuch]
x = 1
stray line
"""
    with pytest.raises(ConfigError) as ei:
        parse_config(bad)
    msgs = "\n".join(ei.value.violations)
    assert len(ei.value.violations) >= 6
    assert "k_points must be >= 2" in msgs
    assert "t_max_us must exceed t_min_us" in msgs
    assert "unknown key 'typo_key'" in msgs
    assert "v_hbar_us must be > 0" in msgs
    assert "l_um must be > 0" in msgs
    assert "gamma_per_us must be > 0" in msgs
    assert "unknown section [nosuch]" in msgs
    assert "expected 'key = value'" in msgs


def test_repeated_section_requires_all_keys():
    with pytest.raises(ConfigError, match="missing key"):
        parse_config("[barrier]\nv_hbar_us = 2.0\n")


def test_unparseable_value_reported_with_line():
    with pytest.raises(ConfigError, match="line 2: cannot parse"):
        parse_config("[grid]\nt_points = many\n")


# -- exit codes ----------------------------------------------------------------

def test_missing_config_file_is_exit_2(tmp_path, capsys):
    rc = main(["--config", str(tmp_path / "absent.cfg"), "--out",
               str(tmp_path), "densities"])
    assert rc == 2
    assert "cannot read config file" in capsys.readouterr().err


def test_invalid_config_is_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[laser]\ngamma_per_us = 0\n")
    rc = main(["--config", str(cfg), "--out", str(tmp_path), "densities"])
    assert rc == 2
    assert "gamma_per_us must be > 0" in capsys.readouterr().err


def test_fig1_requires_two_barriers(tmp_path, capsys):
    cfg = tmp_path / "one.cfg"
    cfg.write_text("[barrier]\nv_hbar_us = 1.9\nl_um = 0.21\noffset_um = 0.0\n")
    rc = main(["--config", str(cfg), "--out", str(tmp_path), *FAST, "fig1"])
    assert rc == 2
    assert "exactly 2 [barrier] entries" in capsys.readouterr().err


def test_simulation_error_is_exit_1(tmp_path, capsys):
    # a window cut off mid-transit trips the arrival coverage guard
    cfg = tmp_path / "short.cfg"
    cfg.write_text("[grid]\nt_min_us = 0.0\nt_max_us = 2.0\nt_points = 201\n")
    rc = main(["--config", str(cfg), "--out", str(tmp_path), "--grid-k", "512",
               "arrival"])
    assert rc == 1
    err = capsys.readouterr().err
    assert "stage: arrival expansion" in err


# -- subcommand outputs ---------------------------------------------------------

def test_fig1_outputs_and_determinism(tmp_path, capsys):
    out1, out2, out3 = (tmp_path / s for s in ("a", "b", "c"))
    assert run_cli(out1, *FAST, "fig1") == 0
    assert run_cli(out2, *FAST, "fig1") == 0
    assert main(["--out", str(out3), "--threads", "2", *FAST, "fig1"]) == 0
    csv = out1 / "fig1.csv"
    assert csv.exists() and (out1 / "fig1.png").exists()
    lines = csv.read_text().splitlines()
    assert lines[0].startswith("# units:")
    assert lines[1] == "t_us,tau1,tau2,tau3,pin_scaled_v1,pin_scaled_v2"
    assert len(lines) == 2 + 301
    # reruns and threaded sweeps are byte-identical
    assert csv.read_bytes() == (out2 / "fig1.csv").read_bytes()
    assert csv.read_bytes() == (out3 / "fig1.csv").read_bytes()
    out = capsys.readouterr().out
    assert "sum rules" in out and "sup |Pi_N - (2/p0) tau1|" in out


def test_densities_csv_values_roundtrip(tmp_path, units):
    assert run_cli(tmp_path, *FAST, "densities") == 0
    data = read_csv(tmp_path / "densities.csv")
    assert data.dtype.names == ("t_us", "rho", "flux", "tau1", "tau2", "tau3",
                                "delta")
    from kedsim.cli import parse_config
    from kedsim.ked import densities_series
    cfg = parse_config("")
    packet = cfg.build_packet(512)
    dens = densities_series(packet, 0.0, cfg.build_tgrid(301))
    # 17-significant-digit printing makes the round-trip exact
    assert np.array_equal(data["tau3"], dens["tau3"].values)
    assert np.array_equal(data["rho"], dens["rho"].values)


def test_absorb_csv(tmp_path, capsys):
    assert run_cli(tmp_path, *FAST, "absorb") == 0
    data = read_csv(tmp_path / "absorb.csv")
    assert data.dtype.names == ("t_us", "pi_v1", "pin_v1", "pi_v2", "pin_v2",
                                "large_v_limit")
    out = capsys.readouterr().out
    assert "barrier 1" in out and "barrier 2" in out
    # normalized columns integrate to one on their own grid
    t = data["t_us"]
    assert np.trapezoid(data["pin_v1"], t) == pytest.approx(1.0, abs=1e-10)
    assert np.trapezoid(data["pin_v2"], t) == pytest.approx(1.0, abs=1e-10)


def test_detect_csv_and_flag_overrides(tmp_path, capsys):
    assert run_cli(tmp_path, *FAST, "detect", "--gamma", "80",
                   "--mode", "fourier") == 0
    lines = (tmp_path / "detect.csv").read_text().splitlines()
    assert "gamma = 80.0" in lines[0]
    data = read_csv(tmp_path / "detect.csv")
    assert data.dtype.names == ("t_us", "pi_n_gamma", "pi_id", "large_v_limit")
    assert data["t_us"][0] == 0.0 and data["t_us"][-1] == 6.0
    # the deconvolved column undoes the finite-gamma delay
    out = capsys.readouterr().out
    assert "low-saturation regime" in out


def test_arrival_csv(tmp_path, capsys):
    assert run_cli(tmp_path, *FAST, "arrival") == 0
    data = read_csv(tmp_path / "arrival.csv")
    assert data.dtype.names == ("t_us", "kijowski", "order0", "order1", "order2")
    out = capsys.readouterr().out
    assert "int Pi_K dt" in out


def test_validate_passes(tmp_path, capsys):
    assert run_cli(tmp_path, "validate") == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert "all checks passed" in out


# -- output directory resolution ------------------------------------------------

def test_out_dir_precedence(tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    monkeypatch.setenv("KEDSIM_OUT", str(env_dir))
    assert main([*FAST, "densities"]) == 0
    assert (env_dir / "densities.csv").exists()

    cfg = tmp_path / "with_dir.cfg"
    cfg_dir = tmp_path / "from_cfg"
    cfg.write_text(f"[output]\ndir = {cfg_dir}\n")
    assert main(["--config", str(cfg), *FAST, "densities"]) == 0
    assert (cfg_dir / "densities.csv").exists()

    flag_dir = tmp_path / "flag"
    assert main(["--config", str(cfg), "--out", str(flag_dir), *FAST,
                 "densities"]) == 0
    assert (flag_dir / "densities.csv").exists()


def test_console_entry_point(tmp_path):
    exe = shutil.which("kedsim")
    cmd = [exe] if exe else [sys.executable, "-m", "kedsim.cli"]
    proc = subprocess.run(
        [*cmd, "--out", str(tmp_path), *FAST, "densities"],
        capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "densities.csv").exists()
