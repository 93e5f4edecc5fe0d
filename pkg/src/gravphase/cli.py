"""``gravphase <command> --config <path> [--out <dir>] [--seed N]``.

Exit codes: 0 success, 2 configuration error, 3 numerical or verification
failure.  Every command writes ``<command>.json`` (a result record with the
scenario echo, its hash and provenance) into the output directory; table
commands also write a CSV next to it.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .clocks import compare_clocks
from .config import load_config, scenario_hash
from .errors import ConfigError, GravPhaseError
from .gravimeter import (
    ep_sweep, fit_fringe_scan, invert_g, monte_carlo_fit, sensitivity_ratio, synthetic_phase_scan,
)
from .interferometer import fringe_fall_check, fringe_scan, spatial_fringes
from .output import result_record, write_csv, write_json
from .phase import verify_equivalence_chain
from .quantities import CODATA2018
from .sequence import PulseSequence, build_mz_arms, recoil_velocity, sample_arms

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_FAILURE = 3

COMMANDS = ("phase", "verify", "fringes", "scan", "clock-compare", "invert", "sweep-eta",
            "sensitivity")


def _grid(section, name, default_start, default_stop, default_num, key="grid"):
    if key in section:
        return np.asarray(section[key], dtype=float)
    num = section.get("num", default_num)
    if num < 1:
        raise ConfigError(f"{name}.num must be positive", field=f"{name}.num")
    return np.linspace(section.get("start", default_start), section.get("stop", default_stop), num)


def cmd_phase(cfg, out):
    sc = cfg.mz_scenario()
    seq = PulseSequence.mach_zehnder(sc.kappa, sc.T, sc.phases)
    arm_a, arm_b = build_mz_arms(sc.species, sc.env, seq, sc.x0, sc.v0, sc.internal_swap)
    bd = sc.breakdown()
    dt = cfg.run.trajectory_dt or sc.T / 100.0
    write_csv(out / "trajectory.csv", ["t", "x_A", "x_B", "state_A", "state_B"],
              sample_arms(arm_a, arm_b, dt))
    result = bd.to_dict()
    result["gravity_phase"] = float(bd.gravity_phase)
    print(f"differential gravity phase: {float(bd.gravity_phase)!r} rad")
    print(f"differential total phase:   {float(bd.total)!r} rad")
    return result


def cmd_verify(cfg, out):
    sc = cfg.mz_scenario()
    report = verify_equivalence_chain(sc.species, sc.env, sc.kappa, sc.T, sc.eta, sc.n_steps,
                                      sc.x0, sc.v0, tol=cfg.run.tolerance)
    fall = fringe_fall_check(sc.species, sc.kappa, sc.g, sc.T)
    result = report.to_dict()
    result["fringe_fall"] = fall.to_dict()
    result["passed"] = report.passed and fall.passed
    worst = max((report.deviations[k] for k in report.checked), default=0.0)
    print(f"checked {len(report.checked)} pairs, worst relative deviation {worst:.3e}")
    for key in report.failures:
        print(f"MISMATCH {key}: {report.deviations[key]:.3e}")
    if not fall.passed:
        print(f"MISMATCH fringe fall: {fall.deviation:.3e}")
    return result


def cmd_fringes(cfg, out):
    sp = cfg.species.build()
    sec = cfg.section("fringes")
    if cfg.sequence is not None:
        v_default = float(recoil_velocity(sp, cfg.sequence.kappa))
    else:
        v_default = float(recoil_velocity(sp, sp.two_photon_wavenumber()))
    v1 = sec.get("v1", v_default)
    v2 = sec.get("v2", 0.0)
    spacing_guess = 2.0 * math.pi * CODATA2018.hbar / (float(sp.mass) * abs(v1 - v2)) \
        if v1 != v2 else 1.0
    window = sec.get("window", 20.0 * spacing_guess)
    n = sec.get("n", int(math.ceil(32 * window / spacing_guess)) + 1)
    pattern = spatial_fringes(sp, v1, v2, window, n)
    write_csv(out / "fringes.csv", ["x", "intensity"], pattern.rows())
    lam_c = float(sp.compton_wavelength())
    print(f"fringe spacing {pattern.spacing:.6e} m (expected {pattern.expected_spacing:.6e} m), "
          f"Compton wavelength {lam_c:.3e} m")
    return {"v1": v1, "v2": v2, "window": window, "n": n, "spacing": pattern.spacing,
            "expected_spacing": pattern.expected_spacing, "compton_wavelength": lam_c,
            "spacing_over_compton": pattern.spacing / lam_c, "peaks": len(pattern.peaks)}


def cmd_scan(cfg, out):
    sc = cfg.mz_scenario()
    sec = cfg.section("scan")
    var = sec.get("variable", "phi_L")
    defaults = {"phi_L": (0.0, 2.0 * math.pi, 33), "T": (0.0, sc.T, 51), "g": (0.0, sc.g, 51)}
    if var not in defaults:
        raise ConfigError(f"scan.variable must be one of {sorted(defaults)}", field="scan.variable")
    grid = _grid(sec, "scan", *defaults[var])
    points = fringe_scan(sc, var, grid)
    write_csv(out / "scan.csv", ["scan_value", "P_e", "P_g"], [p.as_row() for p in points])
    print(f"scanned {var} over {len(points)} points")
    return {"variable": var, "points": len(points),
            "rows": [{"value": p.value, "phase": p.phase, "P_e": p.populations.P_e,
                      "P_g": p.populations.P_g} for p in points]}


def cmd_clock_compare(cfg, out):
    env = cfg.environment.build()
    sec = cfg.section("clocks")
    positions = sec.get("positions", [1.0])
    reference = sec.get("reference", 0.0)
    T = sec.get("duration", 1.0)
    nu = sec.get("frequency", float(cfg.species.hyperfine) or 9.192631770e9)
    if T < 0:
        raise ConfigError("clocks.duration must be non-negative", field="clocks.duration")
    if nu <= 0:
        raise ConfigError("clocks.frequency must be positive", field="clocks.frequency")
    rows = compare_clocks(env, positions, reference, T, nu)
    header = list(rows[0]) if rows else ["x"]
    write_csv(out / "clock_compare.csv", header, [[r[k] for k in header] for r in rows])
    for r in rows:
        print(f"x={r['x']!r} m: dT = {r['time_dilation']:.6e} s over {r['duration']!r} s")
    return {"frequency": nu, "rows": rows}


def cmd_invert(cfg, out):
    sc = cfg.mz_scenario()
    sec = cfg.section("invert")
    result = {}
    if "phase" in sec:
        est = invert_g(sec["phase"], sc.kappa, sc.T, sc.eta)
        result["estimate"] = est.to_dict()
    else:
        scan = synthetic_phase_scan(sc, sec.get("n_points", 32))
        est = fit_fringe_scan(scan, sc.kappa, sc.T, sc.eta, g_prior=sec.get("g_prior", sc.g),
                              free_contrast=sec.get("free_contrast", False))
        result["estimate"] = est.to_dict()
        result["relative_error"] = (est.g_hat - sc.g) / sc.g if sc.g else est.g_hat
    trials = sec.get("trials", 0)
    if trials:
        mc = monte_carlo_fit(sc, sec.get("sigma", 1e-3), trials, seed=cfg.run.seed,
                             n_points=sec.get("n_points", 32),
                             free_contrast=sec.get("free_contrast", False))
        write_csv(out / "invert_mc.csv", ["trial", "g_hat", "error"], mc.rows)
        result["monte_carlo"] = mc.to_dict()
    print(f"g_hat = {float(result['estimate']['g_hat'])!r} m/s^2")
    return result


def cmd_sweep_eta(cfg, out):
    sc = cfg.mz_scenario()
    sec = cfg.section("sweep")
    etas = _grid(sec, "sweep", 0.9, 1.1, 21, key="eta")
    sweep = ep_sweep(sc, etas)
    write_csv(out / "sweep_eta.csv", ["eta", "phase"], sweep.rows)
    print(f"slope {sweep.slope!r} rad (expected {sweep.expected_slope!r})")
    return {"rows": sweep.rows, "slope": sweep.slope, "intercept": sweep.intercept,
            "expected_slope": sweep.expected_slope, "slope_deviation": sweep.slope_deviation}


def cmd_sensitivity(cfg, out):
    sp = cfg.species.build()
    sec = cfg.section("sensitivity")
    if "optical_frequency" in sec:
        nu = sec["optical_frequency"]
    elif "optical_wavelength" in sec:
        if sec["optical_wavelength"] <= 0:
            raise ConfigError("sensitivity.optical_wavelength must be positive",
                              field="sensitivity.optical_wavelength")
        nu = CODATA2018.c / sec["optical_wavelength"]
    else:
        nu = float(sp.optical_frequency())
    rep = sensitivity_ratio(sp, nu)
    print(f"matter/optical coupling ratio {rep.ratio:.4e}")
    out_d = rep.to_dict()
    out_d["optical_frequency"] = nu
    return out_d


HANDLERS = {
    "phase": cmd_phase,
    "verify": cmd_verify,
    "fringes": cmd_fringes,
    "scan": cmd_scan,
    "clock-compare": cmd_clock_compare,
    "invert": cmd_invert,
    "sweep-eta": cmd_sweep_eta,
    "sensitivity": cmd_sensitivity,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gravphase",
        description="Gravitational phase of atom interferometers, clocks and light",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="scenario TOML file")
    parser.add_argument("--out", default="gravphase-out", help="output directory")
    parser.add_argument("--seed", type=int, default=None, help="override run.seed")
    return parser


def run(command, config_path, out_dir="gravphase-out", seed=None):
    """Run one command; returns the process exit code."""
    try:
        cfg = load_config(config_path)
        if seed is not None:
            if seed < 0:
                raise ConfigError("--seed must be non-negative", field="--seed")
            cfg = cfg.with_seed(seed)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        result = HANDLERS[command](cfg, out)
        name = command.replace("-", "_")
        write_json(out / f"{name}.json", result_record(command, cfg, result, scenario_hash(cfg)))
    except ConfigError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"config error{where}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GravPhaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if command == "verify" and not result["passed"]:
        return EXIT_FAILURE
    if command == "sweep-eta" and not result["slope_deviation"] <= cfg.run.tolerance:
        print("eta slope deviates from -kappa g T^2", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    return run(args.command, args.config, args.out, args.seed)


if __name__ == "__main__":
    sys.exit(main())
