"""
Command-line driver.

Commands: evolve, eigensweep, trajectory, tomography, calibrate, reproduce.
Units everywhere: J and gamma in 1/us (angular), times in us.
Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 degenerate result.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import analytics, cpt, lab
from .errors import DegenerateTrace, InvalidRegime
from .linalg import KET0, KET1
from .model import SystemParams

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_DEGENERATE = 0, 2, 3, 4

PRESETS = ("fig2a", "fig2b", "fig2c", "fig2d", "fig3", "cpt-sphere")


class ConfigError(Exception):
    pass


# -- output helpers --------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (str, bool)):
        return str(v)
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    return "" if math.isnan(v) else repr(v)


def render_table(columns, rows, fmt: str, comments=()) -> str:
    if fmt == "json":
        def num(v):
            if v is None or (isinstance(v, float) and math.isnan(v)):
                return None
            return v if isinstance(v, int) else float(v)
        doc = {"comments": list(comments), "columns": list(columns),
               "rows": [[num(v) for v in row] for row in rows]}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _check_writable(path: str | None):
    if path is None:
        return
    parent = os.path.dirname(os.path.abspath(path)) or "."
    if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
        raise OSError(f"cannot write to {path}")
    if os.path.exists(path) and not os.access(path, os.W_OK):
        raise OSError(f"cannot write to {path}")


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _shot_config(args) -> lab.ShotConfig:
    return lab.ShotConfig(
        n_shots=None if args.exact else args.shots,
        seed=args.seed,
        gamma_jitter=args.gamma_jitter,
        angle_jitter=args.angle_jitter,
        readout_p01=args.readout_p01,
        readout_p10=args.readout_p10,
    )


def _nonneg(args, *names):
    for n in names:
        v = getattr(args, n)
        if v is None or not math.isfinite(v) or v < 0:
            raise ConfigError(f"--{n.replace('_', '-')} must be a finite number >= 0 (got {v})")


# -- commands ----------------------------------------------------------------------

def evolve_table(J: float, gamma: float, tau_max: float, steps: int):
    params = SystemParams(J, gamma)
    taus = [0.0] if tau_max == 0 else list(np.linspace(0.0, tau_max, steps + 1))
    rows = []
    for t in taus:
        rho = analytics.rho_closed(params, float(t))
        rows.append((float(t), rho.rho00, rho.rho11, rho.rho01.real, rho.rho01.imag,
                     rho.trace, analytics.overlap_p(params, float(t))))
    cols = ("tau_us", "rho00", "rho11", "re_rho01", "im_rho01", "trace", "overlap_p")
    return cols, rows


def cmd_evolve(args) -> int:
    _nonneg(args, "j", "gamma", "tau_max")
    if args.steps < 1:
        raise ConfigError("--steps must be >= 1")
    _check_writable(args.output)
    cols, rows = evolve_table(args.j, args.gamma, args.tau_max, args.steps)
    _emit(render_table(cols, rows, args.format), args.output)
    return EXIT_OK


def _ratios(args) -> list[float]:
    if args.ratios:
        try:
            rs = [float(x) for x in args.ratios.split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigError(f"--ratios: {exc}") from None
    else:
        if args.ratio_step <= 0 or args.ratio_max < args.ratio_min:
            raise ConfigError("ratio range must be non-empty with a positive step")
        n = int(math.floor((args.ratio_max - args.ratio_min) / args.ratio_step + 1e-9)) + 1
        rs = [round(args.ratio_min + k * args.ratio_step, 10) for k in range(n)]
    if not rs or any(r <= 0 or not math.isfinite(r) for r in rs):
        raise ConfigError("ratios must be a non-empty list of positive numbers")
    return rs


def cmd_eigensweep(args) -> int:
    _nonneg(args, "gamma")
    if args.gamma == 0:
        raise ConfigError("gamma must be > 0: normalized eigenvalues undefined for gamma = 0")
    if args.repeats < 1:
        raise ConfigError("--repeats must be >= 1")
    ratios = _ratios(args)
    cfg = _shot_config(args)
    _check_writable(args.output)
    est = run_sweep(args.gamma, ratios, cfg, args.repeats, args.decay_points)
    _write_sweep(est, args, cfg)
    return EXIT_OK


def run_sweep(gamma, ratios, cfg, repeats, decay_points=20):
    times = lab.default_decay_times(gamma, decay_points)
    est = lab.run_eigenvalue_protocol(gamma, [r * gamma for r in ratios], cfg, repeats, times)
    # report the requested ratio rather than the round-tripped J/gamma
    return [lab.EigenvalueEstimate(r, e.E_plus, e.E_minus, e.std_real, e.std_imag, e.n_ok, e.samples)
            for r, e in zip(ratios, est)]


def _write_sweep(est, args, cfg, comments=()):
    failed = sum(e.missing for e in est)
    if failed:
        print(f"warning: {failed} sweep point(s) produced no estimate", file=sys.stderr)
    if args.format == "json":
        text = lab.sweep_json(est, args.gamma, cfg, args.repeats) + "\n"
    else:
        text = lab.sweep_csv(est, args.gamma, comments)
    _emit(text, args.output)


_PSI0 = {
    "minus": (KET0 - KET1) / math.sqrt(2),
    "plus": (KET0 + KET1) / math.sqrt(2),
    "zero": KET0,
    "one": KET1,
}


def _initial_state(name: str, params: SystemParams, allow: bool) -> np.ndarray:
    if name in _PSI0:
        return _PSI0[name]
    frame = cpt.CptFrame.from_params(params, allow)
    return frame.eps_plus if name == "eps_plus" else frame.eps_minus


def trajectory_text(J, gamma, tau, steps, psi0, allow, fmt, comments=()):
    params = SystemParams(J, gamma)
    samples = cpt.trajectory_hm(params, _initial_state(psi0, params, allow), tau, steps, allow)
    comments = list(comments)
    if not samples[0].raw.physical:
        comments.append(f"non-physical: r = gamma/J = {gamma / J:g} >= 1, coordinates from "
                        "analytic continuation in the Dirac-normalized eigenbasis")
    return render_table(cpt.TRAJECTORY_COLUMNS, cpt.trajectory_rows(samples), fmt, comments)


def cmd_trajectory(args) -> int:
    _nonneg(args, "j", "gamma", "tau")
    if args.j == 0:
        raise ConfigError("--j must be > 0 (r = gamma/J)")
    if args.steps < 2:
        raise ConfigError("--steps must be >= 2")
    _check_writable(args.output)
    try:
        text = trajectory_text(args.j, args.gamma, args.tau, args.steps, args.psi0,
                               args.allow_continuation, args.format)
    except InvalidRegime as exc:
        raise ConfigError(f"{exc}; pass --allow-continuation to compute anyway") from None
    _emit(text, args.output)
    return EXIT_OK


def tomography_doc(params, tau, cfg) -> dict:
    res = lab.tomography(params, tau, cfg)

    def m(a):
        return {"re": a.real.tolist(), "im": a.imag.tolist()}
    return {
        "params": {"J": params.J, "gamma": params.gamma, "ratio": params.J / params.gamma},
        "tau_us": tau,
        "n_shots": cfg.n_shots,
        "seed": cfg.seed,
        "noise_model": cfg.noise_model,
        "rho_exp": m(res.rho_exp),
        "rho_theory": m(res.rho_theory),
        "trace_exp": float(np.trace(res.rho_exp).real),
        "trace_theory": float(np.trace(res.rho_theory).real),
        "fidelity": res.fidelity,
    }


def _tomography_params(args) -> SystemParams:
    _nonneg(args, "gamma", "tau")
    J = args.j if args.j is not None else args.ratio * args.gamma
    if J < 0 or not math.isfinite(J):
        raise ConfigError("J must be >= 0")
    return SystemParams(J, args.gamma)


def _doc_text(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    rows = []
    comments = doc.get("comments", [])
    for key, val in doc.items():
        if key == "comments":
            continue
        if isinstance(val, dict) and set(val) == {"re", "im"}:
            for i in range(2):
                for j in range(2):
                    rows.append((f"{key}[{i}{j}]", _fmt(val["re"][i][j]), _fmt(val["im"][i][j])))
        elif isinstance(val, dict):
            for k, v in val.items():
                rows.append((f"{key}.{k}", _fmt(v), ""))
        else:
            rows.append((key, _fmt(val), ""))
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("quantity", "value", "imag"))
    w.writerows(rows)
    return buf.getvalue()


def cmd_tomography(args) -> int:
    params = _tomography_params(args)
    cfg = _shot_config(args)
    _check_writable(args.output)
    doc = tomography_doc(params, args.tau, cfg)
    _emit(_doc_text(doc, args.format), args.output)
    return EXIT_OK


def calibrate_doc(kind, value, tau_max, points, cfg) -> dict:
    taus = np.linspace(0.0, tau_max, points)
    rng = cfg.rng()
    if kind == "gamma":
        recs = lab.simulate_dissipation(value, taus, cfg, rng)
        fit = lab.calibrate_gamma(recs)
    else:
        recs = lab.simulate_rabi(value, taus, cfg, rng)
        fit = lab.calibrate_j(recs)
    return {
        "kind": kind, "true_value": value, "fit_value": fit.value,
        "stderr": fit.stderr if math.isfinite(fit.stderr) else None,
        "iterations": fit.iterations, "alias_warning": fit.alias_warning,
        "n_shots": cfg.n_shots, "seed": cfg.seed, "noise_model": cfg.noise_model,
        "tau_us": taus.tolist(), "p1": [r.p1 for r in recs],
    }


def cmd_calibrate(args) -> int:
    value = args.gamma if args.kind == "gamma" else args.j
    if value is None:
        raise ConfigError(f"--{'gamma' if args.kind == 'gamma' else 'j'} is required")
    _nonneg(args, "tau_max")
    if value < 0 or args.tau_max <= 0:
        raise ConfigError("rates must be >= 0 and --tau-max > 0")
    if args.points < (3 if args.kind == "gamma" else 8):
        raise ConfigError("too few --points for this fit")
    cfg = _shot_config(args)
    _check_writable(args.output)
    doc = calibrate_doc(args.kind, value, args.tau_max, args.points, cfg)
    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        notes = [f"{k} = {_fmt(doc[k])}" for k in
                 ("kind", "true_value", "fit_value", "stderr", "iterations", "alias_warning")]
        text = render_table(("tau_us", "p1"), list(zip(doc["tau_us"], doc["p1"])), "csv", notes)
    _emit(text, args.output)
    return EXIT_OK


# -- reproduce presets ------------------------------------------------------------

UNITS_NOTE = "units: J and gamma read as angular frequencies in 1/us, times in us"


def _preset_fig2a(args, cfg):
    J, gammas = 0.06, (0.004, 0.53)
    taus = np.linspace(0.0, 100.0, 101)
    rng = cfg.rng()
    rows = []
    for t in taus:
        row = [float(t)]
        for g in gammas:
            p = SystemParams(J, g)
            th = analytics.rho_closed(p, float(t)).rho00
            psi = lab.evolve(lab.compile_apt_evolution(p, float(t)), KET0)
            row += [th, lab.sample_measurement(psi, "Z", cfg, rng, float(t), p).p0]
        rows.append(row)
    cols = ("tau_us", "rho00_theory_g0.004", "p0_sampled_g0.004",
            "rho00_theory_g0.53", "p0_sampled_g0.53")
    notes = ["preset fig2a: rho00 vs tau from |0>, J = 0.06, gamma = 0.004 and 0.53",
             "assumed: tau grid 0..100 us (101 points); shots per point as configured"]
    return cols, rows, notes


def _preset_fig2b(args, cfg):
    gammas = (0.022, 0.050)
    taus = np.linspace(0.0, 2 / (4 * min(gammas)), 20)
    rng = cfg.rng()
    cols, rows, fits = ["tau_us"], [[float(t)] for t in taus], []
    for g in gammas:
        recs = lab.simulate_dissipation(g, taus, cfg, rng)
        fit = lab.calibrate_gamma(recs)
        fits.append(f"gamma {g}: fitted {fit.value!r} +- {fit.stderr!r}")
        cols += [f"p1_theory_g{g}", f"p1_sampled_g{g}"]
        for row, t, rec in zip(rows, taus, recs):
            row += [analytics.dissipation_decay(g, float(t)), rec.p1]
    notes = ["preset fig2b: |1> population under pure dissipation, exp(-4 gamma tau)",
             "assumed: 20 uniform tau points on [0, 2/(4*0.022)] us", *fits]
    return cols, rows, notes


def _preset_fig2c(args, cfg):
    p = SystemParams(0.065, 0.022)
    taus = np.linspace(0.0, 100.0, 101)
    rng = cfg.rng()
    rows = [(float(t), analytics.overlap_p(p, float(t)), lab.measure_overlap_p(p, float(t), cfg, rng))
            for t in taus]
    notes = ["preset fig2c: overlap P(tau), gamma = 0.022, J = 0.065",
             "assumed: tau grid 0..100 us (101 points)"]
    return ("tau_us", "P_theory", "P_sampled"), rows, notes


def cmd_reproduce(args) -> int:
    cfg = _shot_config(args)
    _check_writable(args.output)
    base = [UNITS_NOTE, f"n_shots = {cfg.n_shots}, seed = {cfg.seed}"]
    name = args.preset
    if name in ("fig2a", "fig2b", "fig2c"):
        fn = {"fig2a": _preset_fig2a, "fig2b": _preset_fig2b, "fig2c": _preset_fig2c}[name]
        cols, rows, notes = fn(args, cfg)
        _emit(render_table(cols, rows, args.format, notes + base), args.output)
    elif name == "fig2d":
        args.gamma = 0.05
        ratios = [round(0.2 + 0.1 * k, 10) for k in range(19)]
        est = run_sweep(0.05, ratios, cfg, args.repeats)
        notes = ["preset fig2d: eigenvalue protocol, gamma = 0.05, tau0 = 1/J",
                 f"assumed: ratios 0.2..2.0 step 0.1, {args.repeats} repeats, 20 decay points"]
        _write_sweep(est, args, cfg, notes + base)
    elif name == "fig3":
        gamma = 0.4
        doc = tomography_doc(SystemParams(0.15 * gamma, gamma), 10.0, cfg)
        doc["comments"] = ["preset fig3: tomography after 10 us, J/gamma = 0.15",
                           "assumed: gamma = 0.4 (absolute value not given)"] + base
        _emit(_doc_text(doc, args.format) if args.format == "csv" else json.dumps(doc, indent=2) + "\n",
              args.output)
    elif name == "cpt-sphere":
        gamma = 0.03 if args.panel == "a" else 0.12
        try:
            text = trajectory_text(0.06, gamma, 50.0, 201, "minus", args.allow_continuation,
                                   args.format,
                                   [f"preset cpt-sphere panel {args.panel}: H_M trajectory from "
                                    f"(|0>-|1>)/sqrt2, J = 0.06, gamma = {gamma}, tau = 50 us",
                                    "assumed: 201 samples"] + base)
        except InvalidRegime as exc:
            raise ConfigError(f"{exc}; pass --allow-continuation to compute anyway") from None
        _emit(text, args.output)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", metavar="PATH", help="JSON file with option values (flags override it)")
    g.add_argument("--output", "-o", metavar="PATH", help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    g.add_argument("--seed", type=int, default=0, help="RNG seed (unsigned 64-bit)")
    g.add_argument("--shots", type=int, default=1000, help="shots per measurement setting")
    return p


def _noise_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("noise options")
    g.add_argument("--exact", action="store_true",
                   help="use exact outcome probabilities (infinite shots)")
    g.add_argument("--gamma-jitter", type=float, default=0.0,
                   help="relative Gaussian spread of gamma per run")
    g.add_argument("--angle-jitter", type=float, default=0.0,
                   help="Gaussian spread of pulse angles per pulse (rad)")
    g.add_argument("--readout-p01", type=float, default=0.0, help="P(read 1 | state 0)")
    g.add_argument("--readout-p10", type=float, default=0.0, help="P(read 0 | state 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common, noise = _common_parser(), _noise_parser()
    parser = argparse.ArgumentParser(
        prog="antipt", description="Simulate a dissipative anti-PT-symmetric qubit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", parents=[common],
                       help="closed-form rho(tau) from |0> and overlap P(tau)")
    p.add_argument("--j", type=float, default=0.06, help="coupling J (1/us)")
    p.add_argument("--gamma", type=float, default=0.004, help="dissipation gamma (1/us)")
    p.add_argument("--tau-max", type=float, default=100.0, help="final time (us)")
    p.add_argument("--steps", type=int, default=200, help="number of time intervals")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("eigensweep", parents=[common, noise],
                       help="eigenvalue-extraction protocol over J/gamma")
    p.add_argument("--gamma", type=float, default=0.05, help="nominal dissipation gamma (1/us)")
    p.add_argument("--ratios", help="comma-separated J/gamma values (overrides the range)")
    p.add_argument("--ratio-min", type=float, default=0.2, help="smallest J/gamma")
    p.add_argument("--ratio-max", type=float, default=2.0, help="largest J/gamma")
    p.add_argument("--ratio-step", type=float, default=0.1, help="J/gamma step")
    p.add_argument("--repeats", type=int, default=3, help="repetitions per point")
    p.add_argument("--decay-points", type=int, default=20,
                   help="times per gamma re-calibration, uniform on [0, 2/(4 gamma)] us")
    p.set_defaults(func=cmd_eigensweep)

    p = sub.add_parser("trajectory", parents=[common],
                       help="H_M trajectory on the CPT Bloch sphere")
    p.add_argument("--j", type=float, default=0.06, help="coupling J (1/us)")
    p.add_argument("--gamma", type=float, default=0.03, help="dissipation gamma (1/us)")
    p.add_argument("--tau", type=float, default=50.0, help="evolution time (us)")
    p.add_argument("--steps", type=int, default=201, help="number of samples")
    p.add_argument("--psi0", choices=("minus", "plus", "zero", "one", "eps_plus", "eps_minus"),
                   default="minus", help="initial state; minus = (|0>-|1>)/sqrt2")
    p.add_argument("--allow-continuation", action="store_true",
                   help="compute non-physical coordinates for gamma/J >= 1")
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("tomography", parents=[common, noise],
                       help="state tomography after H_APT evolution from |0>")
    p.add_argument("--ratio", type=float, default=0.15, help="J/gamma (ignored if --j given)")
    p.add_argument("--gamma", type=float, default=0.4, help="dissipation gamma (1/us)")
    p.add_argument("--j", type=float, default=None, help="coupling J (1/us)")
    p.add_argument("--tau", type=float, default=10.0, help="evolution time (us)")
    p.set_defaults(func=cmd_tomography)

    p = sub.add_parser("calibrate", parents=[common, noise],
                       help="simulate and fit a gamma (decay) or J (Rabi) calibration")
    p.add_argument("--kind", choices=("gamma", "j"), default="gamma", help="what to calibrate")
    p.add_argument("--gamma", type=float, default=0.05, help="true gamma (1/us)")
    p.add_argument("--j", type=float, default=0.06, help="true J (1/us)")
    p.add_argument("--tau-max", type=float, default=10.0, help="last time point (us)")
    p.add_argument("--points", type=int, default=20, help="number of time points")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("reproduce", parents=[common, noise],
                       help="figure data with the published parameters")
    p.add_argument("preset", choices=PRESETS)
    p.add_argument("--repeats", type=int, default=3, help="repetitions for fig2d")
    p.add_argument("--panel", choices=("a", "b"), default="a",
                   help="cpt-sphere panel: a (gamma=0.03) or b (gamma=0.12)")
    p.add_argument("--allow-continuation", action="store_true",
                   help="allow the gamma/J >= 1 panel")
    p.set_defaults(func=cmd_reproduce)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    try:
        with open(known.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {known.config}: {exc}".replace("\n", " ")) from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    args = parser.parse_args(argv)
    explicit = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    valid = set(vars(args))
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest not in valid or dest in ("func", "command", "config"):
            raise ConfigError(f"unknown config key {key!r} for command {args.command}")
        if dest not in explicit:
            setattr(args, dest, value)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.shots is not None and args.shots < 1:
            raise ConfigError("--shots must be >= 1")
        return args.func(args)
    except DegenerateTrace as exc:
        print(f"error: degenerate result: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"error: {exc}".replace("\n", " "), file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}".replace("\n", " "), file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
