"""Command-line runner for scenarios, stability sweeps, and verification.

Subcommands: ``pendulum``, ``vehicle``, ``vehicle-integral``, ``sweep``,
``verify``.  Scenario runs write a CSV trajectory (metadata lines prefixed
with '#', then a header row: t, state columns, monitor columns) and print
a one-line summary of final against predicted values.  Exit codes:
0 success, 1 verification failure, 2 configuration error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, verify
from .ode import IntegrationError, Trajectory
from .pendulum import PendulumConfig, simulate_pendulum
from .pid import Gains
from .vehicle import BodyVelocity, Pose, Reference, predicted_residual_omega, simulate_nominal
from .vehicle_integral import (equilibrium_integrator_state, routh_hurwitz_stable,
                               simulate_integral)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


# required keys have no default and must come from the config file or --set
SCENARIO_KEYS: dict[str, dict[str, float | None]] = {
    "pendulum": {
        "w": None, "b": None, "k_P": None, "k_I": None, "k_D": None,
        "theta_target": None,
        "beta": float("nan"),  # derived from the gains when not given
        "theta0": 0.0, "omega0": 0.0, "u_I0": 0.0,
        "t_end": 50.0, "h": 1e-3,
    },
    "vehicle": {
        "v_x": None, "v_y": None, "omega_0": None, "k_P": None,
        "c_rx": 0.0, "c_ry": 0.0, "phase0": 0.0,
        "theta0": 0.0, "p_x0": 0.0, "p_y0": 0.0,
        "t_end": 200.0, "h": 1e-3,
    },
    "vehicle-integral": {
        "v_x": None, "v_y": None, "omega_0": None, "k_P": None, "k_I": None,
        "c_rx": 0.0, "c_ry": 0.0, "phase0": 0.0,
        "theta0": 0.0, "p_x0": 0.0, "p_y0": 0.0, "omega_I0": 0.0,
        "t_end": 200.0, "h": 1e-3,
    },
}

SWEEP_DEFAULTS = {"omega_0": 1.0, "k_P": 1.0, "k_I": 0.1, "speed": 1.0, "phi": 0.0}


def _parse_set(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        try:
            out[key] = float(value)
        except ValueError as err:
            raise ConfigError(f"value for {key!r} is not a number: {value!r}") from err
    return out


def _load_config_file(path: str) -> dict[str, float]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read config {path!r}: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path!r} must be a JSON object")
    out = {}
    for key, value in raw.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"config key {key!r} must be numeric")
        out[key] = float(value)
    return out


def resolve_config(scenario: str, file_values: dict[str, float],
                   overrides: dict[str, float]) -> dict[str, float]:
    """Merge defaults < config file < --set overrides, validating keys."""
    spec = SCENARIO_KEYS[scenario]
    merged: dict[str, float] = {k: v for k, v in spec.items() if v is not None}
    for source in (file_values, overrides):
        for key, value in source.items():
            if key not in spec:
                raise ConfigError(f"unknown key {key!r} for scenario {scenario}")
            merged[key] = value
    missing = [k for k, v in spec.items() if v is None and k not in merged]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(sorted(missing))}")
    if scenario == "pendulum" and math.isnan(merged["beta"]):
        merged["beta"] = 1.0 / (merged["k_P"]
                                * (merged["b"] + merged["k_I"]) * merged["k_I"])
    for key in ("t_end", "h"):
        if merged[key] <= 0:
            raise ConfigError(f"{key} must be positive")
    return merged


def write_trajectory_csv(path: str, traj: Trajectory, scenario: str,
                         config: dict[str, float]) -> None:
    """Serialize a trajectory; numbers use %.17g so re-reading is bit-exact."""
    columns: list[tuple[str, np.ndarray]] = [("t", traj.times)]
    for i, name in enumerate(traj.state_names):
        columns.append((name, traj.states[:, i]))
    for name, series in traj.monitors.items():
        if name not in traj.state_names:  # identical alias columns are skipped
            columns.append((name, np.asarray(series)))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# liepid {__version__} scenario={scenario}\n")
        for key in sorted(config):
            fh.write(f"# {key} = {config[key]!r}\n")
        fh.write(",".join(name for name, _ in columns) + "\n")
        series = [col for _, col in columns]
        for k in range(len(traj.times)):
            fh.write(",".join(f"{col[k]:.17g}" for col in series) + "\n")


def read_trajectory_csv(path: str) -> tuple[dict[str, str], dict[str, np.ndarray]]:
    """Read back a trajectory CSV: ('#' metadata, column arrays by name)."""
    meta: dict[str, str] = {}
    rows: list[list[float]] = []
    header: list[str] | None = None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                key, sep, value = body.partition(" = ")
                if sep:
                    meta[key] = value
                continue
            if header is None:
                header = line.split(",")
                continue
            rows.append([float(tok) for tok in line.split(",")])
    if header is None:
        raise ConfigError(f"no header row in {path!r}")
    data = np.asarray(rows, dtype=float)
    return meta, {name: data[:, i] for i, name in enumerate(header)}


def _run_pendulum(cfg: dict[str, float]) -> tuple[Trajectory, str]:
    gains = Gains(k_p=cfg["k_P"], k_i=cfg["k_I"], k_d=cfg["k_D"], beta=cfg["beta"])
    pcfg = PendulumConfig(w=cfg["w"], b=cfg["b"], gains=gains,
                          theta_target=cfg["theta_target"],
                          theta0=cfg["theta0"], omega0=cfg["omega0"],
                          u_i0=cfg["u_I0"], t_end=cfg["t_end"], h=cfg["h"])
    traj = simulate_pendulum(pcfg)
    theta_f = traj.states[-1, 0]
    summary = (f"theta_final={theta_f:.6f} (target {cfg['theta_target']:.6f})  "
               f"omega_final={traj.states[-1, 1]:.3e}  "
               f"kI_uI_final={cfg['k_I'] * traj.states[-1, 2]:.6f} "
               f"(bias to cancel {-(-cfg['w'] * math.sin(cfg['theta_target'])):.6f})  "
               f"V_final={traj.monitors['V'][-1]:.3e}")
    return traj, summary


def _vehicle_pieces(cfg: dict[str, float]):
    v = BodyVelocity(np.array([cfg["v_x"], cfg["v_y"]]))
    ref = Reference(omega_0=cfg["omega_0"],
                    center=np.array([cfg["c_rx"], cfg["c_ry"]]),
                    phase0=cfg["phase0"])
    init = Pose(heading=cfg["theta0"], p=np.array([cfg["p_x0"], cfg["p_y0"]]))
    return v, ref, init


def _run_vehicle(cfg: dict[str, float]) -> tuple[Trajectory, str]:
    v, ref, init = _vehicle_pieces(cfg)
    traj = simulate_nominal(v, ref, cfg["k_P"], init, t_end=cfg["t_end"], h=cfg["h"])
    try:
        predicted = predicted_residual_omega(ref.omega_0, cfg["k_P"],
                                             v.speed, v.misalignment)
        predicted_txt = f"{predicted:.6f}"
    except ValueError:
        predicted_txt = "undefined"
    summary = (f"omega_P_final={traj.monitors['omega_P'][-1]:.6f} "
               f"predicted={predicted_txt}  "
               f"dist_c_final={traj.monitors['dist_c'][-1]:.6e}")
    if "dist_chat" in traj.monitors:
        summary += f"  dist_chat_final={traj.monitors['dist_chat'][-1]:.3e}"
    return traj, summary


def _run_vehicle_integral(cfg: dict[str, float]) -> tuple[Trajectory, str]:
    v, ref, init = _vehicle_pieces(cfg)
    traj = simulate_integral(v, ref, cfg["k_P"], cfg["k_I"], init,
                             omega_i0=cfg["omega_I0"],
                             t_end=cfg["t_end"], h=cfg["h"])
    predicted = equilibrium_integrator_state(v, cfg["k_P"], cfg["k_I"])
    summary = (f"omega_final={traj.monitors['omega_cmd'][-1]:.6f} "
               f"(target {ref.omega_0:.6f})  "
               f"omega_I_final={traj.states[-1, 3]:.6f} predicted={predicted:.6f}  "
               f"dist_c_final={traj.monitors['dist_c'][-1]:.6e}")
    return traj, summary


_RUNNERS = {
    "pendulum": _run_pendulum,
    "vehicle": _run_vehicle,
    "vehicle-integral": _run_vehicle_integral,
}


def _parse_grid(specs: list[str]) -> list[tuple[str, list[float]]]:
    axes: list[tuple[str, list[float]]] = []
    for spec in specs:
        key, sep, body = spec.partition("=")
        if not sep or key not in SWEEP_DEFAULTS:
            raise ConfigError(f"bad grid axis {spec!r}; keys: "
                              + ", ".join(sorted(SWEEP_DEFAULTS)))
        try:
            if ":" in body:
                start_s, stop_s, count_s = body.split(":")
                count = int(count_s)
                if count < 1:
                    raise ValueError("count must be >= 1")
                values = [float(x) for x in np.linspace(float(start_s),
                                                        float(stop_s), count)]
            else:
                values = [float(tok) for tok in body.split(",") if tok]
                if not values:
                    raise ValueError("empty value list")
        except ValueError as err:
            raise ConfigError(f"bad grid axis {spec!r}: {err}") from err
        axes.append((key, values))
    return axes


def _run_sweep(args) -> int:
    axes = _parse_grid(args.grid)
    if not axes:
        raise ConfigError("sweep needs at least one --grid axis")
    fixed = dict(SWEEP_DEFAULTS)
    for key, value in _parse_set(args.set or []).items():
        if key not in fixed:
            raise ConfigError(f"unknown key {key!r} for sweep")
        fixed[key] = value

    names = [name for name, _ in axes]
    import itertools
    rows = []
    for combo in itertools.product(*(vals for _, vals in axes)):
        point = dict(fixed)
        point.update(dict(zip(names, combo)))
        tup = (point["omega_0"], point["k_P"], point["k_I"],
               point["speed"], point["phi"])
        rep = routh_hurwitz_stable(*tup)
        if args.classifier == "routh-sufficient":
            verdict = rep.sufficient_ok
            margin = min(rep.margin_rate, rep.margin_damping)
        elif args.classifier == "routh-exact":
            verdict = rep.exact_ok
            margin = min(rep.a2, rep.a0, rep.routh_margin)
        else:  # eigen
            real_parts = verify.linearization_real_parts(*tup)
            margin = -max(real_parts)
            verdict = margin > 0.0
        rows.append(tup + (int(verdict), margin))

    out_path = args.out or "sweep.csv"
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(f"# liepid {__version__} sweep classifier={args.classifier}\n")
        for key in sorted(fixed):
            fh.write(f"# {key} = {fixed[key]!r}\n")
        fh.write("omega_0,k_P,k_I,speed,phi,verdict,margin\n")
        for row in rows:
            fh.write(",".join(f"{x:.17g}" for x in row[:5])
                     + f",{row[5]},{row[6]:.17g}\n")
    if not args.quiet:
        stable = sum(r[5] for r in rows)
        print(f"sweep: {len(rows)} tuples, {stable} classified stable "
              f"({args.classifier}); wrote {out_path}")
    return EXIT_OK


def _run_verify(args) -> int:
    results = verify.run_invariant_suite()
    width = max(len(r.name) for r in results)
    failed = [r for r in results if not r.passed]
    if not args.quiet:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"{r.name:<{width}}  {status}  {r.detail}")
        print(f"{len(results) - len(failed)}/{len(results)} invariants passed")
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liepid",
        description="Simulate and verify integral control on the circle "
                    "and the planar motion group.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="JSON file of parameter overrides")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a single parameter (repeatable)")
        p.add_argument("--out", help="output CSV path")
        p.add_argument("--quiet", action="store_true",
                       help="suppress the summary line")

    for name in _RUNNERS:
        add_common(sub.add_parser(name, help=f"run the {name} scenario"))

    sweep = sub.add_parser("sweep", help="classify stability over a parameter grid")
    sweep.add_argument("--grid", action="append", default=[],
                       metavar="KEY=START:STOP:COUNT|KEY=V1,V2,...",
                       help="grid axis (repeatable)")
    sweep.add_argument("--classifier", default="routh-sufficient",
                       choices=("routh-sufficient", "routh-exact", "eigen"))
    add_common(sweep)

    ver = sub.add_parser("verify", help="run the full invariant suite")
    ver.add_argument("--quiet", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        if args.command == "sweep":
            return _run_sweep(args)
        file_values = _load_config_file(args.config) if args.config else {}
        overrides = _parse_set(args.set or [])
        cfg = resolve_config(args.command, file_values, overrides)
        try:
            traj, summary = _RUNNERS[args.command](cfg)
        except IntegrationError as err:
            print(f"numerical failure: {err}", file=sys.stderr)
            return EXIT_NUMERICAL
        out_path = args.out or f"{args.command}.csv"
        write_trajectory_csv(out_path, traj, args.command, cfg)
        if not args.quiet:
            print(summary)
            print(f"wrote {out_path}")
        return EXIT_OK
    except (ConfigError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
