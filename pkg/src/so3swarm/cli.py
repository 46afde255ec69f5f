"""Experiment runner: simulate | sweep | karcher | constants | w1.

Exit codes: 0 success, 2 config or input error, 3 simulation error,
4 post-processing error. All CSV floats are written with 17 significant
digits so that 64-bit values round-trip exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import so3
from .configio import (
    ConfigError,
    flat_to_sim_config,
    parse_config_text,
    potential_from_flat,
    sim_config_to_flat,
)
from .dynamics import RunResult, SimConfig, karcher_mean, run
from .errors import DomainError, NoConvergence, SimulationError
from .potentials import consensus_hypotheses
from .presets import PRESETS
from .transport import EmpiricalMeasure, stability_constants, stability_rate, w1_distance

DIAGNOSTICS_HEADER = "t,energy,dissipation,diameter,min_trace,max_dist_to_center"
TRAJECTORY_HEADER = "t,particle_id,theta,ax,ay,az"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# Artifact writers and readers
# ---------------------------------------------------------------------------


def write_diagnostics(path: Path, result: RunResult):
    lines = [DIAGNOSTICS_HEADER]
    for r in result.records:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.time,
                    r.energy,
                    r.dissipation,
                    r.diameter,
                    r.min_trace,
                    r.max_dist_to_center,
                )
            )
        )
    path.write_text("\n".join(lines) + "\n")


def write_trajectory(path: Path, result: RunResult):
    lines = [TRAJECTORY_HEADER]
    for t, state in result.trajectory:
        for i, R in enumerate(state.rotations):
            aa = so3.log_rotation(R)
            lines.append(
                f"{_fmt(t)},{i},{_fmt(aa.theta)},"
                f"{_fmt(aa.axis[0])},{_fmt(aa.axis[1])},{_fmt(aa.axis[2])}"
            )
    path.write_text("\n".join(lines) + "\n")


def write_summary(path: Path, config: SimConfig, result: RunResult, wall_time: float):
    final = result.records[-1]
    summary = {
        "final_time": final.time,
        "final_diameter": final.diameter,
        "final_dissipation": final.dissipation,
        "consensus": result.status == "consensus",
        "status": result.status,
        "steps_completed": result.steps_completed,
        "wall_time_s": wall_time,
        "seed": config.seed,
        "config": sim_config_to_flat(config),
    }
    path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")


def read_state_csv(path: Path, at_final_time: bool = True):
    """Read atoms from either a trajectory.csv or a plain state CSV.

    Plain state files have header theta,ax,ay,az[,mass]; trajectory files
    are filtered to their last recorded time. Returns an EmpiricalMeasure.
    """
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ConfigError(f"{path} is empty")
    header = [h.strip() for h in lines[0].split(",")]
    try:
        rows = [[float(tok) for tok in ln.split(",")] for ln in lines[1:]]
    except ValueError as exc:
        raise ConfigError(f"{path}: malformed CSV row: {exc}")
    if not rows:
        raise ConfigError(f"{path} has no data rows")
    if header[:2] == ["t", "particle_id"]:
        t_final = max(r[0] for r in rows)
        rows = [r[2:] for r in rows if r[0] == t_final]
        header = header[2:]
    if header[:4] != ["theta", "ax", "ay", "az"]:
        raise ConfigError(f"{path}: expected columns theta,ax,ay,az[,mass]")
    rotations = []
    masses = []
    for r in rows:
        theta = r[0]
        axis = np.array(r[1:4])
        n = np.linalg.norm(axis)
        axis = axis / n if n > 0 else np.array([1.0, 0.0, 0.0])
        rotations.append(so3.exp_axis_angle(so3.AxisAngle(theta, axis)))
        masses.append(r[4] if len(header) > 4 and len(r) > 4 else np.nan)
    rotations = np.stack(rotations)
    masses = np.array(masses)
    if np.all(np.isnan(masses)):
        masses = np.full(len(rotations), 1.0 / len(rotations))
        masses[-1] = 1.0 - masses[:-1].sum()
    elif np.any(np.isnan(masses)):
        raise ConfigError(f"{path}: mass column present but incomplete")
    return EmpiricalMeasure(rotations, masses)


def time_to_diameter(records, threshold: float) -> float:
    """First time the recorded diameter drops below threshold.

    Linearly interpolated between bracketing records; +inf if the threshold
    is never reached.
    """
    prev = None
    for r in records:
        if r.diameter < threshold:
            if prev is None or prev.diameter == r.diameter:
                return r.time
            frac = (prev.diameter - threshold) / (prev.diameter - r.diameter)
            return prev.time + frac * (r.time - prev.time)
        prev = r
    return float("inf")


# ---------------------------------------------------------------------------
# Config assembly
# ---------------------------------------------------------------------------


def _load_flat_config(args) -> dict[str, str]:
    flat: dict[str, str] = {}
    if getattr(args, "preset", None):
        if args.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {args.preset!r}; expected one of {sorted(PRESETS)}"
            )
        flat.update(PRESETS[args.preset])
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        flat.update(parse_config_text(path.read_text()))
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        flat[key.strip()] = value.strip()
    if getattr(args, "seed", None) is not None:
        flat["seed"] = str(args.seed)
    return flat


def _build_sim_config(args) -> SimConfig:
    try:
        return flat_to_sim_config(_load_flat_config(args))
    except DomainError as exc:
        raise ConfigError(str(exc))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    config = _build_sim_config(args)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    result = run(config)
    wall = time.perf_counter() - t0
    write_diagnostics(out_dir / "diagnostics.csv", result)
    write_trajectory(out_dir / "trajectory.csv", result)
    write_summary(out_dir / "summary.json", config, result, wall)
    final = result.records[-1]
    print(
        f"{result.status}: steps={result.steps_completed} t={final.time:g} "
        f"diameter={final.diameter:.6g}"
    )
    return 0


def _sweep_one(flat: dict, parameter: str, value: str, out_dir: str, threshold: float) -> str:
    """Run one sweep member and write its artifacts; returns the summary row.

    Module-level so that sweep members can execute in worker processes; each
    member owns its output subdirectory, so there is no write contention.
    """
    label = f"{parameter}={value}"
    sub = Path(out_dir) / label
    sub.mkdir(parents=True, exist_ok=True)
    config = flat_to_sim_config(dict(flat, **{parameter: value}))
    t0 = time.perf_counter()
    try:
        result = run(config)
    except SimulationError as exc:
        print(f"{label}: failed at step {exc.step_index}: {exc}", file=sys.stderr)
        return f"{parameter},{value},nan,false,nan,error"
    wall = time.perf_counter() - t0
    write_diagnostics(sub / "diagnostics.csv", result)
    write_trajectory(sub / "trajectory.csv", result)
    write_summary(sub / "summary.json", config, result, wall)
    t_star = time_to_diameter(result.records, threshold)
    final = result.records[-1]
    print(f"{label}: {result.status}, time_to_threshold={t_star:g}")
    return (
        f"{parameter},{value},{_fmt(t_star)},"
        f"{str(np.isfinite(t_star)).lower()},{_fmt(final.diameter)},{result.status}"
    )


def cmd_sweep(args) -> int:
    flat_base = _load_flat_config(args)
    values = [v for v in (args.values or "").split(",") if v.strip()]
    if not values:
        raise ConfigError("sweep needs a non-empty --values list")
    for value in values:  # validate every member before spending any compute
        flat_to_sim_config(dict(flat_base, **{args.parameter: value}))
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = ["parameter,value,time_to_threshold,reached,final_diameter,status"]
    if len(values) > 1 and args.jobs != 1:
        import concurrent.futures as cf

        workers = min(len(values), args.jobs or (os.cpu_count() or 1))
        with cf.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _sweep_one, flat_base, args.parameter, v, str(out_dir), args.threshold
                )
                for v in values
            ]
            rows.extend(f.result() for f in futures)
    else:
        rows.extend(
            _sweep_one(flat_base, args.parameter, v, str(out_dir), args.threshold)
            for v in values
        )
    (out_dir / "sweep_summary.csv").write_text("\n".join(rows) + "\n")
    return 3 if any(row.endswith(",error") for row in rows) else 0


def cmd_karcher(args) -> int:
    measure = read_state_csv(Path(args.trajectory))
    try:
        center = karcher_mean(
            measure.rotations, measure.masses, tol=args.tol, max_iter=args.max_iter
        )
    except NoConvergence as exc:
        print(f"karcher mean did not converge: residual {exc.residual}", file=sys.stderr)
        return 4
    dists = np.array(
        [so3.geodesic_distance(center, R) for R in measure.rotations]
    )
    aa = so3.log_rotation(center)
    payload = {
        "center": [aa.theta, aa.axis[0], aa.axis[1], aa.axis[2]],
        "mean_radius": float(dists.mean()),
        "radius_std": float(dists.std()),
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def cmd_constants(args) -> int:
    flat = _load_flat_config(args)
    try:
        pot = potential_from_flat(flat)
        consts = stability_constants(pot, args.epsilon)
    except DomainError as exc:
        raise ConfigError(str(exc))
    payload = consts.as_dict()
    payload["r"] = {str(t): stability_rate(consts, t) for t in (0.0, 0.1, 1.0)}
    payload["potential"] = {"kind": pot.kind, **pot.params()}
    r = min(np.pi / 2 - args.epsilon, np.pi / 4 - 1e-9)
    payload["consensus_hypotheses"] = consensus_hypotheses(pot, r)
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def cmd_w1(args) -> int:
    mu = read_state_csv(Path(args.state_a))
    nu = read_state_csv(Path(args.state_b))
    print(f"{w1_distance(mu, nu):.12g}")
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="path to a flat key=value config file")
    p.add_argument("--preset", help=f"named preset, one of {sorted(PRESETS)}")
    p.add_argument("--seed", type=int, help="override the RNG seed")
    p.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a single config key (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="so3swarm",
        description="Aggregation dynamics on the rotation group.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one simulation and write artifacts")
    _add_config_flags(p)
    p.add_argument("--output-dir", default=".", help="directory for output files")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a one-parameter family of simulations")
    _add_config_flags(p)
    p.add_argument("--output-dir", default=".")
    p.add_argument("--parameter", required=True, help="config key to sweep")
    p.add_argument("--values", required=True, help="comma-separated values")
    p.add_argument(
        "--threshold",
        type=float,
        default=0.01,
        help="diameter threshold for the reported crossing time",
    )
    p.add_argument(
        "--jobs",
        type=int,
        default=0,
        help="concurrent sweep members (0 = one per CPU, 1 = sequential)",
    )
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("karcher", help="Riemannian centre of mass of a state file")
    p.add_argument("trajectory", help="trajectory.csv or state CSV")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--out", help="also write the JSON result to this path")
    p.set_defaults(func=cmd_karcher)

    p = sub.add_parser("constants", help="stability constants of a potential")
    _add_config_flags(p)
    p.add_argument("--epsilon", type=float, required=True, help="disk margin in (0, pi/4)")
    p.add_argument("--out", help="also write the JSON result to this path")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("w1", help="1-Wasserstein distance between two state files")
    p.add_argument("state_a")
    p.add_argument("state_b")
    p.set_defaults(func=cmd_w1)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SimulationError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
