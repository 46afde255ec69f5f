import json

import numpy as np
import pytest

import so3swarm as sw
from so3swarm import so3
from so3swarm.cli import main
from so3swarm.configio import ConfigError, flat_to_sim_config, parse_config_text

from conftest import random_rotations


def write_state_csv(path, rotations, masses=None):
    lines = ["theta,ax,ay,az" + (",mass" if masses is not None else "")]
    for k, R in enumerate(rotations):
        aa = sw.log_rotation(R)
        row = f"{aa.theta:.17g},{aa.axis[0]:.17g},{aa.axis[1]:.17g},{aa.axis[2]:.17g}"
        if masses is not None:
            row += f",{masses[k]:.17g}"
        lines.append(row)
    path.write_text("\n".join(lines) + "\n")


BASE_CONFIG = """
# small smoke configuration
potential.kind = attractive_power
potential.q = 2
n_particles = 6
dt = 0.01
steps = 50
record_every = 10
seed = 4
consensus_tol = 1e-9
"""


# ---------------------------------------------------------------------------
# config format
# ---------------------------------------------------------------------------


def test_parse_config_text_roundtrip():
    flat = parse_config_text(BASE_CONFIG)
    assert flat["potential.q"] == "2"
    cfg = flat_to_sim_config(flat)
    assert cfg.n_particles == 6 and cfg.dt == 0.01


def test_parse_config_reports_line_and_column():
    with pytest.raises(ConfigError) as exc:
        parse_config_text("dt = 0.01\nbroken line\n")
    assert exc.value.line == 2
    assert exc.value.column >= 1
    assert "line 2" in str(exc.value)


def test_unknown_key_and_bad_value_rejected():
    with pytest.raises(ConfigError):
        flat_to_sim_config({"not_a_key": "1"})
    with pytest.raises(ConfigError):
        flat_to_sim_config({"dt": "fast"})
    with pytest.raises(ConfigError):
        flat_to_sim_config({"potential.kind": "gravity"})


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def test_simulate_writes_artifacts(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--output-dir", str(out)]) == 0

    diag = (out / "diagnostics.csv").read_text().splitlines()
    assert diag[0] == "t,energy,dissipation,diameter,min_trace,max_dist_to_center"
    assert len(diag) == 1 + 1 + 5  # header + initial + 5 records

    traj = (out / "trajectory.csv").read_text().splitlines()
    assert traj[0] == "t,particle_id,theta,ax,ay,az"
    assert len(traj) == 1 + 6 * 6  # 6 snapshots x 6 particles

    summary = json.loads((out / "summary.json").read_text())
    assert summary["seed"] == 4
    assert summary["status"] in ("completed", "consensus", "equilibrium")
    assert summary["config"]["potential.kind"] == "attractive_power"


def test_simulate_missing_config_exits_2(tmp_path, capsys):
    rc = main(["simulate", "--config", str(tmp_path / "nope.cfg")])
    assert rc == 2
    assert "nope.cfg" in capsys.readouterr().err


def test_simulate_zero_steps_single_row(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG.replace("steps = 50", "steps = 0"))
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--output-dir", str(out)]) == 0
    rows = (out / "diagnostics.csv").read_text().splitlines()
    assert len(rows) == 2  # header + one data row


def test_simulate_byte_identical_reruns(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG)
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["simulate", "--config", str(cfg), "--output-dir", str(out)]) == 0
        outs.append(out)
    for fname in ("diagnostics.csv", "trajectory.csv"):
        assert (outs[0] / fname).read_bytes() == (outs[1] / fname).read_bytes()


def test_simulate_config_echo_replays_identically(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG)
    out1 = tmp_path / "first"
    assert main(["simulate", "--config", str(cfg), "--output-dir", str(out1)]) == 0
    echo = json.loads((out1 / "summary.json").read_text())["config"]

    replay = tmp_path / "replay.cfg"
    replay.write_text("\n".join(f"{k} = {v}" for k, v in echo.items()))
    out2 = tmp_path / "second"
    assert main(["simulate", "--config", str(replay), "--output-dir", str(out2)]) == 0
    assert (out1 / "diagnostics.csv").read_bytes() == (out2 / "diagnostics.csv").read_bytes()


def test_simulate_seed_and_set_overrides(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG)
    out = tmp_path / "out"
    rc = main(
        [
            "simulate",
            "--config",
            str(cfg),
            "--output-dir",
            str(out),
            "--seed",
            "99",
            "--set",
            "steps=10",
        ]
    )
    assert rc == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["seed"] == 99
    assert summary["config"]["steps"] == "10"


def test_simulate_preset_known_and_unknown(tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(
        [
            "simulate",
            "--preset",
            "fig1_consensus_q2",
            "--set",
            "steps=5",
            "--set",
            "record_every=1",
            "--output-dir",
            str(out),
        ]
    )
    assert rc == 0
    assert main(["simulate", "--preset", "bogus", "--output-dir", str(out)]) == 2


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def test_sweep_writes_per_value_dirs_and_summary(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG)
    out = tmp_path / "sweep"
    rc = main(
        [
            "sweep",
            "--config",
            str(cfg),
            "--output-dir",
            str(out),
            "--parameter",
            "potential.q",
            "--values",
            "2,4",
        ]
    )
    assert rc == 0
    assert (out / "potential.q=2" / "diagnostics.csv").exists()
    assert (out / "potential.q=4" / "diagnostics.csv").exists()
    rows = (out / "sweep_summary.csv").read_text().splitlines()
    assert rows[0] == "parameter,value,time_to_threshold,reached,final_diameter,status"
    assert len(rows) == 3


def test_sweep_empty_values_exits_2(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG)
    rc = main(
        [
            "sweep",
            "--config",
            str(cfg),
            "--output-dir",
            str(tmp_path / "s"),
            "--parameter",
            "potential.q",
            "--values",
            "",
        ]
    )
    assert rc == 2


def test_sweep_unknown_parameter_exits_2(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG)
    rc = main(
        [
            "sweep",
            "--config",
            str(cfg),
            "--output-dir",
            str(tmp_path / "s"),
            "--parameter",
            "warp",
            "--values",
            "1,2",
        ]
    )
    assert rc == 2


def test_sweep_dt_convergence_order(tmp_path):
    # halving dt changes the diameter at a common time by O(dt^4)
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        """
potential.kind = attractive_power
potential.q = 2
n_particles = 8
dt = 0.01
steps = 200
record_every = 1
seed = 6
consensus_tol = 1e-12
init.radius = 0.6
"""
    )
    out = tmp_path / "sweep"
    rc = main(
        [
            "sweep",
            "--config",
            str(cfg),
            "--output-dir",
            str(out),
            "--parameter",
            "dt",
            "--values",
            "0.01,0.005",
        ]
    )
    assert rc == 0

    def diameter_at(path, t_star):
        rows = path.read_text().splitlines()[1:]
        for row in rows:
            vals = row.split(",")
            if abs(float(vals[0]) - t_star) < 1e-12:
                return float(vals[3])
        raise AssertionError(f"no record at t={t_star}")

    t_star = 200 * 0.01 / 2.0  # common horizon of both runs
    d_coarse = diameter_at(out / "dt=0.01" / "diagnostics.csv", t_star)
    d_fine = diameter_at(out / "dt=0.005" / "diagnostics.csv", t_star)
    assert abs(d_coarse - d_fine) <= 1e-9  # O(dt^4) at dt = 1e-2


# ---------------------------------------------------------------------------
# karcher
# ---------------------------------------------------------------------------


def test_karcher_consensus_trajectory(tmp_path, capsys):
    R = random_rotations(1, np.random.default_rng(50), max_angle=0.5)[0]
    state = tmp_path / "state.csv"
    write_state_csv(state, np.repeat(R[None], 5, axis=0))
    assert main(["karcher", str(state)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["radius_std"] <= 1e-12
    aa = sw.log_rotation(R)
    assert np.isclose(payload["center"][0], aa.theta, atol=1e-9)


def test_karcher_two_atoms_midpoint(tmp_path, capsys):
    rng = np.random.default_rng(51)
    a, b = random_rotations(2, rng, max_angle=0.5)
    state = tmp_path / "state.csv"
    write_state_csv(state, np.stack([a, b]))
    assert main(["karcher", str(state)]) == 0
    payload = json.loads(capsys.readouterr().out)
    mid = sw.geodesic_point(a, b, 0.5)
    aa_mid = sw.log_rotation(mid)
    assert np.isclose(payload["center"][0], aa_mid.theta, atol=1e-8)
    assert np.allclose(payload["center"][1:], aa_mid.axis, atol=1e-6)


def test_karcher_no_convergence_exit_4(tmp_path):
    rng = np.random.default_rng(52)
    state = tmp_path / "state.csv"
    write_state_csv(state, random_rotations(5, rng, max_angle=0.5))
    rc = main(["karcher", str(state), "--max-iter", "1", "--tol", "1e-15"])
    assert rc == 4


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------


def test_constants_r_at_zero_is_one(tmp_path, capsys):
    rc = main(["constants", "--set", "potential.kind=attractive_power",
               "--set", "potential.q=2", "--epsilon", "0.1"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["r"]["0.0"] == 1.0
    assert payload["r"]["1.0"] > payload["r"]["0.1"] > 1.0


def test_constants_monotone_in_epsilon(capsys):
    outs = {}
    for eps in ("0.1", "0.01"):
        assert main(["constants", "--set", "potential.kind=lohe_sphere",
                     "--epsilon", eps]) == 0
        outs[eps] = json.loads(capsys.readouterr().out)
    for key in ("C_f", "L_f", "C_gp", "L_gp", "L", "Lip", "C_eps"):
        assert outs["0.01"][key] >= outs["0.1"][key]


def test_constants_match_library_bit_for_bit(capsys):
    eps = 0.07
    assert main(["constants", "--set", "potential.kind=attractive_power",
                 "--set", "potential.q=2", "--epsilon", str(eps)]) == 0
    payload = json.loads(capsys.readouterr().out)
    consts = sw.stability_constants(sw.AttractivePower(2), eps)
    for key, value in consts.as_dict().items():
        assert payload[key] == value


def test_constants_invalid_potential_exit_2(capsys):
    assert main(["constants", "--set", "potential.kind=gravity",
                 "--epsilon", "0.1"]) == 2


# ---------------------------------------------------------------------------
# w1
# ---------------------------------------------------------------------------


def test_w1_identical_files_zero(tmp_path, capsys):
    rng = np.random.default_rng(53)
    state = tmp_path / "state.csv"
    write_state_csv(state, random_rotations(4, rng))
    assert main(["w1", str(state), str(state)]) == 0
    assert float(capsys.readouterr().out) == 0.0


def test_w1_single_atoms_geodesic_distance(tmp_path, capsys):
    rng = np.random.default_rng(54)
    a, b = random_rotations(2, rng)
    fa, fb = tmp_path / "a.csv", tmp_path / "b.csv"
    write_state_csv(fa, a[None])
    write_state_csv(fb, b[None])
    assert main(["w1", str(fa), str(fb)]) == 0
    printed = float(capsys.readouterr().out)
    assert np.isclose(printed, sw.geodesic_distance(a, b), atol=1e-10)


def test_w1_matches_brute_force_n4(tmp_path, capsys):
    import itertools

    rng = np.random.default_rng(55)
    A = random_rotations(4, rng)
    B = random_rotations(4, rng)
    fa, fb = tmp_path / "a.csv", tmp_path / "b.csv"
    write_state_csv(fa, A)
    write_state_csv(fb, B)
    assert main(["w1", str(fa), str(fb)]) == 0
    printed = float(capsys.readouterr().out)
    cost = np.array([[sw.geodesic_distance(a, b) for b in B] for a in A])
    brute = min(
        sum(cost[i, p[i]] for i in range(4)) / 4.0
        for p in itertools.permutations(range(4))
    )
    assert np.isclose(printed, brute, atol=1e-10)


def test_w1_malformed_csv_exit_2(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("theta,ax,ay,az\n0.1,0.2,oops,0.3\n")
    good = tmp_path / "good.csv"
    write_state_csv(good, random_rotations(1, np.random.default_rng(56)))
    assert main(["w1", str(bad), str(good)]) == 2


def test_w1_accepts_trajectory_format(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(BASE_CONFIG)
    out = tmp_path / "out"
    assert main(["simulate", "--config", str(cfg), "--output-dir", str(out)]) == 0
    capsys.readouterr()  # drop the simulate status line
    traj = out / "trajectory.csv"
    assert main(["w1", str(traj), str(traj)]) == 0
    assert float(capsys.readouterr().out) == 0.0
