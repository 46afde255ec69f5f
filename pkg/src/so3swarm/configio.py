"""Flat key-value experiment configs and their mapping to SimConfig.

The format is plain text, one ``key = value`` pair per line, ``#`` comments,
dotted keys for sections. All angles are radians. Rotations serialize as
row-major 9-tuples, axis-angle pairs as (theta, ax, ay, az).
"""

from __future__ import annotations

import numpy as np

from . import so3
from .dynamics import SimConfig
from .potentials import Potential, make_potential

_POTENTIAL_PARAM_KEYS = {
    "attractive_power": ("q",),
    "repulsive_attractive_power": ("p", "q"),
    "morse": ("C", "l", "s_exp"),
    "lohe_sphere": (),
}

_SCALAR_KEYS = {
    "n_particles": int,
    "dt": float,
    "steps": int,
    "integrator": str,
    "seed": int,
    "record_every": int,
    "consensus_tol": float,
    "axis_mode": str,
    "init.radius": float,
}

DEFAULTS = {
    "potential.kind": "attractive_power",
    "potential.q": "2",
    "n_particles": "20",
    "dt": "0.01",
    "steps": "1000",
    "integrator": "lie_rk4_projected",
    "seed": "0",
    "record_every": "1",
    "consensus_tol": "1e-6",
    "axis_mode": "polar_azimuthal",
    "init.radius": repr(np.pi / 4),
    "init.center": "1 0 0 0 1 0 0 0 1",
}


class ConfigError(ValueError):
    """Malformed config; carries the offending line and column (1-based)."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self):
        base = super().__str__()
        if self.line:
            return f"line {self.line}, column {self.column}: {base}"
        return base


def parse_config_text(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines into a flat string map."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ConfigError("expected 'key = value'", lineno, col)
        key, value = line.split("=", 1)
        if not key.strip():
            raise ConfigError("empty key", lineno, 1)
        if not value.strip():
            raise ConfigError("empty value", lineno, line.index("=") + 2)
        out[key.strip()] = value.strip()
    return out


def _parse_typed(key: str, value: str, typ):
    try:
        return typ(value)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse {value!r} as {typ.__name__}")


def potential_from_flat(flat: dict[str, str]) -> Potential:
    """Build the potential described by the potential.* keys."""
    kind = flat.get("potential.kind", DEFAULTS["potential.kind"])
    if kind not in _POTENTIAL_PARAM_KEYS:
        raise ConfigError(
            f"unknown potential.kind {kind!r}; expected one of "
            f"{sorted(_POTENTIAL_PARAM_KEYS)}"
        )
    params = {}
    for name in _POTENTIAL_PARAM_KEYS[kind]:
        key = f"potential.{name}"
        if key in flat:
            params[name] = _parse_typed(key, flat[key], float)
    return make_potential(kind, **params)


def flat_to_sim_config(flat: dict[str, str]) -> SimConfig:
    """Resolve a flat map (with defaults) into a validated SimConfig."""
    merged = dict(DEFAULTS)
    merged.update(flat)
    known = set(DEFAULTS) | {
        f"potential.{n}" for names in _POTENTIAL_PARAM_KEYS.values() for n in names
    }
    for key in merged:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
    kwargs = {}
    for key, typ in _SCALAR_KEYS.items():
        value = _parse_typed(key, merged[key], typ)
        if key == "init.radius":
            radius = value
        else:
            kwargs[key] = value
    center_vals = merged["init.center"].split()
    if len(center_vals) != 9:
        raise ConfigError("init.center needs 9 row-major entries")
    center = np.array([_parse_typed("init.center", v, float) for v in center_vals])
    center = center.reshape(3, 3)
    if not so3.is_rotation(center, tol=1e-6):
        raise ConfigError("init.center is not a rotation matrix")
    return SimConfig(
        potential=potential_from_flat(merged),
        init_disk=so3.DiskDomain(center, radius),
        **kwargs,
    )


def sim_config_to_flat(config: SimConfig) -> dict[str, str]:
    """Serialize a SimConfig back to the flat string map (full echo)."""
    flat = {"potential.kind": config.potential.kind}
    for name, value in config.potential.params().items():
        flat[f"potential.{name}"] = repr(value)
    flat.update(
        {
            "n_particles": str(config.n_particles),
            "dt": repr(config.dt),
            "steps": str(config.steps),
            "integrator": config.integrator,
            "seed": str(config.seed),
            "record_every": str(config.record_every),
            "consensus_tol": repr(config.consensus_tol),
            "axis_mode": config.axis_mode,
            "init.radius": repr(float(config.init_disk.radius)),
            "init.center": " ".join(
                repr(float(v)) for v in config.init_disk.center.ravel()
            ),
        }
    )
    return flat
