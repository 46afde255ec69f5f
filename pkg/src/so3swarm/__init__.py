"""Intrinsic aggregation dynamics on the rotation group SO(3)."""

from .so3 import (
    AxisAngle,
    DiskDomain,
    TangentVector,
    exp_axis_angle,
    exp_map,
    geodesic_distance,
    geodesic_point,
    hat,
    is_rotation,
    log_map,
    log_rotation,
    project_to_so3,
    random_rotation_in_disk,
    vee,
)
from .potentials import (
    AttractivePower,
    LoheSphere,
    Morse,
    Potential,
    RepulsiveAttractivePower,
    consensus_hypotheses,
    g_eval,
    g_prime,
    grad_K,
    h_eval,
    make_potential,
)
from .dynamics import (
    DiagnosticsRecord,
    ParticleState,
    RunResult,
    SimConfig,
    diameter,
    dissipation,
    energy,
    initial_state,
    karcher_mean,
    min_trace,
    run,
    step,
    theoretical_trace_bound,
    velocity,
)
from .transport import (
    EmpiricalMeasure,
    StabilityConstants,
    empirical_of,
    stability_constants,
    stability_rate,
    w1_distance,
)
from . import errors

__all__ = [
    "AxisAngle",
    "DiskDomain",
    "TangentVector",
    "exp_axis_angle",
    "exp_map",
    "geodesic_distance",
    "geodesic_point",
    "hat",
    "is_rotation",
    "log_map",
    "log_rotation",
    "project_to_so3",
    "random_rotation_in_disk",
    "vee",
    "AttractivePower",
    "LoheSphere",
    "Morse",
    "Potential",
    "RepulsiveAttractivePower",
    "consensus_hypotheses",
    "g_eval",
    "g_prime",
    "grad_K",
    "h_eval",
    "make_potential",
    "DiagnosticsRecord",
    "ParticleState",
    "RunResult",
    "SimConfig",
    "diameter",
    "dissipation",
    "energy",
    "initial_state",
    "karcher_mean",
    "min_trace",
    "run",
    "step",
    "theoretical_trace_bound",
    "velocity",
    "EmpiricalMeasure",
    "StabilityConstants",
    "empirical_of",
    "stability_constants",
    "stability_rate",
    "w1_distance",
    "errors",
]
