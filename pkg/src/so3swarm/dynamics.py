"""N-particle gradient flow on SO(3) with consensus diagnostics.

The particle system is

    dR_i/dt = - sum_j m_j grad_K(R_i, R_j),

a gradient flow of the interaction energy E = (1/2) sum_ij m_i m_j K(R_i, R_j)
(so that dR_i/dt = -N grad_i E for equal masses). Two fixed-step RK4
integrators are provided: one in angle-axis chart coordinates and one in the
ambient matrix space with re-projection onto SO(3).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels, so3
from .errors import (
    ChartSingularity,
    CutLocusError,
    DomainError,
    InvalidForSingleParticle,
    NoConvergence,
    SimulationError,
)
from .potentials import Potential

INTEGRATORS = ("rk4_axis_angle", "lie_rk4_projected")

# Dissipation below this level is treated as numerical equilibrium.
EQUILIBRIUM_DISSIPATION = 1e-14

# Valid angle range of the angle-axis chart during integration substeps.
_CHART_THETA_MIN = 1e-6
_CHART_THETA_MAX = np.pi - 1e-4


@dataclass(frozen=True)
class ParticleState:
    """N rotations with masses summing to one; an empirical measure snapshot."""

    rotations: np.ndarray  # (N, 3, 3)
    masses: np.ndarray  # (N,)
    time: float = 0.0

    def __post_init__(self):
        rot = np.asarray(self.rotations, dtype=float)
        m = np.asarray(self.masses, dtype=float)
        if rot.ndim != 3 or rot.shape[1:] != (3, 3):
            raise DomainError(f"rotations must have shape (N, 3, 3), got {rot.shape}")
        if m.shape != (rot.shape[0],):
            raise DomainError("one mass per rotation required")
        if np.any(m <= 0.0) or abs(float(m.sum()) - 1.0) > 1e-12:
            raise DomainError("masses must be positive and sum to 1")
        object.__setattr__(self, "rotations", rot)
        object.__setattr__(self, "masses", m)

    def __len__(self) -> int:
        return self.rotations.shape[0]


def uniform_masses(n: int) -> np.ndarray:
    """Equal masses 1/n, normalized to sum exactly to 1."""
    m = np.full(n, 1.0 / n)
    m[-1] = 1.0 - m[:-1].sum()
    return m


@dataclass(frozen=True)
class SimConfig:
    """Everything that determines a simulation run."""

    potential: Potential
    n_particles: int
    dt: float = 0.01
    steps: int = 1000
    integrator: str = "lie_rk4_projected"
    seed: int = 0
    init_disk: so3.DiskDomain = field(
        default_factory=lambda: so3.DiskDomain(np.eye(3), np.pi / 4)
    )
    record_every: int = 1
    consensus_tol: float = 1e-6
    axis_mode: str = "polar_azimuthal"

    def __post_init__(self):
        if self.dt <= 0.0:
            raise DomainError("dt must be positive")
        if self.steps < 0:
            raise DomainError("steps must be >= 0")
        if self.n_particles < 1:
            raise DomainError("need at least one particle")
        if self.record_every < 1:
            raise DomainError("record_every must be >= 1")
        if self.consensus_tol <= 0.0:
            raise DomainError("consensus_tol must be positive")
        if self.integrator not in INTEGRATORS:
            raise DomainError(
                f"unknown integrator {self.integrator!r}; expected one of {INTEGRATORS}"
            )


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Scalar diagnostics of one recorded instant."""

    time: float
    energy: float
    dissipation: float
    diameter: float
    min_trace: float  # nan for N = 1
    max_dist_to_center: float


@dataclass(frozen=True)
class RunResult:
    """Trajectory snapshots, diagnostics and the reason the run ended."""

    trajectory: list  # [(time, ParticleState), ...]
    records: list  # [DiagnosticsRecord, ...]
    status: str  # "completed" | "consensus" | "equilibrium"
    steps_completed: int


# ---------------------------------------------------------------------------
# Velocity field
# ---------------------------------------------------------------------------


def velocity_generators(
    rotations: np.ndarray, masses: np.ndarray, pot: Potential
) -> np.ndarray:
    """Body generators A_i of all particle velocities, shape (N, 3, 3).

    A_i = sum_j m_j h(theta_ij) (R_i^T R_j - R_j^T R_i); the j = i term is
    skipped, so it is exactly zero. The sum over j runs in ascending order,
    making results bitwise reproducible.
    """
    rotations = np.ascontiguousarray(rotations, dtype=float)
    kind, params = _kernels.encode_potential(pot)
    gens = np.empty_like(rotations)
    status, i, j = _kernels._velocity_gens(rotations, masses, kind, params, gens)
    _kernels.raise_for_status(status, i, j)
    return gens


def velocity(state: ParticleState, pot: Potential, i: int) -> so3.TangentVector:
    """Velocity of particle i: -sum_j m_j grad_K(R_i, R_j)."""
    gens = velocity_generators(state.rotations, state.masses, pot)
    return so3.TangentVector(state.rotations[i], gens[i])


# ---------------------------------------------------------------------------
# Integrators
# ---------------------------------------------------------------------------


def _chart_coordinates(rotations: np.ndarray):
    thetas = np.empty(rotations.shape[0])
    axes = np.empty((rotations.shape[0], 3))
    _kernels._rotations_to_chart(np.ascontiguousarray(rotations), thetas, axes)
    return thetas, axes


def step(state: ParticleState, pot: Potential, dt: float, integrator: str) -> ParticleState:
    """Advance the particle system by one RK4 step of size dt.

    rk4_axis_angle integrates the induced ODE in per-particle (theta, axis)
    chart coordinates and renormalizes the axis afterwards; it fails with
    ChartSingularity near the chart boundary. lie_rk4_projected takes the
    RK4 step in the ambient matrix space, re-projecting each stage onto
    SO(3) through the polar factor.
    """
    kind, params = _kernels.encode_potential(pot)
    masses = state.masses
    if integrator == "rk4_axis_angle":
        thetas, axes = _chart_coordinates(state.rotations)
        thetas, axes, _, status, i, j = _kernels._run_chart(
            thetas, axes, masses, kind, params, dt, 1
        )
        _kernels.raise_for_status(status, i, j)
        rot = np.empty_like(state.rotations)
        _kernels._chart_to_rotations(thetas, axes, rot)
    elif integrator == "lie_rk4_projected":
        rot, _, status, i, j = _kernels._run_lie(
            np.ascontiguousarray(state.rotations), masses, kind, params, dt, 1
        )
        _kernels.raise_for_status(status, i, j)
    else:
        raise DomainError(f"unknown integrator {integrator!r}")
    return ParticleState(rot, masses, state.time + dt)


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


def energy(state: ParticleState, pot: Potential) -> float:
    """Interaction energy E = (1/2) sum_ij m_i m_j K(R_i, R_j).

    The double sum includes the i = j self-terms m_i^2 g(0) / 2, which are
    constant in time and irrelevant to the dynamics.
    """
    theta = so3.pairwise_distances(state.rotations)
    k = np.asarray(pot.g(theta**2))
    return float(state.masses @ k @ state.masses) / 2.0


def dissipation(state: ParticleState, pot: Potential) -> float:
    """Instantaneous energy dissipation rate sum_i m_i |v_i|^2 = -dE/dt."""
    gens = velocity_generators(state.rotations, state.masses, pot)
    sq = np.einsum("iab,iab->i", gens, gens) / 2.0  # Riemannian norm squared
    return float(state.masses @ sq)


def diameter(state: ParticleState) -> float:
    """Largest pairwise geodesic distance; 0 for a single particle."""
    if len(state) == 1:
        return 0.0
    return float(np.max(so3.pairwise_distances(state.rotations)))


def min_trace(state: ParticleState) -> float:
    """Minimum of tr(R_i^T R_j) over pairs i != j; equals 1 + 2 cos(diameter)."""
    if len(state) < 2:
        raise InvalidForSingleParticle("min_trace needs at least two particles")
    G, _ = so3.pairwise_relative(state.rotations)
    tr = np.einsum("ijaa->ij", G) + np.eye(len(state)) * 4.0  # push diagonal above max
    return float(np.min(tr))


def max_dist_to_center(state: ParticleState, center: np.ndarray) -> float:
    """Largest geodesic distance from any particle to a fixed rotation."""
    tr = np.einsum("ab,iab->i", np.asarray(center, float), state.rotations)
    return float(np.max(np.arccos(np.clip((tr - 1.0) / 2.0, -1.0, 1.0))))


def karcher_mean(
    points: np.ndarray,
    masses: np.ndarray | None = None,
    tol: float = 1e-10,
    max_iter: int = 100,
) -> np.ndarray:
    """Weighted Riemannian centre of mass by intrinsic fixed-point iteration.

    Iterates P <- exp_P(sum_i m_i log_P(R_i)) from P = points[0] until the
    weighted log-sum has Riemannian norm below tol. All points should lie in
    a common disk of radius < pi/4, where the mean is unique.
    """
    points = np.asarray(points, dtype=float)
    n = points.shape[0]
    if masses is None:
        masses = uniform_masses(n)
    masses = np.asarray(masses, dtype=float)
    P = points[0]
    for _ in range(max_iter):
        G = np.einsum("ab,iac->ibc", P, points)  # P^T R_i
        tr = np.einsum("ibb->i", G)
        theta = np.arccos(np.clip((tr - 1.0) / 2.0, -1.0, 1.0))
        gens = 0.5 * so3.sinc_ratio(theta)[:, None, None] * (G - G.transpose(0, 2, 1))
        mean_gen = np.einsum("i,iab->ab", masses, gens)
        residual = np.linalg.norm(mean_gen) / np.sqrt(2.0)
        if residual < tol:
            return P
        P = P @ so3.exp_generator(mean_gen)
    raise NoConvergence(
        f"Karcher mean did not reach tol {tol} in {max_iter} iterations",
        residual=residual,
    )


def theoretical_trace_bound(T0: float, c: float, N: int, t) -> float | np.ndarray:
    """Exponential consensus lower bound for the minimum pair trace.

    For initial minimum trace T0 in (2, 3] and g' >= c > 0 on the relevant
    range, the minimum of tr(R_i^T R_j) obeys

        T(t) >= 3 + (T0 - 3) e^(-4ct/N) / ((T0 - 2) - (T0 - 3) e^(-4ct/N)).
    """
    if not 2.0 < T0 <= 3.0:
        raise DomainError(f"initial trace {T0} outside (2, 3]")
    e = np.exp(-4.0 * c * np.asarray(t, dtype=float) / N)
    out = 3.0 + (T0 - 3.0) * e / ((T0 - 2.0) - (T0 - 3.0) * e)
    if out.ndim == 0:
        return float(out)
    return out


def diagnostics(state: ParticleState, pot: Potential, center: np.ndarray) -> DiagnosticsRecord:
    """Bundle all scalar diagnostics of a state into one record."""
    return DiagnosticsRecord(
        time=state.time,
        energy=energy(state, pot),
        dissipation=dissipation(state, pot),
        diameter=diameter(state),
        min_trace=min_trace(state) if len(state) > 1 else float("nan"),
        max_dist_to_center=max_dist_to_center(state, center),
    )


# ---------------------------------------------------------------------------
# Simulation driver
# ---------------------------------------------------------------------------


def initial_state(config: SimConfig) -> ParticleState:
    """Sample the configured number of particles inside the initial disk."""
    rng = np.random.default_rng(config.seed)
    rotations = np.stack(
        [
            so3.random_rotation_in_disk(config.init_disk, rng, config.axis_mode)
            for _ in range(config.n_particles)
        ]
    )
    return ParticleState(rotations, uniform_masses(config.n_particles), 0.0)


def run(config: SimConfig, state: ParticleState | None = None) -> RunResult:
    """Integrate the particle system, recording diagnostics along the way.

    Diagnostics are recorded at step 0 and every record_every steps. The run
    halts early with status "consensus" once the recorded diameter drops
    below consensus_tol, or "equilibrium" once the recorded dissipation
    drops below 1e-14. Step failures propagate as SimulationError carrying
    the index of the failing step.
    """
    if state is None:
        state = initial_state(config)
    pot = config.potential
    kind, params = _kernels.encode_potential(pot)
    center = config.init_disk.center
    masses = state.masses
    t0 = state.time
    chart = config.integrator == "rk4_axis_angle"
    rotations = np.ascontiguousarray(state.rotations)
    if chart:
        thetas, axes = _chart_coordinates(rotations)

    trajectory = [(state.time, state)]
    records = [diagnostics(state, pot, center)]
    status = "completed"
    done = 0
    while done < config.steps:
        block = min(config.record_every, config.steps - done)
        if chart:
            thetas, axes, made, st, i, j = _kernels._run_chart(
                thetas, axes, masses, kind, params, config.dt, block
            )
        else:
            rotations, made, st, i, j = _kernels._run_lie(
                rotations, masses, kind, params, config.dt, block
            )
        done += made
        if st != _kernels.STATUS_OK:
            failing = done + 1
            try:
                _kernels.raise_for_status(st, i, j)
            except (CutLocusError, ChartSingularity) as exc:
                raise SimulationError(
                    f"step {failing} failed: {exc}", step_index=failing
                ) from exc
        if chart:
            rotations = np.empty_like(rotations)
            _kernels._chart_to_rotations(thetas, axes, rotations)
        state = ParticleState(rotations, masses, t0 + done * config.dt)
        rec = diagnostics(state, pot, center)
        trajectory.append((state.time, state))
        records.append(rec)
        if rec.diameter < config.consensus_tol:
            status = "consensus"
            break
        if rec.dissipation < EQUILIBRIUM_DISSIPATION:
            status = "equilibrium"
            break
    return RunResult(trajectory, records, status, done)
