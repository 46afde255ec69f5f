import numpy as np
import pytest
from scipy.spatial.transform import Rotation

import so3swarm as sw
from so3swarm.dynamics import ParticleState, step, uniform_masses


def random_rotations(n: int, rng: np.random.Generator, max_angle: float | None = None):
    """Stack of n rotations, uniform on SO(3) or angle-capped, via scipy."""
    if max_angle is None:
        return Rotation.random(n, random_state=rng).as_matrix()
    vecs = rng.normal(size=(n, 3))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    angles = rng.uniform(0.0, max_angle, size=n)
    return Rotation.from_rotvec(angles[:, None] * vecs).as_matrix()


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger the one-time numba compilation outside of any timed test."""
    pot = sw.AttractivePower(2)
    R = random_rotations(3, np.random.default_rng(0), max_angle=0.5)
    st = ParticleState(R, uniform_masses(3), 0.0)
    for integ in ("lie_rk4_projected", "rk4_axis_angle"):
        step(st, pot, 1e-3, integ)
    sw.dissipation(st, sw.Morse())
    sw.dissipation(st, sw.RepulsiveAttractivePower(2, 10))
    sw.dissipation(st, sw.LoheSphere())
