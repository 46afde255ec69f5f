import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import logm

import so3swarm as sw
from so3swarm import so3
from so3swarm.errors import DegenerateInput, DomainError

from conftest import random_rotations

vec3 = st.lists(
    st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=3, max_size=3
)


def test_hat_examples():
    assert np.array_equal(
        sw.hat([0, 0, 1]), np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
    )
    assert np.array_equal(sw.hat([0, 0, 0]), np.zeros((3, 3)))


@given(vec3)
def test_hat_vee_roundtrip(v):
    A = sw.hat(v)
    assert np.linalg.norm(A + A.T) == 0.0
    assert np.allclose(sw.vee(A), v)


def test_hat_frobenius_norm():
    rng = np.random.default_rng(1)
    v = rng.normal(size=(1000, 3))
    for row in v:
        assert np.isclose(np.linalg.norm(sw.hat(row)), np.sqrt(2) * np.linalg.norm(row))


def test_exp_axis_angle_trivial():
    assert np.allclose(sw.exp_axis_angle(sw.AxisAngle(0.0, [1, 0, 0])), np.eye(3))
    quarter = sw.exp_axis_angle(sw.AxisAngle(np.pi / 2, [0, 0, 1]))
    assert np.allclose(quarter, [[0, -1, 0], [1, 0, 0], [0, 0, 1]], atol=1e-15)


def _exp_series(A: np.ndarray, terms: int = 30) -> np.ndarray:
    # truncated power series oracle; 30 terms put the remainder below 1e-13
    # for angles up to pi
    out = np.eye(3)
    term = np.eye(3)
    for k in range(1, terms + 1):
        term = term @ A / k
        out = out + term
    return out


def test_exp_axis_angle_matches_series_oracle():
    rng = np.random.default_rng(2)
    for _ in range(200):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        theta = rng.uniform(0.0, np.pi)
        R = sw.exp_axis_angle(sw.AxisAngle(theta, axis))
        assert np.linalg.norm(R - _exp_series(theta * sw.hat(axis))) <= 1e-10
        assert sw.is_rotation(R)


def test_log_rotation_trivial_cases():
    aa = sw.log_rotation(np.eye(3))
    assert aa.theta == 0.0
    assert np.array_equal(aa.axis, [1.0, 0.0, 0.0])

    back = sw.log_rotation(sw.exp_axis_angle(sw.AxisAngle(1.2, [1, 0, 0])))
    assert np.isclose(back.theta, 1.2)
    assert np.allclose(back.axis, [1, 0, 0])


def test_log_rotation_roundtrip_10k():
    rng = np.random.default_rng(3)
    R = random_rotations(10_000, rng, max_angle=np.pi - 0.1)
    worst = 0.0
    for Rk in R:
        back = sw.exp_axis_angle(sw.log_rotation(Rk))
        worst = max(worst, float(np.abs(back - Rk).max()))
    assert worst <= 1e-10


def test_log_rotation_rejects_cut_locus():
    R = sw.exp_axis_angle(sw.AxisAngle(np.pi - 1e-6, [0, 1, 0]))
    with pytest.raises(DomainError):
        sw.log_rotation(R)


def test_log_rotation_small_angle_branch():
    axis = np.array([1.0, 2.0, -1.0]) / np.sqrt(6.0)
    for theta in (1e-8, 1e-9, 1e-12):
        aa = sw.log_rotation(sw.exp_axis_angle(sw.AxisAngle(theta, axis)))
        assert abs(aa.theta - theta) <= 1e-14
        assert np.allclose(aa.axis, axis, atol=1e-6)


def test_geodesic_distance_basics():
    rng = np.random.default_rng(4)
    for R in random_rotations(20, rng):
        assert sw.geodesic_distance(R, R) == 0.0
    axis = np.array([0.0, 1.0, 0.0])
    for theta in np.linspace(0.0, np.pi, 30):
        R = sw.exp_axis_angle(sw.AxisAngle(theta, axis))
        assert np.isclose(sw.geodesic_distance(np.eye(3), R), theta, atol=1e-12)


def test_geodesic_distance_frobenius_formula():
    # pairs capped below the injectivity radius, where both formulas are
    # well conditioned (1/sin(theta) blows up the comparison otherwise)
    rng = np.random.default_rng(5)
    R = random_rotations(2000, rng)
    D = random_rotations(2000, rng, max_angle=np.pi - 0.1)
    for Rk, Dk in zip(R, D):
        Qk = Rk @ Dk
        d = sw.geodesic_distance(Rk, Qk)
        frob = np.arccos(np.clip(1.0 - np.linalg.norm(Rk - Qk) ** 2 / 4.0, -1, 1))
        assert abs(d - frob) <= 1e-12


def test_metric_identities():
    rng = np.random.default_rng(6)
    R = random_rotations(2000, rng)
    Q = random_rotations(2000, rng)
    U = random_rotations(2000, rng)
    for Rk, Qk, Uk in zip(R, Q, U):
        frob2 = np.linalg.norm(Rk - Qk) ** 2
        assert abs(frob2 - (6.0 - 2.0 * np.trace(Rk.T @ Qk))) <= 1e-10
        d = sw.geodesic_distance(Rk, Qk)
        assert np.sqrt(frob2) <= np.sqrt(2.0) * d + 1e-10
        assert abs(sw.geodesic_distance(Uk @ Rk, Uk @ Qk) - d) <= 1e-10


def test_log_map_trivial_and_chart():
    rng = np.random.default_rng(7)
    R = random_rotations(5, rng)[0]
    V = sw.log_map(R, R)
    assert np.allclose(V.gen, 0.0)

    axis = np.array([0.0, 0.0, 1.0])
    V = sw.log_map(np.eye(3), sw.exp_axis_angle(sw.AxisAngle(0.8, axis)))
    assert np.allclose(V.gen, 0.8 * sw.hat(axis), atol=1e-14)


def test_log_map_dual_formula_oracle():
    # library formula 0.5 f(theta) (Q - R Q^T R) against the dense matrix
    # logarithm R @ logm(R^T Q) computed by scipy
    rng = np.random.default_rng(8)
    R = random_rotations(300, rng)
    Q = random_rotations(300, rng)
    for Rk, Qk in zip(R, Q):
        if sw.geodesic_distance(Rk, Qk) > np.pi - 0.1:
            continue
        ours = sw.log_map(Rk, Qk).ambient
        dense = Rk @ np.real(logm(Rk.T @ Qk))
        assert np.linalg.norm(ours - dense) <= 1e-9


def test_log_map_norm_equals_distance():
    rng = np.random.default_rng(9)
    R = random_rotations(2000, rng)
    Q = random_rotations(2000, rng)
    for Rk, Qk in zip(R, Q):
        d = sw.geodesic_distance(Rk, Qk)
        if d > np.pi - 0.1:
            continue
        assert abs(sw.log_map(Rk, Qk).norm - d) <= 1e-10


def test_log_map_rejects_cut_locus():
    R = np.eye(3)
    Q = sw.exp_axis_angle(sw.AxisAngle(np.pi - 1e-5, [1, 0, 0]))
    with pytest.raises(DomainError):
        sw.log_map(R, Q)


def test_exp_map_roundtrip():
    rng = np.random.default_rng(10)
    R = random_rotations(500, rng)
    Q = random_rotations(500, rng)
    for Rk, Qk in zip(R, Q):
        if sw.geodesic_distance(Rk, Qk) > np.pi - 0.1:
            continue
        back = sw.exp_map(sw.log_map(Rk, Qk))
        assert np.linalg.norm(back - Qk) <= 1e-9
    zero = sw.exp_map(so3.TangentVector(R[0], np.zeros((3, 3))))
    assert np.allclose(zero, R[0])


def test_geodesic_point_endpoints_and_proportionality():
    rng = np.random.default_rng(11)
    R = random_rotations(1000, rng, max_angle=1.0)
    Q = random_rotations(1000, rng, max_angle=1.0)
    t = rng.uniform(0.0, 1.0, size=1000)
    for Rk, Qk, tk in zip(R, Q, t):
        d = sw.geodesic_distance(Rk, Qk)
        assert np.allclose(sw.geodesic_point(Rk, Qk, 0.0), Rk, atol=1e-12)
        assert np.linalg.norm(sw.geodesic_point(Rk, Qk, 1.0) - Qk) <= 1e-10
        M = sw.geodesic_point(Rk, Qk, tk)
        assert abs(sw.geodesic_distance(Rk, M) - tk * d) <= 1e-9


def test_geodesic_midpoint_symmetry():
    rng = np.random.default_rng(12)
    R = random_rotations(100, rng, max_angle=1.2)
    Q = random_rotations(100, rng, max_angle=1.2)
    for Rk, Qk in zip(R, Q):
        M = sw.geodesic_point(Rk, Qk, 0.5)
        assert abs(sw.geodesic_distance(Rk, M) - sw.geodesic_distance(M, Qk)) <= 1e-9


def test_project_to_so3_idempotent_and_scale():
    rng = np.random.default_rng(13)
    for R in random_rotations(50, rng):
        assert np.linalg.norm(sw.project_to_so3(R) - R) <= 1e-12
        assert np.linalg.norm(sw.project_to_so3(1.01 * R) - R) <= 1e-12


def test_project_to_so3_is_locally_optimal():
    # polar factor minimizes Frobenius distance: check against a grid of
    # nearby rotations obtained by small exponential perturbations
    rng = np.random.default_rng(14)
    for R in random_rotations(10, rng):
        M = R + 1e-3 * rng.normal(size=(3, 3))
        P = sw.project_to_so3(M)
        base = np.linalg.norm(M - P)
        deltas = np.linspace(-2e-3, 2e-3, 5)
        for dx in deltas:
            for dy in deltas:
                for dz in deltas:
                    X = P @ so3.exp_generator(sw.hat([dx, dy, dz]))
                    assert base <= np.linalg.norm(M - X) + 1e-12


def test_project_to_so3_degenerate():
    M = np.diag([1.0, 1.0, 1e-9])
    with pytest.raises(DegenerateInput):
        sw.project_to_so3(M)


def test_random_rotation_in_disk_deterministic_and_contained():
    disk = so3.DiskDomain(np.eye(3), np.pi / 4)
    a = sw.random_rotation_in_disk(disk, 123)
    b = sw.random_rotation_in_disk(disk, 123)
    assert np.array_equal(a, b)

    rng = np.random.default_rng(15)
    for mode in ("polar_azimuthal", "uniform_sphere"):
        for _ in range(10_000):
            R = sw.random_rotation_in_disk(disk, rng, axis_mode=mode)
            assert sw.geodesic_distance(disk.center, R) < disk.radius


def test_disk_domain_invariants():
    with pytest.raises(DomainError):
        so3.DiskDomain(np.eye(3), 0.0)
    with pytest.raises(DomainError):
        so3.DiskDomain(np.eye(3), np.pi / 2)


def test_matrix_norm_submultiplicative():
    rng = np.random.default_rng(16)
    A = rng.normal(size=(10_000, 3, 3))
    B = rng.normal(size=(10_000, 3, 3))
    lhs = np.linalg.norm(A @ B, axis=(1, 2))
    rhs = np.linalg.norm(A, axis=(1, 2)) * np.linalg.norm(B, axis=(1, 2))
    assert np.all(lhs <= rhs + 1e-12)


def test_trace_inequality_inside_convexity_radius():
    # tr(R V V^T) >= cos(d(I, R)) ||V||_F^2 whenever d(I, R) < pi/2
    rng = np.random.default_rng(17)
    R = random_rotations(10_000, rng, max_angle=np.pi / 2 - 1e-9)
    V = rng.normal(size=(10_000, 3, 3))
    tr = np.einsum("nab,nbc,nac->n", R, V, V)
    cosd = np.cos([sw.geodesic_distance(np.eye(3), Rk) for Rk in R])
    norms = np.linalg.norm(V, axis=(1, 2)) ** 2
    assert np.all(tr >= cosd * norms - 1e-10)


def test_orthogonality_drift_through_op_chains():
    rng = np.random.default_rng(18)
    R = random_rotations(50, rng, max_angle=1.0)
    Q = random_rotations(50, rng, max_angle=1.0)
    for Rk, Qk in zip(R, Q):
        M = sw.geodesic_point(Rk, Qk, 0.3)
        M = sw.exp_map(sw.log_map(M, Qk))
        M = sw.project_to_so3(M)
        assert sw.is_rotation(M)


def test_batch_helpers_match_scalar_ops():
    rng = np.random.default_rng(19)
    R = random_rotations(64, rng)
    D = so3.pairwise_distances(R)
    for i in range(0, 64, 7):
        for j in range(0, 64, 11):
            assert np.isclose(D[i, j], sw.geodesic_distance(R[i], R[j]), atol=1e-12)
    A = np.stack([0.4 * sw.hat(rng.normal(size=3)) for _ in range(16)])
    batch = so3.batch_exp_generator(A)
    for k in range(16):
        assert np.allclose(batch[k], so3.exp_generator(A[k]), atol=1e-14)
    M = R[:16] + 1e-2 * rng.normal(size=(16, 3, 3))
    batch = so3.batch_project_to_so3(M)
    for k in range(16):
        assert np.allclose(batch[k], sw.project_to_so3(M[k]), atol=1e-12)


def test_axis_angle_invariants():
    with pytest.raises(DomainError):
        so3.AxisAngle(1.0, [1.0, 1.0, 0.0])
    with pytest.raises(DomainError):
        so3.AxisAngle(-0.1, [1.0, 0.0, 0.0])
    aa = so3.AxisAngle(0.0, [3.0, 0.0, 0.0])  # axis arbitrary at theta = 0
    assert aa.theta == 0.0
