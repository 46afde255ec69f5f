"""Exact-formula Riemannian geometry of the rotation group SO(3).

Rotations are plain 3x3 numpy arrays (orthogonal, det = +1). Tangent vectors
at a rotation R are stored through their body-frame skew generator A, so the
ambient matrix is V = R @ A. The Riemannian metric is half the Frobenius
inner product, hence |V| = ||A||_F / sqrt(2) and the geodesic distance is the
rotation angle of R^T Q.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CutLocusError, DegenerateInput, DomainError

# Angle below which Taylor branches replace sin-based formulas.
SMALL_ANGLE = 1e-7
# Queries closer to the cut locus than this margin are rejected.
CUT_LOCUS_MARGIN = 1e-4

_IDENTITY = np.eye(3)


def hat(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of a 3-vector (hat operator)."""
    v = np.asarray(v, dtype=float).reshape(3)
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


def vee(A: np.ndarray) -> np.ndarray:
    """Inverse of hat: extract the 3-vector of a skew-symmetric matrix."""
    A = np.asarray(A, dtype=float)
    return np.array([A[2, 1], A[0, 2], A[1, 0]])


@dataclass(frozen=True)
class AxisAngle:
    """Angle theta in [0, pi] and unit axis; chart coordinates of a rotation.

    At theta = 0 the axis is canonically (1, 0, 0) so that serialization is
    deterministic.
    """

    theta: float
    axis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "axis", np.asarray(self.axis, dtype=float).reshape(3))
        if not 0.0 <= self.theta <= np.pi:
            raise DomainError(f"angle {self.theta} outside [0, pi]")
        if self.theta > 0.0 and abs(np.linalg.norm(self.axis) - 1.0) > 1e-12:
            raise DomainError("axis must be a unit vector")


@dataclass(frozen=True)
class TangentVector:
    """Tangent vector at ``base``, stored as the body generator A (V = base @ A)."""

    base: np.ndarray
    gen: np.ndarray

    def __post_init__(self):
        gen = np.asarray(self.gen, dtype=float)
        if np.linalg.norm(gen + gen.T) > 1e-12:
            raise DomainError("generator must be skew-symmetric")

    @property
    def ambient(self) -> np.ndarray:
        """The tangent vector as a matrix in the ambient space R^{3x3}."""
        return self.base @ self.gen

    @property
    def norm(self) -> float:
        """Riemannian norm, ||A||_F / sqrt(2)."""
        return float(np.linalg.norm(self.gen)) / np.sqrt(2.0)


@dataclass(frozen=True)
class DiskDomain:
    """Open geodesic disk of ``radius`` < pi/2 centred at ``center``.

    Disks of radius below the convexity radius pi/2 are geodesically convex,
    which is the regime all dynamics in this package operate in.
    """

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        if not 0.0 < self.radius < np.pi / 2:
            raise DomainError(f"disk radius {self.radius} outside (0, pi/2)")


def is_rotation(R: np.ndarray, tol: float = 1e-9) -> bool:
    """True if R is orthogonal with determinant 1 within ``tol``."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        return False
    return (
        np.linalg.norm(R.T @ R - _IDENTITY) <= tol
        and abs(np.linalg.det(R) - 1.0) <= tol
    )


def sinc_ratio(theta):
    """f(theta) = theta / sin(theta), with f(0) = 1 via a Taylor branch.

    Accepts scalars or arrays; diverges as theta -> pi.
    """
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < CUT_LOCUS_MARGIN
    safe = np.where(small, 1.0, theta)
    out = np.where(small, 1.0 + theta**2 / 6.0 + 7.0 * theta**4 / 360.0,
                   safe / np.sin(safe))
    if out.ndim == 0:
        return float(out)
    return out


def exp_axis_angle(aa: AxisAngle) -> np.ndarray:
    """Rodrigues rotation: R = I + sin(theta) vhat + (1 - cos(theta)) vhat^2."""
    vh = hat(aa.axis)
    return _IDENTITY + np.sin(aa.theta) * vh + (1.0 - np.cos(aa.theta)) * (vh @ vh)


def exp_generator(A: np.ndarray) -> np.ndarray:
    """Matrix exponential of a skew generator A = theta * hat(v), via Rodrigues.

    Stable at theta = 0 through Taylor branches of sin(t)/t and (1-cos t)/t^2.
    """
    A = np.asarray(A, dtype=float)
    theta = np.linalg.norm(A) / np.sqrt(2.0)
    if theta < SMALL_ANGLE:
        a = 1.0 - theta**2 / 6.0
        b = 0.5 - theta**2 / 24.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / theta**2
    return _IDENTITY + a * A + b * (A @ A)


def log_rotation(R: np.ndarray) -> AxisAngle:
    """Angle-axis coordinates of R: the inverse of exp_axis_angle.

    Raises DomainError within CUT_LOCUS_MARGIN of the cut locus (theta = pi),
    where the axis is no longer determined by the skew part of R.
    """
    R = np.asarray(R, dtype=float)
    cos_theta = np.clip((np.trace(R) - 1.0) / 2.0, -1.0, 1.0)
    if cos_theta <= -1.0 + 1e-9:
        raise DomainError("rotation angle within 1e-4 of pi (cut locus)")
    theta = float(np.arccos(cos_theta))
    skew = 0.5 * (R - R.T)
    if theta < SMALL_ANGLE:
        # First-order: skew part of R is sin(theta) * vhat ~ theta * vhat,
        # which recovers tiny angles far more accurately than the trace.
        w = vee(skew)
        n = float(np.linalg.norm(w))
        if n == 0.0:
            return AxisAngle(0.0, np.array([1.0, 0.0, 0.0]))
        return AxisAngle(n, w / n)
    axis = vee(skew) / np.sin(theta)
    axis = axis / np.linalg.norm(axis)
    return AxisAngle(theta, axis)


def geodesic_distance(R: np.ndarray, Q: np.ndarray) -> float:
    """Geodesic distance d(R, Q) = acos((tr(R^T Q) - 1) / 2), in [0, pi].

    For small angles the equivalent form 2 asin(||R - Q||_F / (2 sqrt(2)))
    is used: acos of a trace near 1 would lose half the significant digits,
    while the difference form is exact at coincidence.
    """
    R = np.asarray(R, dtype=float)
    Q = np.asarray(Q, dtype=float)
    tr = float(np.einsum("ab,ab->", R, Q))
    cos_t = np.clip((tr - 1.0) / 2.0, -1.0, 1.0)
    if cos_t > 0.5:
        half = np.linalg.norm(R - Q) / (2.0 * np.sqrt(2.0))
        return float(2.0 * np.arcsin(min(half, 1.0)))
    return float(np.arccos(cos_t))


def log_map(R: np.ndarray, Q: np.ndarray) -> TangentVector:
    """Riemannian logarithm of Q at R, valid below the injectivity radius.

    The generator is (1/2) f(theta) (R^T Q - Q^T R) with f(theta) =
    theta / sin(theta), equivalently log(R^T Q); its Riemannian norm equals
    d(R, Q).
    """
    R = np.asarray(R, dtype=float)
    Q = np.asarray(Q, dtype=float)
    theta = geodesic_distance(R, Q)
    if theta >= np.pi - CUT_LOCUS_MARGIN:
        raise CutLocusError(
            f"d(R, Q) = {theta} too close to the injectivity radius pi",
            distance=theta,
        )
    G = R.T @ Q
    return TangentVector(R, 0.5 * sinc_ratio(theta) * (G - G.T))


def exp_map(V: TangentVector) -> np.ndarray:
    """Riemannian exponential: exp_R(R A) = R exp(A)."""
    return np.asarray(V.base, dtype=float) @ exp_generator(V.gen)


def geodesic_point(R: np.ndarray, Q: np.ndarray, t: float) -> np.ndarray:
    """Point at parameter t in [0, 1] on the minimizing geodesic from R to Q."""
    V = log_map(R, Q)
    return V.base @ exp_generator(t * V.gen)


def project_to_so3(M: np.ndarray) -> np.ndarray:
    """Nearest rotation to M in Frobenius norm (orthogonal polar factor).

    Raises DegenerateInput when the smallest singular value of M is below
    1e-6, i.e. when M carries no usable orientation information.
    """
    M = np.asarray(M, dtype=float)
    U, s, Vt = np.linalg.svd(M)
    if s[-1] < 1e-6:
        raise DegenerateInput(f"smallest singular value {s[-1]:.3e} below 1e-6")
    D = np.diag([1.0, 1.0, np.sign(np.linalg.det(U @ Vt))])
    return U @ D @ Vt


def random_rotation_in_disk(
    domain: DiskDomain,
    rng: np.random.Generator | int,
    axis_mode: str = "polar_azimuthal",
) -> np.ndarray:
    """Draw a rotation at distance Uniform(0, radius) from the disk centre.

    ``axis_mode`` selects the axis distribution:
      * "polar_azimuthal": polar angle Uniform(0, pi) and azimuthal angle
        Uniform(0, 2 pi) in spherical coordinates (*not* uniform on the
        sphere; density accumulates near the poles).
      * "uniform_sphere": axis uniform on the unit sphere.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    theta = rng.uniform(0.0, domain.radius)
    if axis_mode == "polar_azimuthal":
        polar = rng.uniform(0.0, np.pi)
        azimuth = rng.uniform(0.0, 2.0 * np.pi)
        axis = np.array(
            [
                np.sin(polar) * np.cos(azimuth),
                np.sin(polar) * np.sin(azimuth),
                np.cos(polar),
            ]
        )
    elif axis_mode == "uniform_sphere":
        axis = rng.normal(size=3)
        axis = axis / np.linalg.norm(axis)
    else:
        raise ValueError(f"unknown axis_mode {axis_mode!r}")
    return domain.center @ exp_axis_angle(AxisAngle(theta, axis))


# ---------------------------------------------------------------------------
# Batch helpers used by the particle dynamics; semantics match the scalar ops.
# ---------------------------------------------------------------------------


def pairwise_relative(rotations: np.ndarray):
    """Gram-like tensors for a stack of N rotations.

    Returns (G, theta) with G[i, j] = R_i^T R_j of shape (N, N, 3, 3) and
    theta[i, j] = d(R_i, R_j) of shape (N, N). Small angles use the
    difference form of the distance (see geodesic_distance).
    """
    R = np.asarray(rotations, dtype=float)
    G = np.einsum("iab,jac->ijbc", R, R)
    tr = np.einsum("ijaa->ij", G)
    cos_t = np.clip((tr - 1.0) / 2.0, -1.0, 1.0)
    diff = R[:, None] - R[None, :]
    half = np.minimum(np.linalg.norm(diff, axis=(2, 3)) / (2.0 * np.sqrt(2.0)), 1.0)
    theta = np.where(cos_t > 0.5, 2.0 * np.arcsin(half), np.arccos(cos_t))
    return G, theta


def pairwise_distances(rotations: np.ndarray) -> np.ndarray:
    """All pairwise geodesic distances of a stack of rotations, shape (N, N)."""
    return pairwise_relative(rotations)[1]


def batch_exp_generator(A: np.ndarray) -> np.ndarray:
    """exp_generator applied along the first axis of a stack (N, 3, 3)."""
    A = np.asarray(A, dtype=float)
    theta = np.linalg.norm(A, axis=(1, 2)) / np.sqrt(2.0)
    small = theta < SMALL_ANGLE
    safe = np.where(small, 1.0, theta)
    a = np.where(small, 1.0 - theta**2 / 6.0, np.sin(safe) / safe)
    b = np.where(small, 0.5 - theta**2 / 24.0, (1.0 - np.cos(safe)) / safe**2)
    return _IDENTITY + a[:, None, None] * A + b[:, None, None] * (A @ A)


def batch_project_to_so3(M: np.ndarray) -> np.ndarray:
    """project_to_so3 applied along the first axis of a stack (N, 3, 3)."""
    U, s, Vt = np.linalg.svd(np.asarray(M, dtype=float))
    if np.any(s[:, -1] < 1e-6):
        raise DegenerateInput("a matrix in the stack is nearly singular")
    det = np.linalg.det(U @ Vt)
    U = U.copy()
    U[:, :, 2] *= np.sign(det)[:, None]
    return U @ Vt
