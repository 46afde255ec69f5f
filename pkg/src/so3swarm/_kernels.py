"""Numba-compiled inner loops of the particle dynamics.

These duplicate the interaction formulas of :mod:`so3swarm.potentials` for
speed; a unit test pins the two implementations against each other. All
pair reductions run in ascending-j order so results are bitwise
reproducible regardless of environment.

Status codes returned by the kernels: 0 ok, 1 cut locus (offending pair
reported), 2 chart singularity.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .errors import ChartSingularity, CutLocusError
from .potentials import (
    AttractivePower,
    LoheSphere,
    Morse,
    Potential,
    RepulsiveAttractivePower,
)

KIND_ATTRACTIVE = 0
KIND_REP_ATT = 1
KIND_MORSE = 2
KIND_LOHE = 3

STATUS_OK = 0
STATUS_CUT_LOCUS = 1
STATUS_CHART = 2

_CUT_LOCUS = np.pi - 1e-4
_CHART_MIN = 1e-6
_CHART_MAX = np.pi - 1e-4


def encode_potential(pot: Potential):
    """Map a potential onto (kind id, parameter vector) for the kernels."""
    if isinstance(pot, AttractivePower):
        return KIND_ATTRACTIVE, np.array([pot.q, 0.0, 0.0])
    if isinstance(pot, RepulsiveAttractivePower):
        return KIND_REP_ATT, np.array([pot.p, pot.q, 0.0])
    if isinstance(pot, Morse):
        return KIND_MORSE, np.array([pot.C, pot.l, pot.s_exp])
    if isinstance(pot, LoheSphere):
        return KIND_LOHE, np.array([0.0, 0.0, 0.0])
    raise TypeError(f"unsupported potential type {type(pot).__name__}")


def raise_for_status(status: int, i: int, j: int, context: str = ""):
    """Convert a kernel status code into the matching exception."""
    if status == STATUS_CUT_LOCUS:
        raise CutLocusError(
            f"particles {i} and {j} within 1e-4 of the cut locus{context}",
            pair=(i, j),
        )
    if status == STATUS_CHART:
        raise ChartSingularity(
            f"angle of particle {i} left (1e-6, pi - 1e-4){context}; "
            "use the lie_rk4_projected integrator instead"
        )


@njit(cache=True)
def _g_prime(kind, params, s):
    if kind == KIND_ATTRACTIVE:
        q = params[0]
        if q == 2.0:
            return 0.5
        return 0.5 * s ** (0.5 * q - 1.0)
    if kind == KIND_REP_ATT:
        p, q = params[0], params[1]
        rep = 0.5 if p == 2.0 else 0.5 * s ** (0.5 * p - 1.0)
        att = 0.5 if q == 2.0 else 0.5 * s ** (0.5 * q - 1.0)
        return att - rep
    if kind == KIND_MORSE:
        C, l, sig = params[0], params[1], params[2]
        if sig == 2.0:
            return 0.5 * (math.exp(-0.5 * s) - C / (l * l) * math.exp(-0.5 * s / (l * l)))
        lead = s ** (0.5 * (sig - 2.0))
        att = 0.5 * lead * math.exp(-(s ** (0.5 * sig)) / sig)
        rep = 0.5 * C * l ** (-sig) * lead * math.exp(-(s ** (0.5 * sig)) / (sig * l**sig))
        return att - rep
    # Lohe sphere
    if s < 1e-12:
        return 0.5 - s / 12.0
    r = math.sqrt(s)
    return math.sin(r) / (2.0 * r)


@njit(cache=True)
def _f_ratio(theta):
    if theta < 1e-4:
        t2 = theta * theta
        return 1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0
    return theta / math.sin(theta)


@njit(cache=True)
def _velocity_gens(R, masses, kind, params, gens):
    """A_i = sum_j m_j h(theta_ij) (R_i^T R_j - R_j^T R_i), ascending j."""
    n = R.shape[0]
    for i in range(n):
        a01 = 0.0
        a02 = 0.0
        a12 = 0.0
        for j in range(n):
            if j == i:
                continue
            g00 = R[i, 0, 0] * R[j, 0, 0] + R[i, 1, 0] * R[j, 1, 0] + R[i, 2, 0] * R[j, 2, 0]
            g11 = R[i, 0, 1] * R[j, 0, 1] + R[i, 1, 1] * R[j, 1, 1] + R[i, 2, 1] * R[j, 2, 1]
            g22 = R[i, 0, 2] * R[j, 0, 2] + R[i, 1, 2] * R[j, 1, 2] + R[i, 2, 2] * R[j, 2, 2]
            ct = 0.5 * (g00 + g11 + g22 - 1.0)
            if ct > 1.0:
                ct = 1.0
            elif ct < -1.0:
                ct = -1.0
            theta = math.acos(ct)
            if theta >= _CUT_LOCUS:
                gens[i, 0, 0] = 0.0
                return STATUS_CUT_LOCUS, i, j
            w = masses[j] * _f_ratio(theta) * _g_prime(kind, params, theta * theta)
            g01 = R[i, 0, 0] * R[j, 0, 1] + R[i, 1, 0] * R[j, 1, 1] + R[i, 2, 0] * R[j, 2, 1]
            g10 = R[i, 0, 1] * R[j, 0, 0] + R[i, 1, 1] * R[j, 1, 0] + R[i, 2, 1] * R[j, 2, 0]
            g02 = R[i, 0, 0] * R[j, 0, 2] + R[i, 1, 0] * R[j, 1, 2] + R[i, 2, 0] * R[j, 2, 2]
            g20 = R[i, 0, 2] * R[j, 0, 0] + R[i, 1, 2] * R[j, 1, 0] + R[i, 2, 2] * R[j, 2, 0]
            g12 = R[i, 0, 1] * R[j, 0, 2] + R[i, 1, 1] * R[j, 1, 2] + R[i, 2, 1] * R[j, 2, 2]
            g21 = R[i, 0, 2] * R[j, 0, 1] + R[i, 1, 2] * R[j, 1, 1] + R[i, 2, 2] * R[j, 2, 1]
            a01 += w * (g01 - g10)
            a02 += w * (g02 - g20)
            a12 += w * (g12 - g21)
        gens[i, 0, 0] = 0.0
        gens[i, 1, 1] = 0.0
        gens[i, 2, 2] = 0.0
        gens[i, 0, 1] = a01
        gens[i, 0, 2] = a02
        gens[i, 1, 2] = a12
        gens[i, 1, 0] = -a01
        gens[i, 2, 0] = -a02
        gens[i, 2, 1] = -a12
    return STATUS_OK, -1, -1


@njit(cache=True)
def _ambient_velocities(R, masses, kind, params, gens, out):
    status, i, j = _velocity_gens(R, masses, kind, params, gens)
    if status != STATUS_OK:
        return status, i, j
    for k in range(R.shape[0]):
        for a in range(3):
            for b in range(3):
                out[k, a, b] = (
                    R[k, a, 0] * gens[k, 0, b]
                    + R[k, a, 1] * gens[k, 1, b]
                    + R[k, a, 2] * gens[k, 2, b]
                )
    return STATUS_OK, -1, -1


@njit(cache=True)
def _project_inplace(Y):
    """Replace the near-rotation 3x3 block Y with its orthogonal polar factor.

    Newton-Schulz iteration Y <- Y (3I - Y^T Y) / 2; quadratic convergence
    for singular values in (0, sqrt(3)), which RK4 stage points with
    reasonable dt always satisfy.
    """
    y00, y01, y02 = Y[0, 0], Y[0, 1], Y[0, 2]
    y10, y11, y12 = Y[1, 0], Y[1, 1], Y[1, 2]
    y20, y21, y22 = Y[2, 0], Y[2, 1], Y[2, 2]
    for _ in range(40):
        t00 = y00 * y00 + y10 * y10 + y20 * y20
        t01 = y00 * y01 + y10 * y11 + y20 * y21
        t02 = y00 * y02 + y10 * y12 + y20 * y22
        t11 = y01 * y01 + y11 * y11 + y21 * y21
        t12 = y01 * y02 + y11 * y12 + y21 * y22
        t22 = y02 * y02 + y12 * y12 + y22 * y22
        e00, e11, e22 = t00 - 1.0, t11 - 1.0, t22 - 1.0
        err = e00 * e00 + e11 * e11 + e22 * e22 + 2.0 * (t01 * t01 + t02 * t02 + t12 * t12)
        if err < 1e-28:
            break
        w00, w11, w22 = 3.0 - t00, 3.0 - t11, 3.0 - t22
        w01, w02, w12 = -t01, -t02, -t12
        n00 = 0.5 * (y00 * w00 + y01 * w01 + y02 * w02)
        n01 = 0.5 * (y00 * w01 + y01 * w11 + y02 * w12)
        n02 = 0.5 * (y00 * w02 + y01 * w12 + y02 * w22)
        n10 = 0.5 * (y10 * w00 + y11 * w01 + y12 * w02)
        n11 = 0.5 * (y10 * w01 + y11 * w11 + y12 * w12)
        n12 = 0.5 * (y10 * w02 + y11 * w12 + y12 * w22)
        n20 = 0.5 * (y20 * w00 + y21 * w01 + y22 * w02)
        n21 = 0.5 * (y20 * w01 + y21 * w11 + y22 * w12)
        n22 = 0.5 * (y20 * w02 + y21 * w12 + y22 * w22)
        y00, y01, y02 = n00, n01, n02
        y10, y11, y12 = n10, n11, n12
        y20, y21, y22 = n20, n21, n22
    Y[0, 0], Y[0, 1], Y[0, 2] = y00, y01, y02
    Y[1, 0], Y[1, 1], Y[1, 2] = y10, y11, y12
    Y[2, 0], Y[2, 1], Y[2, 2] = y20, y21, y22


@njit(cache=True)
def _run_lie(R0, masses, kind, params, dt, nsteps):
    """Advance nsteps of ambient RK4 with polar re-projection.

    Returns (rotations, steps_done, status, i, j); on a non-zero status the
    rotations are the last valid state and steps_done counts the completed
    steps before the failure.
    """
    n = R0.shape[0]
    cur = R0.copy()
    gens = np.empty((n, 3, 3))
    k1 = np.empty((n, 3, 3))
    k2 = np.empty((n, 3, 3))
    k3 = np.empty((n, 3, 3))
    k4 = np.empty((n, 3, 3))
    tmp = np.empty((n, 3, 3))
    for s in range(nsteps):
        status, i, j = _ambient_velocities(cur, masses, kind, params, gens, k1)
        if status != STATUS_OK:
            return cur, s, status, i, j
        for p in range(n):
            for a in range(3):
                for b in range(3):
                    tmp[p, a, b] = cur[p, a, b] + 0.5 * dt * k1[p, a, b]
            _project_inplace(tmp[p])
        status, i, j = _ambient_velocities(tmp, masses, kind, params, gens, k2)
        if status != STATUS_OK:
            return cur, s, status, i, j
        for p in range(n):
            for a in range(3):
                for b in range(3):
                    tmp[p, a, b] = cur[p, a, b] + 0.5 * dt * k2[p, a, b]
            _project_inplace(tmp[p])
        status, i, j = _ambient_velocities(tmp, masses, kind, params, gens, k3)
        if status != STATUS_OK:
            return cur, s, status, i, j
        for p in range(n):
            for a in range(3):
                for b in range(3):
                    tmp[p, a, b] = cur[p, a, b] + dt * k3[p, a, b]
            _project_inplace(tmp[p])
        status, i, j = _ambient_velocities(tmp, masses, kind, params, gens, k4)
        if status != STATUS_OK:
            return cur, s, status, i, j
        for p in range(n):
            for a in range(3):
                for b in range(3):
                    cur[p, a, b] = cur[p, a, b] + (dt / 6.0) * (
                        k1[p, a, b] + 2.0 * k2[p, a, b] + 2.0 * k3[p, a, b] + k4[p, a, b]
                    )
            _project_inplace(cur[p])
    return cur, nsteps, STATUS_OK, -1, -1


@njit(cache=True)
def _chart_to_rotations(thetas, axes, R):
    n = thetas.shape[0]
    for k in range(n):
        ax, ay, az = axes[k, 0], axes[k, 1], axes[k, 2]
        nrm = math.sqrt(ax * ax + ay * ay + az * az)
        ax, ay, az = ax / nrm, ay / nrm, az / nrm
        st = math.sin(thetas[k])
        ct = 1.0 - math.cos(thetas[k])
        R[k, 0, 0] = 1.0 + ct * (-(ay * ay) - az * az)
        R[k, 0, 1] = -st * az + ct * ax * ay
        R[k, 0, 2] = st * ay + ct * ax * az
        R[k, 1, 0] = st * az + ct * ax * ay
        R[k, 1, 1] = 1.0 + ct * (-(ax * ax) - az * az)
        R[k, 1, 2] = -st * ax + ct * ay * az
        R[k, 2, 0] = -st * ay + ct * ax * az
        R[k, 2, 1] = st * ax + ct * ay * az
        R[k, 2, 2] = 1.0 + ct * (-(ax * ax) - ay * ay)


@njit(cache=True)
def _rotations_to_chart(R, thetas, axes):
    """Angle-axis coordinates of a rotation stack; canonical axis at theta 0."""
    n = R.shape[0]
    for k in range(n):
        ct = 0.5 * (R[k, 0, 0] + R[k, 1, 1] + R[k, 2, 2] - 1.0)
        if ct > 1.0:
            ct = 1.0
        elif ct < -1.0:
            ct = -1.0
        theta = math.acos(ct)
        thetas[k] = theta
        wx = 0.5 * (R[k, 2, 1] - R[k, 1, 2])
        wy = 0.5 * (R[k, 0, 2] - R[k, 2, 0])
        wz = 0.5 * (R[k, 1, 0] - R[k, 0, 1])
        nrm = math.sqrt(wx * wx + wy * wy + wz * wz)
        if nrm == 0.0:
            axes[k, 0], axes[k, 1], axes[k, 2] = 1.0, 0.0, 0.0
        else:
            axes[k, 0], axes[k, 1], axes[k, 2] = wx / nrm, wy / nrm, wz / nrm


@njit(cache=True)
def _chart_derivative(thetas, axes, masses, kind, params, R, gens, th_dot, ax_dot):
    n = thetas.shape[0]
    for k in range(n):
        if thetas[k] <= _CHART_MIN or thetas[k] >= _CHART_MAX:
            return STATUS_CHART, k, k
    _chart_to_rotations(thetas, axes, R)
    status, i, j = _velocity_gens(R, masses, kind, params, gens)
    if status != STATUS_OK:
        return status, i, j
    for k in range(n):
        ax, ay, az = axes[k, 0], axes[k, 1], axes[k, 2]
        nrm = math.sqrt(ax * ax + ay * ay + az * az)
        ux, uy, uz = ax / nrm, ay / nrm, az / nrm
        th = thetas[k]
        # body angular velocity from the generator
        wx = gens[k, 2, 1]
        wy = gens[k, 0, 2]
        wz = gens[k, 1, 0]
        # phidot = Jr(phi)^{-1} omega with phi = theta * u:
        #   Jr^{-1} = I + 0.5 hat(phi) + c hat(phi)^2,
        #   c = (1 - (th/2) cot(th/2)) / th^2.
        if th < 1e-3:
            c = 1.0 / 12.0 + th * th / 720.0
        else:
            c = (1.0 - 0.5 * th / math.tan(0.5 * th)) / (th * th)
        px, py, pz = th * ux, th * uy, th * uz
        hw_x = py * wz - pz * wy
        hw_y = pz * wx - px * wz
        hw_z = px * wy - py * wx
        hhw_x = py * hw_z - pz * hw_y
        hhw_y = pz * hw_x - px * hw_z
        hhw_z = px * hw_y - py * hw_x
        pdx = wx + 0.5 * hw_x + c * hhw_x
        pdy = wy + 0.5 * hw_y + c * hhw_y
        pdz = wz + 0.5 * hw_z + c * hhw_z
        td = ux * pdx + uy * pdy + uz * pdz
        th_dot[k] = td
        ax_dot[k, 0] = (pdx - td * ux) / th
        ax_dot[k, 1] = (pdy - td * uy) / th
        ax_dot[k, 2] = (pdz - td * uz) / th
    return STATUS_OK, -1, -1


@njit(cache=True)
def _run_chart(thetas0, axes0, masses, kind, params, dt, nsteps):
    """Advance nsteps of RK4 in the (theta, axis) chart coordinates.

    Axes are renormalized after every full step. Returns
    (thetas, axes, steps_done, status, i, j) like _run_lie.
    """
    n = thetas0.shape[0]
    th = thetas0.copy()
    ax = axes0.copy()
    R = np.empty((n, 3, 3))
    gens = np.empty((n, 3, 3))
    k1t = np.empty(n)
    k2t = np.empty(n)
    k3t = np.empty(n)
    k4t = np.empty(n)
    k1a = np.empty((n, 3))
    k2a = np.empty((n, 3))
    k3a = np.empty((n, 3))
    k4a = np.empty((n, 3))
    for s in range(nsteps):
        status, i, j = _chart_derivative(th, ax, masses, kind, params, R, gens, k1t, k1a)
        if status != STATUS_OK:
            return th, ax, s, status, i, j
        status, i, j = _chart_derivative(
            th + 0.5 * dt * k1t, ax + 0.5 * dt * k1a, masses, kind, params, R, gens, k2t, k2a
        )
        if status != STATUS_OK:
            return th, ax, s, status, i, j
        status, i, j = _chart_derivative(
            th + 0.5 * dt * k2t, ax + 0.5 * dt * k2a, masses, kind, params, R, gens, k3t, k3a
        )
        if status != STATUS_OK:
            return th, ax, s, status, i, j
        status, i, j = _chart_derivative(
            th + dt * k3t, ax + dt * k3a, masses, kind, params, R, gens, k4t, k4a
        )
        if status != STATUS_OK:
            return th, ax, s, status, i, j
        for k in range(n):
            th[k] = th[k] + (dt / 6.0) * (k1t[k] + 2.0 * k2t[k] + 2.0 * k3t[k] + k4t[k])
            nx = ax[k, 0] + (dt / 6.0) * (k1a[k, 0] + 2.0 * k2a[k, 0] + 2.0 * k3a[k, 0] + k4a[k, 0])
            ny = ax[k, 1] + (dt / 6.0) * (k1a[k, 1] + 2.0 * k2a[k, 1] + 2.0 * k3a[k, 1] + k4a[k, 1])
            nz = ax[k, 2] + (dt / 6.0) * (k1a[k, 2] + 2.0 * k2a[k, 2] + 2.0 * k3a[k, 2] + k4a[k, 2])
            nrm = math.sqrt(nx * nx + ny * ny + nz * nz)
            ax[k, 0], ax[k, 1], ax[k, 2] = nx / nrm, ny / nrm, nz / nrm
            if th[k] <= _CHART_MIN or th[k] >= _CHART_MAX:
                return th, ax, s, STATUS_CHART, k, k
    return th, ax, nsteps, STATUS_OK, -1, -1
