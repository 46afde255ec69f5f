"""Interaction laws on SO(3) depending on the squared geodesic distance.

Every potential is K(R, Q) = g(d(R, Q)^2) for a smooth profile g. The
package ships four families:

  * AttractivePower(q):            g(s) = (1/q) s^(q/2), q >= 2
  * RepulsiveAttractivePower(p,q): g(s) = -(1/p) s^(p/2) + (1/q) s^(q/2), p < q
  * Morse(C, l, s_exp):            g(s) = V(sqrt(s)) - C V(sqrt(s)/l),
                                   V(r) = -exp(-r^s_exp / s_exp)
  * LoheSphere:                    g(s) = 2 sin^2(sqrt(s)/2)

The intrinsic gradient of K in its first argument is
grad_K(R, Q) = -2 g'(d^2) log_R Q, and the scalar kernel
h(t) = (t / sin t) g'(t^2) rewrites the pair term as h(d) (Q - R Q^T R).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import so3
from .errors import DomainError

# Below this squared distance, series expansions replace sqrt-based formulas.
_SMALL_S = 1e-12


@dataclass(frozen=True)
class Potential:
    """Base class; subclasses implement the profile g and its derivatives."""

    def g(self, s):
        raise NotImplementedError

    def g_prime(self, s):
        raise NotImplementedError

    def g_second(self, s):
        """Second derivative where available; NotImplementedError otherwise."""
        raise NotImplementedError

    def params(self) -> dict:
        """Named parameters for serialization."""
        return {}

    @property
    def kind(self) -> str:
        return _KIND_NAMES[type(self)]


@dataclass(frozen=True)
class AttractivePower(Potential):
    """Purely attractive power law K = (1/q) d^q."""

    q: float = 2.0

    def __post_init__(self):
        if self.q < 2.0:
            raise DomainError(f"attractive exponent q = {self.q} must be >= 2")

    def g(self, s):
        s = np.asarray(s, dtype=float)
        return s ** (self.q / 2.0) / self.q

    def g_prime(self, s):
        s = np.asarray(s, dtype=float)
        if self.q == 2.0:
            return np.full_like(s, 0.5)
        # Exponent q/2 - 1 > 0, so the derivative vanishes continuously at 0.
        return 0.5 * s ** (self.q / 2.0 - 1.0)

    def g_second(self, s):
        s = np.asarray(s, dtype=float)
        if self.q == 2.0:
            return np.zeros_like(s)
        # Unbounded at 0 for q < 4 (g' is not Lipschitz there).
        return 0.5 * (self.q / 2.0 - 1.0) * s ** (self.q / 2.0 - 2.0)

    def params(self):
        return {"q": self.q}


@dataclass(frozen=True)
class RepulsiveAttractivePower(Potential):
    """Short-range repulsive, long-range attractive power law.

    K = -(1/p) d^p + (1/q) d^q with p < q; repulsion wins below d = 1.
    """

    p: float = 2.0
    q: float = 10.0

    def __post_init__(self):
        if not 0.0 < self.p < self.q:
            raise DomainError(f"need 0 < p < q, got p = {self.p}, q = {self.q}")

    def g(self, s):
        s = np.asarray(s, dtype=float)
        return -(s ** (self.p / 2.0)) / self.p + s ** (self.q / 2.0) / self.q

    def g_prime(self, s):
        s = np.asarray(s, dtype=float)
        rep = np.full_like(s, 0.5) if self.p == 2.0 else 0.5 * s ** (self.p / 2.0 - 1.0)
        att = np.full_like(s, 0.5) if self.q == 2.0 else 0.5 * s ** (self.q / 2.0 - 1.0)
        return att - rep

    def g_second(self, s):
        s = np.asarray(s, dtype=float)
        zero = np.zeros_like(s)
        rep = zero if self.p == 2.0 else 0.5 * (self.p / 2.0 - 1.0) * s ** (self.p / 2.0 - 2.0)
        att = zero if self.q == 2.0 else 0.5 * (self.q / 2.0 - 1.0) * s ** (self.q / 2.0 - 2.0)
        return att - rep

    def params(self):
        return {"p": self.p, "q": self.q}


@dataclass(frozen=True)
class Morse(Potential):
    """Generalized Morse law K = V(d) - C V(d/l) with V(r) = -exp(-r^s_exp / s_exp).

    C and l control the relative strength and range of the repulsive part.
    The exponent parameter is named s_exp to keep it apart from the squared
    distance argument s.
    """

    C: float = 0.5
    l: float = 0.25
    s_exp: float = 2.0

    def __post_init__(self):
        if self.C <= 0.0 or self.l <= 0.0 or self.s_exp <= 0.0:
            raise DomainError("Morse parameters C, l, s_exp must be positive")

    def _V(self, r):
        return -np.exp(-(r**self.s_exp) / self.s_exp)

    def g(self, s):
        r = np.sqrt(np.asarray(s, dtype=float))
        return self._V(r) - self.C * self._V(r / self.l)

    def g_prime(self, s):
        s = np.asarray(s, dtype=float)
        sig = self.s_exp
        # d/ds [V(sqrt(s))] = (1/2) s^((sig-2)/2) exp(-s^(sig/2)/sig).
        if sig == 2.0:
            lead_a = np.ones_like(s)
            lead_r = np.ones_like(s)
        else:
            lead_a = s ** ((sig - 2.0) / 2.0)
            lead_r = lead_a
        att = 0.5 * lead_a * np.exp(-(s ** (sig / 2.0)) / sig)
        rep = (
            0.5
            * self.C
            * self.l ** (-sig)
            * lead_r
            * np.exp(-(s ** (sig / 2.0)) / (sig * self.l**sig))
        )
        return att - rep

    def g_second(self, s):
        if self.s_exp != 2.0:
            raise NotImplementedError("analytic g'' only for s_exp = 2")
        s = np.asarray(s, dtype=float)
        l2 = self.l**2
        return -0.25 * np.exp(-0.5 * s) + (self.C / (4.0 * l2 * l2)) * np.exp(
            -0.5 * s / l2
        )

    def params(self):
        return {"C": self.C, "l": self.l, "s_exp": self.s_exp}


@dataclass(frozen=True)
class LoheSphere(Potential):
    """K = 2 sin^2(d / 2), the potential of the Lohe sphere model.

    Its kernel h is identically 1/2, which makes it the cleanest test case
    for the consensus machinery.
    """

    def g(self, s):
        s = np.asarray(s, dtype=float)
        return 2.0 * np.sin(np.sqrt(s) / 2.0) ** 2

    def g_prime(self, s):
        # g'(s) = sin(sqrt(s)) / (2 sqrt(s)), limit 1/2 at s = 0.
        s = np.asarray(s, dtype=float)
        small = s < _SMALL_S
        safe = np.where(small, 1.0, s)
        r = np.sqrt(safe)
        return np.where(small, 0.5 - s / 12.0, np.sin(r) / (2.0 * r))

    def g_second(self, s):
        # (r cos r - sin r) / (4 r^3) with r = sqrt(s); limit -1/12 at 0.
        s = np.asarray(s, dtype=float)
        small = s < 1e-8
        safe = np.where(small, 1.0, s)
        r = np.sqrt(safe)
        return np.where(
            small, -1.0 / 12.0 + s / 120.0, (r * np.cos(r) - np.sin(r)) / (4.0 * r**3)
        )


_KIND_NAMES = {
    AttractivePower: "attractive_power",
    RepulsiveAttractivePower: "repulsive_attractive_power",
    Morse: "morse",
    LoheSphere: "lohe_sphere",
}

_KIND_CLASSES = {name: cls for cls, name in _KIND_NAMES.items()}


def make_potential(kind: str, **params) -> Potential:
    """Construct a potential from its kind tag and named parameters."""
    try:
        cls = _KIND_CLASSES[kind]
    except KeyError:
        raise DomainError(
            f"unknown potential kind {kind!r}; expected one of {sorted(_KIND_CLASSES)}"
        ) from None
    return cls(**params)


def g_eval(pot: Potential, s):
    """Profile g at squared distance s >= 0."""
    return pot.g(s)


def g_prime(pot: Potential, s):
    """Analytic derivative g'(s)."""
    return pot.g_prime(s)


def h_eval(pot: Potential, dist):
    """Velocity kernel h(t) = (t / sin t) g'(t^2), h(0) = g'(0).

    Defined for distances in [0, pi); h has the same sign as g'.
    """
    dist = np.asarray(dist, dtype=float)
    if np.any(dist < 0.0) or np.any(dist >= np.pi):
        raise DomainError("h is defined for distances in [0, pi)")
    out = so3.sinc_ratio(dist) * pot.g_prime(dist**2)
    if out.ndim == 0:
        return float(out)
    return out


def grad_K(pot: Potential, R: np.ndarray, Q: np.ndarray) -> so3.TangentVector:
    """Intrinsic gradient of K(., Q) at R: -2 g'(d^2) log_R Q.

    The velocity contribution of Q on R is minus this vector. Equals zero
    when R = Q.
    """
    lg = so3.log_map(R, Q)
    d = lg.norm
    coeff = -2.0 * float(pot.g_prime(d * d))
    return so3.TangentVector(lg.base, coeff * lg.gen)


def consensus_hypotheses(pot: Potential, r: float, grid: int = 10_000) -> dict:
    """Numerically check the consensus hypotheses on the disk radius r.

    Distances between points of a closed disk of radius r < pi/2 stay below
    2r, so g' is sampled on squared distances [0, 4 r^2] and h on distances
    [0, 2r], each on a dense grid. Returns a report with:

      * g_prime_nonneg: g' >= 0 on the grid (purely attractive law),
      * h_nondecreasing: h(t2) >= h(t1) for t2 >= t1 on the grid,
      * h_positive_near_zero: h > 0 somewhere in the lowest percent of the
        positive grid (the arbitrarily-small-b condition),
      * g_prime_lower_bound_c: min of g' over the grid (the constant c of
        the exponential-consensus bound).
    """
    if not 0.0 < r < np.pi / 2:
        raise DomainError(f"disk radius {r} outside (0, pi/2)")
    d_grid = np.linspace(0.0, 2.0 * r, grid)
    gp = np.asarray(pot.g_prime(d_grid**2))
    h = np.asarray(h_eval(pot, d_grid))
    near_zero = max(2, grid // 100)
    return {
        "g_prime_nonneg": bool(np.all(gp >= 0.0)),
        "h_nondecreasing": bool(np.all(np.diff(h) >= -1e-15)),
        "h_positive_near_zero": bool(np.any(h[1:near_zero] > 0.0)),
        "g_prime_lower_bound_c": float(np.min(gp)),
    }
