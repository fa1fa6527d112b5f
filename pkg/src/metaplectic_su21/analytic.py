"""
The real place: the domain H_C, the action of SU(2,1)(R) on it, the square-root
section phi_g of the automorphy factor Ct + D, and the multiplier j(gamma, tau).

K is embedded in C by t -> i*sqrt(d).  Points of H_C are pairs (tau1, tau2)
with |tau2|^2 + 2 Re(tau1) < 0.  Group elements stay exact until they are
embedded; only the action and the square roots are floating point.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import NamedTuple

from .exactnum import DomainError, QuadNum
from .group import Matrix3, bruhat
from .kubota import kappa_global

SIGN_BAND = 1e-6
DENOM_EPS = 1e-12  # relative to the size of the terms of Ct + D


class BranchError(ArithmeticError):
    """A quantity that must be +-1 landed outside the decision band."""


def embed(x: QuadNum) -> complex:
    return complex(float(x.a), float(x.b) * math.sqrt(x.d))


@dataclass(frozen=True, slots=True)
class HPoint:
    """
    A point of H_C.

    ``level`` is |tau2|^2 + 2 Re(tau1).  Images under the action carry it
    forward as level / |Ct + D|^2, which stays accurate when the coordinates
    are large and the direct formula cancels.
    """

    tau1: complex
    tau2: complex
    level: float = math.nan

    def __post_init__(self) -> None:
        if math.isnan(self.level):
            object.__setattr__(self, "level", abs(self.tau2) ** 2 + 2 * self.tau1.real)
        if not self.level < 0:
            raise DomainError(f"({self.tau1}, {self.tau2}) is not in H_C")

    @classmethod
    def parse(cls, text: str) -> HPoint:
        """From "Re tau1, Im tau1, Re tau2, Im tau2"."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise DomainError(f"tau needs four comma-separated numbers, got {text!r}")
        try:
            x1, y1, x2, y2 = (float(p) for p in parts)
        except ValueError as exc:
            raise DomainError(f"malformed tau {text!r}") from exc
        return cls(complex(x1, y1), complex(x2, y2))


class BlockData(NamedTuple):
    """g = (A B; C D) with A 2x2, B 2x1, C 1x2, D scalar."""

    A: tuple[tuple[complex, complex], tuple[complex, complex]]
    B: tuple[complex, complex]
    C: tuple[complex, complex]
    D: complex


def blocks(g: Matrix3) -> BlockData:
    e = [[embed(g[i, j]) for j in range(3)] for i in range(3)]
    return BlockData(
        ((e[0][0], e[0][1]), (e[1][0], e[1][1])),
        (e[0][2], e[1][2]),
        (e[2][0], e[2][1]),
        e[2][2],
    )


def denom(g: Matrix3, tau: HPoint) -> complex:
    b = blocks(g)
    return b.C[0] * tau.tau1 + b.C[1] * tau.tau2 + b.D


def act(g: Matrix3, tau: HPoint) -> HPoint:
    b = blocks(g)
    q = denom(g, tau)
    scale = abs(b.C[0] * tau.tau1) + abs(b.C[1] * tau.tau2) + abs(b.D)
    if abs(q) < DENOM_EPS * scale:
        raise DomainError(f"Ct + D vanishes numerically at {tau}")
    (a11, a12), (a21, a22) = b.A
    return HPoint(
        (a11 * tau.tau1 + a12 * tau.tau2 + b.B[0]) / q,
        (a21 * tau.tau1 + a22 * tau.tau2 + b.B[1]) / q,
        tau.level / abs(q) ** 2,
    )


# -- the section -----------------------------------------------------------------------


def _sqrt_half_open(z: complex) -> complex:
    """The square root with argument in (-pi/2, pi/2]."""
    r = cmath.sqrt(z)
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return r


def phi_torus(lam: QuadNum) -> complex:
    """phi of h(lam) n: conj(lam)^(-1/2) with argument in (-pi/2, pi/2]."""
    return _sqrt_half_open(embed(lam.conj().inverse()))


def phi_weyl_at(value: complex) -> complex:
    """The root of Ct + D for w with argument in (-pi/2, 0); value must lie in the open lower half plane."""
    if not value.imag < 0:
        raise BranchError(f"Ct + D = {value} for w is not in the lower half plane")
    r = cmath.sqrt(value)
    return r if r.real > 0 else -r


def _unipotent_tau1(r: QuadNum, m: QuadNum, tau: HPoint) -> complex:
    """
    First coordinate of x(r, m)(tau), i.e. tau1 + r tau2 + m.

    Its real part equals (level - |tau2 - conj(r)|^2) / 2 because tr m = -N(r);
    that form has no cancellation.
    """
    er, em = embed(r), embed(m)
    z = tau.tau1 + er * tau.tau2 + em
    return complex((tau.level - abs(tau.tau2 - er.conjugate()) ** 2) / 2, z.imag)


def phi(g: Matrix3, tau: HPoint) -> complex:
    """
    phi_g(tau) from the Bruhat decomposition.

    The big cell comes as x(l) h(lam) w x(r, m) = x(l) w h(mu) x(r, m) with
    mu = conj(lam)^-1, so phi_g(tau) = phi_w((h n)(tau)) phi_{h n}.  The
    argument of phi_w is Ct + D of w at (h n)(tau), namely conj(t)^-1 N(mu) (tau1 + r tau2 + m).
    """
    data = bruhat(g)
    if not data.big_cell:
        return phi_torus(data.lam)
    mu = data.lam.conj().inverse()
    t_bar_inv = embed(QuadNum.theta(g.d).conj().inverse())
    value = t_bar_inv * float(mu.norm()) * _unipotent_tau1(data.right.r, data.right.m, tau)
    return phi_weyl_at(value) * phi_torus(mu)


def sign_of(z: complex, what: str = "value") -> int:
    for s in (1, -1):
        if abs(z - s) <= SIGN_BAND:
            return s
    raise BranchError(f"{what} {z} is not within {SIGN_BAND} of +-1")


def sigma_infty_via_phi(g1: Matrix3, g2: Matrix3, tau: HPoint) -> int:
    q = phi(g1, act(g2, tau)) * phi(g2, tau) / phi(g1 @ g2, tau)
    return sign_of(q, "phi quotient")


def multiplier_j(gamma: Matrix3, tau: HPoint) -> complex:
    return kappa_global(gamma) * phi(gamma, tau)


# -- sampling ------------------------------------------------------------------------------


def random_hpoint(rng: random.Random) -> HPoint:
    """tau2 uniform in the unit disc, tau1 = -(|tau2|^2/2 + margin) + i*y with margin in [0.1, 2]."""
    r = math.sqrt(rng.random())
    tau2 = cmath.rect(r, rng.uniform(-math.pi, math.pi))
    margin = rng.uniform(0.1, 2.0)
    tau1 = complex(-(abs(tau2) ** 2 / 2 + margin), rng.uniform(-2.0, 2.0))
    return HPoint(tau1, tau2)


def render_complex(z: complex) -> str:
    """x+yi with 17 significant digits."""
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real:.17g}{sign}{abs(z.imag):.17g}i"
