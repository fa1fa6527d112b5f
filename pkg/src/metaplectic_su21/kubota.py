"""
Local Kubota symbols kappa_p on the compact open subgroups Gamma_p, and the
global symbol kappa = prod_p kappa_p on the level-8t congruence subgroup.

kappa_p is characterised by sigma_p(g, h) = kappa_p(g) kappa_p(h) / kappa_p(gh)
on Gamma_p; ``kappa_p`` evaluates it through the bottom row (g, h, j) of the
matrix: a torus value, a lower-unipotent value and one torus cocycle value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from sympy import nextprime

from .cocycle import sigma_torus_symbols
from .exactnum import DomainError, QuadNum
from .group import (
    LevelKind,
    Matrix3,
    UnipotentParam,
    gamma_level,
    in_gamma_p,
    in_global_gamma,
    is_local_unit,
    make_x_plus,
    param_from_z,
    sl2_embed,
)
from .localfield import REAL, SplitType, classify_prime, hilbert_k, legendre, prime_factors, prime_support


class HypothesisError(DomainError):
    """An input violates the hypotheses under which the symbol is defined."""


@dataclass(frozen=True, slots=True)
class KubotaContext:
    d: int
    p: int
    split_type: SplitType
    level: LevelKind

    @classmethod
    def make(cls, p: int, d: int) -> KubotaContext:
        try:
            level = gamma_level(p, d)
        except DomainError as exc:
            raise HypothesisError(str(exc)) from exc
        return cls(d, p, level.split_type, level)

    @property
    def unramified_odd(self) -> bool:
        return self.p != 2 and self.split_type is not SplitType.RAMIFIED


def _ctx(ctx: KubotaContext | int, d: int) -> KubotaContext:
    return ctx if isinstance(ctx, KubotaContext) else KubotaContext.make(ctx, d)


# -- unipotent and torus values ----------------------------------------------------------


def rho(s: QuadNum, p: int) -> int:
    if s.is_zero() or s.trace() == 0:
        return 1
    return hilbert_k(-s.trace(), (s * QuadNum.theta(s.d)).norm(), p)


def kappa_p_x_minus(s: QuadNum, n: QuadNum, ctx: KubotaContext | int) -> int:
    """kappa_p of the lower unipotent x_-(s, n)."""
    c = _ctx(ctx, s.d)
    if n.is_zero():
        if not s.is_zero():
            raise DomainError("x_-(s, 0) needs s = 0")
        return 1
    return rho(s, c.p) * rho(-s * QuadNum.theta(s.d) / n, c.p)


def kappa_p_unipotent_upper(par: UnipotentParam, ctx: KubotaContext | int) -> int:
    c = _ctx(ctx, par.r.d)
    if not in_gamma_p(make_x_plus(par.r, par.m, c.d), c.p):
        raise HypothesisError(f"x({par.r}, {par.m}) is not in Gamma_{c.p}")
    return 1


def kappa_p_torus(lam: QuadNum, ctx: KubotaContext | int) -> int:
    """kappa_p(h(lam)) for a local unit lam."""
    c = _ctx(ctx, lam.d)
    if not is_local_unit(lam, c.p):
        raise HypothesisError(f"{lam} is not a unit at {c.p}")
    if not c.unramified_odd:
        return 1
    a, b = lam.a, lam.b
    if a != 0 and b != 0 and b.numerator % c.p == 0:
        return hilbert_k(a, b, c.p)
    return 1


# -- split fallback ------------------------------------------------------------------------


def _integral_candidates(d: int, p: int) -> Iterable[QuadNum]:
    """Elements u + v*w of the maximal order, small first; w = (1+t)/2 or t."""
    half = (-d) % 4 == 1
    rng = sorted(range(p), key=lambda x: (min(x, p - x), x))
    for total in range(0, 2 * p):
        for u, v in itertools.product(rng, rng):
            if min(u, p - u) + min(v, p - v) != total:
                continue
            if half:
                yield QuadNum(Fraction(u) + Fraction(v, 2), Fraction(v, 2), d)
            else:
                yield QuadNum(Fraction(u), Fraction(v), d)


def split_fix(row: tuple[QuadNum, QuadNum, QuadNum], ctx: KubotaContext | int) -> UnipotentParam:
    """
    Parameters of an upper unipotent in Gamma_p moving a unit into the (3,3) slot.

    Right-multiplying the bottom row (g, h, j) by x(z, -N(z)/2 + t*theta) gives
    j' = g*m - h*conj(z) + j.  Being a unit only depends on residues mod p, so a
    search over z mod p and t mod p is exhaustive.
    """
    g, h, j = row
    c = _ctx(ctx, g.d)
    if c.split_type is not SplitType.SPLIT:
        raise HypothesisError("split_fix only applies at split primes")
    if is_local_unit(j, c.p):
        zero = QuadNum(Fraction(0), Fraction(0), g.d)
        return UnipotentParam(zero, zero)
    for z in _integral_candidates(g.d, c.p):
        for t in sorted(range(c.p), key=lambda x: (min(x, c.p - x), x)):
            if z.is_zero() and t == 0:
                continue
            par = param_from_z(z, t)
            if is_local_unit(g * par.m - h * z.conj() + j, c.p):
                return par
    raise AssertionError(f"no unipotent makes the (3,3) entry a unit at {c.p}; row {row}")


# -- general element -------------------------------------------------------------------------


def kappa_p(gamma: Matrix3, ctx: KubotaContext | int) -> int:
    c = _ctx(ctx, gamma.d)
    if not in_gamma_p(gamma, c.p):
        raise HypothesisError(f"matrix is not in Gamma_{c.p}")
    return _kappa_p_unchecked(gamma, c)


def _kappa_p_unchecked(gamma: Matrix3, c: KubotaContext) -> int:
    g, h, j = gamma[2, 0], gamma[2, 1], gamma[2, 2]
    t = QuadNum.theta(gamma.d)
    if g.is_zero():
        return kappa_p_torus(j.conj().inverse(), c)
    if is_local_unit(g, c.p):
        return kappa_p_torus((g.conj() * t).inverse(), c)
    if not is_local_unit(j, c.p):
        if c.split_type is not SplitType.SPLIT:
            raise AssertionError(f"neither g nor j is a unit at non-split {c.p}")
        par = split_fix((g, h, j), c)
        gamma = gamma @ make_x_plus(par.r, par.m, gamma.d)
        g, h, j = gamma[2, 0], gamma[2, 1], gamma[2, 2]
    jb = j.conj()
    lam = jb.inverse()
    return (
        kappa_p_torus(lam, c)
        * kappa_p_x_minus(-h.conj() / jb, g / j, c)
        * sigma_torus_symbols(lam, jb / (g.conj() * t)).evaluate(c.p)
    )


# -- global symbol -------------------------------------------------------------------------


def _check_global(gamma: Matrix3) -> None:
    if classify_prime(2, gamma.d) is not SplitType.SPLIT:
        raise HypothesisError(f"2 does not split in Q(sqrt(-{gamma.d}))")
    if not in_global_gamma(gamma):
        raise HypothesisError("matrix is not in the level-8t congruence subgroup")


@lru_cache(maxsize=4096)
def support_primes(gamma: Matrix3) -> list[int]:
    """
    Primes outside which kappa_p(gamma) = 1, for gamma in the level-8t subgroup.

    gamma is integral, so for p not dividing 2d N(g) the bottom-left entry g is
    a unit and kappa_p(gamma) is the torus value at (conj(g) t)^-1, which is
    (a, b)_p with a, b built from the coordinates of g, d and N(g); that symbol
    is 1 unless p divides one of them.  When g = 0, j is a global unit and the
    same argument applies to j.
    """
    g, j = gamma[2, 0], gamma[2, 2]
    x = j if g.is_zero() else g
    return sorted(prime_support([Fraction(2 * gamma.d), x.a, x.b, x.norm()]))


def extend_primes(primes: list[int], factor: int = 2) -> list[int]:
    """The list padded with the next primes until it is ``factor`` times as long."""
    out = list(primes)
    q = max(out) if out else 1
    while len(out) < factor * len(primes):
        q = nextprime(q)
        out.append(q)
    return out


def kappa_global(gamma: Matrix3, primes: Iterable[int] | None = None) -> int:
    _check_global(gamma)
    ps = support_primes(gamma) if primes is None else primes
    s = 1
    for p in ps:
        s *= _kappa_p_unchecked(gamma, KubotaContext.make(p, gamma.d))
    return s


# -- closed forms --------------------------------------------------------------------------


def kappa_borel_closed_form(f: QuadNum) -> int:
    """kappa of a Borel element of the congruence subgroup with (1,1) entry f = a + b*t."""
    if f.b == 0:
        return 1
    return legendre(f.b, f.a) * hilbert_k(f.a, f.b, REAL)


def kappa_torus_closed_form(lam: QuadNum) -> int:
    """The predicted value of prod_p kappa_p(h(lam)) for lam = 1 mod 8t."""
    return kappa_borel_closed_form(lam)


def torus_local_product(lam: QuadNum) -> int:
    """prod over odd unramified p | b of the local torus formula (a, b)_p, for lam = a + b*t."""
    if lam.b == 0:
        return 1
    s = 1
    for p in sorted(prime_factors(lam.b)):
        if p == 2 or classify_prime(p, lam.d) is SplitType.RAMIFIED:
            continue
        if lam.a != 0:
            s *= hilbert_k(lam.a, lam.b, p)
    return s


def kronecker(c: int, dd: int) -> int:
    """
    Kronecker symbol (c/dd) for odd dd coprime to c.

    Equals prod_{p | dd} (c, dd)_p times the real-place factor (c, dd)_R, which
    carries the sign convention (c/-1) = sign(c).
    """
    return legendre(c, dd) * hilbert_k(c, dd, REAL)


def kappa_sl2(a: int, b: int, c: int, dd: int, d: int = 7) -> int:
    """Closed form of kappa on the embedded congruence SL2: (c/dd), or 1 when c = 0."""
    g = sl2_embed(a, b, c, dd, d)
    _check_global(g)
    if c == 0:
        return 1
    return kronecker(c, dd)
