"""
Local data at the places of Q for the field K = Q(t), t^2 = -d.

Covers prime splitting, p-adic valuations, Hensel square roots, quadratic
Hilbert symbols over Q_v (all places) and over K_p (odd p), and the quadratic
Legendre symbol. A brute-force conic search is kept alongside the closed
formulas as an independent oracle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable

import numpy as np
from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .exactnum import DomainError, QuadNum, RatLike, to_rat


@dataclass(frozen=True, slots=True)
class Place:
    """A place of Q: the real place (p is None) or a finite prime p."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None and not isprime(self.p):
            raise DomainError(f"{self.p} is not prime")

    @property
    def is_real(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "real" if self.p is None else str(self.p)


REAL = Place(None)


def as_place(v: Place | int | str) -> Place:
    if isinstance(v, Place):
        return v
    if isinstance(v, str):
        if v.strip().lower() in ("real", "inf", "infinity", "r"):
            return REAL
        return Place(int(v))
    return Place(int(v))


class SplitType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"

    def __str__(self) -> str:
        return self.value


def field_discriminant(d: int) -> int:
    return -d if (-d) % 4 == 1 else -4 * d


def classify_prime(p: int, d: int) -> SplitType:
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if field_discriminant(d) % p == 0:
        return SplitType.RAMIFIED
    if p == 2:
        return SplitType.SPLIT if (-d) % 8 == 1 else SplitType.INERT
    return SplitType.SPLIT if pow(-d % p, (p - 1) // 2, p) == 1 else SplitType.INERT


def val_int(n: int, p: int) -> int:
    if n == 0:
        raise DomainError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def val_p(x: RatLike, p: int) -> int:
    x = to_rat(x)
    if x == 0:
        raise DomainError("valuation of 0 is infinite")
    return val_int(x.numerator, p) - val_int(x.denominator, p)


def is_p_integral(x: RatLike, p: int) -> bool:
    x = to_rat(x)
    return x.denominator % p != 0


def residue(x: RatLike, modulus: int) -> int:
    """Image of a rational in Z/modulus; the denominator must be invertible."""
    x = to_rat(x)
    return x.numerator * pow(x.denominator, -1, modulus) % modulus


def unit_part(x: RatLike, p: int) -> Fraction:
    x = to_rat(x)
    return x / Fraction(p) ** val_p(x, p)


@lru_cache(maxsize=65536)
def _primes_of_int(n: int) -> frozenset[int]:
    return frozenset(factorint(n))


def prime_factors(x: RatLike) -> set[int]:
    x = to_rat(x)
    if x == 0:
        return set()
    return prime_support([x])


def coprime_base(numbers: Iterable[int]) -> list[int]:
    """Pairwise coprime integers > 1 with the same prime divisors as the inputs."""
    base: list[int] = []
    todo = [abs(n) for n in numbers]
    while todo:
        x = todo.pop()
        if x <= 1:
            continue
        for i, b in enumerate(base):
            g = gcd(x, b)
            if g > 1:
                base.pop(i)
                todo += [g, x // g, b // g]
                break
        else:
            base.append(x)
    return base


def prime_support(values: Iterable[RatLike]) -> set[int]:
    """All primes dividing a numerator or denominator of the given rationals.

    Arguments built from products of norms share large composite factors, so
    splitting them into a coprime base first saves most of the factoring work.
    """
    ints: list[int] = []
    for v in values:
        v = to_rat(v)
        if v != 0:
            ints += [v.numerator, v.denominator]
    out: set[int] = set()
    for b in coprime_base(ints):
        out |= _primes_of_int(b)
    return out


# -- Hensel lifting ------------------------------------------------------------


@lru_cache(maxsize=4096)
def _hensel_sqrt_cached(num: int, den: int, p: int, precision: int) -> int:
    a = Fraction(num, den)
    a_mod_p = residue(a, p)
    roots = sqrt_mod(a_mod_p, p, all_roots=True)
    if not roots:
        raise DomainError(f"{a} is not a square modulo {p}")
    r = min(roots)  # lies in [0, (p-1)/2]
    modulus = p
    while modulus < p**precision:
        modulus = min(modulus * modulus, p**precision)
        target = residue(a, modulus)
        r = (r - (r * r - target) * pow(2 * r, -1, modulus)) % modulus
    return r


def hensel_sqrt(a: RatLike, p: int, precision: int) -> int:
    """Square root of a p-adic unit modulo p**precision, lifted from the smaller root mod p."""
    a = to_rat(a)
    if p == 2:
        raise DomainError("hensel_sqrt is for odd primes only")
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    if precision < 1:
        raise DomainError("precision must be at least 1")
    if a == 0 or val_p(a, p) != 0:
        raise DomainError(f"{a} is not a {p}-adic unit")
    return _hensel_sqrt_cached(a.numerator, a.denominator, p, precision)


# -- Hilbert symbols over Q_v -------------------------------------------------


def _hilbert_real(a: Fraction, b: Fraction) -> int:
    return -1 if (a < 0 and b < 0) else 1


def _hilbert_tame(a: Fraction, b: Fraction, p: int) -> int:
    alpha, beta = val_p(a, p), val_p(b, p)
    w = Fraction(-1 if (alpha * beta) % 2 else 1) * b**alpha / a**beta
    e = pow(residue(w, p), (p - 1) // 2, p)
    return 1 if e == 1 else -1


def _hilbert_dyadic(a: Fraction, b: Fraction) -> int:
    alpha, beta = val_p(a, 2), val_p(b, 2)
    u = residue(unit_part(a, 2), 8)
    v = residue(unit_part(b, 2), 8)

    def eps(x: int) -> int:
        return ((x - 1) // 2) % 2

    def omega(x: int) -> int:
        return ((x * x - 1) // 8) % 2

    e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
    return -1 if e % 2 else 1


def hilbert_k(a: RatLike, b: RatLike, v: Place | int | str) -> int:
    """The quadratic Hilbert symbol (a, b) over Q_v."""
    a, b = to_rat(a), to_rat(b)
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol needs nonzero arguments")
    place = as_place(v)
    if place.is_real:
        return _hilbert_real(a, b)
    if place.p == 2:
        return _hilbert_dyadic(a, b)
    return _hilbert_tame(a, b, place.p)


def _squarefree_integer(x: Fraction) -> int:
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    out = 1
    for q, e in factorint(abs(n)).items():
        if e % 2:
            out *= q
    return sign * out


@lru_cache(maxsize=None)
def _conic_search(a: int, b: int, p: int) -> int:
    precision = val_int(4 * a * b, p) + (3 if p == 2 else 1)
    modulus = p**precision
    zs = np.arange(modulus, dtype=np.int64)
    squares = np.zeros(modulus, dtype=bool)
    squares[(zs * zs) % modulus] = True
    unit_squares = np.zeros(modulus, dtype=bool)
    unit_zs = zs[zs % p != 0]
    unit_squares[(unit_zs * unit_zs) % modulus] = True
    sq = (zs * zs) % modulus
    values = ((a % modulus) * sq[:, None] + (b % modulus) * sq[None, :]) % modulus
    xs = zs[:, None]
    ys = zs[None, :]
    primitive_xy = (xs % p != 0) | (ys % p != 0)
    hit = np.where(primitive_xy, squares[values], unit_squares[values])
    return 1 if bool(hit.any()) else -1


def hilbert_conic_oracle(a: RatLike, b: RatLike, p: int) -> int:
    """
    Decide (a, b)_p by searching for a primitive solution of aX^2 + bY^2 = Z^2.

    The arguments are first replaced by square-free integers in the same square
    classes. The search runs modulo p^(v_p(4ab)+3) at p = 2 and p^(v_p(ab)+1) at
    odd p, which is enough for a primitive solution to lift by Hensel's lemma.
    """
    a, b = to_rat(a), to_rat(b)
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol needs nonzero arguments")
    sa, sb = _squarefree_integer(a), _squarefree_integer(b)
    return _conic_search(sa, sb, p)


# -- Hilbert symbols over K_p, p odd ---------------------------------------------


def _fp2_mul(x: tuple[int, int], y: tuple[int, int], d: int, p: int) -> tuple[int, int]:
    return ((x[0] * y[0] - d * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)


def _fp2_pow(x: tuple[int, int], e: int, d: int, p: int) -> tuple[int, int]:
    result = (1, 0)
    while e:
        if e & 1:
            result = _fp2_mul(result, x, d, p)
        x = _fp2_mul(x, x, d, p)
        e >>= 1
    return result


def _sign_from_residue(r: tuple[int, int], p: int) -> int:
    if r == (1, 0):
        return 1
    if r == (p - 1, 0):
        return -1
    raise ArithmeticError(f"tame power {r} is not a sign; unit reduction failed")


def _hilbert_K_inert(lam: QuadNum, mu: QuadNum, p: int) -> int:
    alpha = val_p(lam.norm(), p) // 2
    beta = val_p(mu.norm(), p) // 2
    w = (-1 if (alpha * beta) % 2 else 1) * mu**alpha / lam**beta
    r = (residue(w.a, p), residue(w.b, p))
    return _sign_from_residue(_fp2_pow(r, (p * p - 1) // 2, lam.d, p), p)


def _hilbert_K_ramified(lam: QuadNum, mu: QuadNum, p: int) -> int:
    alpha = val_p(lam.norm(), p)
    beta = val_p(mu.norm(), p)
    w = (-1 if (alpha * beta) % 2 else 1) * mu**alpha / lam**beta
    e = pow(residue(w.a, p), (p - 1) // 2, p)
    return 1 if e == 1 else -1


def _split_component(x: QuadNum, sign: int, p: int) -> tuple[int, int]:
    """Valuation and unit residue mod p of a + sign*b*s, s^2 = -d in Z_p."""
    den = x.a.denominator * x.b.denominator // gcd(x.a.denominator, x.b.denominator)
    A = int(x.a * den)
    B = int(x.b * den) * sign
    v_den = val_int(den, p)
    den_unit = den // p**v_den
    precision = 8
    while True:
        s = hensel_sqrt(-x.d, p, precision)
        value = (A + B * s) % p**precision
        if value != 0:
            v = val_int(value, p)
            if v < precision - 1:
                u = (value // p**v) * pow(den_unit, -1, p) % p
                return v - v_den, u
        precision *= 2


def _hilbert_K_split(lam: QuadNum, mu: QuadNum, p: int) -> int:
    out = 1
    for sign in (1, -1):
        alpha, u = _split_component(lam, sign, p)
        beta, w = _split_component(mu, sign, p)
        r = (-1 if (alpha * beta) % 2 else 1) * pow(w, alpha, p) * pow(pow(u, beta, p), -1, p)
        out *= 1 if pow(r % p, (p - 1) // 2, p) == 1 else -1
    return out


def split_components(x: QuadNum, p: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """(valuation, unit residue mod p) of both images of x in Q_p x Q_p."""
    if classify_prime(p, x.d) is not SplitType.SPLIT or p == 2:
        raise DomainError(f"{p} is not an odd split prime for d={x.d}")
    if x.is_zero():
        raise DomainError("components of 0 have infinite valuation")
    return _split_component(x, 1, p), _split_component(x, -1, p)


def hilbert_K(lam: QuadNum, mu: QuadNum, p: int) -> int:
    """The quadratic Hilbert symbol (lam, mu) over K_p = K tensor Q_p, p odd."""
    if p == 2:
        raise DomainError("hilbert_K is not available at p = 2")
    if lam.is_zero() or mu.is_zero():
        raise DomainError("Hilbert symbol needs nonzero arguments")
    if lam.d != mu.d:
        raise DomainError("arguments lie in different fields")
    kind = classify_prime(p, lam.d)
    if kind is SplitType.SPLIT:
        return _hilbert_K_split(lam, mu, p)
    if kind is SplitType.INERT:
        return _hilbert_K_inert(lam, mu, p)
    return _hilbert_K_ramified(lam, mu, p)


# -- Legendre symbol and product formula ----------------------------------------


def legendre(a: RatLike, b: RatLike) -> int:
    """(a/b) as the product of (a, b)_p over the primes p dividing b."""
    a, b = to_rat(a), to_rat(b)
    if a.denominator != 1 or b.denominator != 1:
        raise DomainError("legendre expects integers")
    ai, bi = int(a), int(b)
    if bi == 0 or gcd(bi, 2 * ai) != 1:
        raise DomainError(f"legendre({ai}, {bi}) needs b coprime to 2a")
    out = 1
    for q in factorint(abs(bi)):
        out *= hilbert_k(ai, bi, q)
    return out


def hilbert_support(a: RatLike, b: RatLike) -> list[Place]:
    """All places where (a, b) can be nontrivial: the real place and p | 2ab."""
    primes = {2} | prime_factors(to_rat(a)) | prime_factors(to_rat(b))
    return [REAL] + [Place(q) for q in sorted(primes)]


def hilbert_product(a: RatLike, b: RatLike) -> int:
    out = 1
    for v in hilbert_support(a, b):
        out *= hilbert_k(a, b, v)
    return out
