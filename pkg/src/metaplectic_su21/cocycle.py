"""
The quadratic metaplectic 2-cocycle on SU(2,1) over Q, evaluated at any place.

Every formula here reduces to a product of quadratic Hilbert symbols (a, b)_v
with rational a, b.  We therefore build sigma(g1, g2) once as a ``SymbolProduct``
(a list of rational pairs) and evaluate it at as many places as needed; the
finite support of the product falls out of the pair entries.

Two independent evaluations of sigma are provided:

* ``sigma_symbols`` uses the closed formula in the bottom-row invariant X(g);
* ``sigma_bruhat_symbols`` reduces through the Bruhat cells to torus values
  (delta form) and the correction term for two big-cell elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .exactnum import DomainError, QuadNum, delta2_over_theta, deltas
from .group import Matrix3, bruhat, make_x_plus
from .localfield import REAL, Place, as_place, hilbert_K, hilbert_k, prime_support

Pair = tuple[Fraction, Fraction]


class CocycleInconsistency(DomainError):
    """A branch of the closed formula was entered with data it cannot handle."""


@dataclass(frozen=True, slots=True)
class SymbolProduct:
    """A formal product of quadratic Hilbert symbols with rational entries."""

    pairs: tuple[Pair, ...] = ()

    @classmethod
    def of(cls, *pairs: tuple[object, object]) -> SymbolProduct:
        out = []
        for a, b in pairs:
            a, b = _rat(a), _rat(b)
            if a == 0 or b == 0:
                raise CocycleInconsistency(f"zero argument in Hilbert symbol ({a}, {b})")
            out.append((a, b))
        return cls(tuple(out))

    def __mul__(self, other: SymbolProduct) -> SymbolProduct:
        return SymbolProduct(self.pairs + other.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs)

    def evaluate(self, v: Place | int | str) -> int:
        place = as_place(v)
        s = 1
        for a, b in self.pairs:
            s *= hilbert_k(a, b, place)
        return s

    def primes(self) -> set[int]:
        return {2} | prime_support(x for pair in self.pairs for x in pair)


TRIVIAL = SymbolProduct()


def _rat(x: object) -> Fraction:
    if isinstance(x, QuadNum):
        return x.rational()
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"cannot use {x!r} as a Hilbert symbol argument")


def _nonzero(*xs: QuadNum) -> None:
    for x in xs:
        if x.is_zero():
            raise DomainError("argument must be nonzero")


# -- X invariant and u --------------------------------------------------------------


def X_of(g: Matrix3) -> QuadNum:
    """(conj(g31) t)^-1 if g31 != 0, else conj(g33)^-1."""
    g31, g33 = g[2, 0], g[2, 2]
    if not g31.is_zero():
        return (g31.conj() * QuadNum.theta(g.d)).inverse()
    return g33.conj().inverse()


def u_symbols(lam: QuadNum, mu: QuadNum) -> SymbolProduct:
    _nonzero(lam, mu)
    if lam.in_k() and mu.in_k():
        return SymbolProduct.of((lam, -mu))
    return SymbolProduct.of((lam.norm(), -mu.norm()))


def u_of(lam: QuadNum, mu: QuadNum, v: Place | int | str) -> int:
    return u_symbols(lam, mu).evaluate(v)


# -- torus --------------------------------------------------------------------------


def _tr_theta(x: QuadNum) -> Fraction:
    return (x * QuadNum.theta(x.d)).trace()


def sigma_torus_symbols(lam: QuadNum, mu: QuadNum) -> SymbolProduct:
    """sigma(h(lam), h(mu)) in its norm/trace form."""
    _nonzero(lam, mu)
    nl, nm = lam.norm(), mu.norm()
    if lam.in_k() and mu.in_k():
        return SymbolProduct.of((lam, mu))
    if mu.in_k():
        return SymbolProduct.of((_tr_theta(lam), mu))
    if lam.in_k():
        return SymbolProduct.of((lam, nm), (lam, _tr_theta(mu)))
    lm = lam * mu
    if lm.in_k():
        return SymbolProduct.of((nl, -lm), (-_tr_theta(lam), lm))
    tl, tm = _tr_theta(lam), _tr_theta(mu)
    return SymbolProduct.of(
        (nl, nm),
        (tl * nm, tm),
        (_tr_theta(lm), -tl * nm * tm),
    )


def sigma_torus(lam: QuadNum, mu: QuadNum, v: Place | int | str) -> int:
    return sigma_torus_symbols(lam, mu).evaluate(v)


def sigma_torus_delta_symbols(lam: QuadNum, mu: QuadNum) -> SymbolProduct:
    """sigma(h(lam), h(mu)) written with the delta pair; an independent route to the torus value."""
    _nonzero(lam, mu)
    t = QuadNum.theta(lam.d)
    if lam.in_k() and mu.in_k():
        return SymbolProduct.of((lam, mu))
    if mu.in_k():
        return SymbolProduct.of((mu, -deltas(lam).delta2 / t))
    if lam.in_k():
        return SymbolProduct.of((lam, mu * deltas(mu).delta1.conj() / t))
    if (lam * mu).in_k():
        return SymbolProduct.of(
            (-1, lam.norm()),
            (-lam * deltas(lam).delta1.conj() / t, lam * mu),
        )
    q = lam.a + lam.b * mu.a / mu.b
    return SymbolProduct.of(
        (lam.norm(), mu.norm()),
        (q, mu * deltas(mu).delta1.conj() / deltas(lam).delta2),
    )


def commutator_torus(lam: QuadNum, mu: QuadNum, p: int) -> int:
    """sigma(h(lam), h(mu)) / sigma(h(mu), h(lam)) at an odd prime p."""
    if p == 2:
        raise DomainError("the torus commutator is only available at odd primes")
    return sigma_torus(lam, mu, p) * sigma_torus(mu, lam, p)


def commutator_hilbert(lam: QuadNum, mu: QuadNum, p: int) -> int:
    """The quadratic Hilbert symbol (lam, conj(mu)) over K at p, the predicted commutator."""
    return hilbert_K(lam, mu.conj(), p)


# -- closed formula in X ------------------------------------------------------------


def _is_upper_unipotent(g: Matrix3) -> bool:
    one = QuadNum(Fraction(1), Fraction(0), g.d)
    return (
        g[0, 0] == one and g[1, 1] == one and g[2, 2] == one
        and g[1, 0].is_zero() and g[2, 0].is_zero() and g[2, 1].is_zero()
    )


def sigma_symbols(g1: Matrix3, g2: Matrix3, fast_path: bool = True) -> SymbolProduct:
    """sigma(g1, g2) from the bottom rows of g1, g2 and g1 g2."""
    if fast_path and (_is_upper_unipotent(g1) or _is_upper_unipotent(g2)):
        return TRIVIAL
    g3 = g1 @ g2
    x1, x2, x3 = X_of(g1), X_of(g2), X_of(g3)
    D = delta2_over_theta
    ratio = x3 / (x1 * x2)
    if ratio.in_k():
        return (
            u_symbols(x3 / x2, x1 * x2)
            * SymbolProduct.of(
                (D(x3) / D(x2), -x2.norm() * D(x2) / D(x1)),
                (ratio, D(x1) * D(x2) / D(x3)),
            )
        )
    gg1, gg2, gg3 = g1[2, 0], g2[2, 0], g3[2, 0]
    if gg1.is_zero() or gg2.is_zero():
        raise CocycleInconsistency(
            f"irrational X-ratio {ratio} with a zero (3,1) entry; the closed formula does not apply"
        )
    h2, h3 = g2[2, 1], g3[2, 1]
    r = (h2 * gg3 - h3 * gg2) / (gg1 * gg2.conj())
    if r.is_zero():
        raise CocycleInconsistency("r vanishes in the irrational-ratio branch")
    rho = -r * ratio
    x32 = x3 / x2
    return (
        SymbolProduct.of((-D(rho), rho.norm()), (r.norm(), D(r)))
        * u_symbols(x1, x32)
        * u_symbols(x32, x3)
        * SymbolProduct.of(
            (D(ratio) / D(x32), -ratio.norm() * D(ratio) / D(x1)),
            (D(x2) / D(x3), -x2.norm() * D(x2) / D(x32)),
        )
    )


def sigma(g1: Matrix3, g2: Matrix3, v: Place | int | str) -> int:
    return sigma_symbols(g1, g2).evaluate(v)


# -- Bruhat route -----------------------------------------------------------------------


def _correction(r: QuadNum, m: QuadNum) -> SymbolProduct:
    """The extra factor for two big-cell elements separated by x(r, m)."""
    t = QuadNum.theta(r.d)
    if m.in_k_theta():
        return SymbolProduct.of((t / m.conj(), -1))
    s = -r * t / m.conj()
    if not s.is_zero() and s.in_k():
        return SymbolProduct.of((-m.norm() / (t * t), s))
    if r.in_k() and m.in_k() and not r.is_zero():
        return SymbolProduct.of((r, -(t * t)))
    if r.b != 0 and m.a != 0:
        return SymbolProduct.of(
            ((r.a * m.a + r.b * m.b * (t * t)) / m.a, -r.norm() / (m.norm() * (t * t))),
            (r.norm(), -r.b * (t * t) / m.a),
        )
    return SymbolProduct.of((r, -(t * t) / m.norm()))


def _split_bruhat(g: Matrix3) -> tuple[Matrix3, QuadNum, bool, Matrix3]:
    """g = left * h(lam) * w^e * right with left, right upper unipotent."""
    data = bruhat(g)
    right = make_x_plus(data.right.r, data.right.m, g.d)
    if not data.big_cell:
        return Matrix3.identity(g.d), data.lam, False, right
    assert data.left is not None
    return make_x_plus(data.left.r, data.left.m, g.d), data.lam, True, right


def sigma_bruhat_symbols(g1: Matrix3, g2: Matrix3) -> SymbolProduct:
    """sigma(g1, g2) by moving unipotents aside and reducing to torus values."""
    T = sigma_torus_delta_symbols
    _, lam, e1, right1 = _split_bruhat(g1)
    left2, mu, e2, _ = _split_bruhat(g2)
    n = right1 @ left2
    one = QuadNum(Fraction(1), Fraction(0), g1.d)
    if not e1:
        return T(lam, mu)
    if n.is_identity() or not e2:
        out = T(lam, mu) * T(lam * mu, one / mu.norm())
        if e2:
            out = out * T(-lam / mu.conj(), -one)
        return out
    r, m = n[0, 1], n[0, 2]
    t = QuadNum.theta(g1.d)
    return _correction(r, m) * T(lam, t / m.conj()) * T(lam * t / m.conj(), mu)


def sigma_bruhat(g1: Matrix3, g2: Matrix3, v: Place | int | str) -> int:
    return sigma_bruhat_symbols(g1, g2).evaluate(v)


# -- all places ---------------------------------------------------------------------------


def support_of(products: Iterable[SymbolProduct], d: int) -> list[Place]:
    primes = prime_support([2 * d] + [x for sp in products for pair in sp for x in pair])
    return [REAL] + [Place(p) for p in sorted(primes)]


def sigma_all_places(g1: Matrix3, g2: Matrix3, extra_primes: Iterable[int] = ()) -> dict[Place, int]:
    """sigma_v(g1, g2) at the real place and every prime where it can be nontrivial."""
    sp = sigma_symbols(g1, g2)
    places = support_of([sp], g1.d)
    places += [Place(p) for p in sorted(set(extra_primes) - {pl.p for pl in places})]
    return {pl: sp.evaluate(pl) for pl in places}
