"""
SU(2,1) over K = Q(t): matrices, generators, Bruhat and Iwahori factorisations,
and congruence-subgroup membership.

The group is realised as the 3x3 matrices g with det g = 1 and
g^T J conj(g) = J, where J is the antidiagonal matrix of ones.
"""

from __future__ import annotations

import json
import random
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .exactnum import DEFAULT_D, DomainError, QuadNum, parse_quad, render_quad, to_rat
from .localfield import SplitType, classify_prime, is_p_integral, val_p

Rows = tuple[tuple[QuadNum, QuadNum, QuadNum], ...]


def _zero(d: int) -> QuadNum:
    return QuadNum(Fraction(0), Fraction(0), d)


def _one(d: int) -> QuadNum:
    return QuadNum(Fraction(1), Fraction(0), d)


def _lift(x: QuadNum | int | Fraction, d: int) -> QuadNum:
    if isinstance(x, QuadNum):
        if x.d != d:
            raise DomainError(f"entry from field d={x.d} in a matrix over d={d}")
        return x
    return QuadNum(to_rat(x), Fraction(0), d)


@dataclass(frozen=True, slots=True)
class Matrix3:
    """A 3x3 matrix over K; group operations live on top of this."""

    rows: Rows
    d: int = DEFAULT_D

    @classmethod
    def of(cls, entries: Sequence[Sequence[QuadNum | int | Fraction]], d: int = DEFAULT_D) -> Matrix3:
        if len(entries) != 3 or any(len(r) != 3 for r in entries):
            raise DomainError("expected a 3x3 array")
        rows = tuple(tuple(_lift(x, d) for x in r) for r in entries)
        return cls(rows, d)  # type: ignore[arg-type]

    @classmethod
    def identity(cls, d: int = DEFAULT_D) -> Matrix3:
        return cls.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]], d)

    def __getitem__(self, ij: tuple[int, int]) -> QuadNum:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: Matrix3) -> Matrix3:
        if other.d != self.d:
            raise DomainError("multiplying matrices over different fields")
        a, b = self.rows, other.rows
        out = [[a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] for j in range(3)] for i in range(3)]
        return Matrix3.of(out, self.d)

    __mul__ = __matmul__

    def transpose(self) -> Matrix3:
        return Matrix3.of([[self.rows[j][i] for j in range(3)] for i in range(3)], self.d)

    def conj(self) -> Matrix3:
        return Matrix3.of([[x.conj() for x in r] for r in self.rows], self.d)

    def det(self) -> QuadNum:
        m = self.rows
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    def inv(self) -> Matrix3:
        """Inverse via J conj(g)^T J, valid on the group."""
        j = antidiag_ones(self.d)
        return j @ self.conj().transpose() @ j

    def __pow__(self, e: int) -> Matrix3:
        if e < 0:
            return self.inv() ** (-e)
        out = Matrix3.identity(self.d)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def entries(self) -> Iterable[QuadNum]:
        for r in self.rows:
            yield from r

    def is_identity(self) -> bool:
        return self == Matrix3.identity(self.d)

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(render_quad(x) for x in r) for r in self.rows) + "]"


GroupElement = Matrix3


def antidiag_ones(d: int = DEFAULT_D) -> Matrix3:
    return Matrix3.of([[0, 0, 1], [0, 1, 0], [1, 0, 0]], d)


def membership_failure(g: Matrix3) -> str | None:
    """Name of the first violated group condition, or None when g lies in SU(2,1)."""
    j = antidiag_ones(g.d)
    if g.transpose() @ j @ g.conj() != j:
        return "hermitian form not preserved (g^T J conj(g) != J)"
    if g.det() != 1:
        return "determinant is not 1"
    return None


def is_member(g: Matrix3) -> bool:
    return membership_failure(g) is None


def mul(g: Matrix3, h: Matrix3) -> Matrix3:
    return g @ h


def inv(g: Matrix3) -> Matrix3:
    return g.inv()


# -- generators -------------------------------------------------------------


class UnipotentParam(NamedTuple):
    r: QuadNum
    m: QuadNum


def unipotent_param(r: QuadNum | int | Fraction, m: QuadNum | int | Fraction, d: int = DEFAULT_D) -> UnipotentParam:
    r, m = _lift(r, d), _lift(m, d)
    if m.trace() != -r.norm():
        raise DomainError(f"tr(m) = {m.trace()} differs from -N(r) = {-r.norm()}")
    return UnipotentParam(r, m)


def param_from_z(z: QuadNum, t: Fraction | int) -> UnipotentParam:
    """The pair (z, -N(z)/2 + t*theta)."""
    theta = QuadNum.theta(z.d)
    return UnipotentParam(z, -z.norm() / 2 + to_rat(t) * theta)


def make_x_plus(r: QuadNum | int | Fraction, m: QuadNum | int | Fraction, d: int = DEFAULT_D) -> Matrix3:
    r, m = unipotent_param(r, m, d)
    return Matrix3.of([[1, r, m], [0, 1, -r.conj()], [0, 0, 1]], r.d)


def make_x_minus(r: QuadNum | int | Fraction, m: QuadNum | int | Fraction, d: int = DEFAULT_D) -> Matrix3:
    r, m = unipotent_param(r, m, d)
    return Matrix3.of([[1, 0, 0], [r, 1, 0], [m, -r.conj(), 1]], r.d)


def make_h(lam: QuadNum | int | Fraction, d: int = DEFAULT_D) -> Matrix3:
    lam = _lift(lam, d)
    if lam.is_zero():
        raise DomainError("torus parameter must be nonzero")
    return Matrix3.of([[lam, 0, 0], [0, lam.conj() / lam, 0], [0, 0, lam.conj().inverse()]], lam.d)


def make_w(r: QuadNum | int | Fraction, m: QuadNum | int | Fraction, d: int = DEFAULT_D) -> Matrix3:
    r, m = unipotent_param(r, m, d)
    if m.is_zero():
        raise DomainError("Weyl element needs m != 0")
    return Matrix3.of([[0, 0, m], [0, -m.conj() / m, 0], [m.conj().inverse(), 0, 0]], m.d)


def weyl(d: int = DEFAULT_D) -> Matrix3:
    """The fixed Weyl representative w(0, t)."""
    return make_w(0, QuadNum.theta(d), d)


def sl2_embed(a: int | Fraction, b: int | Fraction, c: int | Fraction, dd: int | Fraction, d: int = DEFAULT_D) -> Matrix3:
    a, b, c, dd = (to_rat(x) for x in (a, b, c, dd))
    if a * dd - b * c != 1:
        raise DomainError("SL2 embedding needs ad - bc = 1")
    theta = QuadNum.theta(d)
    return Matrix3.of([[a, 0, b * theta], [0, 1, 0], [c / theta, 0, dd]], d)


# -- Bruhat decomposition -------------------------------------------------------


class BruhatData(NamedTuple):
    """g = h(lam) x(right) when big_cell is False, else x(left) h(lam) w x(right)."""

    big_cell: bool
    lam: QuadNum
    left: UnipotentParam | None
    right: UnipotentParam

    @property
    def cell(self) -> str:
        return "BigCell" if self.big_cell else "Borel"


def bruhat(g: Matrix3) -> BruhatData:
    d = g.d
    theta = QuadNum.theta(d)
    c = g[2, 0]
    if c.is_zero():
        f, gg, h = g[0, 0], g[0, 1], g[0, 2]
        return BruhatData(False, f, None, UnipotentParam(gg / f, h / f))
    a, b = g[0, 0], g[1, 0]
    dd, e = g[2, 1], g[2, 2]
    left = UnipotentParam(-b.conj() / c.conj(), a / c)
    lam = (c.conj() * theta).inverse()
    right = UnipotentParam(dd / c, e / c)
    return BruhatData(True, lam, left, right)


def bruhat_recompose(data: BruhatData, d: int = DEFAULT_D) -> Matrix3:
    right = make_x_plus(data.right.r, data.right.m, d)
    if not data.big_cell:
        return make_h(data.lam, d) @ right
    assert data.left is not None
    return make_x_plus(data.left.r, data.left.m, d) @ make_h(data.lam, d) @ weyl(d) @ right


# -- Iwahori factorisation ----------------------------------------------------


class IwahoriData(NamedTuple):
    """g = x_plus(upper) h(torus) x_minus(lower)."""

    upper: UnipotentParam
    torus: QuadNum
    lower: UnipotentParam


def iwahori(g: Matrix3, p: int | None = None) -> IwahoriData:
    """
    Factor g through upper unipotent, torus and lower unipotent.

    The identity holds whenever the (3,3) entry j is nonzero; if p is given,
    j must additionally be a unit at p.
    """
    c, f = g[0, 2], g[1, 2]
    gg, h, j = g[2, 0], g[2, 1], g[2, 2]
    if j.is_zero():
        raise DomainError("Iwahori factorisation needs a nonzero (3,3) entry")
    if p is not None and not is_local_unit(j, p):
        raise DomainError(f"(3,3) entry {j} is not a unit at {p}")
    jb = j.conj()
    upper = UnipotentParam(-f.conj() / jb, c / j)
    lower = UnipotentParam(-h.conj() / jb, gg / j)
    return IwahoriData(upper, jb.inverse(), lower)


def iwahori_recompose(data: IwahoriData, d: int = DEFAULT_D) -> Matrix3:
    return (
        make_x_plus(data.upper.r, data.upper.m, d)
        @ make_h(data.torus, d)
        @ make_x_minus(data.lower.r, data.lower.m, d)
    )


# -- integrality and congruence subgroups -------------------------------------------


def integral_coordinates(x: QuadNum) -> tuple[Fraction, Fraction]:
    """Coordinates of x in the integral basis of the maximal order of K."""
    if (-x.d) % 4 == 1:
        # basis 1, (1 + t)/2
        return x.a - x.b, 2 * x.b
    return x.a, x.b


def is_integral(x: QuadNum) -> bool:
    u, v = integral_coordinates(x)
    return u.denominator == 1 and v.denominator == 1


def is_locally_integral(x: QuadNum, p: int) -> bool:
    u, v = integral_coordinates(x)
    return is_p_integral(u, p) and is_p_integral(v, p)


def is_local_unit(x: QuadNum, p: int) -> bool:
    return not x.is_zero() and is_locally_integral(x, p) and val_p(x.norm(), p) == 0


def divisible_by(x: QuadNum, modulus: QuadNum | int, p: int | None = None) -> bool:
    """x lies in modulus * O (globally, or locally at p when p is given)."""
    if x.is_zero():
        return True
    q = x / _lift(modulus, x.d)
    return is_integral(q) if p is None else is_locally_integral(q, p)


class LevelKind(NamedTuple):
    split_type: SplitType
    modulus: QuadNum | None  # None means "p-integral entries"


def gamma_level(p: int, d: int, hat: bool = False) -> LevelKind:
    """Level of the compact open subgroup used at p (hat=True gives the splitting subgroup)."""
    kind = classify_prime(p, d)
    if p == 2:
        if kind is not SplitType.SPLIT:
            raise DomainError(f"p = 2 is {kind} for d={d}; only the split case is supported")
        return LevelKind(kind, QuadNum(Fraction(4 if hat else 8), Fraction(0), d))
    if kind is SplitType.RAMIFIED:
        return LevelKind(kind, QuadNum.theta(d))
    return LevelKind(kind, None)


def _in_level(g: Matrix3, p: int, level: LevelKind) -> bool:
    if level.modulus is None:
        return all(is_locally_integral(x, p) for x in g.entries())
    diff = g.rows
    for i in range(3):
        for jj in range(3):
            x = diff[i][jj] - (1 if i == jj else 0)
            if not divisible_by(x, level.modulus, p):
                return False
    return True


def in_gamma_p(g: Matrix3, p: int) -> bool:
    return is_member(g) and _in_level(g, p, gamma_level(p, g.d))


def in_gamma_hat_p(g: Matrix3, p: int) -> bool:
    return is_member(g) and _in_level(g, p, gamma_level(p, g.d, hat=True))


def global_level(d: int = DEFAULT_D) -> QuadNum:
    return 8 * QuadNum.theta(d)


def in_global_gamma(g: Matrix3) -> bool:
    """Membership in the principal congruence subgroup of level 8t of SU(2,1)(O)."""
    if not is_member(g):
        return False
    level = global_level(g.d)
    for i in range(3):
        for jj in range(3):
            if not divisible_by(g[i, jj] - (1 if i == jj else 0), level):
                return False
    return True


# -- random elements ------------------------------------------------------------


def _small_rat(rng: random.Random, height: int) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def _small_quad(rng: random.Random, height: int, d: int, nonzero: bool = False) -> QuadNum:
    while True:
        x = QuadNum(_small_rat(rng, height), _small_rat(rng, height), d)
        if not nonzero or not x.is_zero():
            return x


def random_generator(rng: random.Random, d: int = DEFAULT_D, height: int = 4) -> Matrix3:
    kind = rng.randrange(4)
    if kind == 0:
        par = param_from_z(_small_quad(rng, height, d), _small_rat(rng, height))
        return make_x_plus(par.r, par.m, d)
    if kind == 1:
        par = param_from_z(_small_quad(rng, height, d), _small_rat(rng, height))
        return make_x_minus(par.r, par.m, d)
    if kind == 2:
        # rational torus parameters are worth hitting on purpose
        if rng.random() < 0.3:
            return make_h(QuadNum(Fraction(rng.choice([-1, 1]) * rng.randint(1, height), rng.randint(1, height)), 0, d), d)
        return make_h(_small_quad(rng, height, d, nonzero=True), d)
    return weyl(d) if rng.random() < 0.5 else weyl(d).inv()


def random_group_element(seed: int, d: int = DEFAULT_D, length: int = 6, height: int = 3) -> Matrix3:
    """A deterministic word of length at most ``length`` in the generators."""
    rng = random.Random(seed)
    g = Matrix3.identity(d)
    for _ in range(rng.randint(1, length)):
        g = g @ random_generator(rng, d, height)
    return g


def _small_integral(rng: random.Random, height: int, d: int) -> QuadNum:
    """A random element of the maximal order with small coordinates."""
    return _integral_from_coords(rng.randint(-height, height), rng.randint(-height, height), d)


def random_gamma_generator(rng: random.Random, d: int = DEFAULT_D, height: int = 2) -> Matrix3:
    level = global_level(d)
    z = level * _small_integral(rng, height, d)
    # -N(z)/2 + s*t: with z in 8t*O the first term is already in 8t*O
    s = 8 * rng.randint(-height, height)
    par = param_from_z(z, s)
    if rng.random() < 0.5:
        return make_x_plus(par.r, par.m, d)
    return make_x_minus(par.r, par.m, d)


def random_sl2_congruence(rng: random.Random, d: int = DEFAULT_D, height: int = 6) -> tuple[int, int, int, int]:
    """
    (a, b, c, dd) in SL2(Z) whose embedding lies in the level-8t subgroup.

    That needs a, dd = 1 and c = 0 mod 8d and b = 0 mod 8.  With c = 8dk and
    dd = 1 mod 8d coprime to c, a = dd^-1 mod 8c makes b = (a dd - 1)/c a multiple of 8.
    """
    while True:
        c = 8 * d * rng.choice([k for k in range(-height, height + 1) if k])
        dd = 1 + 8 * d * rng.randint(-height, height)
        if gcd(c, dd) == 1:
            break
    a = pow(dd, -1, 8 * abs(c))
    return a, (a * dd - 1) // c, c, dd


def random_gamma_element(seed: int, d: int = DEFAULT_D, length: int = 4, height: int = 1) -> Matrix3:
    """
    A deterministic word in the level-8t subgroup.

    Letters are unipotents with parameters in 8t*O and, less often, embedded
    SL2 elements, which carry most of the nontrivial Kubota values.
    """
    rng = random.Random(seed)
    g = Matrix3.identity(d)
    for _ in range(rng.randint(1, length)):
        if rng.random() < 0.3:
            g = g @ sl2_embed(*random_sl2_congruence(rng, d), d)
        else:
            g = g @ random_gamma_generator(rng, d, height)
    return g


def split_prime_element(p: int, d: int = DEFAULT_D) -> QuadNum:
    """
    An integral element lying in exactly one prime above p (p split), to first order.

    Its norm is p times a unit at p; norm exactly p is preferred but need not
    exist when the primes above p are not principal.
    """
    best = None
    for bound in range(1, 4 * p):
        for u in range(-bound, bound + 1):
            for v in range(-bound, bound + 1):
                x = _integral_from_coords(u, v, d)
                n = int(x.norm())
                if n == p:
                    return x
                if best is None and n % p == 0 and n % (p * p) != 0:
                    best = x
        if best is not None and bound >= p:
            return best
    raise DomainError(f"no integral element of norm p*unit at p={p} for d={d}")


def _integral_from_coords(u: int, v: int, d: int) -> QuadNum:
    if (-d) % 4 == 1:
        return QuadNum(Fraction(u) + Fraction(v, 2), Fraction(v, 2), d)
    return QuadNum(Fraction(u), Fraction(v), d)


def random_gamma_p_element(seed: int, p: int, d: int = DEFAULT_D, length: int = 4, height: int = 3) -> Matrix3:
    """A deterministic element of the compact open subgroup used at p."""
    rng = random.Random(seed)
    level = gamma_level(p, d)
    g = Matrix3.identity(d)
    for _ in range(rng.randint(1, length)):
        kind = rng.randrange(4 if level.modulus is None else 3)
        if kind == 3:
            # torus and Weyl generators with unit parameters at p
            if rng.random() < 0.5:
                g = g @ weyl(d)
                continue
            while True:
                lam = _small_integral(rng, height + 3, d)
                if is_local_unit(lam, p):
                    break
            g = g @ make_h(lam, d)
            continue
        if level.modulus is None:
            choices = [_lift(1, d), _lift(1, d), _lift(p, d)]
            if level.split_type is SplitType.SPLIT:
                pi = split_prime_element(p, d)
                choices += [pi, pi.conj()]
            scale = rng.choice(choices)
        else:
            scale = level.modulus
        z = scale * _small_integral(rng, height, d)
        t = rng.randint(-height, height)
        if level.modulus is not None:
            # keep m in the level: t*theta must be divisible by the modulus
            t *= int(level.modulus.norm())
        par = param_from_z(z, t)
        if kind == 0:
            g = g @ make_x_plus(par.r, par.m, d)
        elif kind == 1:
            g = g @ make_x_minus(par.r, par.m, d)
        else:
            while True:
                mu = 1 + scale * _small_integral(rng, height, d) if level.modulus is not None else _small_integral(rng, height + 3, d)
                if is_local_unit(mu, p) and mu.is_zero() is False:
                    break
            g = g @ make_h(mu, d)
    return g


def random_nonunit_row_element(seed: int, p: int, d: int = DEFAULT_D, height: int = 3) -> Matrix3:
    """
    An element of Gamma_p (p odd and split) whose (3,1) and (3,3) entries are both non-units.

    Built as x_-(z, n) x(0, s*t) with n divisible by exactly one prime above p
    and s chosen so the (3,3) entry lies in the other one, then conjugated on
    the left by a random integral Borel element (which only rescales the bottom row).
    """
    if p == 2 or classify_prime(p, d) is not SplitType.SPLIT:
        raise DomainError("non-unit bottom rows only occur at odd split primes")
    rng = random.Random(seed)
    theta = QuadNum.theta(d)
    while True:
        z = _small_integral(rng, height, d)
        n_candidates = [u for u in range(p) if not (-z.norm() / 2 + u * theta).is_zero()]
        rng.shuffle(n_candidates)
        for u in n_candidates:
            n = -z.norm() / 2 + u * theta
            if is_local_unit(n, p) or divisible_by(n, p, p):
                continue
            lower = make_x_minus(z, n, d)
            for s in range(1, p):
                g = lower @ make_x_plus(0, s * theta, d)
                if not is_local_unit(g[2, 2], p):
                    par = param_from_z(_small_integral(rng, height, d), rng.randint(-height, height))
                    while True:
                        lam = _small_integral(rng, height + 3, d)
                        if is_local_unit(lam, p):
                            break
                    return make_h(lam, d) @ make_x_plus(par.r, par.m, d) @ g
        # every candidate failed for this z; draw another


# -- JSON exchange ------------------------------------------------------------------


def matrix_to_json(g: Matrix3) -> list[list[str]]:
    return [[render_quad(x) for x in r] for r in g.rows]


def matrix_from_json(data: object, d: int = DEFAULT_D, check: bool = True) -> Matrix3:
    if not isinstance(data, list) or len(data) != 3 or not all(isinstance(r, list) and len(r) == 3 for r in data):
        raise DomainError("matrix JSON must be a 3x3 array of strings")
    entries = []
    for r in data:
        row = []
        for x in r:
            if isinstance(x, (int, float)) and not isinstance(x, bool):
                x = str(x)
            if not isinstance(x, str):
                raise DomainError(f"matrix entry {x!r} is not a string")
            row.append(parse_quad(x, d))
        entries.append(row)
    g = Matrix3.of(entries, d)
    if check:
        failure = membership_failure(g)
        if failure is not None:
            raise DomainError(f"not an element of SU(2,1): {failure}")
    return g


def load_matrix(path: str, d: int = DEFAULT_D) -> Matrix3:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh), d)
