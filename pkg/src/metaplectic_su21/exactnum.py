"""
Exact arithmetic in Q and in the imaginary quadratic field K = Q(t), t^2 = -d.

Rationals are plain ``fractions.Fraction`` values. Elements a + b*t of K are
``QuadNum`` instances; the discriminant parameter d travels with each value so
that mixing fields is caught early.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

Rat = Fraction
RatLike = Union[int, Fraction]

DEFAULT_D = 7


class DomainError(ValueError):
    """An argument lies outside the domain of an exact operation."""


def to_rat(x: RatLike | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


_RAT_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rat(text: str) -> Fraction:
    s = text.strip()
    if not _RAT_RE.match(s):
        raise DomainError(f"malformed rational {text!r}")
    if "/" in s and int(s.split("/")[1]) == 0:
        raise DomainError(f"zero denominator in {text!r}")
    return Fraction(s)


def render_rat(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True, slots=True)
class QuadNum:
    """The element a + b*t of Q(t), t^2 = -d."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = DEFAULT_D

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", to_rat(self.a))
        object.__setattr__(self, "b", to_rat(self.b))
        if self.d <= 0:
            raise DomainError("d must be positive")

    @classmethod
    def theta(cls, d: int = DEFAULT_D) -> QuadNum:
        return cls(Fraction(0), Fraction(1), d)

    def _coerce(self, other: object) -> QuadNum:
        if isinstance(other, QuadNum):
            if other.d != self.d:
                raise DomainError(f"mixing fields d={self.d} and d={other.d}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadNum(Fraction(other), Fraction(0), self.d)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other: object) -> QuadNum:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadNum(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self) -> QuadNum:
        return QuadNum(-self.a, -self.b, self.d)

    def __sub__(self, other: object) -> QuadNum:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadNum(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other: object) -> QuadNum:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> QuadNum:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadNum(
            self.a * o.a - self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadNum:
        n = self.norm()
        if n == 0:
            raise DomainError("division by zero in K")
        return QuadNum(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other: object) -> QuadNum:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> QuadNum:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int) -> QuadNum:
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadNum(Fraction(1), Fraction(0), self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadNum):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def conj(self) -> QuadNum:
        return QuadNum(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a + self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def in_k(self) -> bool:
        return self.b == 0

    def in_k_theta(self) -> bool:
        return self.a == 0 and self.b != 0

    def rational(self) -> Fraction:
        """The value as a rational; only valid when the t-part vanishes."""
        if self.b != 0:
            raise DomainError(f"{self} is not rational")
        return self.a

    def __str__(self) -> str:
        return render_quad(self)

    def __repr__(self) -> str:
        return f"QuadNum({render_quad(self)!r}, d={self.d})"


def norm(x: QuadNum) -> Fraction:
    return x.norm()


def trace(x: QuadNum) -> Fraction:
    return x.trace()


def conj(x: QuadNum) -> QuadNum:
    return x.conj()


def is_in_k(x: QuadNum) -> bool:
    return x.in_k()


def is_in_k_theta(x: QuadNum) -> bool:
    return x.in_k_theta()


def quad(a: RatLike | str, b: RatLike | str = 0, d: int = DEFAULT_D) -> QuadNum:
    return QuadNum(to_rat(a), to_rat(b), d)


def render_quad(x: QuadNum) -> str:
    if x.b == 0:
        return render_rat(x.a)
    tpart = render_rat(x.b) + "*t"
    if x.a == 0:
        return tpart
    if x.b < 0:
        return render_rat(x.a) + tpart
    return render_rat(x.a) + "+" + tpart


_QUAD_RE = re.compile(
    r"^(?:(?P<a>[+-]?\d+(?:/\d+)?)(?=$|[+-]))?"
    r"(?:(?P<sign>[+-]?)(?P<b>\d+(?:/\d+)?)\*t)?$"
)


def parse_quad(text: str, d: int = DEFAULT_D) -> QuadNum:
    """Parse "<rat>", "<rat>*t" or "<rat>+<rat>*t" (a signed t-part is also accepted)."""
    s = text.replace(" ", "")
    s = s.replace("+-", "-").replace("-+", "-")
    if s in ("", "+", "-"):
        raise DomainError(f"malformed element {text!r}")
    m = _QUAD_RE.match(s)
    if not m or (m.group("a") is None and m.group("b") is None):
        raise DomainError(f"malformed element {text!r}")
    a = parse_rat(m.group("a")) if m.group("a") is not None else Fraction(0)
    b = Fraction(0)
    if m.group("b") is not None:
        b = parse_rat(m.group("b"))
        if m.group("sign") == "-":
            b = -b
        elif m.group("sign") == "" and m.group("a") is not None:
            raise DomainError(f"malformed element {text!r}")
    return QuadNum(a, b, d)


class DeltaPair(NamedTuple):
    delta1: QuadNum
    delta2: QuadNum


def deltas(lam: QuadNum) -> DeltaPair:
    """The pair (delta1, delta2) with delta2 in Q*t and delta1/delta2 = lam."""
    if lam.is_zero():
        raise DomainError("deltas undefined at 0")
    t = QuadNum.theta(lam.d)
    if lam.in_k():
        return DeltaPair(lam * t, t)
    # delta2 = -1/(2 b t) = 1/(conj(lam) - lam)
    delta2 = (-1 / (2 * lam.b)) * t.inverse()
    delta1 = Fraction(-1, 2) - (lam.a / (2 * lam.b)) * t.inverse()
    return DeltaPair(delta1, delta2)


def delta2_over_theta(lam: QuadNum) -> Fraction:
    """delta2(lam)/t as a rational: 1 when lam is rational, else -1/tr(lam*t)."""
    if lam.is_zero():
        raise DomainError("delta2 undefined at 0")
    if lam.in_k():
        return Fraction(1)
    return Fraction(1) / (2 * lam.d * lam.b)


def y_of(lam: QuadNum) -> int:
    if lam.is_zero():
        raise DomainError("y undefined at 0")
    return 0 if lam.in_k() else 1
