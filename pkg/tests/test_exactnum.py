from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from metaplectic_su21.exactnum import (
    DomainError,
    QuadNum,
    conj,
    delta2_over_theta,
    deltas,
    is_in_k,
    is_in_k_theta,
    norm,
    parse_quad,
    quad,
    render_quad,
    trace,
    y_of,
)

T = QuadNum.theta(7)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=20)
quads = st.builds(lambda a, b: QuadNum(a, b, 7), rats, rats)
nonzero_quads = quads.filter(lambda x: not x.is_zero())


def test_field_examples():
    assert conj(1 + 2 * T) == 1 - 2 * T
    assert T * T == -7
    assert (1 + T) / (1 + T) == 1


def test_norm_trace_examples():
    assert norm(1 + T) == 8
    assert trace(T) == 0
    assert norm(QuadNum(0, 0, 7)) == 0


def test_membership_predicates():
    assert is_in_k(quad(5))
    assert not is_in_k(T) and is_in_k_theta(T)
    assert not is_in_k(1 + T)


def test_division_by_zero_is_domain_error():
    with pytest.raises(DomainError):
        T / QuadNum(0, 0, 7)


def test_mixing_fields_rejected():
    with pytest.raises(DomainError):
        QuadNum.theta(7) + QuadNum.theta(3)


def test_deltas_rational_case():
    d1, d2 = deltas(quad(5))
    assert (d1, d2) == (5 * T, T)


def test_deltas_generic_case():
    lam = quad(3, -2)
    d1, d2 = deltas(lam)
    assert d2 == -1 / (2 * lam.b * T)
    assert d1 == Fraction(-1, 2) - lam.a / (2 * lam.b * T)


@given(nonzero_quads)
def test_deltas_ratio_and_delta2_on_theta_line(lam):
    d1, d2 = deltas(lam)
    assert d1 / d2 == lam
    assert d2.in_k_theta()
    assert d2 / T == delta2_over_theta(lam)


def test_y_of():
    assert y_of(quad(3)) == 0
    assert y_of(T) == 1
    assert y_of(1 + T) == 1
    with pytest.raises(DomainError):
        y_of(QuadNum(0, 0, 7))


@given(quads, quads, quads)
def test_ring_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x


@given(quads, quads)
def test_conjugation_is_multiplicative_and_norm_too(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x * y).norm() == x.norm() * y.norm()
    assert x * x.conj() == x.norm()
    assert x + x.conj() == x.trace()


@given(nonzero_quads)
def test_inverse(x):
    assert x * x.inverse() == 1


@given(quads)
def test_render_parse_round_trip(x):
    assert parse_quad(render_quad(x)) == x


@pytest.mark.parametrize("text", ["", "+", "1+", "t", "1/0", "2*t+1", "1**t", "a"])
def test_parse_rejects_malformed(text):
    with pytest.raises(DomainError):
        parse_quad(text)


def test_parse_accepts_signed_theta_part():
    assert parse_quad("1+-2*t") == quad(1, -2)
    assert parse_quad("-3/4*t") == quad(0, Fraction(-3, 4))
