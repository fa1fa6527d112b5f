import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from metaplectic_su21.exactnum import DomainError, QuadNum, quad
from metaplectic_su21.group import (
    Matrix3,
    bruhat,
    bruhat_recompose,
    gamma_level,
    in_gamma_hat_p,
    in_gamma_p,
    in_global_gamma,
    is_local_unit,
    is_member,
    iwahori,
    iwahori_recompose,
    load_matrix,
    make_h,
    make_w,
    make_x_minus,
    make_x_plus,
    matrix_from_json,
    matrix_to_json,
    param_from_z,
    random_gamma_element,
    random_gamma_p_element,
    random_group_element,
    random_nonunit_row_element,
    sl2_embed,
    split_prime_element,
    weyl,
)

T = QuadNum.theta(7)
I3 = Matrix3.identity(7)


def diag(*xs):
    return Matrix3.of([[xs[0], 0, 0], [0, xs[1], 0], [0, 0, xs[2]]])


def antidiag(*xs):
    return Matrix3.of([[0, 0, xs[0]], [0, xs[1], 0], [xs[2], 0, 0]])


def test_unipotent_examples():
    assert make_x_plus(0, 0) == I3
    assert make_x_plus(0, T)[0, 2] == T
    g = make_x_minus(1, Fraction(-1, 2))
    assert (g[1, 0], g[2, 0], g[2, 1]) == (1, Fraction(-1, 2), -1)
    with pytest.raises(DomainError):
        make_x_plus(1, 0)


def test_torus_examples():
    assert make_h(1) == I3
    # the (3,3) entry is conj(lam)^-1; for lam = t that is t/7, which keeps det = 1
    assert make_h(T) == diag(T, -1, T.conj().inverse())
    assert make_h(2) == diag(2, 1, Fraction(1, 2))
    with pytest.raises(DomainError):
        make_h(0)


def test_weyl_examples():
    w = make_w(0, T)
    assert w == antidiag(T, 1, T.conj().inverse())
    assert w**4 == I3
    # middle entry is -conj(m)/m = -1 for rational m
    assert make_w(1, Fraction(-1, 2)) == antidiag(Fraction(-1, 2), -1, -2)
    with pytest.raises(DomainError):
        make_w(0, 0)


def test_membership_examples():
    assert is_member(I3)
    assert not is_member(diag(2, 1, 1))
    assert is_member(sl2_embed(2, 1, 1, 1))


def test_sl2_embed_examples():
    assert sl2_embed(1, 0, 0, 1) == I3
    assert sl2_embed(1, 1, 0, 1) == make_x_plus(0, T)
    with pytest.raises(DomainError):
        sl2_embed(1, 1, 1, 1)


def test_bruhat_examples():
    b = bruhat(I3)
    assert (b.cell, b.lam, tuple(b.right)) == ("Borel", 1, (0, 0))
    b = bruhat(weyl())
    assert b.cell == "BigCell" and b.lam == 1 and tuple(b.left) == (0, 0) and tuple(b.right) == (0, 0)
    b = bruhat(make_h(2) @ make_x_plus(0, T))
    assert b.cell == "Borel" and b.lam == 2 and tuple(b.right) == (0, T)


def test_iwahori_examples():
    f = iwahori(I3)
    assert tuple(f.upper) == (0, 0) and f.torus == 1 and tuple(f.lower) == (0, 0)
    f = iwahori(make_x_minus(0, 8 * T))
    assert tuple(f.upper) == (0, 0) and f.torus == 1 and tuple(f.lower) == (0, 8 * T)
    with pytest.raises(DomainError):
        iwahori(weyl())


@given(st.integers(0, 10**6))
def test_random_elements_are_members_and_decompose(seed):
    g = random_group_element(seed)
    assert is_member(g)
    assert bruhat_recompose(bruhat(g)) == g
    if not g[2, 2].is_zero():
        assert iwahori_recompose(iwahori(g)) == g


@given(st.integers(0, 10**6))
def test_random_gamma_elements_in_global_level(seed):
    g = random_gamma_element(seed)
    assert in_global_gamma(g)
    assert all(in_gamma_p(g, p) for p in (2, 3, 7, 11))


def test_random_elements_are_deterministic():
    assert random_group_element(5) == random_group_element(5)
    assert random_gamma_element(5) == random_gamma_element(5)


def test_gamma_p_examples():
    assert all(in_gamma_p(I3, p) for p in (2, 3, 5, 7, 11))
    # lam and conj(lam) agree mod t, so h(1 + t) is congruent to I mod t; h(2) is not
    assert in_gamma_p(make_h(1 + T), 7)
    assert not in_gamma_p(make_h(2), 7)
    par = param_from_z(8 * T * quad(1, 1), 8)
    assert in_gamma_p(make_x_plus(par.r, par.m), 2)
    assert not in_gamma_p(make_x_plus(0, 4 * T), 2) and in_gamma_hat_p(make_x_plus(0, 4 * T), 2)


def test_gamma_level_table():
    assert gamma_level(3, 7).modulus is None
    assert gamma_level(11, 7).modulus is None
    assert gamma_level(7, 7).modulus == T
    assert gamma_level(2, 7).modulus == 8 and gamma_level(2, 7, hat=True).modulus == 4
    with pytest.raises(DomainError):
        gamma_level(2, 5)


@pytest.mark.parametrize("p", [2, 3, 7, 11])
def test_random_gamma_p_elements(p):
    for s in range(30):
        assert in_gamma_p(random_gamma_p_element(s, p), p)


def test_nonunit_row_elements():
    for s in range(10):
        g = random_nonunit_row_element(s, 11)
        assert in_gamma_p(g, 11)
        assert not is_local_unit(g[2, 0], 11) and not is_local_unit(g[2, 2], 11)


def test_inverse_and_json_round_trip(tmp_path):
    g = random_group_element(3)
    assert g @ g.inv() == I3
    path = tmp_path / "g.json"
    path.write_text(json.dumps(matrix_to_json(g)))
    assert load_matrix(str(path)) == g


def test_json_rejects_non_members():
    with pytest.raises(DomainError, match="hermitian"):
        matrix_from_json([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "2"]])
    with pytest.raises(DomainError):
        matrix_from_json([["1", "0"], ["0", "1"]])


@pytest.mark.parametrize("p,d", [(2, 7), (11, 7), (3, 5), (7, 5)])
def test_split_prime_element_has_valuation_one(p, d):
    # for d = 5 the primes above 3 and 7 are not principal
    n = int(split_prime_element(p, d).norm())
    assert n % p == 0 and n % (p * p) != 0


def test_nonunit_rows_for_nonprincipal_split_prime():
    g = random_nonunit_row_element(1, 3, 5)
    assert in_gamma_p(g, 3)
    assert not is_local_unit(g[2, 0], 3) and not is_local_unit(g[2, 2], 3)
