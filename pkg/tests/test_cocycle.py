import pytest
from hypothesis import given, strategies as st

from metaplectic_su21.cocycle import (
    CocycleInconsistency,
    SymbolProduct,
    X_of,
    commutator_hilbert,
    commutator_torus,
    sigma,
    sigma_all_places,
    sigma_bruhat,
    sigma_symbols,
    sigma_torus,
    sigma_torus_delta_symbols,
    u_of,
)
from metaplectic_su21.exactnum import DomainError, QuadNum, quad
from metaplectic_su21.group import Matrix3, make_h, make_x_plus, param_from_z, random_group_element, weyl
from metaplectic_su21.localfield import REAL, Place, hilbert_k

T = QuadNum.theta(7)
PLACES = [REAL, Place(2), Place(3), Place(5), Place(7)]

seeds = st.integers(0, 10**6)
small_quads = st.builds(
    lambda a, b: QuadNum(a, b, 7),
    st.fractions(min_value=-12, max_value=12, max_denominator=4),
    st.fractions(min_value=-12, max_value=12, max_denominator=4),
).filter(lambda x: not x.is_zero())
places = st.sampled_from(PLACES)


def test_X_examples():
    assert X_of(Matrix3.identity()) == 1
    assert X_of(weyl()) == 1
    lam = quad(2, 3)
    assert X_of(make_h(lam)) == lam


def test_u_examples():
    assert u_of(quad(1), quad(1), 5) == 1
    assert u_of(T, T, 3) == 1
    assert u_of(quad(2), quad(3), 3) == hilbert_k(2, -3, 3)
    with pytest.raises(DomainError):
        u_of(quad(0), quad(1), 3)


def test_sigma_torus_examples():
    assert sigma_torus(quad(2), quad(3), 3) == -1
    assert sigma_torus(quad(-1), quad(-1), REAL) == -1


@given(small_quads, places)
def test_sigma_torus_with_one(lam, v):
    assert sigma_torus(lam, quad(1), v) == 1


@given(small_quads, small_quads, places)
def test_torus_trace_form_matches_delta_form_and_general_formula(lam, mu, v):
    s = sigma_torus(lam, mu, v)
    assert sigma_torus_delta_symbols(lam, mu).evaluate(v) == s
    assert sigma(make_h(lam), make_h(mu), v) == s


def test_sigma_examples():
    assert sigma(make_h(2), make_h(3), 3) == -1
    assert sigma(make_h(-1), make_h(-1), REAL) == -1


@given(seeds, small_quads, st.fractions(min_value=-5, max_value=5, max_denominator=3), places)
def test_unipotent_triviality_without_shortcut(seed, z, t, v):
    g = random_group_element(seed)
    par = param_from_z(z, t)
    n = make_x_plus(par.r, par.m)
    assert sigma_symbols(g, n, fast_path=False).evaluate(v) == 1
    assert sigma_symbols(n, g, fast_path=False).evaluate(v) == 1


@given(seeds, places)
def test_cocycle_identity(seed, v):
    g1, g2, g3 = (random_group_element(3 * seed + k) for k in range(3))
    assert sigma(g1, g2, v) * sigma(g1 @ g2, g3, v) == sigma(g1, g2 @ g3, v) * sigma(g2, g3, v)


@given(seeds, places)
def test_closed_formula_matches_bruhat_route(seed, v):
    g1, g2 = random_group_element(2 * seed), random_group_element(2 * seed + 1)
    assert sigma(g1, g2, v) == sigma_bruhat(g1, g2, v)


@given(seeds)
def test_product_over_all_places(seed):
    g1, g2 = random_group_element(2 * seed), random_group_element(2 * seed + 1)
    prod = 1
    for s in sigma_all_places(g1, g2).values():
        prod *= s
    assert prod == 1


def test_all_places_trivial_for_identity():
    g = random_group_element(11)
    assert set(sigma_all_places(Matrix3.identity(), g).values()) == {1}


def test_rational_ratio_reached_when_a_bottom_left_entry_vanishes():
    hits = 0
    for s in range(300):
        g1, g2 = random_group_element(2 * s), random_group_element(2 * s + 1)
        if g1[2, 0].is_zero() or g2[2, 0].is_zero():
            hits += 1
            sigma_symbols(g1, g2)  # must not raise CocycleInconsistency
    assert hits > 20


def test_commutator_examples():
    lam = quad(3, 2)
    assert commutator_torus(lam, lam, 5) == 1
    assert commutator_torus(quad(2), quad(3), 5) == 1
    assert commutator_torus(T, 1 + T, 11) == commutator_hilbert(T, 1 + T, 11)
    with pytest.raises(DomainError):
        commutator_torus(T, T, 2)


@given(small_quads, small_quads, st.sampled_from([3, 5, 11, 13]))
def test_commutator_law(lam, mu, p):
    assert commutator_torus(lam, mu, p) == commutator_hilbert(lam, mu, p)


def test_symbol_product_rejects_zero():
    with pytest.raises(CocycleInconsistency):
        SymbolProduct.of((0, 3))
