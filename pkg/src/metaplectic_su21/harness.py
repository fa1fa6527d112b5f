"""
Seeded invariant suites.

Every check draws its trial inputs from ``trial_seed(master, check, i)``, so a
run is reproducible from its flags alone, and a failure record carries enough
data (seed, inputs, place) to replay the single trial.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable

from sympy import primerange

from .analytic import act, denom, multiplier_j, random_hpoint, sigma_infty_via_phi
from .cocycle import (
    commutator_hilbert,
    commutator_torus,
    sigma,
    sigma_all_places,
    sigma_bruhat,
    sigma_symbols,
    sigma_torus,
)
from .exactnum import DomainError, QuadNum, render_quad
from .group import (
    Matrix3,
    _integral_from_coords,
    gamma_level,
    global_level,
    in_gamma_hat_p,
    in_gamma_p,
    make_h,
    make_x_minus,
    make_x_plus,
    matrix_to_json,
    param_from_z,
    random_gamma_element,
    random_gamma_p_element,
    random_group_element,
    random_nonunit_row_element,
    random_sl2_congruence,
    sl2_embed,
)
from .kubota import (
    KubotaContext,
    extend_primes,
    kappa_borel_closed_form,
    kappa_global,
    kappa_p,
    kappa_sl2,
    kappa_torus_closed_form,
    support_primes,
    torus_local_product,
)
from .localfield import REAL, Place, SplitType, classify_prime, hilbert_conic_oracle, hilbert_k, hilbert_product

SUITES = (
    "hilbert",
    "cocycle",
    "commutator",
    "splitting",
    "kubota-local",
    "kubota-global",
    "borel",
    "sl2",
    "torus-restriction",
    "multiplier",
)

REL_TOL = 1e-9


class ConfigError(DomainError):
    """The run configuration does not satisfy a suite's hypotheses."""


@dataclass(frozen=True)
class RunConfig:
    d: int = 7
    seed: int = 0
    trials: int = 100
    prime_bound: int | None = None
    p: int | None = None

    def primes(self, default: Iterable[int]) -> list[int]:
        """The --p prime if given, else the defaults together with any primes up to the bound."""
        if self.p is not None:
            return [self.p]
        extra = primerange(2, self.prime_bound + 1) if self.prime_bound else ()
        return sorted(set(default) | set(extra))

    def require_global(self) -> None:
        if classify_prime(2, self.d) is not SplitType.SPLIT:
            raise ConfigError(f"2 does not split for d={self.d} (-d mod 8 = {(-self.d) % 8}); global operations need it")


@dataclass
class Report:
    suite: str
    trials: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: Report) -> Report:
        self.trials += other.trials
        self.failures += other.failures
        return self

    def to_json(self) -> dict:
        return {"suite": self.suite, "trials": self.trials, "failures": self.failures}


def trial_seed(master: int, check: str, i: int) -> int:
    digest = hashlib.sha256(f"{master}/{check}/{i}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _mat(g: Matrix3) -> list[list[str]]:
    return matrix_to_json(g)


class _Run:
    """Collects trials and failures for one check."""

    def __init__(self, name: str, cfg: RunConfig):
        self.name, self.cfg = name, cfg
        self.report = Report(name)

    def seeds(self, n: int | None = None) -> Iterable[tuple[int, int]]:
        for i in range(self.cfg.trials if n is None else n):
            self.report.trials += 1
            yield i, trial_seed(self.cfg.seed, self.name, i)

    def fail(self, seed: int, place: object = None, **inputs: object) -> None:
        self.report.failures.append(
            {"check": self.name, "seed": seed, "place": None if place is None else str(place), "inputs": inputs}
        )


# -- localfield ---------------------------------------------------------------------------


def hilbert_oracle_exhaustive(bound: int = 30, primes: Iterable[int] = (2, 3, 5, 7, 11)) -> Report:
    run = _Run("hilbert-oracle-exhaustive", RunConfig())
    for p in primes:
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                if a == 0 or b == 0:
                    continue
                run.report.trials += 1
                if hilbert_k(a, b, p) != hilbert_conic_oracle(a, b, p):
                    run.fail(0, p, a=a, b=b)
    return run.report


def check_hilbert_oracle(cfg: RunConfig) -> Report:
    run = _Run("hilbert-oracle", cfg)
    primes = cfg.primes((2, 3, 5, 7, 11))
    for _, s in run.seeds():
        rng = random.Random(s)
        a = rng.choice([x for x in range(-30, 31) if x])
        b = rng.choice([x for x in range(-30, 31) if x])
        p = rng.choice(primes)
        if hilbert_k(a, b, p) != hilbert_conic_oracle(a, b, p):
            run.fail(s, p, a=a, b=b)
    return run.report


def _random_rational(rng: random.Random, height: int = 10**4) -> Fraction:
    while True:
        x = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if x:
            return x


def check_product_formula(cfg: RunConfig) -> Report:
    run = _Run("product-formula", cfg)
    for _, s in run.seeds():
        rng = random.Random(s)
        a, b = _random_rational(rng), _random_rational(rng)
        if hilbert_product(a, b) != 1:
            run.fail(s, "all", a=str(a), b=str(b))
    return run.report


# -- cocycle ------------------------------------------------------------------------------


def _cocycle_places(cfg: RunConfig) -> list[Place]:
    primes = cfg.primes({2, 3, 5, 7, *_prime_divisors(cfg.d)})
    return [REAL] + [Place(q) for q in primes]


def _prime_divisors(n: int) -> list[int]:
    return [q for q in primerange(2, n + 1) if n % q == 0]


def check_cocycle_identity(cfg: RunConfig, places: list[Place] | None = None) -> Report:
    run = _Run("cocycle-identity", cfg)
    places = places or _cocycle_places(cfg)
    for _, s in run.seeds():
        g1, g2, g3 = (random_group_element(3 * s + k, cfg.d) for k in range(3))
        sp = [sigma_symbols(g1, g2), sigma_symbols(g1 @ g2, g3), sigma_symbols(g1, g2 @ g3), sigma_symbols(g2, g3)]
        for v in places:
            a, b, c, e = (x.evaluate(v) for x in sp)
            if a * b != c * e:
                run.fail(s, v, g1=_mat(g1), g2=_mat(g2), g3=_mat(g3))
    return run.report


def _random_upper(rng: random.Random, d: int, height: int = 3) -> Matrix3:
    z = QuadNum(Fraction(rng.randint(-height, height), rng.randint(1, height)), Fraction(rng.randint(-height, height), rng.randint(1, height)), d)
    par = param_from_z(z, Fraction(rng.randint(-height, height), rng.randint(1, height)))
    return make_x_plus(par.r, par.m, d)


def check_unipotent_triviality(cfg: RunConfig, places: list[Place] | None = None) -> Report:
    """sigma(g, n) = sigma(n, g) = 1 without the shortcut, and sigma(n g1, g2 n') = sigma(g1, g2), sigma(g1, n g2) = sigma(g1 n, g2)."""
    run = _Run("unipotent-triviality", cfg)
    places = places or _cocycle_places(cfg)
    for _, s in run.seeds():
        rng = random.Random(s)
        g1, g2 = random_group_element(2 * s, cfg.d), random_group_element(2 * s + 1, cfg.d)
        n1, n2, n3 = (_random_upper(rng, cfg.d) for _ in range(3))
        base = sigma_symbols(g1, g2)
        products = [
            sigma_symbols(g1, n1, fast_path=False),
            sigma_symbols(n1, g1, fast_path=False),
        ]
        for v in places:
            ref = base.evaluate(v)
            ok = all(x.evaluate(v) == 1 for x in products)
            ok = ok and sigma(n1 @ g1, g2 @ n2, v) == ref
            ok = ok and sigma(g1, n3 @ g2, v) == sigma(g1 @ n3, g2, v)
            if not ok:
                run.fail(s, v, g1=_mat(g1), g2=_mat(g2), n1=_mat(n1), n2=_mat(n2), n3=_mat(n3))
    return run.report


def check_sigma_routes(cfg: RunConfig, places: list[Place] | None = None) -> Report:
    """The closed formula against the Bruhat reduction, and sigma on torus pairs against the trace form."""
    run = _Run("sigma-routes", cfg)
    places = places or _cocycle_places(cfg)
    for _, s in run.seeds():
        rng = random.Random(s)
        g1, g2 = random_group_element(2 * s, cfg.d), random_group_element(2 * s + 1, cfg.d)
        lam, mu = (_random_quad(rng, cfg.d) for _ in range(2))
        for v in places:
            if sigma(g1, g2, v) != sigma_bruhat(g1, g2, v):
                run.fail(s, v, g1=_mat(g1), g2=_mat(g2))
            if sigma(make_h(lam, cfg.d), make_h(mu, cfg.d), v) != sigma_torus(lam, mu, v):
                run.fail(s, v, lam=render_quad(lam), mu=render_quad(mu))
    return run.report


def check_sigma_product(cfg: RunConfig) -> Report:
    run = _Run("sigma-product", cfg)
    for _, s in run.seeds():
        g1, g2 = random_group_element(2 * s, cfg.d), random_group_element(2 * s + 1, cfg.d)
        vals = sigma_all_places(g1, g2)
        prod = 1
        for x in vals.values():
            prod *= x
        if prod != 1:
            run.fail(s, "all", g1=_mat(g1), g2=_mat(g2))
    return run.report


def _random_quad(rng: random.Random, d: int, height: int = 20) -> QuadNum:
    while True:
        b = 0 if rng.random() < 0.2 else rng.randint(-height, height)
        x = QuadNum(Fraction(rng.randint(-height, height), rng.randint(1, 5)), Fraction(b, rng.randint(1, 5)), d)
        if not x.is_zero():
            return x


def check_commutator(cfg: RunConfig) -> Report:
    run = _Run("commutator", cfg)
    primes = [cfg.p] if cfg.p is not None else [q for q in cfg.primes((3, 5, 11, 13)) if q != 2 and cfg.d % q]
    for _, s in run.seeds():
        rng = random.Random(s)
        lam, mu = _random_quad(rng, cfg.d), _random_quad(rng, cfg.d)
        for p in primes:
            if commutator_torus(lam, mu, p) != commutator_hilbert(lam, mu, p):
                run.fail(s, p, lam=render_quad(lam), mu=render_quad(mu))
    return run.report


# -- local Kubota symbols ---------------------------------------------------------------------


def _local_primes(cfg: RunConfig, default: Iterable[int]) -> list[int]:
    out = []
    for p in cfg.primes(default):
        try:
            gamma_level(p, cfg.d)
        except DomainError:
            continue
        out.append(p)
    return out


def _gamma_p_pair(p: int, s: int, d: int) -> tuple[Matrix3, Matrix3]:
    g1, g2 = random_gamma_p_element(2 * s, p, d), random_gamma_p_element(2 * s + 1, p, d)
    # at odd split primes mix in elements whose bottom row has no unit entry
    if p != 2 and classify_prime(p, d) is SplitType.SPLIT and s % 3 == 0:
        g1 = random_nonunit_row_element(s, p, d)
    return g1, g2


def check_local_coboundary(cfg: RunConfig, primes: Iterable[int] | None = None) -> Report:
    run = _Run("local-coboundary", cfg)
    primes = list(primes) if primes is not None else _local_primes(cfg, (2, 3, 7, 11))
    for p in primes:
        ctx = KubotaContext.make(p, cfg.d)
        for _, s in run.seeds():
            g1, g2 = _gamma_p_pair(p, s, cfg.d)
            if kappa_p(g1, ctx) * kappa_p(g2, ctx) * sigma(g1, g2, p) != kappa_p(g1 @ g2, ctx):
                run.fail(s, p, g1=_mat(g1), g2=_mat(g2))
    return run.report


def _random_hat2_element(s: int, d: int, length: int = 3) -> Matrix3:
    """A word in unipotents congruent to I mod 4 and tori h(1 + 4z); an element of the larger group at 2."""
    rng = random.Random(s)
    g = Matrix3.identity(d)
    for _ in range(rng.randint(1, length)):
        z = 4 * _integral_from_coords(rng.randint(-2, 2), rng.randint(-2, 2), d)
        kind = rng.randrange(3)
        if kind == 2:
            lam = 1 + z
            if lam.norm().numerator % 2 == 0:
                continue
            g = g @ make_h(lam, d)
            continue
        par = param_from_z(z, 4 * rng.randint(-2, 2))
        g = g @ (make_x_plus if kind == 0 else make_x_minus)(par.r, par.m, d)
    return g


def check_square_rule(cfg: RunConfig) -> Report:
    """kappa_2(g^2) = sigma_2(g, g) for g congruent to I mod 4 (so that g^2 is congruent to I mod 8)."""
    run = _Run("square-rule", cfg)
    if classify_prime(2, cfg.d) is not SplitType.SPLIT:
        return run.report
    ctx = KubotaContext.make(2, cfg.d)
    for _, s in run.seeds():
        g = _random_hat2_element(s, cfg.d)
        if not in_gamma_hat_p(g, 2) or not in_gamma_p(g @ g, 2):
            run.fail(s, 2, g=_mat(g), reason="generator left the level")
            continue
        if kappa_p(g @ g, ctx) != sigma(g, g, 2):
            run.fail(s, 2, g=_mat(g))
    return run.report


def _gamma_p_unipotent(rng: random.Random, p: int, d: int) -> Matrix3:
    level = gamma_level(p, d)
    modulus = level.modulus if level.modulus is not None else QuadNum(Fraction(1), Fraction(0), d)
    z = modulus * _integral_from_coords(rng.randint(-3, 3), rng.randint(-3, 3), d)
    t = rng.randint(-3, 3) * int(modulus.norm())
    par = param_from_z(z, t)
    return make_x_plus(par.r, par.m, d)


def check_unipotent_invariance(cfg: RunConfig) -> Report:
    run = _Run("unipotent-invariance", cfg)
    for p in _local_primes(cfg, (2, 3, 7, 11)):
        ctx = KubotaContext.make(p, cfg.d)
        for _, s in run.seeds():
            rng = random.Random(s)
            g = random_gamma_p_element(s, p, cfg.d)
            n1, n2 = _gamma_p_unipotent(rng, p, cfg.d), _gamma_p_unipotent(rng, p, cfg.d)
            k = kappa_p(g, ctx)
            if not (kappa_p(n1 @ g, ctx) == k == kappa_p(g @ n2, ctx)):
                run.fail(s, p, g=_mat(g), n1=_mat(n1), n2=_mat(n2))
    return run.report


# -- global Kubota symbol -----------------------------------------------------------------------


def _gamma_pair(cfg: RunConfig, s: int) -> tuple[Matrix3, Matrix3]:
    return random_gamma_element(2 * s, cfg.d), random_gamma_element(2 * s + 1, cfg.d)


def check_global_coboundary(cfg: RunConfig) -> Report:
    """sigma_inf(g1, g2) = kappa(g1) kappa(g2) / kappa(g1 g2) on the level-8t subgroup."""
    cfg.require_global()
    run = _Run("global-coboundary", cfg)
    for _, s in run.seeds():
        g1, g2 = _gamma_pair(cfg, s)
        if sigma(g1, g2, REAL) * kappa_global(g1 @ g2) != kappa_global(g1) * kappa_global(g2):
            run.fail(s, REAL, g1=_mat(g1), g2=_mat(g2))
    return run.report


def check_support_stability(cfg: RunConfig) -> Report:
    """Doubling the support list leaves kappa unchanged; every added prime contributes 1."""
    cfg.require_global()
    run = _Run("support-stability", cfg)
    for _, s in run.seeds():
        g = random_gamma_element(s, cfg.d, length=5)
        base = support_primes(g)
        extra = extend_primes(base, 2)[len(base):]
        if kappa_global(g, extra) != 1 or kappa_global(g, base + extra) != kappa_global(g):
            run.fail(s, "all", g=_mat(g), support=base)
    return run.report


def _unipotent_gamma(rng: random.Random, d: int) -> Matrix3:
    z = global_level(d) * _integral_from_coords(rng.randint(-3, 3), rng.randint(-3, 3), d)
    par = param_from_z(z, 8 * rng.randint(-5, 5))
    return make_x_plus(par.r, par.m, d)


def check_borel(cfg: RunConfig) -> Report:
    """
    kappa on Borel elements of the level-8t subgroup against the closed form.

    A Borel element h(f) x(r, m) of that subgroup needs f to be a global unit
    congruent to 1, and with 2 split the only such unit is 1.
    """
    cfg.require_global()
    run = _Run("borel", cfg)
    for _, s in run.seeds():
        rng = random.Random(s)
        g = _unipotent_gamma(rng, cfg.d)
        if kappa_global(g) != kappa_borel_closed_form(g[0, 0]):
            run.fail(s, "all", g=_mat(g))
    return run.report


def check_sl2(cfg: RunConfig) -> Report:
    cfg.require_global()
    run = _Run("sl2", cfg)
    for _, s in run.seeds():
        a, b, c, dd = random_sl2_congruence(random.Random(s), cfg.d)
        if kappa_global(sl2_embed(a, b, c, dd, cfg.d)) != kappa_sl2(a, b, c, dd, cfg.d):
            run.fail(s, "all", a=a, b=b, c=c, d=dd)
    return run.report


def random_torus_parameter(s: int, d: int, height: int = 40) -> QuadNum:
    """lam = a + b t congruent to 1 mod 8t with b != 0 and gcd(a, 2b) = 1."""
    rng = random.Random(s)
    level = global_level(d)
    while True:
        lam = 1 + level * _integral_from_coords(rng.randint(-height, height), rng.randint(-height, height), d)
        a, b = lam.a, lam.b
        if b != 0 and a.denominator == b.denominator == 1 and gcd(int(a), 2 * int(b)) == 1:
            return lam


def check_torus_restriction(cfg: RunConfig) -> Report:
    """
    The local torus values over odd unramified p | b multiply to legendre(b, a) (a, b)_R.

    Global units congruent to 1 mod 8t are trivial here, so the statement is
    checked on non-unit parameters, where the even and ramified contributions
    are 1 by the congruence.
    """
    cfg.require_global()
    run = _Run("torus-restriction", cfg)
    for _, s in run.seeds():
        lam = random_torus_parameter(s, cfg.d)
        if torus_local_product(lam) != kappa_torus_closed_form(lam):
            run.fail(s, "all", lam=render_quad(lam))
    return run.report


# -- real place ---------------------------------------------------------------------------------


def check_multiplier(cfg: RunConfig, samples: int = 5) -> Report:
    """j(g1 g2, tau) = j(g1, g2 tau) j(g2, tau) and j(g, tau)^2 = Ct + D."""
    cfg.require_global()
    run = _Run("multiplier", cfg)
    for _, s in run.seeds():
        rng = random.Random(s)
        g1, g2 = _gamma_pair(cfg, s)
        for _ in range(samples):
            tau = random_hpoint(rng)
            lhs = multiplier_j(g1 @ g2, tau)
            rhs = multiplier_j(g1, act(g2, tau)) * multiplier_j(g2, tau)
            if abs(lhs - rhs) > REL_TOL * abs(lhs):
                run.fail(s, REAL, g1=_mat(g1), g2=_mat(g2), tau=[tau.tau1.real, tau.tau1.imag, tau.tau2.real, tau.tau2.imag], law="functional")
            for g in (g1, g2):
                q = denom(g, tau)
                if abs(multiplier_j(g, tau) ** 2 - q) > REL_TOL * abs(q):
                    run.fail(s, REAL, g=_mat(g), tau=[tau.tau1.real, tau.tau1.imag, tau.tau2.real, tau.tau2.imag], law="square")
    return run.report


def check_sigma_phi(cfg: RunConfig, samples: int = 3) -> Report:
    """The cocycle of the phi section is tau-independent and equals sigma at the real place."""
    run = _Run("sigma-phi", cfg)
    for _, s in run.seeds():
        rng = random.Random(s)
        g1, g2 = random_group_element(2 * s, cfg.d), random_group_element(2 * s + 1, cfg.d)
        expected = sigma(g1, g2, REAL)
        for _ in range(samples):
            if sigma_infty_via_phi(g1, g2, random_hpoint(rng)) != expected:
                run.fail(s, REAL, g1=_mat(g1), g2=_mat(g2))
                break
    return run.report


# -- suites -------------------------------------------------------------------------------------

SUITE_CHECKS: dict[str, tuple[Callable[[RunConfig], Report], ...]] = {
    "hilbert": (check_hilbert_oracle, check_product_formula),
    "cocycle": (check_cocycle_identity, check_unipotent_triviality, check_sigma_routes, check_sigma_product),
    "commutator": (check_commutator,),
    "splitting": (check_local_coboundary, check_square_rule),
    "kubota-local": (check_unipotent_invariance,),
    "kubota-global": (check_global_coboundary, check_support_stability),
    "borel": (check_borel,),
    "sl2": (check_sl2,),
    "torus-restriction": (check_torus_restriction,),
    "multiplier": (check_multiplier, check_sigma_phi),
}

GLOBAL_SUITES = {"kubota-global", "borel", "sl2", "torus-restriction", "multiplier"}


def run_suite(name: str, cfg: RunConfig) -> Report:
    if name == "all":
        if classify_prime(2, cfg.d) is not SplitType.SPLIT:
            names = [n for n in SUITES if n not in GLOBAL_SUITES]
        else:
            names = list(SUITES)
        report = Report("all")
        for n in names:
            report.merge(run_suite(n, cfg))
        return report
    if name not in SUITE_CHECKS:
        raise ConfigError(f"unknown suite {name!r}")
    if name in GLOBAL_SUITES:
        cfg.require_global()
    report = Report(name)
    for check in SUITE_CHECKS[name]:
        report.merge(check(cfg))
    return report
