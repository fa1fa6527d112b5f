"""Metaplectic 2-cocycle, Kubota symbols and the weight 1/2 multiplier system on SU(2,1)."""

from .analytic import BranchError, HPoint, act, multiplier_j, phi, sigma_infty_via_phi
from .cocycle import sigma, sigma_all_places, sigma_symbols
from .exactnum import DomainError, QuadNum, deltas, parse_quad, quad, render_quad, y_of
from .group import (
    Matrix3,
    bruhat,
    bruhat_recompose,
    in_gamma_p,
    in_global_gamma,
    is_member,
    iwahori,
    iwahori_recompose,
    load_matrix,
    make_h,
    make_w,
    make_x_minus,
    make_x_plus,
    sl2_embed,
    weyl,
)
from .kubota import KubotaContext, kappa_global, kappa_p, kappa_sl2, support_primes
from .localfield import REAL, Place, SplitType, classify_prime, hilbert_K, hilbert_k, legendre

__all__ = [
    "BranchError",
    "DomainError",
    "HPoint",
    "KubotaContext",
    "Matrix3",
    "Place",
    "QuadNum",
    "REAL",
    "SplitType",
    "act",
    "bruhat",
    "bruhat_recompose",
    "classify_prime",
    "deltas",
    "hilbert_K",
    "hilbert_k",
    "in_gamma_p",
    "in_global_gamma",
    "is_member",
    "iwahori",
    "iwahori_recompose",
    "kappa_global",
    "kappa_p",
    "kappa_sl2",
    "legendre",
    "load_matrix",
    "make_h",
    "make_w",
    "make_x_minus",
    "make_x_plus",
    "multiplier_j",
    "parse_quad",
    "phi",
    "quad",
    "render_quad",
    "sigma",
    "sigma_all_places",
    "sigma_infty_via_phi",
    "sigma_symbols",
    "sl2_embed",
    "support_primes",
    "weyl",
    "y_of",
]
