"""Command-line front end: single evaluations and the seeded verification suites."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence

from .analytic import BranchError, HPoint, multiplier_j, phi, render_complex
from .cocycle import sigma_all_places, sigma_symbols
from .exactnum import DEFAULT_D, DomainError, is_squarefree, parse_rat, render_rat
from .group import load_matrix, matrix_to_json
from .harness import SUITES, RunConfig, run_suite
from .kubota import KubotaContext, kappa_global, kappa_p
from .localfield import Place, as_place, classify_prime, hilbert_k

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d", type=int, default=DEFAULT_D, help="square-free d > 0 with t^2 = -d (default 7)")
    p.add_argument("--json", action="store_true", help="emit JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="metaplectic-su21", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hilbert", help="(a, b)_v for rationals a, b")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--p", type=int)
    p.add_argument("--place", help="'real' or a prime")
    _add_common(p)

    p = sub.add_parser("classify", help="splitting type of p in Q(sqrt(-d))")
    p.add_argument("prime", type=int)
    _add_common(p)

    p = sub.add_parser("sigma", help="sigma(g1, g2) at a place or at every place of its support")
    p.add_argument("g1")
    p.add_argument("g2")
    p.add_argument("--place", help="'real', a prime, or 'all' (default)")
    p.add_argument("--p", type=int)
    _add_common(p)

    p = sub.add_parser("kappa-local", help="kappa_p(g)")
    p.add_argument("g")
    p.add_argument("--p", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("kappa-global", help="kappa(g) on the level-8t subgroup")
    p.add_argument("g")
    _add_common(p)

    for name, help_text in (("phi", "phi_g(tau)"), ("multiplier", "j(g, tau)")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("g")
        p.add_argument("--tau", required=True, help="Re t1,Im t1,Re t2,Im t2")
        _add_common(p)

    p = sub.add_parser("verify", help="run a seeded invariant suite")
    p.add_argument("suite", choices=[*SUITES, "all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--p", type=int)
    p.add_argument("--prime-bound", type=int)
    _add_common(p)
    return parser


def _emit(args: argparse.Namespace, value: Any, place: str | None, inputs: dict, text: str) -> None:
    if args.json:
        print(json.dumps({"value": value, "place": place, "inputs": inputs}, sort_keys=True))
    else:
        print(text)


def _place(args: argparse.Namespace) -> Place:
    if args.p is not None and args.place is not None:
        raise UsageError("give either --p or --place")
    if args.p is not None:
        return as_place(args.p)
    if args.place is None:
        raise UsageError("a place is required (--p or --place)")
    try:
        return as_place(args.place)
    except ValueError as exc:
        raise UsageError(f"bad place {args.place!r}") from exc


def cmd_hilbert(args: argparse.Namespace) -> int:
    a, b = parse_rat(args.a), parse_rat(args.b)
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol arguments must be nonzero")
    v = _place(args)
    value = hilbert_k(a, b, v)
    _emit(args, value, str(v), {"a": render_rat(a), "b": render_rat(b)}, str(value))
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    value = str(classify_prime(args.prime, args.d))
    _emit(args, value, str(args.prime), {"p": args.prime, "d": args.d}, value)
    return EXIT_OK


def cmd_sigma(args: argparse.Namespace) -> int:
    g1, g2 = load_matrix(args.g1, args.d), load_matrix(args.g2, args.d)
    inputs = {"g1": matrix_to_json(g1), "g2": matrix_to_json(g2)}
    if args.p is None and args.place in (None, "all"):
        vals = {str(v): s for v, s in sigma_all_places(g1, g2).items()}
        _emit(args, vals, "all", inputs, "\n".join(f"{v}\t{s}" for v, s in vals.items()))
        return EXIT_OK
    v = _place(args)
    value = sigma_symbols(g1, g2).evaluate(v)
    _emit(args, value, str(v), inputs, str(value))
    return EXIT_OK


def cmd_kappa_local(args: argparse.Namespace) -> int:
    g = load_matrix(args.g, args.d)
    value = kappa_p(g, KubotaContext.make(args.p, args.d))
    _emit(args, value, str(args.p), {"g": matrix_to_json(g)}, str(value))
    return EXIT_OK


def cmd_kappa_global(args: argparse.Namespace) -> int:
    g = load_matrix(args.g, args.d)
    value = kappa_global(g)
    _emit(args, value, "finite", {"g": matrix_to_json(g)}, str(value))
    return EXIT_OK


def _analytic(args: argparse.Namespace, fn) -> int:
    g = load_matrix(args.g, args.d)
    tau = HPoint.parse(args.tau)
    text = render_complex(fn(g, tau))
    _emit(args, text, "real", {"g": matrix_to_json(g), "tau": args.tau}, text)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    cfg = RunConfig(d=args.d, seed=args.seed, trials=args.trials, prime_bound=args.prime_bound, p=args.p)
    report = run_suite(args.suite, cfg)
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        print(f"{report.suite}: {report.trials} trials, {len(report.failures)} failures")
        for f in report.failures:
            print(json.dumps(f, sort_keys=True))
    return EXIT_OK if report.ok else EXIT_FAIL


COMMANDS = {
    "hilbert": cmd_hilbert,
    "classify": cmd_classify,
    "sigma": cmd_sigma,
    "kappa-local": cmd_kappa_local,
    "kappa-global": cmd_kappa_global,
    "phi": lambda a: _analytic(a, phi),
    "multiplier": lambda a: _analytic(a, multiplier_j),
    "verify": cmd_verify,
}


def _join_tau(argv: Sequence[str]) -> list[str]:
    """Turn "--tau -1,0,0,0" into "--tau=-1,0,0,0"; argparse would read the value as an option."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--tau":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--tau={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(_join_tau(sys.argv[1:] if argv is None else argv))
    try:
        if args.d <= 0 or not is_squarefree(args.d):
            raise UsageError(f"d={args.d} must be a positive square-free integer")
        return COMMANDS[args.command](args)
    except BranchError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
