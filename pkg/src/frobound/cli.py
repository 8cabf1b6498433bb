"""Command-line front end.

Exit codes: 0 success, 1 a reproduced claim did not match, 2 bad input or an
unsatisfied hypothesis, 3 an internal identity failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import datasets, reproduce
from .bounds_engine import (
    BoundCertificate,
    Regime,
    bound_for_regime,
    exclusion_certificate,
    explicit_formula_identity,
)
from .cosine_poly import CosinePoly
from .errors import (
    ConditionFailure,
    FroboundError,
    InfeasibleError,
    InternalAssertionError,
    NonConvergenceError,
    UnboundedError,
)
from .exactnum import QField, parse_qfield
from .family import (
    MAX_M,
    PRECISION_BITS,
    degree_window_check,
    family_coefficients,
    family_identity_check,
    family_product_check,
    family_threshold,
    symmetry_check,
)
from .optimizer import LPProblem, optimize
from .theta_sets import ThetaSet
from .zeta import WeilPoly, format_counts_tsv, point_counts, validate

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

COMMANDS = ("bound", "exclude", "zeta", "identity", "family", "optimize", "reproduce-paper")


class InputError(Exception):
    """Bad command-line input; reported with exit code 2."""


# ---------------------------------------------------------------------------
# input helpers


def _load_json(ref: str, kind: str):
    """Read ``ref`` as a built-in name, a JSON file, or inline JSON."""
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {kind} file {ref}: {exc.strerror}") from None
        source = str(path)
    elif ref.lstrip().startswith(("{", "[")):
        text, source = ref, "<inline>"
    else:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {source}: {exc.msg} at line {exc.lineno}, column {exc.colno}") from None


def load_poly(ref: str) -> CosinePoly:
    obj = _load_json(ref, "polynomial")
    if obj is None:
        return datasets.polynomial(ref)
    if isinstance(obj, list):
        obj = {"u": obj}
    try:
        return CosinePoly.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FroboundError):
            raise
        raise InputError(f"polynomial {ref}: expected {{\"u\": [...]}} with exact coefficients ({exc})") from None


def load_theta(ref: str) -> ThetaSet:
    obj = _load_json(ref, "theta")
    if obj is None:
        return datasets.theta(ref)
    try:
        return ThetaSet.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FroboundError):
            raise
        raise InputError(f"theta {ref}: expected {{\"intervals\": [...], \"points\": [...]}} ({exc})") from None


def load_weil(args) -> WeilPoly:
    if getattr(args, "curve", None):
        W = datasets.curve(args.curve)
        if args.q is not None and args.q != W.q:
            raise InputError(f"--q {args.q} disagrees with curve {args.curve} (q={W.q})")
        return W
    if args.q is None or args.factors is None:
        raise InputError("give either --curve NAME or both --q and --factors")
    try:
        factors = json.loads(args.factors)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed --factors JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(factors, list) or not all(isinstance(p, list) and len(p) == 2 for p in factors):
        raise InputError("--factors must be a list of [a, e] pairs")
    return WeilPoly(args.q, factors)


def exact_arg(text: str) -> QField:
    try:
        return parse_qfield(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def q_arg(text: str) -> int:
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"q must be an integer, got {text!r}") from None
    if q < 2:
        raise argparse.ArgumentTypeError(f"q must be at least 2, got {q}")
    return q


# ---------------------------------------------------------------------------
# output helpers


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def approx(x: QField) -> str:
    """Exact value, with a decimal marked as an approximation when irrational."""
    return str(x) if x.is_rational else f"{x} (≈ {float(x):.12g})"


def certificate_text(c: BoundCertificate) -> str:
    lines = [
        f"regime:     {c.regime.value}",
        f"q:          {c.q}",
        f"f:          {c.f}",
        f"psi(r):     {approx(c.psi_r)}",
        f"psi(1/r):   {approx(c.psi_rinv)}",
        f"bound:      {c.statement()}",
    ]
    if c.zeros:
        lines.append("tight when every angle has cos(theta) in {" + ", ".join(str(z) for z in c.zeros) + "}")
    if c.equal_counts:
        lines.append("and N_n = N_1 for n in " + ", ".join(str(n) for n in c.equal_counts))
    return "\n".join(lines) + "\n"


def _emit(args, text: str, obj) -> None:
    sys.stdout.write(dump_json(obj) if args.format == "json" else text)


def _write_output(args, obj) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(dump_json(obj), encoding="utf-8")


# ---------------------------------------------------------------------------
# commands


def cmd_bound(args) -> int:
    f, theta = load_poly(args.f), load_theta(args.theta)
    kw = {}
    if args.m is not None:
        kw["m"] = args.m
    if args.allow_combined:
        kw["allow_combined"] = True
    cert = bound_for_regime(f, theta, args.q, args.regime, **kw)
    _write_output(args, cert.to_json())
    _emit(args, certificate_text(cert), cert.to_json())
    return EXIT_OK


def cmd_exclude(args) -> int:
    f = load_poly(args.f)
    ex = exclusion_certificate(f, args.q, args.alpha, args.beta, args.regime, exclude_pi=args.exclude_pi)
    _write_output(args, ex.to_json())
    _emit(args, ex.statement() + "\n", ex.to_json())
    return EXIT_OK


def cmd_zeta(args) -> int:
    W = load_weil(args)
    report = validate(W, args.upto)
    if not report:
        raise InputError(f"invalid zeta data: {report.message}")
    N = point_counts(W, args.upto)
    if args.format == "tsv":
        sys.stdout.write(format_counts_tsv(W, N))
    elif args.format == "json":
        sys.stdout.write(dump_json({"q": W.q, "genus": W.genus, "factors": W.to_json()["factors"], "N": list(N.N)}))
    else:
        sys.stdout.write(f"q={W.q}, genus {W.genus}\n" + "".join(f"N_{m} = {N[m]}\n" for m in range(1, args.upto + 1)))
    return EXIT_OK


def cmd_identity(args) -> int:
    f, W = load_poly(args.f), load_weil(args)
    ident = explicit_formula_identity(f, W)
    obj = {
        "q": W.q,
        "genus": W.genus,
        "lhs": ident.lhs.to_json(),
        "rhs": ident.rhs.to_json(),
        "holds": ident.holds,
        "slack_zero": ident.slack_zero,
        "counts": list(ident.counts),
    }
    text = (
        f"lhs = {approx(ident.lhs)}\nrhs = {approx(ident.rhs)}\n"
        f"identity holds: {ident.holds}; every slack term zero: {ident.slack_zero}\n"
    )
    _emit(args, text, obj)
    return EXIT_OK


def cmd_family(args) -> int:
    if not 2 <= args.m <= MAX_M:
        raise InputError(f"--m must lie in [2, {MAX_M}], got {args.m}")
    obj: dict = {"m": args.m}
    lines = []
    if args.m >= 4:
        fam = family_coefficients(args.m)
        checks = {
            "identity": family_identity_check(args.m, fam.exact),
            "symmetry": symmetry_check(args.m, fam),
            "degree_window": degree_window_check(args.m),
            "product": family_product_check(args.m, samples=args.samples, bits=args.precision),
        }
        obj["checks"] = checks
        obj["u"] = {str(n): f"{fam.u_float(n)}" for n in range(2, args.m - 1)}
        lines.append("u_n (approx.): " + ", ".join(f"u_{n} ≈ {float(fam.u_float(n)):.10g}" for n in range(2, args.m - 1)))
        lines += [f"check {k}: {'ok' if v else 'FAILED'}" for k, v in checks.items()]
    ok = all(obj.get("checks", {}).values())
    if args.q is not None:
        t = family_threshold(args.m, args.q)
        obj["threshold"] = {
            "q": args.q,
            "value": t.threshold.to_json(),
            "exact_certificate": t.exact_path,
            "checks": t.checks,
            "statement": t.statement(),
        }
        lines.append(t.statement() + ("" if t.threshold.is_rational else f"  (threshold ≈ {float(t.threshold):.12g})"))
        lines.append(f"verified ({'exact certificate' if t.exact_path else 'exact identity plus numeric scan'}): {t.verified}")
        ok = ok and t.verified
    _emit(args, "\n".join(lines) + "\n", obj)
    return EXIT_OK if ok else EXIT_INTERNAL


def cmd_optimize(args) -> int:
    theta = load_theta(args.theta)
    p = LPProblem(args.regime, args.q, theta, args.degree, genus=args.genus)
    res = optimize(p, max_iterations=args.max_iterations)
    cert = res.certificate
    obj = {
        "certificate": cert.to_json(),
        "objective": res.objective.to_json(),
        "iterations": res.iterations,
        "degree": args.degree,
        "grid_size": len(p.grid),
    }
    _write_output(args, cert.to_json())
    summary = (
        f"{p.describe()}: optimum {approx(res.objective)} after {res.iterations} iteration(s)\n"
        + certificate_text(cert)
    )
    _emit(args, summary, obj)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rows = reproduce.run(corrupt=args.corrupt)
    report = reproduce.report_json(rows)
    if args.format == "json":
        sys.stdout.write(dump_json(report))
    elif args.format == "tsv":
        sys.stdout.write("id\tclaim\tcomputed\tmatch\n")
        for r in rows:
            sys.stdout.write(f"{r.id}\t{r.claim}\t{r.computed}\t{'yes' if r.match else 'NO'}\n")
    else:
        for r in rows:
            flag = "ok  " if r.match else "FAIL"
            sys.stdout.write(f"[{flag}] {r.id}: {r.claim}\n       computed: {r.computed}\n")
            if r.error:
                sys.stdout.write(f"       error: {r.error}\n")
        sys.stdout.write(f"{sum(r.match for r in rows)}/{len(rows)} claims reproduced\n")
    return EXIT_OK if report["all_match"] else EXIT_MISMATCH


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobound", description="Exact explicit-formula bounds for curves over finite fields.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    regimes = [r.value for r in Regime]

    def fmt(p, choices=("text", "json"), default="text"):
        p.add_argument("--format", choices=choices, default=default)

    p = sub.add_parser("bound", help="certify a bound for a polynomial on an angle set")
    p.add_argument("--regime", choices=regimes, required=True)
    p.add_argument("--q", type=q_arg, required=True)
    p.add_argument("--f", required=True, help="built-in name, JSON file or inline JSON")
    p.add_argument("--theta", default="full", help="built-in name, JSON file or inline JSON")
    p.add_argument("--m", type=int, help="symmetry order for condition (c)")
    p.add_argument("--allow-combined", action="store_true", help="accept psi(1/r) > 0 in regime u0_minus_one")
    p.add_argument("--output", help="also write the certificate JSON here")
    fmt(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("exclude", help="certify that many points force an angle into (alpha, beta)")
    p.add_argument("--regime", choices=regimes, default=Regime.U0_ONE_RESTRICTED.value)
    p.add_argument("--q", type=q_arg, required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--alpha", type=exact_arg, required=True, help="cos(alpha), e.g. 1/2")
    p.add_argument("--beta", type=exact_arg, required=True, help="cos(beta), e.g. '-sqrt(2)/2'")
    p.add_argument("--exclude-pi", action="store_true", help="exclude (alpha, pi] instead of (alpha, beta)")
    p.add_argument("--output")
    fmt(p)
    p.set_defaults(func=cmd_exclude)

    p = sub.add_parser("zeta", help="point counts N_1..N_M from quadratic zeta factors")
    p.add_argument("--q", type=q_arg)
    p.add_argument("--factors", help='JSON list of [a, e] pairs, e.g. "[[4,5],[3,10],[0,11]]"')
    p.add_argument("--curve", help="built-in curve name")
    p.add_argument("--upto", type=int, default=5)
    fmt(p, ("tsv", "json", "text"), "tsv")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("identity", help="check the explicit formula for a polynomial and zeta data")
    p.add_argument("--f", required=True)
    p.add_argument("--q", type=q_arg)
    p.add_argument("--factors")
    p.add_argument("--curve")
    fmt(p)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("family", help="coefficients, checks and r^m+1 threshold for the cyclotomic family")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=q_arg)
    p.add_argument("--precision", type=int, default=PRECISION_BITS, help="mpmath bits for the product check")
    p.add_argument("--samples", type=int, default=50)
    fmt(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("optimize", help="search for a polynomial with an exact LP and certify it")
    p.add_argument("--q", type=q_arg, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--regime", choices=regimes, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--genus", type=int, help="reference genus for regime u0_one")
    p.add_argument("--max-iterations", type=int, default=50)
    p.add_argument("--output")
    fmt(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("reproduce-paper", help="recompute every published number and compare")
    p.add_argument("--corrupt", metavar="NAME", help=argparse.SUPPRESS)
    fmt(p, ("text", "json", "tsv"))
    p.set_defaults(func=cmd_reproduce)
    return parser


def _fail(code: int, message: str, **extra) -> int:
    payload = {"error": message, **extra}
    sys.stderr.write("frobound: " + message + "\n")
    if extra:
        sys.stderr.write(dump_json(payload))
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except ConditionFailure as exc:
        extra = {"condition": exc.condition}
        if exc.witness is not None:
            extra["witness"] = exc.witness.to_json()
        if exc.fallback is not None:
            extra["fallback"] = exc.fallback.statement()
        return _fail(EXIT_INPUT, str(exc), **extra)
    except NonConvergenceError as exc:
        extra = {"witnesses": [w.to_json() for w in exc.witnesses]}
        if exc.best is not None:
            extra["best_certified"] = exc.best.to_json()
            extra["best_statement"] = exc.best.statement()
        return _fail(EXIT_INPUT, str(exc), **extra)
    except (InfeasibleError, UnboundedError) as exc:
        return _fail(EXIT_INPUT, f"{type(exc).__name__}: {exc}")
    except InternalAssertionError as exc:
        return _fail(EXIT_INTERNAL, f"internal identity failed: {exc}")
    except (InputError, FroboundError, ValueError) as exc:
        return _fail(EXIT_INPUT, str(exc))


if __name__ == "__main__":
    sys.exit(main())
