"""Command-line front end.

Exit codes: 0 all checks pass, 1 a certificate failed, 2 usage error,
3 a resource cap aborted a computation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import certificates as cert
from .groebner import Limits, ResourceLimitError, is_groebner_basis
from .ideals import INF, build_ideal, format_p, is_even_p, parse_p
from .numeric import numeric_summary
from .tensor_index import ShapeError, TensorShape

SCHEMA = "v1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

log = logging.getLogger("nuclear_ideals")


def _shape(text: str) -> TensorShape:
    try:
        return TensorShape.parse(text)
    except ShapeError:
        raise argparse.ArgumentTypeError(f"invalid shape {text!r} (expected e.g. 3x3 with positive sizes)")


def _p(text: str):
    try:
        return parse_p(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nuclear-ideals", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, seed=False, samples=None, output="text"):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--shape", type=_shape, required=True, help="tensor shape, e.g. 3x3 or 2x2x2")
        sp.add_argument("--p", type=_p, default=2, help="0, 1, an even integer, or inf (default 2)")
        sp.add_argument("--output", choices=("text", "json"), default=output)
        sp.add_argument("--json", dest="output", action="store_const", const="json",
                        help="same as --output json")
        sp.add_argument("--quiet", action="store_true", help="no progress on stderr")
        sp.add_argument("--max-basis", type=int, default=Limits.max_basis)
        sp.add_argument("--max-terms", type=int, default=Limits.max_terms)
        sp.add_argument("--assume-primary", action="store_true",
                        help="treat I_p as primary (needed for p >= 4)")
        if seed:
            sp.add_argument("--seed", type=int, default=42)
            sp.add_argument("--tolerance", type=float, default=1e-9)
        if samples is not None:
            sp.add_argument("--samples", type=int, default=samples)
        return sp

    add("gens", "print the generators of I_p")
    add("gb-verify", "check Buchberger's criterion on the generators")
    add("radical", "radical certificate (Seidenberg for p = 1, inf; square-free leading terms for p = 0)")
    add("prime", "primality certificate for even p")
    add("smooth", "Jacobian real-radical certificate for even p")
    add("numeric", "floating-point oracle", seed=True, samples=10_000)
    add("report", "all applicable checks in one JSON document", seed=True, samples=1000, output="json")
    return parser


def _limits(args) -> Limits:
    return Limits(max_basis=args.max_basis, max_terms=args.max_terms)


def _doc(args, **body) -> dict:
    return {"schema": SCHEMA, "command": args.command, "shape": str(args.shape), "p": format_p(args.p), **body}


def _emit(args, doc: dict, lines: list[str]):
    if args.output == "json":
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(lines))


def cmd_gens(args) -> int:
    ideal = build_ideal(args.shape, args.p)
    gens = [str(g) for g in ideal.generators]
    if args.output == "json":
        print(json.dumps(_doc(args, count=len(gens), claimed_groebner=ideal.claimed_groebner,
                              generators=gens), indent=2))
    else:
        for g in gens:
            print(g)
    return EXIT_OK


def cmd_gb_verify(args) -> int:
    ideal = build_ideal(args.shape, args.p)
    chk = is_groebner_basis(ideal.generators, max_terms=args.max_terms)
    _emit(args, _doc(args, **chk.to_dict()),
          [f"{ideal.name} on {args.shape}: is_gb={chk.is_gb} ({chk.spairs_checked} S-pairs checked)"]
          + ([f"witness pair {chk.witness[:2]}: remainder {chk.witness[2]}"] if chk.witness else []))
    return EXIT_OK if chk.is_gb else EXIT_FAIL


def _radical(args):
    if args.p == 0:
        return cert.squarefree_LT_certificate_for(args.shape, 0, _limits(args))
    return cert.seidenberg_certificate(args.shape, args.p, limits=_limits(args))


def cmd_radical(args) -> int:
    c = _radical(args)
    lines = [f"I_{format_p(args.p)} on {args.shape}: {c.verdict} (method {c.method})"] + \
        [f"  {r}" for r in c.reasons]
    _emit(args, _doc(args, certificate=c.to_dict()), lines)
    return EXIT_OK if c.is_radical else EXIT_FAIL


def _require_even(args):
    if not is_even_p(args.p):
        print(f"error: --p must be an even integer for {args.command}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _prime(args):
    log.info("primality pipeline for I_%s on %s", format_p(args.p), args.shape)
    return cert.primality_certificate(args.shape, args.p, args.assume_primary, _limits(args))


def cmd_prime(args) -> int:
    _require_even(args)
    c = _prime(args)
    lines = [
        f"I_{format_p(args.p)} on {args.shape}: {c.verdict}",
        f"  J = {c.J.to_dict()['J']} (independence verified: {c.J.verified})",
        f"  primary hypothesis: {c.primary_source}",
    ]
    for r in c.records:
        lines.append(f"  {r.to_dict()['a']}: case {r.case}, member={r.membership_ok}, "
                     f"square-free={r.squarefree_ok}, H = {r.H}")
    if c.dimension is not None:
        lines.append(f"  dim = {c.dimension}")
    lines += [f"  {r}" for r in c.reasons]
    _emit(args, _doc(args, certificate=c.to_dict()), lines)
    return EXIT_OK if c.is_prime else EXIT_FAIL


def cmd_smooth(args) -> int:
    _require_even(args)
    pc = _prime(args)
    c = cert.smoothness_certificate(args.shape, args.p, pc)
    lines = [f"I_{format_p(args.p)} on {args.shape}: Jacobian rank {c.rank} at e_1 x ... x e_1, "
             f"required {c.required}; prime: {pc.verdict}; real radical: {c.real_radical}"]
    _emit(args, _doc(args, certificate=c.to_dict(), primality_verdict=pc.verdict), lines)
    return EXIT_OK if c.real_radical else EXIT_FAIL


def _numeric_ok(summary: dict, tol: float) -> bool:
    ok = summary["max_residual"] <= tol
    if summary.get("nuclear_norm_max") is not None:
        ok = ok and summary["nuclear_norm_max"] <= 1 + tol
    if summary.get("expected_rank") is not None and summary["samples"]:
        hit = summary["rank_histogram"].get(str(summary["expected_rank"]), 0)
        ok = ok and hit >= 0.99 * summary["samples"]
    if summary.get("orbit_max_residual") is not None:
        ok = ok and summary["orbit_max_residual"] <= 1e-8
    return ok


def cmd_numeric(args) -> int:
    log.info("sampling %d points", args.samples)
    s = numeric_summary(args.shape, args.p, args.samples, args.seed)
    ok = _numeric_ok(s, args.tolerance)
    s = dict(s, passed=ok)
    lines = [f"{k}: {v}" for k, v in s.items()]
    _emit(args, _doc(args, summary=s), lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(args) -> int:
    shape, p = args.shape, args.p
    ideal = build_ideal(shape, p)
    verdicts: dict = {}
    body: dict = {}
    basis = cert.groebner_basis_for(ideal, _limits(args))
    gb_ok = is_groebner_basis(basis.gb.polynomials, basis.gb.order).is_gb if len(basis.gb) else True
    verdicts["gb"] = gb_ok
    body["groebner_basis"] = basis.to_dict()
    passed = [gb_ok]
    if p == 0:
        c = cert.squarefree_LT_certificate_for(shape, 0, _limits(args))
        verdicts["radical"] = c.is_radical
        body["radical"] = c.to_dict()
        passed.append(c.is_radical)
    elif p in (1, INF):
        c = cert.seidenberg_certificate(shape, p, limits=_limits(args))
        verdicts["radical"] = c.is_radical
        verdicts["zero_dim"] = bool(c.zero_dimensional)
        body["radical"] = c.to_dict()
        passed += [c.is_radical, bool(c.zero_dimensional)]
    else:
        pc = _prime(args)
        sc = cert.smoothness_certificate(shape, p, pc)
        # true when certified, otherwise the verdict string (e.g. "not_established")
        verdicts["prime"] = True if pc.is_prime else pc.verdict
        verdicts["smooth"] = sc.real_radical
        verdicts["dim"] = pc.dimension
        body["prime"] = pc.to_dict()
        body["smooth"] = sc.to_dict()
        passed += [pc.is_prime, sc.real_radical]
        log.info("numeric oracle, %d samples", args.samples)
        ns = numeric_summary(shape, p, args.samples, args.seed)
        nok = _numeric_ok(ns, args.tolerance)
        verdicts["numeric"] = nok
        body["numeric"] = ns
        passed.append(nok)
    ok = all(passed)
    doc = _doc(args, verdicts=verdicts, passed=ok, **body)
    lines = [f"report for I_{format_p(p)} on {shape}: {'PASS' if ok else 'FAIL'}"] + \
        [f"  {k}: {v}" for k, v in verdicts.items()]
    _emit(args, doc, lines)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "gens": cmd_gens,
    "gb-verify": cmd_gb_verify,
    "radical": cmd_radical,
    "prime": cmd_prime,
    "smooth": cmd_smooth,
    "numeric": cmd_numeric,
    "report": cmd_report,
}


def _configure_logging(quiet: bool):
    # one handler bound to the current stderr; repeated calls replace it
    for h in list(log.handlers):
        log.removeHandler(h)
    h = logging.StreamHandler(sys.stderr)
    h.setFormatter(logging.Formatter("%(message)s"))
    log.addHandler(h)
    log.setLevel(logging.WARNING if quiet else logging.INFO)
    log.propagate = False


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.quiet)
    t0 = time.perf_counter()
    try:
        code = COMMANDS[args.command](args)
    except ResourceLimitError as e:
        print(f"aborted: {e}", file=sys.stderr)
        return EXIT_CAP
    log.info("done in %.2fs", time.perf_counter() - t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
