"""Decision procedures producing replayable certificates.

* primality of I_2s via a maximal independent set J and, for every variable
  outside J, an elimination polynomial that is square-free over Q(J);
* radicality of zero-dimensional I_1, I_inf via univariate square-free members;
* radicality of I_0 via square-free leading monomials;
* real reducedness of I_2s via the Jacobian rank at e_1 (x) ... (x) e_1.

Every certificate serializes to JSON with polynomials in canonical text so the
checks can be replayed independently.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gmpy2 import lcm, mpq, mpz

from .groebner import (
    GroebnerBasis,
    Limits,
    ResourceLimitError,
    buchberger,
    eliminate,
    is_groebner_basis,
)
from .ideals import INF, IdealSpec, build_ideal, format_p, is_even_p, parse_p
from .poly import GREVLEX, Monomial, Polynomial, format_monomial
from .ratfield import as_univariate, gcd_in_k
from .tensor_index import (
    MultiIndex,
    TensorShape,
    axis_index,
    format_index,
    non_one_count,
)

log = logging.getLogger(__name__)

PRIME = "prime"
NOT_ESTABLISHED = "not_established"
RADICAL = "radical"
NOT_CONCLUDED = "not_concluded"


class CertificateError(RuntimeError):
    """A construction step failed; ``trace`` holds the intermediate data."""

    def __init__(self, message: str, trace: dict | None = None):
        super().__init__(message)
        self.trace = trace or {}


# independent set and dimension


@dataclass(frozen=True)
class IndependentSet:
    shape: TensorShape
    J: tuple[MultiIndex, ...]
    verified: bool = False

    def __contains__(self, a):
        return tuple(a) in set(self.J)

    def __len__(self):
        return len(self.J)

    def complement(self) -> list[MultiIndex]:
        js = set(self.J)
        return [a for a in self.shape.indices() if a not in js]

    def to_dict(self) -> dict:
        return {"J": [format_index(a) for a in self.J], "size": len(self.J), "verified": self.verified}


def build_J(shape: TensorShape) -> IndependentSet:
    """Indices with at most one entry different from 1, without ``(1,...,1,n_d)``."""
    last = shape.ones()[:-1] + (shape.dims[-1],)
    J = tuple(a for a in shape.indices() if non_one_count(a) <= 1 and a != last)
    return IndependentSet(shape, J)


def dimension(shape: TensorShape) -> int:
    return sum(shape.dims) - shape.order


def check_alg_independent(ideal: IdealSpec | Sequence[Polynomial], J: Iterable[Sequence[int]],
                          limits: Limits = Limits()) -> bool:
    """True iff the ideal meets Q[J] only in 0.

    Raises :class:`ResourceLimitError` when elimination hits a cap.
    """
    gens = ideal.generators if isinstance(ideal, IdealSpec) else list(ideal)
    return not eliminate(gens, list(J), limits)


def case1_domain(shape: TensorShape) -> list[MultiIndex]:
    """Indices with at least two entries != 1 and last entry != n_d."""
    nd = shape.dims[-1]
    return [a for a in shape.indices() if non_one_count(a) >= 2 and a[-1] != nd]


def case2_domain(shape: TensorShape) -> list[MultiIndex]:
    """Indices outside J whose last entry equals n_d."""
    J = set(build_J(shape).J)
    nd = shape.dims[-1]
    return [a for a in shape.indices() if a[-1] == nd and a not in J]


# elimination polynomials


def _x(shape, a):
    return Polynomial.variable(shape, a)


def corner_product(a: Sequence[int], shape: TensorShape) -> Polynomial:
    """``prod_i x[1,..,a_i,..,1]``, congruent to ``x[1,...,1]^(d-1) * x[a]`` modulo I_0."""
    out = Polynomial.constant(shape, 1)
    for i, ai in enumerate(a):
        out = out * _x(shape, axis_index(shape, i, ai))
    return out


def construct_H_case1(a: Sequence[int], shape: TensorShape, p=None) -> Polynomial:
    """``x[1..1]^(d-1) x[a] - prod_i x[1,..,a_i,..,1]``; the same binomial serves every even p."""
    a = shape.validate(a)
    if non_one_count(a) < 2 or a[-1] == shape.dims[-1]:
        raise ValueError(f"{format_index(a)} is not in the first case (needs >= 2 entries != 1 and a_d != n_d)")
    x1 = _x(shape, shape.ones())
    return x1 ** (shape.order - 1) * _x(shape, a) - corner_product(a, shape)


def _exps(shape, powers: dict) -> Monomial:
    e = [0] * shape.size
    for b, k in powers.items():
        e[shape.rank(b)] += k
    return tuple(e)


def _rewrite_rules(a: MultiIndex, shape: TensorShape, J: set) -> list[tuple[Monomial, Monomial, str]]:
    d = shape.order
    ones = shape.ones()
    last = ones[:-1] + (shape.dims[-1],)
    rules = []
    # x[1..1]^(d-1) x[b] -> prod_i x[1,..,b_i,..,1] for b outside J and a with >= 2 entries != 1
    for b in shape.indices():
        if b in J or b == a or non_one_count(b) < 2:
            continue
        lhs = {ones: d - 1}
        lhs[b] = lhs.get(b, 0) + 1
        rhs: dict = {}
        for i, bi in enumerate(b):
            c = axis_index(shape, i, bi)
            rhs[c] = rhs.get(c, 0) + 1
        rules.append((_exps(shape, lhs), _exps(shape, rhs), f"x1^{d - 1}*x{format_index(b)}"))
    # prod_{i<d} x[1,..,a_i,..,1] * x[1..1,n_d] -> x[1..1]^(d-1) x[a]
    if a != last:
        lhs: dict = {}
        for i in range(d - 1):
            c = axis_index(shape, i, a[i])
            lhs[c] = lhs.get(c, 0) + 1
        lhs[last] = lhs.get(last, 0) + 1
        rhs = {ones: d - 1}
        rhs[a] = rhs.get(a, 0) + 1
        rules.append((_exps(shape, lhs), _exps(shape, rhs), f"reverse{format_index(a)}"))
    return rules


def _apply_rules(f: Polynomial, rules, counts: dict) -> Polynomial:
    out: dict = {}
    for m, c in sorted(f.terms.items()):
        m = list(m)
        while True:
            for lhs, rhs, name in rules:
                if all(x >= y for x, y in zip(m, lhs)):
                    m = [x - y + z for x, y, z in zip(m, lhs, rhs)]
                    counts[name] = counts.get(name, 0) + 1
                    break
            else:
                break
        k = tuple(m)
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    return Polynomial(f.shape, out)


def is_monomial_sos(f: Polynomial) -> bool:
    """Sufficient sum-of-squares test: positive coefficients on even monomials."""
    return not f.is_zero() and all(c > 0 and all(e % 2 == 0 for e in m) for m, c in f.terms.items())


@dataclass
class Case2Construction:
    H: Polynomial
    f: Polynomial
    g: Polynomial
    trace: dict


def construct_H_case2(a: Sequence[int], shape: TensorShape, s: int,
                      gb: GroebnerBasis | None = None) -> Case2Construction:
    """Build ``H = f * x_a^(2s) - g`` in Q[J + {a}] by rewriting the power-sum identity.

    Starts from ``x1^(2s(d-1)) * (sum_{b not in J} x_b^(2s)) * prod_{i<d} x[1,..,a_i,..,1]^(2s)``,
    rewrites every variable outside J and {a} with the two binomial
    substitutions, and subtracts the seed
    ``x1^(2s(d-1)) * (1 - sum_{b in J} x_b^(2s)) * prod_{i<d} x[1,..,a_i,..,1]^(2s)``,
    which is congruent modulo I_2s.  When ``gb`` is given, membership of H is
    checked against it.
    """
    a = shape.validate(a)
    if s < 1:
        raise ValueError("s must be >= 1")
    if a[-1] != shape.dims[-1]:
        raise ValueError(f"{format_index(a)} is not in the second case (needs a_d = n_d)")
    Jset = build_J(shape)
    if a in Jset:
        raise ValueError(f"{format_index(a)} lies in J")
    J = set(Jset.J)
    d = shape.order
    p = 2 * s
    x1 = _x(shape, shape.ones())
    prefactor = x1 ** (p * (d - 1))
    for i in range(d - 1):
        prefactor = prefactor * _x(shape, axis_index(shape, i, a[i])) ** p
    outside = Polynomial.zero(shape)
    inside = Polynomial.constant(shape, 1)
    for b in shape.indices():
        if b in J:
            inside = inside - _x(shape, b) ** p
        else:
            outside = outside + _x(shape, b) ** p
    seed = prefactor * inside
    target = prefactor * outside
    counts: dict = {}
    rules = _rewrite_rules(a, shape, J)
    rewritten = _apply_rules(target, rules, counts)
    H = rewritten - seed
    trace = {
        "seed": str(seed),
        "rewritten": str(rewritten),
        "rule_applications": dict(sorted(counts.items())),
    }
    try:
        u = as_univariate(H, a, J)
    except ValueError as e:
        raise CertificateError(f"rewriting left foreign variables: {e}", trace) from None
    coeffs = list(u.coeffs)
    f = coeffs[p] if len(coeffs) > p else Polynomial.zero(shape)
    g = -coeffs[0] if coeffs else Polynomial.zero(shape)
    extra = [k for k, c in enumerate(coeffs) if k not in (0, p) and not c.is_zero()]
    trace.update(f=str(f), g=str(g))
    if extra:
        raise CertificateError(f"H has unexpected powers {extra} of x{format_index(a)}", trace)
    if f.is_zero() or g.is_zero():
        raise CertificateError("rewriting produced f = 0 or g = 0", trace)
    if gb is not None and not gb.contains(H):
        raise CertificateError("H is not in the ideal", trace)
    return Case2Construction(H, f, g, trace)


# Groebner basis selection


@dataclass
class BasisChoice:
    gb: GroebnerBasis
    source: str  # "generators" or "completion"
    claimed: bool
    generators_are_gb: bool | None
    spairs_checked: int

    def to_dict(self) -> dict:
        d = {"source": self.source, "claimed_groebner": self.claimed,
             "generators_are_gb": self.generators_are_gb, "spairs_checked": self.spairs_checked,
             "size": len(self.gb)}
        if self.claimed and self.generators_are_gb is False:
            d["discrepancy"] = "claimed Groebner basis failed Buchberger's criterion; completion used"
        return d


def groebner_basis_for(ideal: IdealSpec, limits: Limits = Limits()) -> BasisChoice:
    """Use the generators when they pass Buchberger's criterion, else complete them."""
    if not ideal.generators:
        return BasisChoice(GroebnerBasis((), GREVLEX, ideal), "generators", ideal.claimed_groebner, True, 0)
    chk = None
    if ideal.claimed_groebner:
        chk = is_groebner_basis(ideal.generators, GREVLEX, limits.max_terms)
        if chk.is_gb:
            return BasisChoice(GroebnerBasis(ideal.generators, GREVLEX, ideal), "generators", True, True,
                               chk.spairs_checked)
        log.warning("%s on %s: claimed Groebner basis fails; completing", ideal.name, ideal.shape)
    gb = buchberger(ideal.generators, GREVLEX, limits, source=ideal)
    return BasisChoice(gb, "completion", ideal.claimed_groebner, None if chk is None else False,
                       0 if chk is None else chk.spairs_checked)


# primality


@dataclass
class HRecord:
    a: MultiIndex
    case: int
    H: Polynomial | None
    membership_ok: bool = False
    variables_ok: bool = False
    squarefree_ok: bool = False
    gcd_degree: int | None = None
    form_ok: bool = True
    f: Polynomial | None = None
    g: Polynomial | None = None
    error: str | None = None
    trace: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.error is None and self.membership_ok and self.variables_ok and self.squarefree_ok and self.form_ok

    def to_dict(self) -> dict:
        d = {
            "a": format_index(self.a),
            "case": self.case,
            "H": None if self.H is None else str(self.H),
            "membership_ok": self.membership_ok,
            "variables_ok": self.variables_ok,
            "squarefree_ok": self.squarefree_ok,
            "gcd_degree": self.gcd_degree,
            "passed": self.passed,
        }
        if self.case == 2:
            d["form_ok"] = self.form_ok
            d["f"] = None if self.f is None else str(self.f)
            d["g"] = None if self.g is None else str(self.g)
        if self.error:
            d["error"] = self.error
            d["trace"] = self.trace
        return d


@dataclass
class PrimalityCertificate:
    shape: TensorShape
    p: int
    J: IndependentSet
    records: list[HRecord]
    primary_assumed: bool
    primary_source: str  # "known_for_p2", "assumed" or "missing"
    verdict: str
    reasons: list[str]
    basis: BasisChoice | None = None
    dimension: int | None = None

    @property
    def is_prime(self) -> bool:
        return self.verdict == PRIME

    def to_dict(self) -> dict:
        return {
            "kind": "primality",
            "shape": str(self.shape),
            "p": format_p(self.p),
            "J": self.J.to_dict(),
            "primary_assumed": self.primary_assumed,
            "primary_source": self.primary_source,
            "groebner_basis": None if self.basis is None else self.basis.to_dict(),
            "records": [r.to_dict() for r in self.records],
            "dimension": self.dimension,
            "field_note": "gcds computed over Q(J); a unit gcd there stays a unit over C(J)",
            "verdict": self.verdict,
            "reasons": self.reasons,
        }


def _h_record(a, shape, p, J, gb) -> HRecord:
    s = p // 2
    Jl = list(J)
    if a[-1] != shape.dims[-1]:
        rec = HRecord(a, 1, construct_H_case1(a, shape, p))
    else:
        rec = HRecord(a, 2, None)
        try:
            c2 = construct_H_case2(a, shape, s)
        except CertificateError as e:
            rec.error, rec.trace, rec.form_ok = str(e), e.trace, False
            return rec
        rec.H, rec.f, rec.g = c2.H, c2.f, c2.g
        rec.form_ok = is_monomial_sos(c2.f)
        if not rec.form_ok:
            rec.trace = c2.trace
    H = rec.H
    allowed = {shape.rank(b) for b in Jl} | {shape.rank(a)}
    rec.variables_ok = H.support() <= allowed
    rec.membership_ok = gb.contains(H)
    if rec.variables_ok:
        u = as_univariate(H, a, Jl)
        if u.degree >= 1:
            rec.gcd_degree = gcd_in_k(u, u.derivative()).degree
            rec.squarefree_ok = rec.gcd_degree == 0
    return rec


def primality_certificate(shape: TensorShape, p=2, primary_assumed: bool = False,
                          limits: Limits = Limits()) -> PrimalityCertificate:
    """Run the primary-to-prime pipeline for I_p, p = 2s.

    Primariness is never decided here: for s = 1 it is granted (the ideal
    is known to be primary whenever the tensor has at least two entries),
    for s >= 2 the caller vouches for it with ``primary_assumed``.
    """
    p = parse_p(p)
    if not is_even_p(p):
        raise ValueError(f"primality pipeline needs an even p, got {format_p(p)}")
    ideal = build_ideal(shape, p)
    reasons = []
    if primary_assumed:
        source = "assumed"
    elif p == 2 and shape.size >= 2:
        source = "known_for_p2"
    else:
        source = "missing"
        reasons.append("primary hypothesis missing (pass primary_assumed after an external check)")
    Jset = build_J(shape)
    try:
        indep = check_alg_independent(ideal, Jset.J, limits)
        Jset = IndependentSet(shape, Jset.J, True)
        if not indep:
            reasons.append("J is not algebraically independent")
    except ResourceLimitError as e:
        indep = False
        reasons.append(f"independence check aborted: {e}")
    basis = groebner_basis_for(ideal, limits)
    records = []
    for a in Jset.complement():
        rec = _h_record(a, shape, p, Jset.J, basis.gb)
        log.info("H for %s: case %d, passed=%s", format_index(a), rec.case, rec.passed)
        records.append(rec)
        if not rec.passed:
            reasons.append(f"elimination polynomial for {format_index(a)} failed")
    ok = indep and Jset.verified and all(r.passed for r in records) and source != "missing"
    return PrimalityCertificate(
        shape, p, Jset, records, primary_assumed, source,
        PRIME if ok else NOT_ESTABLISHED, reasons, basis,
        len(Jset.J) if ok else None,
    )


# radical certificates


@dataclass
class RadicalCertificate:
    shape: TensorShape
    p: int | float
    method: str  # "seidenberg" or "squarefree_LT"
    verdict: str
    reasons: list[str]
    zero_dimensional: bool | None = None
    records: list[dict] = field(default_factory=list)
    lt_table: list[dict] = field(default_factory=list)
    basis: BasisChoice | None = None

    @property
    def is_radical(self) -> bool:
        return self.verdict == RADICAL

    def to_dict(self) -> dict:
        d = {
            "kind": "radical",
            "shape": str(self.shape),
            "p": format_p(self.p),
            "method": self.method,
            "groebner_basis": None if self.basis is None else self.basis.to_dict(),
            "verdict": self.verdict,
            "reasons": self.reasons,
        }
        if self.method == "seidenberg":
            d["zero_dimensional"] = self.zero_dimensional
            d["records"] = self.records
        else:
            d["leading_terms"] = self.lt_table
        return d


def zero_dimensional_check(gb: GroebnerBasis | Sequence[Polynomial]) -> bool:
    """Every variable has a pure power among the leading monomials."""
    order = gb.order if isinstance(gb, GroebnerBasis) else GREVLEX
    polys = list(gb)
    if not polys:
        return False
    n = polys[0].nvars
    covered = set()
    for g in polys:
        m = g.leading_monomial(order)
        nz = [i for i, e in enumerate(m) if e]
        if not nz:
            return True  # unit ideal
        if len(nz) == 1:
            covered.add(nz[0])
    return len(covered) == n


def default_univariate(shape: TensorShape, p, a: Sequence[int]) -> Polynomial | None:
    x = _x(shape, a)
    if p == 1:
        return x ** 3 - x
    if p == INF:
        return x ** 2 - 1
    return None


def seidenberg_certificate(shape: TensorShape, p, univariates: Callable | None = None,
                           limits: Limits = Limits()) -> RadicalCertificate:
    """Radicality of a zero-dimensional I_p from one square-free univariate member per variable.

    ``univariates(a)`` supplies the member in ``Q[x_a]``; by default
    ``x^3 - x`` for p = 1 and ``x^2 - 1`` for p = inf.
    """
    p = parse_p(p)
    ideal = build_ideal(shape, p)
    basis = groebner_basis_for(ideal, limits)
    zd = bool(basis.gb.polynomials) and zero_dimensional_check(basis.gb)
    cert = RadicalCertificate(shape, p, "seidenberg", NOT_CONCLUDED, [], zd, basis=basis)
    if not zd:
        cert.reasons.append("guard: ideal is not zero-dimensional, Seidenberg's lemma does not apply")
        return cert
    pick = univariates or (lambda a: default_univariate(shape, p, a))
    ok = True
    for a in shape.indices():
        f = pick(a)
        if f is None:
            cert.reasons.append(f"no univariate member supplied for {format_index(a)}")
            ok = False
            continue
        rec = {"a": format_index(a), "f": str(f)}
        try:
            u = as_univariate(f, a, [])
        except ValueError as e:
            rec.update(univariate=False, error=str(e))
            cert.records.append(rec)
            ok = False
            continue
        rec["membership_ok"] = basis.gb.contains(f)
        rec["gcd_degree"] = gcd_in_k(u, u.derivative()).degree if u.degree >= 1 else None
        rec["passed"] = rec["membership_ok"] and rec["gcd_degree"] == 0
        if not rec["passed"]:
            ok = False
            cert.reasons.append(f"univariate member for {format_index(a)} failed")
        cert.records.append(rec)
    if ok:
        cert.verdict = RADICAL
    return cert


def squarefree_LT_certificate(gb: GroebnerBasis, p=0) -> RadicalCertificate:
    """Radical if the basis is verified and every leading monomial is square-free."""
    polys = list(gb)
    if not polys:
        raise ValueError("empty basis")
    shape = polys[0].shape
    chk = is_groebner_basis(polys, gb.order)
    table = []
    for g in polys:
        m = g.leading_monomial(gb.order)
        table.append({"lt": format_monomial(shape, m), "squarefree": all(e <= 1 for e in m)})
    cert = RadicalCertificate(shape, parse_p(p), "squarefree_LT", NOT_CONCLUDED, [], lt_table=table)
    if not chk.is_gb:
        cert.reasons.append("basis fails Buchberger's criterion")
    bad = [t["lt"] for t in table if not t["squarefree"]]
    if bad:
        cert.reasons.append("leading monomials with squares: " + ", ".join(bad))
    if chk.is_gb and not bad:
        cert.verdict = RADICAL
    return cert


def squarefree_LT_certificate_for(shape: TensorShape, p=0, limits: Limits = Limits()) -> RadicalCertificate:
    ideal = build_ideal(shape, p)
    if not ideal.generators:
        cert = RadicalCertificate(shape, ideal.p, "squarefree_LT", RADICAL, ["zero ideal"])
        return cert
    basis = groebner_basis_for(ideal, limits)
    cert = squarefree_LT_certificate(basis.gb, ideal.p)
    cert.basis = basis
    return cert


# exact linear algebra and smoothness


def bareiss_rank(rows: Sequence[Sequence]) -> int:
    """Exact rank by fraction-free Gaussian elimination.

    Rational rows are scaled to integers first.
    """
    M = []
    for row in rows:
        row = [mpq(v) for v in row]
        den = mpz(1)
        for v in row:
            den = lcm(den, v.denominator)
        M.append([mpz(v * den) for v in row])
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank = 0
    prev = mpz(1)
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        pv = M[rank][col]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                M[r][c] = (pv * M[r][c] - M[r][col] * M[rank][c]) // prev
            M[r][col] = mpz(0)
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def unit_corner_point(shape: TensorShape) -> list[mpq]:
    """``e_1 (x) ... (x) e_1`` as a vector indexed by variable rank."""
    return [mpq(1)] + [mpq(0)] * (shape.size - 1)


def jacobian_at(generators: Sequence[Polynomial], point: Sequence) -> list[list[mpq]]:
    shape = generators[0].shape
    idx = list(shape.indices())
    return [[g.partial_derivative(b).evaluate(point) for b in idx] for g in generators]


@dataclass
class SmoothnessCertificate:
    shape: TensorShape
    p: int
    point: list
    rank: int
    required: int
    on_variety: bool
    prime_verdict: str | None
    real_radical: bool

    def to_dict(self) -> dict:
        return {
            "kind": "smoothness",
            "shape": str(self.shape),
            "p": format_p(self.p),
            "point": [str(v) for v in self.point],
            "jacobian_rank": self.rank,
            "required_rank": self.required,
            "on_variety": self.on_variety,
            "prime_verdict": self.prime_verdict,
            "real_radical": self.real_radical,
        }


def smoothness_certificate(shape: TensorShape, p=2,
                           primality: PrimalityCertificate | None = None) -> SmoothnessCertificate:
    """Exact Jacobian rank of I_2s at ``e_1 (x) ... (x) e_1`` against ``prod n_i - dim``.

    The single-point criterion needs a prime ideal.  Pass the primality
    certificate to make that precondition part of the verdict; without it,
    the caller is responsible for it and ``prime_verdict`` is ``None``.
    """
    p = parse_p(p)
    if not is_even_p(p):
        raise ValueError(f"smoothness check needs an even p, got {format_p(p)}")
    ideal = build_ideal(shape, p)
    y = unit_corner_point(shape)
    on_variety = all(g.evaluate(y) == 0 for g in ideal.generators)
    if not on_variety:
        raise ValueError("e_1 (x) ... (x) e_1 is not on the variety")
    rank = bareiss_rank(jacobian_at(ideal.generators, y))
    required = shape.size - dimension(shape)
    verdict = rank >= required
    pv = None
    if primality is not None:
        pv = primality.verdict
        verdict = verdict and primality.is_prime
    return SmoothnessCertificate(shape, p, y, rank, required, on_variety, pv, verdict)
