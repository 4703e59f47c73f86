"""Polynomial solutions of linear ODEs ``sum_j p_j(x) q^(j)(x) = 0``.

The operator ``f(q) = sum_j p_j q^(j)`` never raises the degree by more than
``shift = max_j (deg p_j - j)``.  Putting ``x^n`` of the domain on level
``n + shift`` and ``x^k`` of the codomain on level ``k`` turns ``f`` into a
map preserving an INCREASING filtration, and its kernel is found by the
spectral-sequence engine level by level from the top.

A polynomial solution with leading term ``x^n`` needs the top coefficient of
``f(x^n)`` to vanish; that coefficient is the indicial polynomial
``sum_j c_j n (n-1) ... (n-j+1)`` with ``c_j`` the coefficient of
``x^(j + shift)`` in ``p_j``.  Its largest non-negative integer root bounds
the degree of every solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.parsing import parse_polynomial
from ..algebra.polynomial import Polynomial, VariableTable
from ..algebra.scalars import Scalar
from ..errors import HypothesisFailure, NotAStateVariable
from ..spectral import Direction, Obstruction, build_graded_map, extend_to_kernel, kernel_basis_up_to
from ._grading import MonomialGrading

__all__ = ["OdeProblem", "OdeResult", "ode_operator", "ode_map", "ode_table", "ode_poly_solutions", "indicial_roots"]


@dataclass
class OdeProblem:
    """``coefficients[j]`` multiplies the ``j``-th derivative."""

    coefficients: list
    max_degree: int | None = None

    @classmethod
    def parse(cls, coefficients, variable="x", params=(), max_degree=None):
        table = VariableTable([variable], params)
        return cls([parse_polynomial(c, table) for c in coefficients], max_degree)

    @property
    def table(self) -> VariableTable:
        return self.coefficients[0].table

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("an ODE needs at least one coefficient")
        t = self.coefficients[0].table
        if t.nstate != 1:
            raise NotAStateVariable("ODE coefficients must be univariate in one STATE variable")


def _nonzero(prob):
    return [(j, p) for j, p in enumerate(prob.coefficients) if not p.is_zero()]


def ode_shift(prob: OdeProblem) -> int:
    terms = _nonzero(prob)
    if not terms:
        raise HypothesisFailure("the zero operator has no finite filtration shift")
    return max(p.degree() - j for j, p in terms)


def ode_operator(prob: OdeProblem):
    """The operator ``q -> sum_j p_j q^(j)`` on Polynomials."""

    def f(q: Polynomial) -> Polynomial:
        out = Polynomial.zero(prob.table)
        d = q
        for j, p in enumerate(prob.coefficients):
            if j:
                d = d.diff(0)
            if p and d:
                out = out + p * d
        return out

    return f


def indicial_coefficients(prob: OdeProblem):
    sh = ode_shift(prob)
    return [p.coefficient((j + sh,)) for j, p in enumerate(prob.coefficients)]


def indicial_value(prob: OdeProblem, n: int) -> Scalar:
    total = Scalar.zero(prob.table.space)
    for j, c in enumerate(indicial_coefficients(prob)):
        if c:
            fall = 1
            for k in range(j):
                fall *= n - k
            total = total + c * fall
    return total


def indicial_roots(prob: OdeProblem):
    """Non-negative integer roots of the indicial polynomial.

    Raises HypothesisFailure when the indicial polynomial vanishes
    identically or has non-numeric coefficients; then no degree bound follows.
    """
    cs = indicial_coefficients(prob)
    if not all(c.is_constant() for c in cs):
        raise HypothesisFailure("indicial polynomial has parametric coefficients")
    # expand sum_j c_j n(n-1)...(n-j+1) into powers of n
    poly = [Fraction(0)] * (len(cs) + 1)
    for j, c in enumerate(cs):
        fall = [Fraction(1)]
        for k in range(j):
            nxt = [Fraction(0)] * (len(fall) + 1)
            for i, a in enumerate(fall):
                nxt[i + 1] += a
                nxt[i] -= k * a
            fall = nxt
        v = c.to_gaussian()
        if v.im:
            raise HypothesisFailure("indicial polynomial is not real")
        for i, a in enumerate(fall):
            poly[i] += v.re * a
    while poly and poly[-1] == 0:
        poly.pop()
    if not poly:
        raise HypothesisFailure("indicial polynomial vanishes identically; give max_degree")
    if len(poly) == 1:
        return []
    # integer roots divide the constant term after clearing denominators
    import math

    lcm = 1
    for a in poly:
        lcm = lcm * a.denominator // math.gcd(lcm, a.denominator)
    ints = [int(a * lcm) for a in poly]
    low = next(i for i, a in enumerate(ints) if a)
    roots = [0] if low > 0 else []
    c0 = abs(ints[low])
    cands = set()
    for dv in range(1, math.isqrt(c0) + 1):
        if c0 % dv == 0:
            cands.update((dv, c0 // dv))
    for r in sorted(cands):
        if sum(a * r**i for i, a in enumerate(ints)) == 0:
            roots.append(r)
    return sorted(set(roots))


def _degree_bound(prob, max_degree):
    if max_degree is not None:
        return max_degree
    if prob.max_degree is not None:
        return prob.max_degree
    roots = indicial_roots(prob)
    return max(roots) if roots else 0


def ode_map(prob: OdeProblem, max_degree: int | None = None):
    """The graded map on ``x^0..x^N`` (domain) with its two gradings."""
    N = _degree_bound(prob, max_degree)
    sh = ode_shift(prob)
    t = prob.table
    dom = MonomialGrading(t, [n + sh for n in range(N + 1)], offset=-sh)
    cod_levels = sorted({k for k in range(0, N + sh + 1)})
    cod = MonomialGrading(t, cod_levels, offset=0)
    op = ode_operator(prob)

    def image(level, col):
        n = level - sh
        return cod.encode(op(Polynomial.monomial(t, (n,))))

    f = build_graded_map(
        t.space,
        Direction.INCREASING,
        dom.labels(),
        cod.labels(),
        image,
        decode_domain=dom.decode,
        decode_codomain=cod.decode,
        name="ode",
    )
    return f, dom, cod


def ode_table(prob: OdeProblem, max_degree: int | None = None):
    """Rows ``(monomial, grade level, f(monomial), filtration level)``.

    The filtration level is the degree of the image, printed as 0 when the
    image vanishes.
    """
    N = _degree_bound(prob, max_degree)
    sh = ode_shift(prob)
    t = prob.table
    op = ode_operator(prob)
    rows = []
    for n in range(N + 1):
        m = Polynomial.monomial(t, (n,))
        img = op(m)
        rows.append({"line": n + 1, "monomial": m, "grade_level": n + sh, "image": img, "filtration_level": max(img.degree(), 0)})
    return rows


@dataclass
class OdeResult:
    basis: list
    witnesses: list
    outcomes: list = field(default_factory=list)  # per leading monomial
    table: list = field(default_factory=list)
    shift: int = 0
    max_degree: int = 0
    indicial: list | None = None
    graded_map: object = None


def ode_poly_solutions(prob: OdeProblem, max_degree: int | None = None, table_degree: int | None = None) -> OdeResult:
    """All polynomial solutions up to the degree bound, as a basis.

    The table covers at least ``x^0..x^9`` unless ``table_degree`` is given.
    """
    N = _degree_bound(prob, max_degree)
    f, dom, _ = ode_map(prob, N)
    sh = ode_shift(prob)
    witnesses = kernel_basis_up_to(f)
    basis = [dom.decode_element(w.element) for w in witnesses]
    op = ode_operator(prob)
    for b in basis:
        if op(b):
            raise AssertionError("kernel element does not solve the ODE")
    outcomes = []
    one = Scalar.one(prob.table.space)
    for n in range(N + 1):
        res = extend_to_kernel(f, n + sh, [one])
        m = Polynomial.monomial(prob.table, (n,))
        if isinstance(res, Obstruction):
            outcomes.append({"leading": m, "status": "obstruction", "page": res.page, "target_level": res.target_level})
        else:
            outcomes.append({"leading": m, "status": "witness", "solution": dom.decode_element(res.element), "trace": res.trace})
    try:
        roots = indicial_roots(prob)
    except HypothesisFailure:
        roots = None
    return OdeResult(
        basis=basis,
        witnesses=witnesses,
        outcomes=outcomes,
        table=ode_table(prob, max(N, 9) if table_degree is None else table_degree),
        shift=sh,
        max_degree=N,
        indicial=roots,
        graded_map=f,
    )
