"""First integrals of polynomial Hamiltonians with a quadratic part.

``H = H_0 + H_1 + ...`` with ``H_k`` homogeneous of degree ``k + 2``.  The
operator ``ad(H) = {H, .}`` sends ``H_j`` to ``H_{j+k}`` through ``H_k`` and
preserves the DECREASING filtration by degree.  A search for integrals of
degree at most ``d`` uses the finite map on ``H_0 (+) ... (+) H_{d-2}``; its
kernel is exactly the set of polynomial integrals of degree ``<= d`` without
constant or linear part, and its obstructions are the obstructions to a
terminating integral of that degree.

The default problem is the Henon-Heiles family

    H = 1/2 (p1^2 + p2^2) + 1/2 (A q1^2 + B q2^2) + 1/3 q1^3 + L q1 q2^2,

with each of ``A``, ``B``, ``L`` either a rational value or a symbol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.parsing import parse_polynomial
from ..algebra.polynomial import Polynomial, VariableTable, monomial_basis
from ..algebra.scalars import Scalar, rational_sqrt, to_fraction
from ..errors import ChartFailure, ChartMismatch, HypothesisFailure, NotAPerfectSquare
from ..hamiltonian import ComplexChart, canonical_table, henon_heiles, poisson_bracket
from ..linalg import ExactMatrix, SubspaceBasis, rank, solve_affine
from ..spectral import (
    Direction,
    Obstruction,
    PageClass,
    Witness,
    advance,
    build_graded_map,
    differential,
    extend_to_kernel,
    survivors,
)
from ._grading import MonomialGrading

__all__ = [
    "HamProblem",
    "HamResult",
    "CandidateRun",
    "henon_heiles_problem",
    "ham_map",
    "ham_search",
    "ham_verify",
    "run_candidate",
    "coker_marker_policy",
    "vanishing_conditions",
]


def _value(v):
    """None/'indeterminate'/'symbolic' mean a free symbol; otherwise a rational."""
    if v is None:
        return None
    if isinstance(v, str) and v.strip().lower() in ("", "indeterminate", "symbolic", "free"):
        return None
    return to_fraction(v)


def henon_heiles_table(A=None, B=None, L=None, equal_frequencies=False):
    """Table for the Henon-Heiles family and the Scalars standing for A, B, L.

    Indeterminate frequencies get square-root symbols ``a`` (``a^2 = A``) and
    ``b`` (``b^2 = B``); a rational frequency that is not a square gets a
    square-root symbol bound to the constant.  ``equal_frequencies`` forces
    ``B = A``, sharing one symbol.
    """
    A, B, L = _value(A), _value(B), _value(L)
    params, binds = [], {}
    if A is None:
        params += ["A", "a"]
        binds["a"] = "A"
    else:
        try:
            rational_sqrt(A)
        except NotAPerfectSquare:
            params.append("a")
            binds["a"] = A
    if not equal_frequencies:
        if B is None:
            params += ["B", "b"]
            binds["b"] = "B"
        else:
            try:
                rational_sqrt(B)
            except NotAPerfectSquare:
                params.append("b")
                binds["b"] = B
    if L is None:
        params.append("L")
    t = canonical_table(2, params, binds)
    sp = t.space
    sA = Scalar.symbol(sp, "A") if A is None else Scalar.const(sp, A)
    if equal_frequencies:
        sB = sA
    else:
        sB = Scalar.symbol(sp, "B") if B is None else Scalar.const(sp, B)
    sL = Scalar.symbol(sp, "L") if L is None else Scalar.const(sp, L)
    return t, (sA, sB, sL)


@dataclass
class HamProblem:
    hamiltonian: Polynomial
    max_degree: int = 4
    candidates: list = field(default_factory=list)
    frequencies: list | None = None  # A_j of H0, read off H0 when None

    @property
    def table(self) -> VariableTable:
        return self.hamiltonian.table

    def H0(self):
        return self.hamiltonian.homogeneous_part(2)


def henon_heiles_problem(A=None, B=None, L=None, max_degree=4, equal_frequencies=False, candidates=()):
    t, (sA, sB, sL) = henon_heiles_table(A, B, L, equal_frequencies)
    H = henon_heiles(t, sA, sB, sL)
    cands = [parse_polynomial(c, t) if isinstance(c, str) else c for c in candidates]
    return HamProblem(H, max_degree, cands, [sA, sB])


def ham_map(prob: HamProblem):
    H = prob.hamiltonian
    t = H.table
    parts = H.homogeneous_components()
    if min(parts) < 2:
        raise HypothesisFailure("H must start at degree 2")
    top = max(parts) - 2
    dmax = prob.max_degree - 2
    if dmax < 0:
        raise ValueError("max_degree must be at least 2")
    dom = MonomialGrading(t, range(0, dmax + 1), offset=2)
    cod = MonomialGrading(t, range(0, dmax + top + 1), offset=2)
    basis = {L: dom.basis(L) for L in dom.levels}

    def image(L, col):
        m = Polynomial.monomial(t, basis[L][col])
        return cod.encode(poisson_bracket(H, m))

    f = build_graded_map(
        t.space, Direction.DECREASING, dom.labels(), cod.labels(), image, dom.decode, cod.decode, name="ham"
    )
    return f, dom, cod


def coker_marker_policy(f, dom, level=2, source_level=0):
    """Canonical choice of the kernel part of a correction.

    At ``level`` the shift-0 part ``ad(H0)`` has a kernel; a correction there
    is fixed only up to that kernel.  Markers are monomials free of the
    position variables chosen greedily (graded-lex) so that the kernel projects
    isomorphically onto them; the policy subtracts the kernel element that
    makes the correction vanish on every marker.  Returns None when no such
    marker set exists.
    """
    from ..linalg import nullspace

    d0 = f.components.get((level, level))
    if d0 is None:
        return None
    ker = nullspace(d0).vectors
    if not ker:
        return None
    t = dom.table
    n = t.nstate // 2
    basis = dom.basis(level)
    pure_p = [k for k, e in enumerate(basis) if not any(e[:n])]
    markers: list = []
    for k in pure_p:
        trial = markers + [k]
        mat = ExactMatrix.from_rows(f.space, [[v[c] for c in trial] for v in ker])
        if rank(mat) == len(trial):
            markers = trial
        if len(markers) == len(ker):
            break
    if len(markers) < len(ker):
        return None
    # system: sum_i c_i ker_i[markers] = K[markers]
    sysm = ExactMatrix.from_columns(f.space, [[v[c] for c in markers] for v in ker], len(markers))

    def policy(page, el):
        if source_level + page - 1 != level or level not in el:
            return None
        vec = el[level]
        coeffs = solve_affine(sysm, [vec[c] for c in markers])
        new = list(vec)
        for c, v in zip(coeffs, ker):
            if c:
                new = [a - c * b for a, b in zip(new, v)]
        out = dict(el)
        out[level] = new
        return out

    policy.markers = [Polynomial.monomial(t, basis[c]) for c in markers]
    policy.kernel = [dom.decode(level, v) for v in ker]
    return policy


@dataclass
class CandidateRun:
    """Step-by-step record of extending one leading term ``K0``."""

    K0: Polynomial
    steps: list  # dicts: page, target_level, differential, correction, status
    integral: Polynomial | None
    obstruction: dict | None
    conditions: dict = field(default_factory=dict)


def run_candidate(f, dom, cod, K0: Polynomial, policy=None) -> CandidateRun:
    el = dom.encode(K0)
    if set(el) != {0}:
        raise ValueError("candidate must be a homogeneous quadratic")
    cls = PageClass(0, 0, el)
    steps = []
    last = f.last_target(0)
    while cls.page <= last:
        dv = differential(f, cls, check=False)
        T = dv.target_level
        step = {"page": cls.page, "target_level": T, "differential": cod.decode(T, dv.value) if dv.value else None}
        res = advance(f, cls, adjust=policy, check=False)
        if isinstance(res, Obstruction):
            step["status"] = "obstruction"
            step["reduced"] = cod.decode(T, res.reduced)
            steps.append(step)
            obs = {
                "page": res.page,
                "target_level": T,
                "value": cod.decode(T, res.value),
                "reduced": cod.decode(T, res.reduced),
                "denominator": [cod.decode(T, v) for v in res.denominator.vectors],
                "representative": dom.decode_element(res.representative),
            }
            return CandidateRun(K0, steps, None, obs)
        nxt, corr = res
        step["status"] = "corrected" if any(x for v in corr.values() for x in v) else "survived"
        step["representative"] = dom.decode_element(nxt.element)
        steps.append(step)
        cls = nxt
    return CandidateRun(K0, steps, dom.decode_element(cls.element), None)


def vanishing_conditions(P: Polynomial):
    """Rational parameter values at which the polynomial ``P`` vanishes.

    The content of ``P`` (gcd of the numerators of all coefficients) is
    factored; every factor linear in a single free parameter contributes its
    root.  Returns ``{param: [values]}``.
    """
    import sympy

    sp = P.table.space
    if P.is_zero():
        return {}
    R = sp.sympy_ring()
    if not R:
        return {}
    from ..algebra.scalars import _split_parts, _to_ring

    g = None
    for c in P.terms.values():
        parts, _ = _split_parts(sp, c.num)
        for part in parts.values():
            rp = _to_ring(sp, part)
            g = rp if g is None else g.gcd(rp)
    if g is None or g.is_ground:
        return {}
    expr = g.as_expr()
    out: dict = {}
    for fac, _ in sympy.factor_list(expr)[1]:
        fs = fac.free_symbols
        if len(fs) != 1:
            continue
        (s,) = fs
        poly = sympy.Poly(fac, s)
        for root in sympy.roots(poly, filter="Q"):
            if root.is_Rational:
                name = str(s).lstrip("_")
                out.setdefault(name, set()).add(Fraction(int(root.p), int(root.q)))
    return {k: sorted(v) for k, v in sorted(out.items())}


@dataclass
class HamResult:
    problem: HamProblem
    e1_dim: int
    page_dims: list
    integrals: list
    candidates: list
    chart_ok: bool | None = None
    zero_weight_quartic: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    graded_map: object = None
    policy_markers: list = field(default_factory=list)


def ham_search(prob: HamProblem, policy="coker", with_candidates=True) -> HamResult:
    """Integrals with quadratic lowest part up to ``prob.max_degree``."""
    for w in prob.frequencies or ():
        if w.is_zero():
            raise ChartFailure("a vanishing frequency makes the complex chart degenerate (AB = 0)")
    f, dom, cod = ham_map(prob)
    H = prob.hamiltonian
    classes, dims = survivors(f, 0)
    integrals, witnesses = [], []
    for cls in classes:
        K = dom.decode_element(cls.element)
        if poisson_bracket(H, K):
            raise AssertionError("survivor is not an integral")
        integrals.append(K)
        witnesses.append(Witness(0, cls.element, exact=True))
    pol = coker_marker_policy(f, dom) if policy == "coker" and 2 in f.domain else None
    runs = []
    if with_candidates:
        cands = list(prob.candidates)
        if not cands:
            from ..linalg import nullspace

            d0 = f.components.get((0, 0))
            vecs = nullspace(d0).vectors if d0 is not None else []
            cands = [dom.decode(0, v) for v in vecs]
        for K0 in cands:
            run = run_candidate(f, dom, cod, K0, pol)
            if run.obstruction is not None:
                conds = vanishing_conditions(run.obstruction["value"])
                run.conditions = {k: [{"value": v, "confirmed": _confirm(prob, K0, k, v)} for v in vals] for k, vals in conds.items()}
            runs.append(run)
    zero_w = []
    try:
        chart = ComplexChart.for_hamiltonian(prob.H0())
        zero_w = [Polynomial.monomial(chart.table, e) for e in chart.zero_weight_monomials(4)]
        chart_ok = True
    except (ChartFailure, NotAPerfectSquare):
        chart_ok = False
    return HamResult(
        prob,
        dims[1] if len(dims) > 1 else dims[0],
        dims,
        integrals,
        runs,
        chart_ok,
        zero_w,
        witnesses=witnesses,
        graded_map=f,
        policy_markers=list(getattr(pol, "markers", [])),
    )


def _confirm(prob: HamProblem, K0: Polynomial, name: str, value) -> bool:
    """Specialize one parameter and check that K0 then extends to an integral."""
    t = prob.table
    sp = t.space
    if name not in sp.params or sp.is_bound(name):
        return False
    keep = [p for p in sp.params if p != name]
    binds = {k: v for k, v in sp.bindings.items() if k != name and v != name}
    nt = VariableTable(t.state, keep, binds)
    H = prob.hamiltonian.retable(nt, {name: value})
    K0s = K0.retable(nt, {name: value})
    sub = HamProblem(H, prob.max_degree, [K0s], None)
    f, dom, cod = ham_map(sub)
    res = extend_to_kernel(f, 0, dom.encode(K0s)[0])
    if isinstance(res, Obstruction):
        return False
    K = dom.decode_element(res.element)
    return poisson_bracket(H, K).is_zero()


def ham_verify(H: Polynomial, K: Polynomial):
    """Exact check of ``{H, K} = 0``; returns (ok, bracket)."""
    if H.table != K.table:
        raise ChartMismatch("H and K are written over different variable tables")
    b = poisson_bracket(H, K)
    return b.is_zero(), b
