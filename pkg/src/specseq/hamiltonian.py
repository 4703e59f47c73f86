"""Poisson brackets, the complex chart of a diagonal quadratic Hamiltonian,
and eigenframes of ad(H0) on linear polynomials.

Conventions
-----------
Real chart variables are ordered ``(q_1..q_n, p_1..p_n)`` and
``J = [[0, I], [-I, 0]]``.  The bracket is

    {H, K} = <J H_x, K_x> = sum_j (H_{p_j} K_{q_j} - H_{q_j} K_{p_j}),

so ``{q_1, p_1} = -1``, ``dK/dt = {H, K}`` along the flow of ``J H_x`` and
``ad(H)(K) = {H, K}``.

For ``H0 = 1/2 sum_j (p_j^2 + A_j q_j^2)`` with ``a_j^2 = A_j`` the complex
chart is ``z_j = a_j q_j + i p_j``, ``zb_j = a_j q_j - i p_j``.  In it
``H0 = 1/2 sum z_j zb_j`` and every monomial is an eigenvector:
``{H0, m} = i [m] m`` with weight ``[m] = sum_j (J_j - I_j) a_j`` where
``I_j``, ``J_j`` are the exponents of ``z_j``, ``zb_j``.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra.polynomial import Polynomial, VariableTable
from .algebra.scalars import GaussianRational, Scalar, rational_sqrt
from .errors import (
    ChartFailure,
    ChartMismatch,
    IrrationalSpectrum,
    NotAPerfectSquare,
    NotHomogeneous,
    NotInComplexChart,
    OddDimension,
    SingularHessian,
    ZeroWeightMonomial,
)
from .linalg import ExactMatrix, determinant, inverse, nullspace
from .vectorfield import PolyVectorField

__all__ = [
    "canonical_table",
    "poisson_bracket",
    "ham_vector_field",
    "is_hamiltonian_field",
    "quadratic_companion",
    "ComplexChart",
    "weight",
    "ad_H0_solve",
    "eigenframe",
    "Eigenframe",
    "henon_heiles",
    "diagonal_quadratic",
]


def canonical_table(n: int, params=(), bindings=None, q="q", p="p") -> VariableTable:
    """Table with STATE ``q1..qn, p1..pn`` followed by the given parameters."""
    state = [f"{q}{k}" for k in range(1, n + 1)] + [f"{p}{k}" for k in range(1, n + 1)]
    return VariableTable(state, params, bindings)


def _half(table):
    m = table.nstate
    if m % 2:
        raise OddDimension(f"phase space of odd dimension {m}")
    return m // 2


def poisson_bracket(H: Polynomial, K: Polynomial) -> Polynomial:
    """``{H, K}`` in the real chart (first half of the STATE variables are q's)."""
    if H.table != K.table:
        raise ChartMismatch("bracket of polynomials over different tables")
    n = _half(H.table)
    out = Polynomial.zero(H.table)
    for j in range(n):
        hp, hq = H.diff(n + j), H.diff(j)
        if hp:
            kq = K.diff(j)
            if kq:
                out = out + hp * kq
        if hq:
            kp = K.diff(n + j)
            if kp:
                out = out - hq * kp
    return out


def ham_vector_field(H: Polynomial) -> PolyVectorField:
    """``J H_x = (H_p, -H_q)``."""
    n = _half(H.table)
    return PolyVectorField([H.diff(n + j) for j in range(n)] + [-H.diff(j) for j in range(n)], H.table)


def is_hamiltonian_field(F: PolyVectorField) -> bool:
    """True when ``-J dF/dx`` is symmetric, i.e. F is locally ``J H_x``."""
    n = _half(F.table)
    D = F.jacobian()
    m = 2 * n
    rows = [[-x for x in D[n + i]] if i < n else D[i - n] for i in range(m)]
    return all(rows[i][j] == rows[j][i] for i in range(m) for j in range(i + 1, m))


def _hessian(H: Polynomial) -> ExactMatrix:
    if not (H.is_zero() or (H.is_homogeneous() and H.degree() == 2)):
        raise NotHomogeneous("expected a homogeneous quadratic")
    m = H.table.nstate
    rows = []
    for i in range(m):
        di = H.diff(i)
        rows.append([di.diff(j).coefficient((0,) * m) for j in range(m)])
    return ExactMatrix.from_rows(H.table.space, rows, m)


def _J(space, n):
    m = ExactMatrix(space, 2 * n, 2 * n)
    for k in range(n):
        m.set(k, n + k, 1)
        m.set(n + k, k, -1)
    return m


def quadratic_companion(H: Polynomial) -> Polynomial:
    """Quadratic ``K = 1/2 x^T B x`` with ``B = -J S^{-1} J``; ``{H, K} = 0``.

    ``S`` is the Hessian of ``H``.  Raises :class:`SingularHessian`.
    """
    n = _half(H.table)
    S = _hessian(H)
    try:
        Sinv = inverse(S)
    except SingularHessian:
        raise SingularHessian("Hessian of H is singular") from None
    J = _J(H.table.space, n)
    B = (J @ Sinv @ J).scale(-1)
    xs = [Polynomial.variable(H.table, v) for v in H.table.state]
    K = Polynomial.zero(H.table)
    half = Fraction(1, 2)
    for i, row in enumerate(B.rows):
        for j, v in row.items():
            K = K + (xs[i] * xs[j]).scale(v * half)
    return K


def diagonal_quadratic(table: VariableTable, coeffs) -> Polynomial:
    """``1/2 sum_j (p_j^2 + A_j q_j^2)``."""
    n = _half(table)
    H = Polynomial.zero(table)
    half = Fraction(1, 2)
    for j in range(n):
        q = Polynomial.variable(table, table.state[j])
        p = Polynomial.variable(table, table.state[n + j])
        A = coeffs[j] if isinstance(coeffs[j], Scalar) else Scalar.const(table.space, coeffs[j])
        H = H + (p * p).scale(half) + (q * q).scale(A * half)
    return H


def henon_heiles(table: VariableTable, A, B, L) -> Polynomial:
    """``H = 1/2 (p1^2 + p2^2) + 1/2 (A q1^2 + B q2^2) + 1/3 q1^3 + L q1 q2^2``."""
    sp = table.space

    def sc(v):
        if isinstance(v, Scalar):
            return v
        if isinstance(v, str) and v in sp.index:
            return Scalar.symbol(sp, v)
        return Scalar.const(sp, v)

    q1, q2 = (Polynomial.variable(table, table.state[k]) for k in (0, 1))
    H = diagonal_quadratic(table, [sc(A), sc(B)])
    return H + (q1**3).scale(Fraction(1, 3)) + (q1 * q2 * q2).scale(sc(L))


def _sqrt_in_space(space, A: Scalar) -> Scalar:
    """A Scalar ``a`` in ``space`` with ``a*a == A``, using declared bindings."""
    if A.is_rational():
        v = A.to_fraction()
        try:
            return Scalar.const(space, rational_sqrt(v))
        except NotAPerfectSquare:
            for sym, tgt in space.bindings.items():
                if not isinstance(tgt, str) and tgt == v:
                    return Scalar.symbol(space, sym)
            raise
    for sym in space.bindings:
        s = Scalar.symbol(space, sym)
        if s * s == A:
            return s
    raise NotAPerfectSquare(f"no square root of {A} is declared in the parameter space")


class ComplexChart:
    """Complex coordinates ``z_j, zb_j`` diagonalizing ``ad(H0)``."""

    def __init__(self, real_table: VariableTable, A, z="z", zb="zb"):
        n = _half(real_table)
        sp = real_table.space
        self.n = n
        self.real_table = real_table
        self.A = [a if isinstance(a, Scalar) else (Scalar.symbol(sp, a) if isinstance(a, str) else Scalar.const(sp, a)) for a in A]
        if len(self.A) != n:
            raise ChartFailure(f"{len(self.A)} frequencies for {n} degrees of freedom")
        self.a = [_sqrt_in_space(sp, x) for x in self.A]
        if any(not x for x in self.a):
            raise ChartFailure("zero frequency: the chart is degenerate")
        self.table = real_table.with_state([f"{z}{k}" for k in range(1, n + 1)] + [f"{zb}{k}" for k in range(1, n + 1)])
        i = Scalar.imag_unit(sp)
        half = Fraction(1, 2)
        zs = [Polynomial.variable(self.table, v) for v in self.table.state]
        qs = [Polynomial.variable(real_table, v) for v in real_table.state]
        # q = (z + zb) / (2a), p = (z - zb) / (2i)
        self._to_complex = [(zs[j] + zs[n + j]).scale(self.a[j].inverse() * half) for j in range(n)] + [
            (zs[j] - zs[n + j]).scale((i * 2).inverse()) for j in range(n)
        ]
        # z = a q + i p, zb = a q - i p
        self._to_real = [qs[j].scale(self.a[j]) + qs[n + j].scale(i) for j in range(n)] + [
            qs[j].scale(self.a[j]) - qs[n + j].scale(i) for j in range(n)
        ]

    @classmethod
    def for_hamiltonian(cls, H0: Polynomial, **kw):
        """Read ``A_j`` off a diagonal quadratic ``H0``; ChartFailure if not diagonal."""
        n = _half(H0.table)
        m = 2 * n
        S = _hessian(H0.homogeneous_part(2))
        if H0 != H0.homogeneous_part(2):
            raise ChartFailure("H0 must be a homogeneous quadratic")
        one = Scalar.one(H0.table.space)
        for r in range(m):
            for c in range(m):
                if r != c and S.entry(r, c):
                    raise ChartFailure("H0 is not diagonal in (q, p)")
        if any(S.entry(n + j, n + j) != one for j in range(n)):
            raise ChartFailure("momentum coefficients of H0 must be 1/2")
        return cls(H0.table, [S.entry(j, j) for j in range(n)], **kw)

    def H0(self) -> Polynomial:
        return diagonal_quadratic(self.real_table, self.A)

    def _check(self, P, table):
        if P.table != table:
            if table is self.table:
                raise NotInComplexChart("polynomial is not expressed in the complex chart")
            raise ChartMismatch("polynomial is not expressed in the real chart")

    def to_complex(self, P: Polynomial) -> Polynomial:
        self._check(P, self.real_table)
        return P.substitute_linear(self._to_complex)

    def to_real(self, P: Polynomial) -> Polynomial:
        self._check(P, self.table)
        return P.substitute_linear(self._to_real)

    def weight(self, exps) -> Scalar:
        n = self.n
        w = Scalar.zero(self.table.space)
        for j in range(n):
            k = exps[n + j] - exps[j]
            if k:
                w = w + self.a[j] * k
        return w

    def bracket(self, F: Polynomial, G: Polynomial) -> Polynomial:
        """Poisson bracket written in the complex chart."""
        self._check(F, self.table)
        self._check(G, self.table)
        n = self.n
        i2 = Scalar.imag_unit(self.table.space) * 2
        out = Polynomial.zero(self.table)
        for j in range(n):
            c = i2 * self.a[j]
            t = F.diff(j) * G.diff(n + j) - F.diff(n + j) * G.diff(j)
            if t:
                out = out + t.scale(c)
        return out

    def ad_H0_solve(self, target: Polynomial) -> Polynomial:
        """The unique P (monomial by monomial) with ``{H0, P} = target``."""
        self._check(target, self.table)
        i = Scalar.imag_unit(self.table.space)
        out = {}
        for e, c in target.terms.items():
            w = self.weight(e)
            if not w:
                raise ZeroWeightMonomial(Polynomial(self.table, {e: 1}))
            out[e] = c / (i * w)
        return Polynomial(self.table, out)

    def ad_H0_solve_real(self, target: Polynomial) -> Polynomial:
        """Real-chart wrapper; result verified by a direct bracket."""
        P = self.to_real(self.ad_H0_solve(self.to_complex(target)))
        if poisson_bracket(self.H0(), P) != target:
            raise ChartFailure("round trip through the complex chart did not verify")
        return P

    def zero_weight_monomials(self, degree):
        from .algebra.polynomial import monomial_basis

        return [e for e in monomial_basis(2 * self.n, degree) if not self.weight(e)]


def weight(m: Polynomial, chart: ComplexChart) -> Scalar:
    """Weight of a complex-chart monomial."""
    if m.table != chart.table:
        raise NotInComplexChart("weight is defined on complex-chart monomials")
    if len(m.terms) != 1:
        raise ValueError("weight expects a single monomial")
    (e,) = m.terms
    return chart.weight(e)


def ad_H0_solve(target: Polynomial, chart: ComplexChart) -> Polynomial:
    """Solve ``{H0, P} = target``; complex-chart targets stay complex, real ones return real."""
    if target.table == chart.table:
        return chart.ad_H0_solve(target)
    return chart.ad_H0_solve_real(target)


class Eigenframe:
    """Eigenvalues and eigenvectors of ``ad(H0)`` on linear polynomials."""

    def __init__(self, eigenvalues, eigenvectors, det):
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        self.determinant = det

    def __iter__(self):
        return iter(zip(self.eigenvalues, self.eigenvectors))

    def __repr__(self):
        return f"Eigenframe({[str(e) for e in self.eigenvalues]})"


def linear_ad_matrix(H0: Polynomial) -> ExactMatrix:
    """Matrix of ``K -> {H0, K}`` on the basis ``x_1..x_{2n}`` of linear forms."""
    t = H0.table
    m = t.nstate
    cols = []
    for k in range(m):
        img = poisson_bracket(H0, Polynomial.variable(t, t.state[k]))
        if img.degree() > 1 or img.min_degree() == 0:
            raise NotHomogeneous("H0 must be a homogeneous quadratic")
        col = []
        for j in range(m):
            e = [0] * m
            e[j] = 1
            col.append(img.coefficient(tuple(e)))
        cols.append(col)
    return ExactMatrix.from_columns(t.space, cols, m)


def _gaussian_roots(coeffs):
    """Roots in Q(i) of a polynomial with Gaussian-rational coefficients.

    Returns (roots with multiplicity, True if the polynomial split completely).
    """
    import sympy

    t = sympy.Symbol("t")
    expr = sum(
        (sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)) * t**k
        for k, c in enumerate(coeffs)
    )
    _, factors = sympy.factor_list(sympy.expand(expr), t, gaussian=True)
    roots = []
    split = True
    for fac, mult in factors:
        poly = sympy.Poly(fac, t)
        if poly.degree() == 1:
            a, b = poly.all_coeffs()
            r = sympy.nsimplify(-b / a)
            re, im = sympy.re(r), sympy.im(r)
            roots.extend([GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))] * mult)
        elif poly.degree() > 1:
            split = False
    return roots, split


def _charpoly(M: ExactMatrix):
    """Coefficients (low to high) of det(t I - M) by Faddeev-LeVerrier."""
    n = M.nrows
    sp = M.space
    coeffs = [Scalar.zero(sp)] * (n + 1)
    coeffs[n] = Scalar.one(sp)
    Mk = ExactMatrix(sp, n, n)
    I = ExactMatrix.identity(sp, n)
    for k in range(1, n + 1):
        Mk = M @ (Mk + I.scale(coeffs[n - k + 1]))
        tr = Scalar.zero(sp)
        for i in range(n):
            tr = tr + Mk.entry(i, i)
        coeffs[n - k] = tr * Fraction(-1, k)
    return coeffs


def eigenframe(H0: Polynomial) -> Eigenframe:
    """Eigen-decomposition of ``ad(H0)`` on linear polynomials over Q(i).

    Raises IrrationalSpectrum when an eigenvalue is not a Gaussian rational
    and ChartFailure when the operator is not diagonalizable.
    """
    M = linear_ad_matrix(H0)
    t = H0.table
    m = t.nstate
    for row in M.rows:
        for v in row.values():
            if not v.is_constant():
                raise IrrationalSpectrum("eigenframe needs numeric parameters")
    coeffs = [c.to_gaussian() for c in _charpoly(M)]
    roots, split = _gaussian_roots(coeffs)
    if not split:
        raise IrrationalSpectrum("characteristic polynomial does not split over Q(i)")
    values, vectors = [], []
    distinct = []
    for r in roots:
        if r not in distinct:
            distinct.append(r)
    distinct.sort(key=lambda g: (g.im, g.re))
    for r in distinct:
        shifted = M - ExactMatrix.identity(t.space, m).scale(Scalar.const(t.space, r))
        ker = nullspace(shifted)
        for vec in ker.vectors:
            values.append(r)
            poly = Polynomial.zero(t)
            for j, c in enumerate(vec):
                if c:
                    poly = poly + Polynomial.variable(t, t.state[j]).scale(c)
            vectors.append(poly)
    if len(vectors) != m:
        raise ChartFailure("ad(H0) is not diagonalizable on linear polynomials")
    cols = [[v.coefficient(tuple(1 if k == j else 0 for k in range(m))) for j in range(m)] for v in vectors]
    det = determinant(ExactMatrix.from_columns(t.space, cols, m))
    return Eigenframe(values, vectors, det)
