import random
from fractions import Fraction

import pytest

from helpers import random_homogeneous, random_polynomial
from specseq.algebra import GaussianRational, Polynomial, Scalar, monomial_basis, parse_polynomial
from specseq.errors import ChartFailure, ChartMismatch, IrrationalSpectrum, NotInComplexChart, SingularHessian, ZeroWeightMonomial
from specseq.hamiltonian import (
    ComplexChart,
    ad_H0_solve,
    canonical_table,
    diagonal_quadratic,
    eigenframe,
    ham_vector_field,
    henon_heiles,
    is_hamiltonian_field,
    linear_ad_matrix,
    poisson_bracket,
    quadratic_companion,
    weight,
)
from specseq.hamiltonian import _charpoly
from specseq.vectorfield import PolyVectorField, top_power_field

T1 = canonical_table(1)
T2 = canonical_table(2)
TAB = canonical_table(2, ["A", "B", "a", "b"], {"a": "A", "b": "B"})


def P(text, t=T2):
    return parse_polynomial(text, t)


def test_canonical_pair_sign():
    q1, p1 = Polynomial.variable(T1, "q1"), Polynomial.variable(T1, "p1")
    assert poisson_bracket(q1, p1) == P("-1", T1)
    # dK/dt = {H, K}: for H = p^2/2 the flow is q' = p
    assert poisson_bracket(P("1/2*p1^2", T1), q1) == p1


@pytest.mark.parametrize("seed", range(100))
def test_poisson_identities(seed):
    rng = random.Random(seed)
    H, K, M = (random_polynomial(rng, T2, max_degree=3, nterms=3) for _ in range(3))
    assert poisson_bracket(H, K) == -poisson_bracket(K, H)
    jac = poisson_bracket(H, poisson_bracket(K, M)) + poisson_bracket(K, poisson_bracket(M, H)) + poisson_bracket(M, poisson_bracket(H, K))
    assert jac.is_zero()
    assert poisson_bracket(H, K * M) == poisson_bracket(H, K) * M + K * poisson_bracket(H, M)


def test_bracket_table_mismatch():
    with pytest.raises(ChartMismatch):
        poisson_bracket(P("q1"), P("q1", T1))


def test_ham_vector_field_is_hamiltonian():
    H = P("q1^2*p2 + p1^3 - q2")
    F = ham_vector_field(H)
    assert is_hamiltonian_field(F)
    # the power field on four variables is not Hamiltonian
    assert not is_hamiltonian_field(top_power_field(T2, 2))


@pytest.mark.parametrize("seed", range(10))
def test_quadratic_companion_commutes(seed):
    rng = random.Random(seed)
    while True:
        H = random_homogeneous(rng, T2, 2, nterms=6)
        try:
            K = quadratic_companion(H)
            break
        except SingularHessian:
            continue
    assert K.is_zero() or (K.is_homogeneous() and K.degree() == 2)
    assert poisson_bracket(H, K).is_zero()


def test_quadratic_companion_singular():
    with pytest.raises(SingularHessian):
        quadratic_companion(P("q1^2 + p1^2"))


def _chart(A=None):
    if A is None:
        return ComplexChart(TAB, ["A", "B"])
    return ComplexChart(T2, A)


def test_chart_round_trip_and_H0():
    ch = _chart()
    H0 = ch.H0()
    assert H0 == diagonal_quadratic(TAB, [ch.A[0], ch.A[1]])
    Hz = ch.to_complex(H0)
    assert Hz == parse_polynomial("1/2*z1*zb1 + 1/2*z2*zb2", ch.table)
    rng = random.Random(4)
    K = random_polynomial(rng, TAB, max_degree=3)
    assert ch.to_real(ch.to_complex(K)) == K


@pytest.mark.parametrize("d", range(0, 7))
def test_monomials_are_eigenvectors_of_ad_H0(d):
    ch = _chart()
    H0z = ch.to_complex(ch.H0())
    i = Scalar.imag_unit(ch.table.space)
    for e in monomial_basis(4, d):
        m = Polynomial(ch.table, {e: 1})
        lhs = ch.bracket(H0z, m)
        w = weight(m, ch)
        # {H0, m} = i [m] m
        assert lhs == m.scale(w * i)
        # and the complex bracket agrees with the real one
        real = poisson_bracket(ch.H0(), ch.to_real(m))
        assert ch.to_complex(real) == lhs
        if d % 2:
            assert w, e


def test_weight_rejects_real_monomials():
    ch = _chart()
    with pytest.raises(NotInComplexChart):
        weight(P("q1", TAB), ch)


def test_ad_H0_solve_real_and_complex():
    ch = _chart([1, 9])
    rng = random.Random(7)
    for d in (1, 3, 5):
        target = random_homogeneous(rng, T2, d, nterms=3)
        sol = ad_H0_solve(target, ch)
        assert poisson_bracket(ch.H0(), sol) == target
    z = parse_polynomial("z1*zb1", ch.table)
    with pytest.raises(ZeroWeightMonomial):
        ad_H0_solve(z, ch)


def test_chart_from_hamiltonian():
    ch = ComplexChart.for_hamiltonian(P("1/2*p1^2 + 1/2*p2^2 + 1/2*q1^2 + 2*q2^2"))
    assert ch.A == [1, 4]
    with pytest.raises(ChartFailure):
        ComplexChart.for_hamiltonian(P("1/2*p1^2 + 1/2*p2^2 + q1*q2"))
    with pytest.raises(ChartFailure):
        ComplexChart(T2, [1, 0])


def _gr(re, im):
    return GaussianRational(Fraction(re), Fraction(im))


def test_eigenframe_henon_heiles_quadratic():
    H0 = diagonal_quadratic(T2, [1, 9])
    ef = eigenframe(H0)
    assert sorted(ef.eigenvalues, key=lambda g: g.im) == [_gr(0, -3), _gr(0, -1), _gr(0, 1), _gr(0, 3)]
    for lam, v in ef:
        assert poisson_bracket(H0, v) == v.scale(lam)
    assert ef.determinant != 0


def test_eigenframe_worked_hamiltonian_as_computed():
    # the form whose gradient and matrix the worked example uses: +A q2^2
    H = P("p1*q2 - q1*p2 + 5/8*p1^2 + 5/8*q2^2")
    ef = eigenframe(H)
    assert set(ef.eigenvalues) == {_gr(0, Fraction(3, 2)), _gr(0, Fraction(-3, 2)), _gr(Fraction(1, 2), 0), _gr(Fraction(-1, 2), 0)}
    assert ef.determinant != 0
    for lam, v in ef:
        assert poisson_bracket(H, v) == v.scale(lam)


def test_eigenframe_literal_minus_sign_does_not_split():
    H = P("p1*q2 - q1*p2 + 5/8*p1^2 - 5/8*q2^2")
    coeffs = [c.to_gaussian() for c in _charpoly(linear_ad_matrix(H))]
    assert coeffs == [_gr(Fraction(41, 16), 0), 0, 2, 0, 1]
    with pytest.raises(IrrationalSpectrum):
        eigenframe(H)


def test_eigenframe_real_pair():
    ef = eigenframe(P("q1*p1", T1))
    assert sorted(ef.eigenvalues, key=lambda g: g.re) == [_gr(-1, 0), _gr(1, 0)]


def test_henon_heiles_shape():
    H = henon_heiles(T2, 1, 9, Fraction(1, 6))
    assert H == P("1/2*p1^2 + 1/2*p2^2 + 1/2*q1^2 + 9/2*q2^2 + 1/3*q1^3 + 1/6*q1*q2^2")
