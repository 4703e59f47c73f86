import random
from fractions import Fraction

import pytest
import sympy

from specseq.algebra import ParamSpace, Scalar
from specseq.errors import NoSolution, SingularHessian
from specseq.linalg import (
    ExactMatrix,
    SubspaceBasis,
    determinant,
    inverse,
    nullspace,
    rank,
    reduce_mod_subspace,
    rref,
    solve_affine,
)

SP = ParamSpace()


def rand_matrix(rng, r, c, density=0.6):
    return [[Fraction(rng.randint(-4, 4), rng.randint(1, 2)) if rng.random() < density else 0 for _ in range(c)] for _ in range(r)]


def as_exact(rows, ncols=None):
    return ExactMatrix.from_rows(SP, rows, ncols)


def as_sympy(rows, ncols):
    return sympy.Matrix(len(rows), ncols, lambda i, j: sympy.Rational(rows[i][j].numerator, rows[i][j].denominator) if rows[i][j] else 0)


@pytest.mark.parametrize("seed", range(25))
def test_rank_and_nullspace_against_sympy(seed):
    rng = random.Random(seed)
    r, c = rng.randint(1, 6), rng.randint(1, 7)
    rows = [[Fraction(x) for x in row] for row in rand_matrix(rng, r, c)]
    m = as_exact(rows, c)
    ref = as_sympy(rows, c)
    assert rank(m) == ref.rank()
    ker = nullspace(m)
    assert ker.dim == c - ref.rank()
    for v in ker.vectors:
        assert all(not x for x in m.apply(v))


@pytest.mark.parametrize("seed", range(15))
def test_rref_matches_sympy(seed):
    rng = random.Random(100 + seed)
    r, c = rng.randint(1, 5), rng.randint(1, 6)
    rows = [[Fraction(x) for x in row] for row in rand_matrix(rng, r, c)]
    red, piv = rref(as_exact(rows, c))
    ref, rpiv = as_sympy(rows, c).rref()
    assert list(piv) == list(rpiv)
    for i in range(len(piv)):
        for j in range(c):
            assert red.entry(i, j) == Fraction(int(ref[i, j].p), int(ref[i, j].q))


@pytest.mark.parametrize("seed", range(15))
def test_solve_affine_consistent(seed):
    rng = random.Random(200 + seed)
    r, c = rng.randint(1, 5), rng.randint(1, 6)
    rows = rand_matrix(rng, r, c)
    m = as_exact(rows, c)
    x = [Fraction(rng.randint(-3, 3)) for _ in range(c)]
    b = m.apply(x)
    sol = solve_affine(m, b)
    assert m.apply(sol) == b


def test_solve_affine_canonical_free_variables_zero():
    m = as_exact([[1, 1, 0], [0, 0, 1]])
    sol = solve_affine(m, [2, 3])
    assert sol == [2, 0, 3]


def test_no_solution():
    m = as_exact([[1, 1], [2, 2]])
    with pytest.raises(NoSolution):
        solve_affine(m, [1, 3])


def test_parametric_solve():
    sp = ParamSpace(["A", "B"])
    A, B = Scalar.symbol(sp, "A"), Scalar.symbol(sp, "B")
    m = ExactMatrix.from_rows(sp, [[A, Scalar.one(sp)], [Scalar.zero(sp), A - B]])
    sol = solve_affine(m, [Scalar.one(sp), B])
    assert m.apply(sol) == [Scalar.one(sp), B]
    assert determinant(m) == A * (A - B)


def test_determinant_and_inverse():
    m = as_exact([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert determinant(m) == 18
    assert m @ inverse(m) == ExactMatrix.identity(SP, 3)
    with pytest.raises(SingularHessian):
        inverse(as_exact([[1, 2], [2, 4]]))


def test_subspace_reduce_and_contains():
    basis = SubspaceBasis.span(SP, 3, [[1, 1, 0], [0, 1, 1]])
    assert basis.dim == 2
    assert basis.contains([1, 2, 1])
    assert not basis.contains([1, 0, 0])
    r = reduce_mod_subspace([1, 0, 0], basis)
    assert not basis.contains(r) or all(not x for x in r)
    # reduction is idempotent and the difference lies in the span
    r2 = reduce_mod_subspace(r, basis)
    assert r2 == r
    assert basis.contains([a - b for a, b in zip([1, 0, 0], r)])


def test_span_is_canonical():
    a = SubspaceBasis.span(SP, 3, [[1, 1, 0], [0, 1, 1]])
    b = SubspaceBasis.span(SP, 3, [[1, 2, 1], [2, 1, -1]])
    assert a.vectors == b.vectors and a.pivots == b.pivots


def test_matrix_algebra():
    a = as_exact([[1, 2], [3, 4]])
    b = as_exact([[0, 1], [1, 0]])
    assert (a @ b).to_lists() == [[2, 1], [4, 3]]
    assert (a + b - b) == a
    assert a.transpose().to_lists() == [[1, 3], [2, 4]]
