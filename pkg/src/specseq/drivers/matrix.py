"""Centralizers of upper-triangular matrices.

Upper-triangular ``n x n`` matrices are graded by superdiagonal: ``L_j`` is
spanned by the units ``E_{i, i+j}``.  A matrix ``m = m_0 + m_1 + ...`` acts by
``ad(m)(X) = m X - X m`` and ``ad(m_k)`` raises the level by ``k``, so
``ad(m)`` preserves the DECREASING filtration.  When the diagonal ``m_0`` has
distinct entries ``ad(m_0)`` is invertible on every ``L_j`` with ``j >= 1``
and every prescribed diagonal ``m'_0`` extends uniquely to a centralizer.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra.scalars import ParamSpace, Scalar
from ..errors import DimensionMismatch, HypothesisFailure
from ..linalg import ExactMatrix, rank
from ..spectral import Direction, Obstruction, Witness, brute_kernel, build_graded_map, extend_to_kernel, flatten

__all__ = ["MatrixProblem", "MatrixResult", "matrix_map", "matrix_centralizer", "diagonal_levels"]


@dataclass
class MatrixProblem:
    matrix: ExactMatrix
    diagonal: list

    @classmethod
    def from_lists(cls, rows, diagonal, params=()):
        space = ParamSpace(params)
        from ..algebra.parsing import parse_scalar

        def sc(v):
            return parse_scalar(v, space) if isinstance(v, str) else Scalar.const(space, v)

        m = ExactMatrix.from_rows(space, [[sc(v) for v in r] for r in rows])
        return cls(m, [sc(v) for v in diagonal])

    def __post_init__(self):
        m = self.matrix
        if m.nrows != m.ncols:
            raise DimensionMismatch("matrix must be square")
        for i, row in enumerate(m.rows):
            if any(j < i for j in row):
                raise ValueError("matrix must be upper triangular")
        if len(self.diagonal) != m.nrows:
            raise DimensionMismatch("diagonal has the wrong length")

    @property
    def n(self):
        return self.matrix.nrows


def diagonal_levels(n):
    """Basis labels ``(i, i + j)`` of each superdiagonal level ``j``."""
    return {j: [(i, i + j) for i in range(n - j)] for j in range(n)}


def _commutator(m: ExactMatrix, X: ExactMatrix):
    return (m @ X) - (X @ m)


def matrix_map(prob: MatrixProblem):
    n = prob.n
    sp = prob.matrix.space
    levels = diagonal_levels(n)

    def image(j, col):
        i, k = levels[j][col]
        X = ExactMatrix(sp, n, n)
        X.set(i, k, 1)
        C = _commutator(prob.matrix, X)
        out = {}
        for r, row in enumerate(C.rows):
            for c, v in row.items():
                lev = c - r
                vec = out.setdefault(lev, [Scalar.zero(sp)] * (n - lev))
                vec[r] = v
        return out

    def decode(j, vec):
        X = ExactMatrix(sp, n, n)
        for (i, k), v in zip(levels[j], vec):
            X.set(i, k, v)
        return X

    return build_graded_map(sp, Direction.DECREASING, levels, levels, image, decode, decode, name="matrix")


def _assemble(f, el, n):
    X = ExactMatrix(f.space, n, n)
    for j, vec in el.items():
        for (i, k), v in zip(f.domain[j], vec):
            X.set(i, k, v)
    return X


@dataclass
class MatrixResult:
    centralizer: ExactMatrix | None
    witness: Witness | None
    obstruction: Obstruction | None
    unique: bool | None
    kernel_dim: int
    graded_map: object = None


def matrix_centralizer(prob: MatrixProblem, check_hypothesis=True) -> MatrixResult:
    """Extend the prescribed diagonal to an upper-triangular centralizer."""
    f = matrix_map(prob)
    n = prob.n
    if check_hypothesis:
        for j in range(1, n):
            d0 = f.components.get((j, j))
            if d0 is None or rank(d0) < n - j:
                raise HypothesisFailure(f"ad(m_0) is not invertible on superdiagonal {j}")
    res = extend_to_kernel(f, 0, list(prob.diagonal))
    kernel = brute_kernel(f)
    # uniqueness: the projection of ker ad(m) onto the diagonal must be injective
    proj = ExactMatrix.from_columns(f.space, [v[:n] for v in kernel.vectors], n) if kernel.vectors else None
    unique = proj is not None and rank(proj) == kernel.dim
    if isinstance(res, Obstruction):
        return MatrixResult(None, None, res, unique, kernel.dim, f)
    X = _assemble(f, res.element, n)
    if not _commutator(prob.matrix, X).is_zero():
        raise AssertionError("witness does not commute")
    if not kernel.contains(flatten(f, res.element)):
        raise AssertionError("witness is not in the brute-force kernel")
    return MatrixResult(X, res, None, unique, kernel.dim, f)
