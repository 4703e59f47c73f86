"""Exact linear algebra over the Scalar field.

Everything is plain Gauss-Jordan elimination on sparse rows (``{col: Scalar}``)
with a fixed pivot rule: columns are scanned left to right and the pivot of a
column is the first not-yet-used row, in input order, with a nonzero entry
there.  The rule makes every result (echelon bases, particular solutions)
reproducible bit for bit.

Vectors are Python lists of :class:`Scalar`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra.scalars import ParamSpace, Scalar
from .errors import DimensionMismatch, NoSolution, VariableTableMismatch

__all__ = [
    "ExactMatrix",
    "SubspaceBasis",
    "rref",
    "rank",
    "nullspace",
    "solve_affine",
    "reduce_mod_subspace",
    "determinant",
    "inverse",
    "span_contains",
]


class ExactMatrix:
    """Matrix of Scalars stored as sparse rows."""

    __slots__ = ("space", "nrows", "ncols", "rows")

    def __init__(self, space: ParamSpace, nrows: int, ncols: int, rows=None):
        self.space = space
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]
        if len(self.rows) != nrows:
            raise DimensionMismatch("row count does not match")

    @classmethod
    def from_rows(cls, space, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        sparse = []
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch("ragged rows")
            d = {}
            for j, v in enumerate(r):
                v = _as_scalar(space, v)
                if v:
                    d[j] = v
            sparse.append(d)
        return cls(space, len(rows), ncols, sparse)

    @classmethod
    def from_columns(cls, space, columns, nrows):
        m = cls(space, nrows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise DimensionMismatch("column length does not match")
            for i, v in enumerate(col):
                if v:
                    m.rows[i][j] = v
        return m

    @classmethod
    def identity(cls, space, n):
        one = Scalar.one(space)
        return cls(space, n, n, [{i: one} for i in range(n)])

    def entry(self, i, j) -> Scalar:
        return self.rows[i].get(j) or Scalar.zero(self.space)

    def set(self, i, j, value):
        value = _as_scalar(self.space, value)
        if value:
            self.rows[i][j] = value
        else:
            self.rows[i].pop(j, None)

    def to_lists(self):
        z = Scalar.zero(self.space)
        return [[r.get(j, z) for j in range(self.ncols)] for r in self.rows]

    def column(self, j):
        z = Scalar.zero(self.space)
        return [r.get(j, z) for r in self.rows]

    def transpose(self):
        t = ExactMatrix(self.space, self.ncols, self.nrows)
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                t.rows[j][i] = v
        return t

    def apply(self, vec):
        """Matrix-vector product."""
        if len(vec) != self.ncols:
            raise DimensionMismatch(f"vector of length {len(vec)} for {self.ncols} columns")
        z = Scalar.zero(self.space)
        nz = {j: v for j, v in enumerate(vec) if v}
        out = []
        for r in self.rows:
            acc = z
            if len(r) < len(nz):
                for j, a in r.items():
                    b = nz.get(j)
                    if b is not None:
                        acc = acc + a * b
            else:
                for j, b in nz.items():
                    a = r.get(j)
                    if a is not None:
                        acc = acc + a * b
            out.append(acc)
        return out

    def __matmul__(self, other: "ExactMatrix"):
        if self.ncols != other.nrows:
            raise DimensionMismatch("inner dimensions differ")
        out = ExactMatrix(self.space, self.nrows, other.ncols)
        for i, r in enumerate(self.rows):
            acc: dict = {}
            for k, a in r.items():
                for j, b in other.rows[k].items():
                    v = acc.get(j)
                    acc[j] = a * b if v is None else v + a * b
            out.rows[i] = {j: v for j, v in acc.items() if v}
        return out

    def __sub__(self, other):
        out = self.copy()
        for i, r in enumerate(other.rows):
            for j, v in r.items():
                out.set(i, j, out.entry(i, j) - v)
        return out

    def __add__(self, other):
        out = self.copy()
        for i, r in enumerate(other.rows):
            for j, v in r.items():
                out.set(i, j, out.entry(i, j) + v)
        return out

    def scale(self, c):
        c = _as_scalar(self.space, c)
        return ExactMatrix(self.space, self.nrows, self.ncols, [{j: v * c for j, v in r.items() if v * c} for r in self.rows])

    def copy(self):
        return ExactMatrix(self.space, self.nrows, self.ncols, [dict(r) for r in self.rows])

    def is_zero(self):
        return all(not r for r in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and (self.nrows, self.ncols) == (other.nrows, other.ncols)
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols})"

    def __str__(self):
        return "\n".join("[" + ", ".join(str(v) for v in row) + "]" for row in self.to_lists())


def _as_scalar(space, v):
    if isinstance(v, Scalar):
        if v.space is not space and v.space != space:
            raise VariableTableMismatch("entry from a different parameter space")
        return v
    return Scalar.const(space, v)


@dataclass
class SubspaceBasis:
    """Basis in reduced row-echelon form: ``vectors[k]`` has a 1 at ``pivots[k]``
    and zeros at every other pivot column."""

    space: ParamSpace
    ambient: int
    vectors: list = field(default_factory=list)
    pivots: list = field(default_factory=list)

    @classmethod
    def span(cls, space, ambient, vectors):
        rows = []
        for v in vectors:
            if len(v) != ambient:
                raise DimensionMismatch("vector length differs from ambient dimension")
            rows.append({j: _as_scalar(space, x) for j, x in enumerate(v) if x})
        red, piv = _rref_rows(space, rows, ambient)
        z = Scalar.zero(space)
        vecs = [[red[k].get(j, z) for j in range(ambient)] for k in range(len(piv))]
        return cls(space, ambient, vecs, list(piv))

    @property
    def dim(self):
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def contains(self, v) -> bool:
        return all(not x for x in reduce_mod_subspace(v, self))


def _rref_rows(space, rows, ncols, rhs=None):
    """Gauss-Jordan on sparse rows (modified copies).  Returns (rows, pivots[, rhs])."""
    rows = [dict(r) for r in rows]
    rhs = list(rhs) if rhs is not None else None
    used = [False] * len(rows)
    # column -> list of unused row indices having a nonzero there, for pivot search
    pivots = []
    prow_of = []
    order = []
    for col in range(ncols):
        prow = None
        for i, r in enumerate(rows):
            if not used[i] and col in r:
                prow = i
                break
        if prow is None:
            continue
        used[prow] = True
        pr = rows[prow]
        inv = pr[col].inverse()
        if not (len(inv.num) == 1 and inv.is_rational() and inv.to_fraction() == 1):
            pr = {j: v * inv for j, v in pr.items()}
            rows[prow] = pr
            if rhs is not None:
                rhs[prow] = rhs[prow] * inv
        for i, r in enumerate(rows):
            if i == prow:
                continue
            f = r.get(col)
            if f is None:
                continue
            for j, v in pr.items():
                w = r.get(j)
                nv = -(f * v) if w is None else w - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
            r.pop(col, None)
            if rhs is not None:
                rhs[i] = rhs[i] - f * rhs[prow]
        pivots.append(col)
        prow_of.append(prow)
        order.append(prow)
    red = [rows[i] for i in prow_of]
    if rhs is not None:
        leftover = [rhs[i] for i in range(len(rows)) if not used[i]]
        return red, pivots, [rhs[i] for i in prow_of], leftover
    return red, pivots


def rref(m: ExactMatrix):
    """Reduced row-echelon form; returns (matrix of nonzero rows, pivot columns)."""
    red, piv = _rref_rows(m.space, m.rows, m.ncols)
    return ExactMatrix(m.space, len(red), m.ncols, red), piv


def rank(m: ExactMatrix) -> int:
    return len(_rref_rows(m.space, m.rows, m.ncols)[1])


def nullspace(m: ExactMatrix) -> SubspaceBasis:
    """Kernel of ``m`` as a reduced-echelon basis."""
    red, piv = _rref_rows(m.space, m.rows, m.ncols)
    pivset = set(piv)
    one = Scalar.one(m.space)
    z = Scalar.zero(m.space)
    vecs = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [z] * m.ncols
        v[f] = one
        for row, p in zip(red, piv):
            c = row.get(f)
            if c:
                v[p] = -c
        vecs.append(v)
    return SubspaceBasis.span(m.space, m.ncols, vecs)


def solve_affine(m: ExactMatrix, b) -> list:
    """Particular solution of ``m x = b`` with every free variable set to 0.

    Raises :class:`NoSolution` when the system is inconsistent.
    """
    if len(b) != m.nrows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {m.nrows} rows")
    b = [_as_scalar(m.space, x) for x in b]
    red, piv, rhs, leftover = _rref_rows(m.space, m.rows, m.ncols, b)
    if any(x for x in leftover):
        raise NoSolution("inconsistent linear system")
    x = [Scalar.zero(m.space)] * m.ncols
    for p, val in zip(piv, rhs):
        x[p] = val
    return x


def reduce_mod_subspace(v, basis: SubspaceBasis):
    """Canonical coset representative of ``v`` modulo ``basis``."""
    if len(v) != basis.ambient:
        raise DimensionMismatch("vector length differs from ambient dimension")
    out = list(v)
    for vec, p in zip(basis.vectors, basis.pivots):
        c = out[p]
        if c:
            for j, x in enumerate(vec):
                if x:
                    out[j] = out[j] - c * x
    return out


def span_contains(basis: SubspaceBasis, other: SubspaceBasis) -> bool:
    return all(basis.contains(v) for v in other.vectors)


def determinant(m: ExactMatrix) -> Scalar:
    """Determinant by fraction-field elimination."""
    if m.nrows != m.ncols:
        raise DimensionMismatch("determinant of a non-square matrix")
    rows = [dict(r) for r in m.rows]
    det = Scalar.one(m.space)
    n = m.nrows
    for col in range(n):
        prow = next((i for i in range(col, n) if col in rows[i]), None)
        if prow is None:
            return Scalar.zero(m.space)
        if prow != col:
            rows[col], rows[prow] = rows[prow], rows[col]
            det = -det
        pr = rows[col]
        pv = pr[col]
        det = det * pv
        inv = pv.inverse()
        for i in range(col + 1, n):
            f = rows[i].get(col)
            if f is None:
                continue
            f = f * inv
            r = rows[i]
            for j, v in pr.items():
                nv = r.get(j, Scalar.zero(m.space)) - f * v
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    return det


def inverse(m: ExactMatrix) -> ExactMatrix:
    from .errors import SingularHessian

    if m.nrows != m.ncols:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.nrows
    cols = []
    for k in range(n):
        e = [Scalar.zero(m.space)] * n
        e[k] = Scalar.one(m.space)
        try:
            cols.append(solve_affine(m, e))
        except NoSolution:
            raise SingularHessian("matrix is singular") from None
    if rank(m) < n:
        raise SingularHessian("matrix is singular")
    return ExactMatrix.from_columns(m.space, cols, n)
