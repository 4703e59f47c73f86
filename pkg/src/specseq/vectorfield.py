"""Polynomial vector fields, the Lie bracket and ad-matrices on graded pieces.

A field ``F = [F_1, ..., F_n]`` has level ``d - 1`` when every component is
homogeneous of degree ``d``; ``L_j`` denotes the space of fields of level
``j`` (components homogeneous of degree ``j + 1``).

Bracket convention: ``[F, G] = (dG/dx) F - (dF/dx) G`` and ``ad(F)(G) = [F, G]``.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra.polynomial import Polynomial, VariableTable, monomial_basis
from .algebra.scalars import Scalar
from .errors import DimensionMismatch, NotHomogeneous, VariableTableMismatch
from .linalg import ExactMatrix

__all__ = [
    "PolyVectorField",
    "lie_bracket",
    "ad",
    "level",
    "grade_decompose",
    "field_basis",
    "ad_matrix",
    "encode_field",
    "decode_field",
    "identity_field",
    "reversal_field",
    "top_power_field",
]


class PolyVectorField:
    """Tuple of Polynomials over one table, one per STATE variable."""

    __slots__ = ("table", "components")

    def __init__(self, components, table: VariableTable | None = None):
        comps = tuple(components)
        if table is None:
            if not comps:
                raise DimensionMismatch("empty vector field needs an explicit table")
            table = comps[0].table
        for c in comps:
            if c.table != table:
                raise VariableTableMismatch("components over different tables")
        if len(comps) != table.nstate:
            raise DimensionMismatch(f"{len(comps)} components for {table.nstate} state variables")
        self.table = table
        self.components = comps

    @classmethod
    def zero(cls, table):
        return cls([Polynomial.zero(table)] * table.nstate, table)

    @classmethod
    def parse(cls, texts, table):
        from .algebra.parsing import parse_polynomial

        return cls([parse_polynomial(t, table) for t in texts], table)

    def __len__(self):
        return len(self.components)

    def __getitem__(self, k):
        return self.components[k]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other):
        return PolyVectorField([a + b for a, b in zip(self, other)], self.table)

    def __sub__(self, other):
        return PolyVectorField([a - b for a, b in zip(self, other)], self.table)

    def __neg__(self):
        return PolyVectorField([-a for a in self], self.table)

    def scale(self, c):
        return PolyVectorField([a.scale(c) for a in self], self.table)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, PolyVectorField) and self.table == other.table and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def is_zero(self):
        return all(c.is_zero() for c in self)

    def degree(self):
        return max(c.degree() for c in self)

    def jacobian(self):
        """``J[i][j] = dF_i / dx_j`` as nested lists of Polynomials."""
        return [[c.diff(j) for j in range(self.table.nstate)] for c in self]

    def apply_jacobian(self, G: "PolyVectorField") -> "PolyVectorField":
        """``(dF/dx) G``, the derivative of F along G."""
        out = []
        for c in self:
            acc = Polynomial.zero(self.table)
            for j, g in enumerate(G):
                if g:
                    d = c.diff(j)
                    if d:
                        acc = acc + d * g
            out.append(acc)
        return PolyVectorField(out, self.table)

    def homogeneous_part(self, degree):
        return PolyVectorField([c.homogeneous_part(degree) for c in self], self.table)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self) + "]"

    def __repr__(self):
        return f"PolyVectorField({self})"

    def to_json(self):
        return [str(c) for c in self]


def lie_bracket(F: PolyVectorField, G: PolyVectorField) -> PolyVectorField:
    """``[F, G] = (dG/dx) F - (dF/dx) G``.

    >>> t = VariableTable(["x"])
    >>> x = Polynomial.variable(t, "x")
    >>> str(lie_bracket(PolyVectorField([x]), PolyVectorField([x * x])))
    '[x^2]'
    """
    if F.table != G.table:
        raise VariableTableMismatch("brackets of fields over different tables")
    return G.apply_jacobian(F) - F.apply_jacobian(G)


def ad(F: PolyVectorField):
    """The operator ``G -> [F, G]``."""
    return lambda G: lie_bracket(F, G)


def level(F: PolyVectorField) -> int:
    """Level of a homogeneous field (degree minus one); raises NotHomogeneous otherwise."""
    degrees = {sum(e) for c in F for e in c.terms}
    if not degrees:
        raise NotHomogeneous("the zero field has no level")
    if len(degrees) > 1:
        raise NotHomogeneous(f"components mix degrees {sorted(degrees)}")
    return degrees.pop() - 1


def grade_decompose(F: PolyVectorField) -> dict:
    """Map level -> homogeneous part, nonzero parts only."""
    degrees = sorted({sum(e) for c in F for e in c.terms})
    if degrees and degrees[0] == 0:
        raise NotHomogeneous("constant components (level -1) are outside the graded setting")
    return {d - 1: F.homogeneous_part(d) for d in degrees}


def field_basis(nvars: int, j: int):
    """Basis labels of ``L_j``: pairs (component, exponent) ordered component-first."""
    return [(i, e) for i in range(nvars) for e in monomial_basis(nvars, j + 1)]


def encode_field(F: PolyVectorField, j: int, basis=None):
    """Coordinates of a level-``j`` field in :func:`field_basis` order."""
    basis = basis or field_basis(F.table.nstate, j)
    z = Scalar.zero(F.table.space)
    out = []
    for i, e in basis:
        out.append(F.components[i].terms.get(e, z))
    total = sum(len(c.terms) for c in F)
    if sum(1 for v in out if v) != total:
        raise NotHomogeneous(f"field has terms outside level {j}")
    return out


def decode_field(table, vec, j, basis=None):
    basis = basis or field_basis(table.nstate, j)
    comps = [dict() for _ in range(table.nstate)]
    for (i, e), v in zip(basis, vec):
        if v:
            comps[i][e] = v
    return PolyVectorField([Polynomial(table, c) for c in comps], table)


def ad_matrix(F: PolyVectorField, j: int) -> ExactMatrix:
    """Matrix of ``ad(F)`` from ``L_j`` to ``L_{t+j}`` where ``t = level(F)``."""
    t = level(F)
    table = F.table
    n = table.nstate
    dom = field_basis(n, j)
    cod = field_basis(n, t + j)
    index = {lab: k for k, lab in enumerate(cod)}
    m = ExactMatrix(table.space, len(cod), len(dom))
    for col, (i, e) in enumerate(dom):
        comps = [Polynomial.zero(table)] * n
        comps = list(comps)
        comps[i] = Polynomial.monomial(table, e)
        img = lie_bracket(F, PolyVectorField(comps, table))
        for r, c in enumerate(img):
            for ee, v in c.terms.items():
                m.rows[index[(r, ee)]][col] = v
    return m


def identity_field(table) -> PolyVectorField:
    return PolyVectorField(table and [Polynomial.variable(table, n) for n in table.state], table)


def reversal_field(table) -> PolyVectorField:
    """``[x_n, ..., x_1]``."""
    return PolyVectorField([Polynomial.variable(table, n) for n in reversed(table.state)], table)


def top_power_field(table, p: int) -> PolyVectorField:
    """``(1/(p+1)) [x_1^(p+1), ..., x_n^(p+1)]``."""
    c = Fraction(1, p + 1)
    return PolyVectorField([Polynomial.variable(table, n) ** (p + 1) * c for n in table.state], table)
