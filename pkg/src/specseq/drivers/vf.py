"""Centralizers of polynomial vector fields.

Two regimes are supported.

BOTTOM
    ``F = F_0 + F_1 + ...`` with ``ad(F_k) : L_j -> L_{j+k}``; ``ad(F)``
    preserves the DECREASING filtration ``F^p = (+)_{j >= p} L_j``.  When
    ``ad(F_0)`` is onto every ``L_j`` (``j >= 1``) each element of
    ``ker ad(F_0)|L_0`` extends formally; the extension is computed up to a
    chosen order.

TOP
    ``F = F_0 + ... + F_p`` of top level ``p``.  The domain is regraded as
    ``M_j = L_{j-p}`` so that ``ad(F_k) : M_j -> L_{j-p+k}`` lowers the level
    by ``p - k`` and ``ad(F)`` preserves the INCREASING filtration.  Finite
    centralizers of bounded degree are then exact kernel elements.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.polynomial import Polynomial, VariableTable
from ..algebra.scalars import Scalar
from ..errors import HypothesisFailure, NotHomogeneous
from ..linalg import rank
from ..spectral import (
    Direction,
    Obstruction,
    brute_kernel,
    build_graded_map,
    formal_extend,
    kernel_basis_up_to,
    survivors,
)
from ..vectorfield import (
    PolyVectorField,
    ad_matrix,
    decode_field,
    encode_field,
    field_basis,
    grade_decompose,
    lie_bracket,
    top_power_field,
)

__all__ = [
    "VfMode",
    "VfProblem",
    "VfResult",
    "vf_top_map",
    "vf_bottom_map",
    "vf_top_centralizers",
    "vf_bottom_centralizers",
    "vf_centralizers",
    "normalize_top",
    "ad_kernel_dim",
]


class VfMode(enum.Enum):
    TOP = "top"
    BOTTOM = "bottom"


@dataclass
class VfProblem:
    field: PolyVectorField
    mode: VfMode = VfMode.TOP
    degree: int = 5  # TOP: largest component degree of a centralizer
    order: int = 6  # BOTTOM: truncation level of the formal extension
    rescale: bool = False  # TOP: scale F so that F_p is the normalized power field

    @classmethod
    def parse(cls, components, variables, mode="top", params=(), **kw):
        table = VariableTable(variables, params)
        return cls(PolyVectorField.parse(components, table), VfMode(mode), **kw)


def _levels(F):
    parts = grade_decompose(F)
    if not parts:
        raise NotHomogeneous("the zero field has no graded parts")
    return parts


def _encode_by_level(G: PolyVectorField):
    return {j: encode_field(part, j) for j, part in grade_decompose(G).items()}


def vf_top_map(F: PolyVectorField, degree: int):
    """INCREASING map ``ad(F)`` on fields of component degree ``<= degree``."""
    parts = _levels(F)
    p = max(parts)
    if min(parts) < 0:
        raise NotHomogeneous("field has constant terms")
    table = F.table
    n = table.nstate
    top = degree - 1  # highest level of a centralizer component
    dom = {J: [(J - p, lab) for lab in field_basis(n, J - p)] for J in range(p, top + p + 1)}
    cod = {j: field_basis(n, j) for j in range(0, top + p + 1)}

    def image(J, col):
        lvl, (i, e) = dom[J][col]
        comps = [Polynomial.zero(table)] * n
        comps = list(comps)
        comps[i] = Polynomial.monomial(table, e)
        G = PolyVectorField(comps, table)
        return _encode_by_level(lie_bracket(F, G))

    def dec_dom(J, vec):
        return decode_field(table, vec, J - p)

    def dec_cod(j, vec):
        return decode_field(table, vec, j)

    return build_graded_map(table.space, Direction.INCREASING, dom, cod, image, dec_dom, dec_cod, name="vf-top"), p


def vf_bottom_map(F: PolyVectorField, order: int):
    """DECREASING map ``ad(F)`` on ``L_0..L_order`` with codomain up to ``order + t``."""
    parts = _levels(F)
    if min(parts) < 0:
        raise NotHomogeneous("field has constant terms")
    if 0 not in parts:
        raise HypothesisFailure("BOTTOM mode needs a nonzero linear part F_0")
    table = F.table
    n = table.nstate
    t = max(parts)
    dom = {j: field_basis(n, j) for j in range(0, order + 1)}
    cod = {j: field_basis(n, j) for j in range(0, order + t + 1)}

    def image(j, col):
        i, e = dom[j][col]
        comps = [Polynomial.zero(table)] * n
        comps = list(comps)
        comps[i] = Polynomial.monomial(table, e)
        return _encode_by_level(lie_bracket(F, PolyVectorField(comps, table)))

    def dec(j, vec):
        return decode_field(table, vec, j)

    return build_graded_map(table.space, Direction.DECREASING, dom, cod, image, dec, dec, name="vf-bottom")


def element_to_field(f, el, table) -> PolyVectorField:
    total = PolyVectorField.zero(table)
    for J, vec in el.items():
        total = total + f.decode_domain(J, vec)
    return total


@dataclass
class VfResult:
    mode: VfMode
    centralizers: list
    witnesses: list
    level_of_top: int | None = None
    residuals: list = field(default_factory=list)
    page_dims: dict = field(default_factory=dict)
    kernel_L0: list = field(default_factory=list)
    graded_map: object = None


def vf_top_centralizers(prob: VfProblem) -> VfResult:
    """Finite centralizers of component degree ``<= prob.degree``.

    The top part must be ``(1/(p+1)) [x_i^(p+1)]``; with ``prob.rescale`` a
    multiple of it is accepted and ``F`` is scaled first (same centralizers).
    """
    F = prob.field
    parts = _levels(F)
    p = max(parts)
    if parts[p] != top_power_field(F.table, p):
        if not prob.rescale:
            raise HypothesisFailure(f"top part is not (1/{p + 1}) [x_i^{p + 1}]; set rescale to normalize")
        F, _ = normalize_top(F, p)
    f, p = vf_top_map(F, prob.degree)
    witnesses = kernel_basis_up_to(f)
    fields = [element_to_field(f, w.element, F.table) for w in witnesses]
    for G in fields:
        if not lie_bracket(F, G).is_zero():
            raise AssertionError("TOP witness does not commute with F")
    dims = {J: survivors(f, J)[1] for J in f.domain}
    return VfResult(VfMode.TOP, fields, witnesses, level_of_top=p, page_dims=dims, graded_map=f)


def vf_bottom_centralizers(prob: VfProblem) -> VfResult:
    """One truncated witness per basis element of ``ker ad(F_0)|L_0``."""
    F = prob.field
    f = vf_bottom_map(F, prob.order)
    ker = list(brute_kernel(f.truncate(max_level=0)).vectors)
    out, fields, residuals = [], [], []
    for v in ker:
        res = formal_extend(f, 0, v, prob.order)
        if isinstance(res, Obstruction):
            raise AssertionError("obstruction under the surjectivity hypothesis")
        out.append(res)
        G = element_to_field(f, res.element, F.table)
        fields.append(G)
        E = lie_bracket(F, G)
        low = [j for j in grade_decompose(E) if j <= prob.order] if not E.is_zero() else []
        if low:
            raise AssertionError("bracket residual below the truncation order")
        residuals.append(E)
    kernel_L0 = [decode_field(F.table, v, 0) for v in ker]
    return VfResult(VfMode.BOTTOM, fields, out, residuals=residuals, kernel_L0=kernel_L0, graded_map=f)


def vf_centralizers(prob: VfProblem) -> VfResult:
    if prob.mode is VfMode.TOP:
        return vf_top_centralizers(prob)
    return vf_bottom_centralizers(prob)


def normalize_top(F: PolyVectorField, p: int | None = None) -> tuple:
    """Scale ``F`` so its top part is ``(1/(p+1)) [x_i^(p+1)]``.

    Returns ``(scaled field, factor)``; centralizers of ``c F`` and ``F``
    agree.  Raises HypothesisFailure when the top part is not a multiple of
    the power field.
    """
    parts = grade_decompose(F)
    p = max(parts) if p is None else p
    target = top_power_field(F.table, p)
    top = parts.get(p)
    if top is None:
        raise HypothesisFailure(f"no level-{p} part")
    e = tuple(p + 1 if k == 0 else 0 for k in range(F.table.nstate))
    c = top[0].coefficient(e) / target[0].coefficient(e) if target[0].coefficient(e) else None
    if not c or top != target.scale(c):
        raise HypothesisFailure("top part is not a multiple of the power field")
    return F.scale(c.inverse()), c.inverse()


def ad_kernel_dim(F: PolyVectorField, j: int) -> int:
    """``dim ker ad(F)|L_j`` for a homogeneous ``F``."""
    m = ad_matrix(F, j)
    return m.ncols - rank(m)
