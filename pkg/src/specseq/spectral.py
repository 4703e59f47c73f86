"""Two-column spectral sequence of a filtered graded linear map.

Setting
-------
``f : M -> N`` maps a graded domain ``M = (+) M_j`` to a graded codomain
``N = (+) N_j``.  Every level has an explicit finite basis.  ``f`` splits into
components ``f^(t) : M_j -> N_{j + s t}`` with shift ``t >= 0``, where

* ``s = -1`` for an INCREASING filtration ``F_p = (+)_{j <= p}`` (images
  drop levels), and
* ``s = +1`` for a DECREASING filtration ``F^p = (+)_{j >= p}`` (images rise).

An element with leading level ``p`` is corrected level by level in the
direction ``s``.  After ``r`` steps a representative ``m`` of a page-``r``
class satisfies ``f(m)_k = 0`` for the levels ``k = p, p+s, ..., p+s(r-1)``.
Its differential is the component ``f(m)_T`` at ``T = p + s r`` taken modulo
the *denominator*

    D_r(T) = { f(m')_T : m' supported on T - s(r-1), ..., T,
                         f(m')_k = 0 for k = T - s(r-1), ..., T - s }.

``D_r(T)`` collects every change of ``f(m)_T`` reachable by re-choosing the
corrections of ``m`` without spoiling the earlier vanishing conditions, so
``d_r(m) = 0`` exactly when ``m`` can be corrected to a page-``r+1``
representative.  For ``r = 0`` the denominator is zero.  The value modulo
``D_r(T)`` does not depend on the chosen representative.

Elements are dicts ``{level: [Scalar, ...]}`` in the level bases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

from .algebra.scalars import ParamSpace, Scalar
from .errors import (
    DimensionMismatch,
    FiltrationViolation,
    HypothesisFailure,
    InvalidRepresentative,
    NoSolution,
)
from .linalg import ExactMatrix, SubspaceBasis, nullspace, reduce_mod_subspace, solve_affine

__all__ = [
    "Direction",
    "GradedLinearMap",
    "PageClass",
    "DifferentialValue",
    "Witness",
    "Obstruction",
    "PageReport",
    "build_graded_map",
    "differential",
    "advance",
    "extend_to_kernel",
    "formal_extend",
    "survivors",
    "kernel_basis_up_to",
    "brute_kernel",
    "page_report",
    "leading_space",
    "element_is_zero",
]


class Direction(enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"

    @property
    def sign(self) -> int:
        return 1 if self is Direction.DECREASING else -1


def element_is_zero(el) -> bool:
    return all(not x for vec in el.values() for x in vec)


def _strip(el):
    return {k: v for k, v in el.items() if any(x for x in v)}


class GradedLinearMap:
    """Finite filtered graded linear map with explicit level bases.

    ``components[(j, k)]`` is the matrix of the part of ``f`` sending domain
    level ``j`` to codomain level ``k``; only pairs with ``s (k - j) >= 0``
    are allowed.  ``domain`` and ``codomain`` map a level to its list of basis
    labels.  Optional ``decode_domain(level, vector)`` and
    ``decode_codomain(level, vector)`` turn coordinates into objects
    (polynomials, vector fields, matrices) for reporting.
    """

    def __init__(
        self,
        space: ParamSpace,
        direction: Direction,
        domain: dict,
        codomain: dict,
        components: dict,
        decode_domain: Callable | None = None,
        decode_codomain: Callable | None = None,
        name: str = "",
    ):
        self.space = space
        self.direction = direction
        self.domain = {j: list(v) for j, v in sorted(domain.items()) if len(v)}
        self.codomain = {k: list(v) for k, v in sorted(codomain.items()) if len(v)}
        self.components = {}
        s = direction.sign
        for (j, k), mat in components.items():
            if s * (k - j) < 0:
                raise FiltrationViolation(f"component from level {j} to {k} breaks the {direction.value} filtration")
            if j not in self.domain or k not in self.codomain:
                if not mat.is_zero():
                    raise DimensionMismatch(f"component ({j}, {k}) touches an empty level")
                continue
            if (mat.nrows, mat.ncols) != (len(self.codomain[k]), len(self.domain[j])):
                raise DimensionMismatch(f"component ({j}, {k}) has shape {mat.nrows}x{mat.ncols}")
            if not mat.is_zero():
                self.components[(j, k)] = mat
        self.decode_domain = decode_domain
        self.decode_codomain = decode_codomain
        self.name = name
        self._den_cache: dict = {}

    # -- geometry -----------------------------------------------------------
    @property
    def sign(self):
        return self.direction.sign

    def dom_dim(self, j):
        return len(self.domain.get(j, ()))

    def cod_dim(self, k):
        return len(self.codomain.get(k, ()))

    def shifts(self):
        return sorted({self.sign * (k - j) for (j, k) in self.components})

    def codomain_levels_from(self, p):
        """Codomain levels reachable from level p, in processing order."""
        s = self.sign
        return sorted((k for k in self.codomain if s * (k - p) >= 0), key=lambda k: s * k)

    def last_target(self, p):
        levels = self.codomain_levels_from(p)
        return levels[-1] if levels else None

    def zero_vector(self, k, domain=True):
        n = self.dom_dim(k) if domain else self.cod_dim(k)
        return [Scalar.zero(self.space)] * n

    # -- application --------------------------------------------------------
    def apply(self, el) -> dict:
        out: dict = {}
        for (j, k), mat in self.components.items():
            v = el.get(j)
            if v is None or not any(x for x in v):
                continue
            img = mat.apply(v)
            if k in out:
                out[k] = [a + b for a, b in zip(out[k], img)]
            else:
                out[k] = img
        return {k: out[k] for k in sorted(out)}

    def apply_level(self, el, k):
        """Only the codomain-level-``k`` component of ``f(el)``."""
        acc = [Scalar.zero(self.space)] * self.cod_dim(k)
        for j, v in el.items():
            mat = self.components.get((j, k))
            if mat is None or not any(x for x in v):
                continue
            acc = [a + b for a, b in zip(acc, mat.apply(v))]
        return acc

    # -- restriction --------------------------------------------------------
    def truncate(self, max_level=None, min_level=None) -> "GradedLinearMap":
        """Restrict domain and codomain to levels in ``[min_level, max_level]``."""

        def ok(x):
            return (max_level is None or x <= max_level) and (min_level is None or x >= min_level)

        return GradedLinearMap(
            self.space,
            self.direction,
            {j: v for j, v in self.domain.items() if ok(j)},
            {k: v for k, v in self.codomain.items() if ok(k)},
            {jk: m for jk, m in self.components.items() if ok(jk[0]) and ok(jk[1])},
            self.decode_domain,
            self.decode_codomain,
            self.name,
        )

    def restrict_domain(self, levels) -> "GradedLinearMap":
        levels = set(levels)
        return GradedLinearMap(
            self.space,
            self.direction,
            {j: v for j, v in self.domain.items() if j in levels},
            self.codomain,
            {jk: m for jk, m in self.components.items() if jk[0] in levels},
            self.decode_domain,
            self.decode_codomain,
            self.name,
        )

    # -- stacked systems ----------------------------------------------------
    def stacked(self, col_levels, row_levels):
        """Block matrix with domain levels ``col_levels`` as columns and codomain
        levels ``row_levels`` as rows, plus the offsets of both."""
        col_levels = [j for j in col_levels if self.dom_dim(j)]
        row_levels = [k for k in row_levels if self.cod_dim(k)]
        coff, roff = {}, {}
        n = 0
        for j in col_levels:
            coff[j] = n
            n += self.dom_dim(j)
        m = 0
        for k in row_levels:
            roff[k] = m
            m += self.cod_dim(k)
        mat = ExactMatrix(self.space, m, n)
        for j in col_levels:
            for k in row_levels:
                blk = self.components.get((j, k))
                if blk is None:
                    continue
                c0, r0 = coff[j], roff[k]
                for i, row in enumerate(blk.rows):
                    tgt = mat.rows[r0 + i]
                    for c, v in row.items():
                        tgt[c0 + c] = v
        return mat, coff, roff

    def denominator(self, target, depth) -> SubspaceBasis:
        """``D_depth(target)``: the subspace of ``N_target`` killed at page ``depth``."""
        key = (target, depth)
        if key in self._den_cache:
            return self._den_cache[key]
        dim = self.cod_dim(target)
        if depth <= 0 or dim == 0:
            basis = SubspaceBasis(self.space, dim)
        else:
            s = self.sign
            unknown = [target - s * d for d in range(depth)]  # target first
            constraint = [target - s * d for d in range(1, depth)]
            unknown = [j for j in unknown if self.dom_dim(j)]
            if not unknown:
                basis = SubspaceBasis(self.space, dim)
            else:
                tmat, coff, _ = self.stacked(unknown, [target])
                cmat, _, _ = self.stacked(unknown, constraint)
                if cmat.nrows == 0:
                    kernel_vectors = None
                else:
                    kernel_vectors = nullspace(cmat).vectors
                if kernel_vectors is None:
                    images = [tmat.column(c) for c in range(tmat.ncols)]
                else:
                    images = [tmat.apply(v) for v in kernel_vectors]
                basis = SubspaceBasis.span(self.space, dim, images)
        self._den_cache[key] = basis
        return basis

    def __repr__(self):
        dims = {j: len(v) for j, v in self.domain.items()}
        return f"GradedLinearMap({self.name or self.direction.value}, domain dims {dims})"


def build_graded_map(
    space,
    direction,
    domain: dict,
    codomain: dict,
    image: Callable,
    decode_domain=None,
    decode_codomain=None,
    name="",
) -> GradedLinearMap:
    """Assemble a map from ``image(level, index) -> {codomain level: vector}``.

    Every basis image is checked against the filtration; a component landing on
    the wrong side raises :class:`FiltrationViolation`.
    """
    s = direction.sign
    comps: dict = {}
    for j, labels in domain.items():
        for col in range(len(labels)):
            for k, vec in image(j, col).items():
                if not any(x for x in vec):
                    continue
                if s * (k - j) < 0:
                    raise FiltrationViolation(
                        f"image of basis element {labels[col]} at level {j} has a component at level {k}"
                    )
                if k not in codomain:
                    raise FiltrationViolation(f"image lands on level {k}, which is outside the codomain")
                if len(vec) != len(codomain[k]):
                    raise DimensionMismatch(f"image vector of length {len(vec)} on codomain level {k}")
                mat = comps.get((j, k))
                if mat is None:
                    mat = comps[(j, k)] = ExactMatrix(space, len(codomain[k]), len(labels))
                for r, v in enumerate(vec):
                    if v:
                        mat.rows[r][col] = v
    return GradedLinearMap(space, direction, domain, codomain, comps, decode_domain, decode_codomain, name)


# ---------------------------------------------------------------------------
# classes, differentials and corrections
# ---------------------------------------------------------------------------


@dataclass
class PageClass:
    """A representative of a class in ``E_r^{p,0}`` (leading level ``p``)."""

    level: int
    page: int
    element: dict

    def leading(self):
        return self.element.get(self.level)


@dataclass
class DifferentialValue:
    source_level: int
    page: int
    target_level: int | None
    value: list
    reduced: list
    denominator: SubspaceBasis | None

    def is_zero(self) -> bool:
        return not any(x for x in self.reduced)


@dataclass
class Witness:
    """Element of the kernel (or, when ``exact`` is False, of the kernel up to
    a residual supported beyond the truncation)."""

    leading_level: int
    element: dict
    exact: bool = True
    residual: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)

    def leading(self):
        return self.element.get(self.leading_level)


@dataclass
class Obstruction:
    """A leading term whose class dies at page ``page``."""

    leading_level: int
    page: int
    target_level: int
    value: list
    reduced: list
    denominator: SubspaceBasis
    representative: dict
    trace: list = field(default_factory=list)


def _check_representative(f: GradedLinearMap, cls: PageClass):
    p, r, s = cls.level, cls.page, f.sign
    for j in cls.element:
        if s * (j - p) < 0:
            raise InvalidRepresentative(f"component at level {j} lies before the leading level {p}")
        if len(cls.element[j]) != f.dom_dim(j):
            raise DimensionMismatch(f"component at level {j} has the wrong length")
    for d in range(r):
        k = p + s * d
        if f.cod_dim(k) and any(x for x in f.apply_level(cls.element, k)):
            raise InvalidRepresentative(f"f(m) does not vanish at level {k}; not a page-{r} representative")


def differential(f: GradedLinearMap, cls: PageClass, check=True) -> DifferentialValue:
    """``d_r`` of a page-``r`` class with the representative-independent reduction."""
    if check:
        _check_representative(f, cls)
    T = cls.level + f.sign * cls.page
    if not f.cod_dim(T):
        return DifferentialValue(cls.level, cls.page, T, [], [], SubspaceBasis(f.space, 0))
    value = f.apply_level(cls.element, T)
    den = f.denominator(T, cls.page)
    return DifferentialValue(cls.level, cls.page, T, value, reduce_mod_subspace(value, den), den)


def _correction(f: GradedLinearMap, T, depth, value):
    """Canonical ``m'`` with ``f(m')_T = value`` and earlier components zero.

    Unknowns are ordered target level first so that the particular solution
    uses the newest level whenever it suffices.
    """
    s = f.sign
    if f.dom_dim(T):
        d0 = f.components.get((T, T))
        if d0 is not None:
            try:
                return {T: solve_affine(d0, value)}
            except NoSolution:
                pass
    unknown = [T - s * d for d in range(depth)]
    constraint = [T - s * d for d in range(1, depth)]
    mat, coff, roff = f.stacked(unknown, [k for k in constraint if f.cod_dim(k)] + [T])
    rhs = [Scalar.zero(f.space)] * mat.nrows
    r0 = roff[T]
    rhs[r0 : r0 + len(value)] = value
    sol = solve_affine(mat, rhs)
    out = {}
    for j, c0 in coff.items():
        out[j] = sol[c0 : c0 + f.dom_dim(j)]
    return out


def _subtract(a, b):
    out = dict(a)
    for j, v in b.items():
        if j in out:
            out[j] = [x - y for x, y in zip(out[j], v)]
        else:
            out[j] = [-y for y in v]
    return out


def advance(f: GradedLinearMap, cls: PageClass, adjust: Callable | None = None, check=True):
    """Move a class to page ``r + 1`` or report the obstruction.

    Returns ``(PageClass, correction)`` on success and an :class:`Obstruction`
    otherwise.  ``adjust(page, element)`` may return a modified representative
    (for instance a canonical choice of kernel corrections); it must stay in
    the same class, which is re-checked.
    """
    dv = differential(f, cls, check=check)
    if not dv.is_zero():
        return Obstruction(cls.level, cls.page, dv.target_level, dv.value, dv.reduced, dv.denominator, cls.element)
    if dv.value and any(x for x in dv.value):
        corr = _correction(f, dv.target_level, cls.page, dv.value)
        new = _subtract(cls.element, corr)
    else:
        corr = {}
        new = dict(cls.element)
    nxt = PageClass(cls.level, cls.page + 1, new)
    if adjust is not None:
        adjusted = adjust(nxt.page, nxt.element)
        if adjusted is not None:
            nxt = PageClass(cls.level, nxt.page, adjusted)
            _check_representative(f, nxt)
    return nxt, corr


def extend_to_kernel(
    f: GradedLinearMap,
    level: int,
    leading,
    max_steps: int | None = None,
    adjust: Callable | None = None,
):
    """Correct ``leading`` (a vector in ``M_level``) into a kernel element.

    Returns a :class:`Witness` (exact unless ``max_steps`` cut the run short)
    or the first :class:`Obstruction` met.
    """
    if len(leading) != f.dom_dim(level):
        raise DimensionMismatch(f"leading vector of length {len(leading)} for level {level}")
    cls = PageClass(level, 0, {level: list(leading)})
    last = f.last_target(level)
    trace = []
    s = f.sign
    while last is not None and s * (level + s * cls.page) <= s * last:
        if max_steps is not None and cls.page >= max_steps:
            residual = _strip(f.apply(cls.element))
            return Witness(level, cls.element, exact=not residual, residual=residual, trace=trace)
        res = advance(f, cls, adjust=adjust, check=False)
        T = level + s * cls.page
        if isinstance(res, Obstruction):
            trace.append({"page": cls.page, "target_level": T, "action": "obstruction"})
            res.trace = trace
            return res
        cls, corr = res
        corrected = sorted(j for j, v in corr.items() if any(x for x in v))
        trace.append(
            {"page": cls.page - 1, "target_level": T, "action": "corrected" if corrected else "survived", "levels": corrected}
        )
    residual = _strip(f.apply(cls.element))
    if residual:
        raise AssertionError("extension finished with a nonzero image; engine invariant broken")
    return Witness(level, _strip(cls.element) or cls.element, exact=True, trace=trace)


def formal_extend(f: GradedLinearMap, level: int, leading, order: int, adjust=None, check_hypothesis=True) -> Witness:
    """Extension up to ``order`` for a DECREASING map.

    Corrections live on levels ``<= order``; the residual ``f(m)`` is reported
    on the levels above ``order`` that the map still covers.  With
    ``check_hypothesis`` the shift-0 part must be onto every codomain level in
    ``(level, order]``, the situation in which no obstruction can appear.
    """
    if f.direction is not Direction.DECREASING:
        raise ValueError("formal extension is defined for DECREASING maps")
    if check_hypothesis:
        from .linalg import rank

        for k in f.codomain:
            if level < k <= order:
                d0 = f.components.get((k, k))
                r = 0 if d0 is None else rank(d0)
                if r < f.cod_dim(k):
                    raise HypothesisFailure(f"shift-0 part is not onto at level {k}")
    g = f.truncate(max_level=order)
    res = extend_to_kernel(g, level, leading, adjust=adjust)
    if isinstance(res, Obstruction):
        return res
    full = f.apply(res.element)
    residual = {k: v for k, v in full.items() if any(x for x in v)}
    if any(k <= order for k in residual):
        raise AssertionError("residual below the truncation order")
    return Witness(level, res.element, exact=not residual, residual=residual, trace=res.trace)


# ---------------------------------------------------------------------------
# whole pages
# ---------------------------------------------------------------------------


def leading_space(f: GradedLinearMap, p: int, r: int) -> SubspaceBasis:
    """Leading terms at level ``p`` of elements in ``Z_r^p`` (i.e. ``E_r^{p,0}``)."""
    dim = f.dom_dim(p)
    if r <= 0 or dim == 0:
        one = Scalar.one(f.space)
        z = Scalar.zero(f.space)
        return SubspaceBasis(f.space, dim, [[one if i == k else z for i in range(dim)] for k in range(dim)], list(range(dim)))
    s = f.sign
    levels = [p + s * d for d in range(r)]
    mat, coff, _ = f.stacked(levels, levels)
    if mat.nrows == 0:
        return leading_space(f, p, 0)
    ker = nullspace(mat)
    c0 = coff[p]
    return SubspaceBasis.span(f.space, dim, [v[c0 : c0 + dim] for v in ker.vectors])


def survivors(f: GradedLinearMap, p: int, max_page: int | None = None, adjust=None):
    """Page-by-page basis of ``E_r^{p,0}`` with representatives.

    Returns ``(classes, dims)`` where ``classes`` are page classes with
    independent leading terms spanning the surviving space and ``dims[r]`` is
    ``dim E_r^{p,0}``.
    """
    dim = f.dom_dim(p)
    z = Scalar.zero(f.space)
    one = Scalar.one(f.space)
    classes = [PageClass(p, 0, {p: [one if i == k else z for i in range(dim)]}) for k in range(dim)]
    dims = [dim]
    last = f.last_target(p)
    s = f.sign
    r = 0
    while classes and last is not None and s * (p + s * r) <= s * last:
        if max_page is not None and r >= max_page:
            break
        T = p + s * r
        vals = [differential(f, c, check=False) for c in classes]
        if f.cod_dim(T):
            mat = ExactMatrix.from_columns(f.space, [v.reduced for v in vals], f.cod_dim(T))
            combos = nullspace(mat).vectors
        else:
            combos = [[one if i == k else z for i in range(len(classes))] for k in range(len(classes))]
        new = []
        for c in combos:
            el: dict = {}
            for coef, cls in zip(c, classes):
                if not coef:
                    continue
                for j, v in cls.element.items():
                    scaled = [coef * x for x in v]
                    el[j] = [a + b for a, b in zip(el[j], scaled)] if j in el else scaled
            res = advance(f, PageClass(p, r, el), adjust=adjust, check=False)
            if isinstance(res, Obstruction):
                raise AssertionError("a combination with zero differential failed to advance")
            new.append(res[0])
        classes = new
        r += 1
        dims.append(len(classes))
    return classes, dims


def kernel_basis_up_to(f: GradedLinearMap, D: int | None = None) -> list:
    """Witnesses spanning ``ker f`` on the truncation at level ``D``.

    INCREASING maps keep domain levels ``<= D``; DECREASING maps are cut to
    domain and codomain levels ``<= D``.  Leading terms are independent at
    each level, so the witnesses form a basis of the kernel.
    """
    g = _truncate_for(f, D)
    out = []
    for p in g.domain:
        classes, _ = survivors(g, p)
        for cls in classes:
            el = _strip(cls.element) or cls.element
            if any(x for v in g.apply(el).values() for x in v):
                raise AssertionError("survivor is not in the kernel")
            out.append(Witness(p, el, exact=True))
    return out


def _truncate_for(f, D):
    if D is None:
        return f
    if f.direction is Direction.INCREASING:
        return f.restrict_domain([j for j in f.domain if j <= D])
    return f.truncate(max_level=D)


def brute_kernel(f: GradedLinearMap, D: int | None = None) -> SubspaceBasis:
    """Oracle: nullspace of the whole assembled matrix (same truncation rule).

    The returned basis lives in the concatenated coordinates of the domain
    levels in increasing level order; see :func:`flatten`.
    """
    g = _truncate_for(f, D)
    levels = list(g.domain)
    mat, _, _ = g.stacked(levels, list(g.codomain))
    if mat.nrows == 0:
        n = sum(g.dom_dim(j) for j in levels)
        one, z = Scalar.one(f.space), Scalar.zero(f.space)
        return SubspaceBasis(f.space, n, [[one if i == k else z for i in range(n)] for k in range(n)], list(range(n)))
    return nullspace(mat)


def flatten(f: GradedLinearMap, el, D: int | None = None):
    """Concatenate an element's levels in increasing order (matches brute_kernel)."""
    g = _truncate_for(f, D)
    out = []
    for j in g.domain:
        out.extend(el.get(j) or g.zero_vector(j))
    return out


@dataclass
class PageReport:
    page: int
    entries: list  # dicts with level, q, dim, basis

    def dims(self, q):
        return {e["level"]: e["dim"] for e in self.entries if e["q"] == q}


def page_report(f: GradedLinearMap, r: int, levels=None) -> PageReport:
    """Dimensions (and leading-term bases for q = 0) of ``E_r^{p,q}``."""
    entries = []
    lv = sorted(set(f.domain) | set(f.codomain)) if levels is None else sorted(levels)
    for p in lv:
        if f.dom_dim(p):
            basis = leading_space(f, p, r)
            entries.append({"level": p, "q": 0, "dim": basis.dim, "basis": basis.vectors})
        else:
            entries.append({"level": p, "q": 0, "dim": 0, "basis": []})
        if f.cod_dim(p):
            den = f.denominator(p, r)
            entries.append({"level": p, "q": 1, "dim": f.cod_dim(p) - den.dim, "basis": None})
        else:
            entries.append({"level": p, "q": 1, "dim": 0, "basis": None})
    return PageReport(r, entries)
