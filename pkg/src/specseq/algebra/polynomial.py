"""Sparse multivariate polynomials in STATE variables with Scalar coefficients.

A :class:`VariableTable` lists the variables of a problem.  STATE variables
carry the polynomial structure (degree, grading, derivatives).  PARAM
variables are symbolic constants and live inside :class:`Scalar`
coefficients, so a parameter never contributes to the degree.

Monomials are exponent tuples indexed by the table's STATE order.  Terms are
ordered by graded-lex: total degree first, then the earlier variable carrying
the larger exponent comes first, giving ``1 < x < y < x^2 < x*y < y^2``.
"""

from __future__ import annotations

import enum
import itertools
from fractions import Fraction

from ..errors import (
    NotAStateVariable,
    NotHomogeneous,
    UnknownVariable,
    VariableTableMismatch,
)
from .scalars import GaussianRational, ParamSpace, Scalar

__all__ = [
    "VariableKind",
    "VariableTable",
    "Polynomial",
    "monomial_basis",
    "monomial_key",
]


class VariableKind(enum.Enum):
    STATE = "state"
    PARAM = "param"


STATE = VariableKind.STATE
PARAM = VariableKind.PARAM


def monomial_key(e):
    """Sort key realising graded-lex order with ``x_1 > x_2 > ...`` (ascending)."""
    return (sum(e), tuple(e))


class VariableTable:
    """Ordered STATE variables plus a :class:`ParamSpace`.

    Tables compare by value, so two independently built tables with the same
    names, kinds and bindings are interchangeable.
    """

    __slots__ = ("state", "space", "state_index", "_key")

    def __init__(self, state, params=(), bindings=None, space: ParamSpace | None = None):
        self.state = tuple(state)
        if len(set(self.state)) != len(self.state):
            raise ValueError(f"duplicate state variables in {self.state}")
        if space is None:
            space = ParamSpace(params, bindings)
        overlap = set(self.state) & set(space.names)
        if overlap:
            raise ValueError(f"names used both as state and parameter: {sorted(overlap)}")
        self.space = space
        self.state_index = {n: k for k, n in enumerate(self.state)}
        self._key = (self.state, space)

    @classmethod
    def from_pairs(cls, pairs, bindings=None):
        """Build from ``[(name, VariableKind), ...]`` as in a problem file."""
        state = [n for n, k in pairs if VariableKind(k) is STATE]
        params = [n for n, k in pairs if VariableKind(k) is PARAM]
        return cls(state, params, bindings)

    @property
    def nstate(self) -> int:
        return len(self.state)

    @property
    def params(self):
        return self.space.params

    def kind(self, name):
        if name in self.state_index:
            return STATE
        if name in self.space.index:
            return PARAM
        raise UnknownVariable(name)

    def with_state(self, state) -> "VariableTable":
        """Same parameters, different STATE variables."""
        return VariableTable(state, space=self.space)

    def __eq__(self, other):
        return isinstance(other, VariableTable) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"VariableTable(state={self.state!r}, space={self.space!r})"


def monomial_basis(nvars: int, degree: int):
    """All exponent tuples of total degree ``degree``, largest first (``x_1^d`` leads)."""
    if degree < 0:
        return []
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    out.sort(key=monomial_key, reverse=True)
    return out


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to nonzero Scalars."""

    __slots__ = ("table", "terms", "_hash")

    def __init__(self, table: VariableTable, terms=None):
        self.table = table
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != table.nstate:
                raise ValueError(f"exponent {e} does not match {table.nstate} state variables")
            if not isinstance(c, Scalar):
                c = Scalar.const(table.space, c)
            if c:
                clean[tuple(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table, terms):
        obj = cls.__new__(cls)
        obj.table = table
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, table):
        return cls._raw(table, {})

    @classmethod
    def constant(cls, table, value):
        c = value if isinstance(value, Scalar) else Scalar.const(table.space, value)
        return cls._raw(table, {(0,) * table.nstate: c} if c else {})

    @classmethod
    def variable(cls, table, name):
        if name not in table.state_index:
            if name in table.space.index:
                return cls.constant(table, Scalar.symbol(table.space, name))
            raise UnknownVariable(name)
        e = [0] * table.nstate
        e[table.state_index[name]] = 1
        return cls._raw(table, {tuple(e): Scalar.one(table.space)})

    @classmethod
    def monomial(cls, table, exps, coeff=1):
        return cls(table, {tuple(exps): coeff})

    def variables(self):
        """Tuple of STATE variables as polynomials."""
        return tuple(Polynomial.variable(self.table, n) for n in self.table.state)

    # -- basic queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exps) -> Scalar:
        return self.terms.get(tuple(exps), Scalar.zero(self.table.space))

    def sorted_terms(self, descending=True):
        keys = sorted(self.terms, key=monomial_key, reverse=descending)
        return [(e, self.terms[e]) for e in keys]

    def leading_monomial(self):
        if not self.terms:
            return None
        return max(self.terms, key=monomial_key)

    # -- arithmetic -------------------------------------------------------------
    def _check(self, other):
        if other.table is not self.table and other.table != self.table:
            raise VariableTableMismatch("polynomials over different variable tables")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, GaussianRational, Scalar)):
            return Polynomial.constant(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.table, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Polynomial":
        if not isinstance(c, Scalar):
            c = Scalar.const(self.table.space, c)
        if not c:
            return Polynomial.zero(self.table)
        return Polynomial._raw(self.table, {e: v * c for e, v in self.terms.items() if v * c})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, Scalar)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = c1 * c2
                v = out.get(e)
                out[e] = c if v is None else v + c
        return Polynomial._raw(self.table, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if other.degree() > 0:
                raise NotAStateVariable("division by a polynomial in state variables")
            other = other.coefficient((0,) * self.table.nstate)
        if not isinstance(other, Scalar):
            other = Scalar.const(self.table.space, other)
        return self.scale(other.inverse())

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Polynomial.constant(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational, Scalar)):
            other = Polynomial.constant(self.table, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus and structure ---------------------------------------------------
    def diff(self, var) -> "Polynomial":
        """Partial derivative with respect to a STATE variable (name or index)."""
        if isinstance(var, str):
            if var not in self.table.state_index:
                if var in self.table.space.index:
                    raise NotAStateVariable(f"{var} is a parameter")
                raise UnknownVariable(var)
            k = self.table.state_index[var]
        else:
            k = var
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return Polynomial._raw(self.table, out)

    def gradient(self):
        return [self.diff(k) for k in range(self.table.nstate)]

    def homogeneous_components(self) -> dict:
        """Map degree -> homogeneous part (only nonzero parts)."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            out.setdefault(sum(e), {})[e] = c
        return {d: Polynomial._raw(self.table, t) for d, t in sorted(out.items())}

    def homogeneous_part(self, degree) -> "Polynomial":
        return Polynomial._raw(self.table, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def truncate(self, max_degree) -> "Polynomial":
        return Polynomial._raw(self.table, {e: c for e, c in self.terms.items() if sum(e) <= max_degree})

    def substitute_linear(self, images) -> "Polynomial":
        """Substitute each STATE variable by a polynomial of degree at most 1.

        ``images`` is a mapping name -> Polynomial or a sequence in STATE
        order; all images share one target table.
        """
        from ..errors import MissingImage

        if isinstance(images, dict):
            try:
                seq = [images[n] for n in self.table.state]
            except KeyError as exc:
                raise MissingImage(f"no image for variable {exc.args[0]}") from None
        else:
            seq = list(images)
            if len(seq) != self.table.nstate:
                raise MissingImage("wrong number of images")
        for img in seq:
            if img.degree() > 1:
                raise NotHomogeneous("images must have degree at most 1")
        return self.substitute(seq)

    def substitute(self, seq) -> "Polynomial":
        """Substitute arbitrary polynomials (sharing one table) for the STATE variables."""
        if not seq:
            return self
        target = seq[0].table
        if target.space != self.table.space:
            raise VariableTableMismatch("images use a different parameter space")
        result = Polynomial.zero(target)
        powers: dict = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for k, x in enumerate(e):
                if x:
                    key = (k, x)
                    if key not in powers:
                        powers[key] = seq[k] ** x
                    term = term * powers[key]
            result = result + term
        return result

    def map_coefficients(self, fn, table=None) -> "Polynomial":
        table = table or self.table
        return Polynomial(table, {e: fn(c) for e, c in self.terms.items()})

    def specialize(self, values, table: VariableTable | None = None) -> "Polynomial":
        """Substitute parameter values; result lives in ``table`` (by default a reduced one)."""
        if table is None:
            keep = [p for p in self.table.params if p not in values and p not in _bound_to(self.table.space, values)]
            binds = {k: v for k, v in self.table.space.bindings.items() if k in keep and (not isinstance(v, str) or v in keep)}
            table = VariableTable(self.table.state, keep, binds)
        return self.retable(table, values)

    def retable(self, table: VariableTable, values=None) -> "Polynomial":
        """Move to another table by variable name, optionally fixing parameters."""
        idx = []
        for name in self.table.state:
            if name not in table.state_index:
                raise VariableTableMismatch(f"state variable {name} missing from target table")
            idx.append(table.state_index[name])
        out = {}
        cache = {}
        for e, c in self.terms.items():
            ne = [0] * table.nstate
            for k, x in zip(idx, e):
                ne[k] = x
            if c not in cache:
                cache[c] = c.transfer(table.space, values)
            out[tuple(ne)] = cache[c]
        return Polynomial(table, out)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    # -- printing -------------------------------------------------------------
    def __str__(self):
        from .parsing import format_polynomial

        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self})"


def _bound_to(space, values):
    """Square-root symbols whose target is being specialized."""
    return {k for k, v in space.bindings.items() if isinstance(v, str) and v in values}
