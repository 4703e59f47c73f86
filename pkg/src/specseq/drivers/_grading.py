"""Coordinates for spaces graded by polynomial degree."""

from __future__ import annotations

from ..algebra.polynomial import Polynomial, monomial_basis
from ..algebra.scalars import Scalar
from ..errors import FiltrationViolation


class MonomialGrading:
    """Level ``L`` is spanned by the monomials of degree ``L + offset``."""

    def __init__(self, table, levels, offset=0):
        self.table = table
        self.offset = offset
        self.levels = list(levels)
        self._basis = {}
        self._index = {}
        for L in self.levels:
            d = L + offset
            b = monomial_basis(table.nstate, d) if d >= 0 else []
            self._basis[L] = b
            self._index[L] = {e: k for k, e in enumerate(b)}

    def level_of_degree(self, d):
        return d - self.offset

    def basis(self, L):
        return self._basis.get(L, [])

    def labels(self):
        return {L: [Polynomial.monomial(self.table, e) for e in self._basis[L]] for L in self.levels}

    def encode(self, poly: Polynomial) -> dict:
        z = Scalar.zero(self.table.space)
        out = {}
        for e, c in poly.terms.items():
            L = sum(e) - self.offset
            if L not in self._index:
                raise FiltrationViolation(f"term of degree {sum(e)} is outside the graded range")
            vec = out.get(L)
            if vec is None:
                vec = out[L] = [z] * len(self._basis[L])
            vec[self._index[L][e]] = c
        return out

    def decode(self, L, vec) -> Polynomial:
        return Polynomial(self.table, {e: c for e, c in zip(self._basis.get(L, []), vec) if c})

    def decode_element(self, el) -> Polynomial:
        total = Polynomial.zero(self.table)
        for L, vec in el.items():
            total = total + self.decode(L, vec)
        return total
