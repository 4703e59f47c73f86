"""Exact scalars.

Two value types live here:

* :class:`GaussianRational`, a plain ``re + im*i`` pair of fractions, used for
  constants, eigenvalues and reporting.
* :class:`Scalar`, an element of the field of fractions of polynomials in
  named parameters over the Gaussian rationals.  Some parameters may be
  declared as square roots of others (``a**2 = A``) or of rational constants.

Internally the imaginary unit is treated as one more bound symbol satisfying
``i**2 = -1`` and always occupies slot 0 of a :class:`ParamSpace`.  With that
convention every coefficient is an ordinary :class:`fractions.Fraction`, and
complex conjugation is just the sign flip ``i -> -i``, the same operation used
to rationalize square roots out of denominators.

Canonical form of a :class:`Scalar` ``num/den``:

* ``num`` has every bound exponent in ``{0, 1}`` (bindings applied),
* ``den`` involves only free parameters (no bound symbols, no ``i``),
* ``den`` is monic for graded-lex order,
* ``den`` shares no factor with the real coefficient polynomials of ``num``.

Two scalars are equal exactly when their canonical forms coincide.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from ..errors import DivisionByZero, NotAPerfectSquare, VariableTableMismatch

__all__ = [
    "GaussianRational",
    "ParamSpace",
    "Scalar",
    "rational_sqrt",
    "to_fraction",
]

IMAG = "i"


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and rational strings such as ``"-3/4"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_sqrt(q) -> Fraction:
    """Exact square root of a non-negative rational, or NotAPerfectSquare.

    >>> rational_sqrt(Fraction(9, 4))
    Fraction(3, 2)
    """
    q = to_fraction(q)
    if q < 0:
        raise NotAPerfectSquare(f"{q} is negative")
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn != q.numerator or rd * rd != q.denominator:
        raise NotAPerfectSquare(f"{q} is not the square of a rational")
    return Fraction(rn, rd)


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_fraction(re)
        self.im = to_fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return cls(value, 0)

    def __add__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        other = GaussianRational.coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("division by zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        im = "i" if abs(self.im) == 1 else f"{abs(self.im)}*i"
        if self.re == 0:
            return im if self.im > 0 else f"-{im}"
        return f"{self.re} {'+' if self.im > 0 else '-'} {im}"


class ParamSpace:
    """Ordered parameter names with optional square-root bindings.

    ``bindings`` maps a parameter name ``a`` to either another (unbound)
    parameter name ``A`` or a rational constant, meaning ``a**2`` reduces to
    that target.  The imaginary unit is prepended as a hidden bound symbol.
    """

    __slots__ = ("params", "bindings", "names", "index", "bound", "free", "zero_exp", "_key", "_ring")

    def __init__(self, params=(), bindings=None):
        params = tuple(params)
        bindings = dict(bindings or {})
        if IMAG in params:
            raise ValueError("'i' is reserved for the imaginary unit")
        if len(set(params)) != len(params):
            raise ValueError(f"duplicate parameter names in {params}")
        self.params = params
        self.names = (IMAG,) + params
        self.index = {n: k for k, n in enumerate(self.names)}
        norm_bind = {}
        bound = [(0, None, Fraction(-1))]
        for sym in sorted(bindings, key=lambda name: self.index.get(name, -1)):
            target = bindings[sym]
            if sym not in self.index:
                raise VariableTableMismatch(f"bound symbol {sym!r} is not a declared parameter")
            if isinstance(target, str) and target in self.index:
                if target in bindings:
                    raise ValueError(f"binding target {target!r} is itself a square root")
                norm_bind[sym] = target
                bound.append((self.index[sym], self.index[target], None))
            else:
                value = to_fraction(target)
                norm_bind[sym] = value
                bound.append((self.index[sym], None, value))
        self.bindings = norm_bind
        self.bound = tuple(sorted(bound))
        bound_idx = {b[0] for b in self.bound}
        self.free = tuple(k for k in range(len(self.names)) if k not in bound_idx)
        self.zero_exp = (0,) * len(self.names)
        self._key = (self.params, tuple(sorted((k, str(v)) for k, v in norm_bind.items())))
        self._ring = None

    def __eq__(self, other):
        return isinstance(other, ParamSpace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.bindings:
            return f"ParamSpace({self.params!r}, {self.bindings!r})"
        return f"ParamSpace({self.params!r})"

    def is_bound(self, name: str) -> bool:
        return name == IMAG or name in self.bindings

    def sympy_ring(self):
        """Sparse ``QQ[free params]`` ring used for gcd computations."""
        if self._ring is None:
            from sympy.polys.domains import QQ
            from sympy.polys.rings import ring

            names = [self.names[k] for k in self.free]
            if names:
                self._ring = ring(",".join(f"_{n}" for n in names), QQ)[0]
            else:
                self._ring = False
        return self._ring


# ---------------------------------------------------------------------------
# polynomial kernels on dicts {exponent tuple: Fraction}
# ---------------------------------------------------------------------------


def _reduce(space: ParamSpace, e, c):
    for idx, tgt, val in space.bound:
        k = e[idx]
        if k >= 2:
            q, r = divmod(k, 2)
            e = list(e)
            e[idx] = r
            if tgt is None:
                c = c * val**q
            else:
                e[tgt] += q
            e = tuple(e)
    return e, c


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for e, c in b.items():
        v = out.get(e)
        if v is None:
            out[e] = c
        else:
            v = v + c
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _pscale(a, c):
    if not c:
        return {}
    if c == 1:
        return a
    return {e: v * c for e, v in a.items()}


def _pmul(space, a, b):
    if not a or not b:
        return {}
    if len(a) == 1:
        ((e0, c0),) = a.items()
        if not any(e0):
            return _pscale(b, c0)
    if len(b) == 1:
        ((e0, c0),) = b.items()
        if not any(e0):
            return _pscale(a, c0)
    out = {}
    bound = space.bound
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            c = c1 * c2
            for idx, _, _ in bound:
                if e[idx] >= 2:
                    e, c = _reduce(space, e, c)
                    break
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
    return out


def _psigma(a, idx):
    """Flip the sign of the bound symbol in slot ``idx``."""
    return {e: (-c if e[idx] % 2 else c) for e, c in a.items()}


def _const_value(space, a):
    """Return the Fraction if ``a`` is a rational constant, else None."""
    if not a:
        return Fraction(0)
    if len(a) == 1:
        ((e, c),) = a.items()
        if not any(e):
            return c
    return None


def _grlex_key(e):
    return (sum(e), e)


def _to_ring(space, poly):
    R = space.sympy_ring()
    dom = R.domain
    free = space.free
    return R.from_dict({tuple(e[k] for k in free): dom(c.numerator, c.denominator) for e, c in poly.items()})


def _from_ring(space, element, pattern_exp=None):
    free = space.free
    base = list(pattern_exp or space.zero_exp)
    out = {}
    for mon, c in element.terms():
        e = list(base)
        for k, x in zip(free, mon):
            e[k] = x
        out[tuple(e)] = Fraction(int(c.numerator), int(c.denominator))
    return out


def _split_parts(space, poly):
    """Group ``poly`` by the exponents of its bound symbols."""
    parts = {}
    bound_idx = [b[0] for b in space.bound]
    for e, c in poly.items():
        pat = tuple(e[k] for k in bound_idx)
        if any(pat):
            free_e = list(e)
            for k in bound_idx:
                free_e[k] = 0
            free_e = tuple(free_e)
        else:
            free_e = e
        parts.setdefault(pat, {})[free_e] = c
    return parts, bound_idx


def _normalize(space, num, den):
    """Bring ``num/den`` to canonical form."""
    if not den:
        raise DivisionByZero("division by zero scalar")
    if not num:
        return {}, {space.zero_exp: Fraction(1)}
    # rationalize: remove every bound symbol (including i) from den
    for idx, _, _ in space.bound:
        if any(e[idx] for e in den):
            conj = _psigma(den, idx)
            den = _pmul(space, den, conj)
            num = _pmul(space, num, conj)
            if not num:
                return {}, {space.zero_exp: Fraction(1)}
    c = _const_value(space, den)
    if c is not None:
        if c != 1:
            num = _pscale(num, 1 / c)
        return num, {space.zero_exp: Fraction(1)}
    # cancel the gcd of den with every real coefficient polynomial of num
    parts, bound_idx = _split_parts(space, num)
    g = _to_ring(space, den)
    ring_parts = {}
    for pat, part in parts.items():
        rp = _to_ring(space, part)
        ring_parts[pat] = rp
        g = g.gcd(rp)
        if g.is_ground:
            break
    if not g.is_ground:
        den = _from_ring(space, _to_ring(space, den).exquo(g))
        num = {}
        for pat in parts:
            rp = ring_parts[pat]
            pe = list(space.zero_exp)
            for k, x in zip(bound_idx, pat):
                pe[k] = x
            q = rp.exquo(g)
            for mon, cf in q.terms():
                e = list(pe)
                for k, x in zip(space.free, mon):
                    e[k] = x
                num[tuple(e)] = Fraction(int(cf.numerator), int(cf.denominator))
    lead = max(den, key=_grlex_key)
    lc = den[lead]
    if lc != 1:
        inv = 1 / lc
        den = _pscale(den, inv)
        num = _pscale(num, inv)
    return num, den


def _format_monomial(names, e):
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _term_order_key(e):
    # graded-lex on the non-imaginary slots, imaginary unit last
    body = e[1:]
    return (sum(body), body, e[0])


def format_param_poly(names, poly) -> str:
    """Print a dict polynomial, leading term first."""
    if not poly:
        return "0"
    out = []
    for e in sorted(poly, key=_term_order_key, reverse=True):
        c = poly[e]
        mon = _format_monomial(names, e)
        mag = abs(c)
        if not mon:
            body = str(mag)
        elif mag == 1:
            body = mon
        else:
            body = f"{mag}*{mon}"
        if not out:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(out)


class Scalar:
    """Exact element of ``Q(i)(params)`` with square-root bindings.

    Scalars from different :class:`ParamSpace` objects never mix silently;
    use :meth:`transfer` to move between spaces.
    """

    __slots__ = ("space", "num", "den", "_hash")

    def __init__(self, space: ParamSpace, num, den=None, normalized=False):
        self.space = space
        if den is None:
            den = {space.zero_exp: Fraction(1)}
        if not normalized:
            num, den = _normalize(space, num, den)
        self.num = num
        self.den = den
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, space):
        return cls(space, {}, None, normalized=True)

    @classmethod
    def one(cls, space):
        return cls(space, {space.zero_exp: Fraction(1)}, None, normalized=True)

    @classmethod
    def const(cls, space, value):
        if isinstance(value, Scalar):
            if value.space != space:
                raise VariableTableMismatch("scalar belongs to a different parameter space")
            return value
        if isinstance(value, GaussianRational):
            num = {}
            if value.re:
                num[space.zero_exp] = value.re
            if value.im:
                e = list(space.zero_exp)
                e[0] = 1
                num[tuple(e)] = value.im
            return cls(space, num, None, normalized=True)
        v = to_fraction(value)
        return cls(space, {space.zero_exp: v} if v else {}, None, normalized=True)

    @classmethod
    def symbol(cls, space, name):
        if name not in space.index:
            from ..errors import UnknownVariable

            raise UnknownVariable(name)
        e = list(space.zero_exp)
        e[space.index[name]] = 1
        return cls(space, {tuple(e): Fraction(1)}, None, normalized=True)

    @classmethod
    def imag_unit(cls, space):
        return cls.symbol(space, IMAG)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def _den_is_one(self):
        return len(self.den) == 1 and self.space.zero_exp in self.den

    def is_constant(self) -> bool:
        """True when the value involves no parameter other than ``i``."""
        if not self._den_is_one():
            return False
        return all(not any(e[1:]) for e in self.num)

    def is_rational(self) -> bool:
        return self._den_is_one() and _const_value(self.space, self.num) is not None

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not a rational constant")
        return _const_value(self.space, self.num)

    def to_gaussian(self) -> GaussianRational:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        re = im = Fraction(0)
        for e, c in self.num.items():
            if e[0]:
                im += c
            else:
                re += c
        return GaussianRational(re, im)

    def is_real(self) -> bool:
        """No imaginary unit appears (the den is real by construction)."""
        return all(e[0] == 0 for e in self.num)

    def free_symbols(self) -> set:
        names = self.space.names
        out = set()
        for poly in (self.num, self.den):
            for e in poly:
                out.update(names[k] for k, x in enumerate(e) if x and k)
        return out

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.space is not self.space and other.space != self.space:
                raise VariableTableMismatch("scalars belong to different parameter spaces")
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return Scalar.const(self.space, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        sp = self.space
        if self._den_is_one() and other._den_is_one():
            return Scalar(sp, _padd(self.num, other.num), None, normalized=True)
        if self.den == other.den:
            return Scalar(sp, _padd(self.num, other.num), self.den)
        num = _padd(_pmul(sp, self.num, other.den), _pmul(sp, other.num, self.den))
        return Scalar(sp, num, _pmul(sp, self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.space, _pneg(self.num), self.den, normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return Scalar.zero(self.space)
        sp = self.space
        num = _pmul(sp, self.num, other.num)
        if self._den_is_one() and other._den_is_one():
            # bindings can only move factors into free params, never create denominators
            return Scalar(sp, num, None, normalized=True)
        return Scalar(sp, num, _pmul(sp, self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num:
            raise DivisionByZero("division by zero scalar")
        c = _const_value(self.space, self.num)
        if c is not None and self._den_is_one():
            return Scalar(self.space, {self.space.zero_exp: 1 / c}, None, normalized=True)
        return Scalar(self.space, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Scalar.one(self.space)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Scalar":
        """Complex conjugate, treating every parameter as real."""
        return Scalar(self.space, _psigma(self.num, 0), self.den, normalized=True)

    def real_part(self) -> "Scalar":
        return Scalar(self.space, {e: c for e, c in self.num.items() if not e[0]}, self.den)

    def imag_part(self) -> "Scalar":
        num = {}
        for e, c in self.num.items():
            if e[0]:
                num[(0,) + e[1:]] = c
        return Scalar(self.space, num, self.den)

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = Scalar.const(self.space, other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.space == other.space and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    # -- moving between spaces ----------------------------------------------
    def transfer(self, space: ParamSpace, values=None) -> "Scalar":
        """Re-express in ``space``; parameters missing there must be given in ``values``.

        ``values`` maps a parameter name to a rational or to a :class:`Scalar`
        of the target space.  Bindings of the target space are applied, so
        transferring ``a`` with ``A -> 4`` and ``a**2 = A`` yields ``2`` only if
        the caller also supplies ``a``; otherwise ``a`` must stay a symbol.
        """
        values = dict(values or {})
        if space == self.space and not values:
            return self
        images = []
        for name in self.space.names:
            if name in values:
                images.append(Scalar.const(space, values[name]) if not isinstance(values[name], Scalar) else values[name])
            elif name in space.index:
                images.append(Scalar.symbol(space, name))
            else:
                raise VariableTableMismatch(f"parameter {name!r} has no value in the target space")
        return _evaluate(self.num, images, space) / _evaluate(self.den, images, space)

    # -- printing -----------------------------------------------------------
    def numerator_str(self) -> str:
        return format_param_poly(self.space.names, self.num)

    def denominator_str(self) -> str:
        return format_param_poly(self.space.names, self.den)

    def is_compound_numerator(self) -> bool:
        return len(self.num) > 1

    def __str__(self):
        n = self.numerator_str()
        if self._den_is_one():
            return n
        d = self.denominator_str()
        if len(self.num) > 1 or n.startswith("-") and " " in n:
            n = f"({n})"
        if len(self.den) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"Scalar({self})"


def _evaluate(poly, images, space):
    total = Scalar.zero(space)
    cache = {}
    for e, c in poly.items():
        term = Scalar.const(space, c)
        for k, x in enumerate(e):
            if x:
                key = (k, x)
                if key not in cache:
                    cache[key] = images[k] ** x
                term = term * cache[key]
        total = total + term
    return total
