"""Shared generators for the test suite (seeded, no global state)."""

from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import strategies as st

from specseq.algebra import Polynomial, Scalar, VariableTable, monomial_basis
from specseq.linalg import SubspaceBasis
from specseq.spectral import Direction, build_graded_map, flatten


def random_fraction(rng: random.Random, size=5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, 3))


def random_polynomial(rng: random.Random, table: VariableTable, max_degree=3, nterms=4, min_degree=0) -> Polynomial:
    n = table.nstate
    terms = {}
    for _ in range(nterms):
        d = rng.randint(min_degree, max_degree)
        basis = monomial_basis(n, d)
        terms[rng.choice(basis)] = random_fraction(rng)
    return Polynomial(table, terms)


def random_homogeneous(rng, table, degree, nterms=3):
    return random_polynomial(rng, table, degree, nterms, min_degree=degree)


@st.composite
def polynomials(draw, table: VariableTable, max_degree=3, max_terms=5):
    n = table.nstate
    nterms = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(nterms):
        e = tuple(draw(st.integers(0, max_degree)) for _ in range(n))
        if sum(e) > max_degree:
            continue
        num = draw(st.integers(-9, 9))
        den = draw(st.integers(1, 5))
        terms[e] = Fraction(num, den)
    return Polynomial(table, terms)


def random_graded_map(rng: random.Random, direction: Direction, D=None, max_dim=6, max_shift=3, density=0.5):
    """A random filtration-preserving map on levels ``0..D``.

    Entries are small integers; a fraction of the components is zeroed to
    make rank deficiencies (and so nontrivial kernels) likely.
    """
    from specseq.algebra import ParamSpace

    space = ParamSpace()
    D = rng.randint(0, 6) if D is None else D
    s = direction.sign
    dom = {j: [f"m{j}_{i}" for i in range(rng.randint(0, max_dim))] for j in range(D + 1)}
    cod = {k: [f"n{k}_{i}" for i in range(rng.randint(0, max_dim))] for k in range(D + 1)}
    shifts = sorted(rng.sample(range(max_shift + 1), rng.randint(1, max_shift + 1)))
    table = {}
    for j, labels in dom.items():
        for t in shifts:
            k = j + s * t
            if k not in cod or not labels or not cod[k]:
                continue
            if rng.random() > 0.8:
                continue
            mat = [[0] * len(labels) for _ in cod[k]]
            for r in range(len(cod[k])):
                for c in range(len(labels)):
                    if rng.random() < density:
                        mat[r][c] = rng.randint(-3, 3)
            # occasionally force a repeated column
            if len(labels) > 1 and rng.random() < 0.3:
                for r in range(len(cod[k])):
                    mat[r][-1] = mat[r][0]
            table[(j, k)] = mat

    def image(j, col):
        out = {}
        for (jj, k), mat in table.items():
            if jj == j:
                out[k] = [Scalar.const(space, mat[r][col]) for r in range(len(cod[k]))]
        return out

    return build_graded_map(space, direction, dom, cod, image, name="random")


def witness_span(f, witnesses, D=None) -> SubspaceBasis:
    from specseq.spectral import _truncate_for

    g = _truncate_for(f, D)
    n = sum(g.dom_dim(j) for j in g.domain)
    return SubspaceBasis.span(f.space, n, [flatten(f, w.element, D) for w in witnesses])


def same_span(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    return a.dim == b.dim and all(b.contains(v) for v in a.vectors) and all(a.contains(v) for v in b.vectors)
