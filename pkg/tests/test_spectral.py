import random

import pytest

from helpers import random_graded_map, same_span, witness_span
from specseq.algebra import ParamSpace, Scalar
from specseq.errors import FiltrationViolation, InvalidRepresentative
from specseq.linalg import ExactMatrix, SubspaceBasis
from specseq.spectral import (
    Direction,
    GradedLinearMap,
    Obstruction,
    PageClass,
    Witness,
    brute_kernel,
    build_graded_map,
    differential,
    extend_to_kernel,
    kernel_basis_up_to,
    leading_space,
    page_report,
    survivors,
)

SP = ParamSpace()
DIRS = [Direction.INCREASING, Direction.DECREASING]


def _maps(direction, count, base):
    for seed in range(count):
        rng = random.Random(base + seed)
        yield seed, rng, random_graded_map(rng, direction)


@pytest.mark.parametrize("direction", DIRS)
def test_kernel_matches_brute_force(direction):
    for seed, rng, f in _maps(direction, 50, 1000 if direction is Direction.INCREASING else 2000):
        D = rng.choice([None, 2, 4])
        ws = kernel_basis_up_to(f, D)
        assert same_span(witness_span(f, ws, D), brute_kernel(f, D)), seed
        # leading terms at each level are independent, so this is a basis
        assert len(ws) == brute_kernel(f, D).dim


@pytest.mark.parametrize("direction", DIRS)
def test_survivor_dims_match_leading_space(direction):
    for seed, rng, f in _maps(direction, 30, 3000 + direction.sign):
        for p in f.domain:
            _, dims = survivors(f, p)
            for r, d in enumerate(dims):
                assert leading_space(f, p, r).dim == d, (seed, p, r)
            # pages only shrink
            assert all(a >= b for a, b in zip(dims, dims[1:]))


def _combine(a, b):
    out = {j: list(v) for j, v in a.items()}
    for j, v in b.items():
        out[j] = [x + y for x, y in zip(out[j], v)] if j in out else list(v)
    return out


@pytest.mark.parametrize("direction", DIRS)
def test_differential_is_representative_independent(direction):
    """Adding an element of Z_{r-1} at the next level keeps d_r(m) mod D_r fixed."""
    checked = 0
    for seed, rng, f in _maps(direction, 60, 4000 + direction.sign):
        s = f.sign
        for p in f.domain:
            classes, dims = survivors(f, p)
            for r in range(1, len(dims)):
                reps, _ = survivors(f, p, max_page=r)
                nxt = p + s
                if not reps or not f.dom_dim(nxt):
                    continue
                shifts, _ = survivors(f, nxt, max_page=r - 1)
                for cls in reps:
                    base = differential(f, cls)
                    for w in shifts:
                        coef = Scalar.const(SP, rng.randint(-2, 2))
                        moved = _combine(cls.element, {j: [coef * x for x in v] for j, v in w.element.items()})
                        other = differential(f, PageClass(p, r, moved))
                        assert other.reduced == base.reduced, (seed, p, r)
                        checked += 1
    assert checked > 20


@pytest.mark.parametrize("direction", DIRS)
def test_extend_to_kernel_or_obstruction(direction):
    for seed, rng, f in _maps(direction, 30, 5000 + direction.sign):
        for p in f.domain:
            lead = [Scalar.const(SP, rng.randint(-2, 2)) for _ in range(f.dom_dim(p))]
            if not any(lead):
                continue
            res = extend_to_kernel(f, p, lead)
            in_space = leading_space(f, p, 10**3).contains(lead)
            if isinstance(res, Witness):
                assert in_space
                assert not any(x for v in f.apply(res.element).values() for x in v)
                assert res.element[p] == lead
            else:
                assert isinstance(res, Obstruction)
                assert not in_space
                assert any(res.reduced)


def _two_level_map(direction):
    # M_0 = <m>, N_0 = <n0>, N_1 = <n1> with f(m) = n1, so d_0 = 0 and d_1 = 1
    s = direction.sign
    dom = {0: ["m"]}
    cod = {0: ["n0"], s: ["n1"]}
    one = Scalar.one(SP)
    return build_graded_map(SP, direction, dom, cod, lambda j, c: {s: [one]})


@pytest.mark.parametrize("direction", DIRS)
def test_first_differential_detects_obstruction(direction):
    f = _two_level_map(direction)
    cls = PageClass(0, 1, {0: [Scalar.one(SP)]})
    dv = differential(f, cls)
    assert dv.target_level == direction.sign and not dv.is_zero()
    res = extend_to_kernel(f, 0, [Scalar.one(SP)])
    assert isinstance(res, Obstruction) and res.page == 1


def test_filtration_violation():
    one = Scalar.one(SP)
    with pytest.raises(FiltrationViolation):
        build_graded_map(SP, Direction.INCREASING, {0: ["m"]}, {0: ["n"], 1: ["n1"]}, lambda j, c: {1: [one]})
    with pytest.raises(FiltrationViolation):
        GradedLinearMap(SP, Direction.DECREASING, {1: ["m"]}, {0: ["n"]}, {(1, 0): ExactMatrix.from_rows(SP, [[1]])})


def test_invalid_representative():
    f = _two_level_map(Direction.DECREASING)
    with pytest.raises(InvalidRepresentative):
        differential(f, PageClass(0, 2, {0: [Scalar.one(SP)]}))
    # a component before the leading level is rejected
    one = Scalar.one(SP)
    g = build_graded_map(SP, Direction.DECREASING, {0: ["m0"], 1: ["m1"]}, {1: ["n1"]}, lambda j, c: {1: [one]})
    with pytest.raises(InvalidRepresentative):
        differential(g, PageClass(1, 0, {0: [one], 1: [one]}))


def test_page_report_dims():
    f = _two_level_map(Direction.DECREASING)
    r0, r1, r2 = (page_report(f, r) for r in range(3))
    assert r0.dims(0) == {0: 1, 1: 0} and r0.dims(1) == {0: 1, 1: 1}
    assert r1.dims(0)[0] == 1
    assert r2.dims(0)[0] == 0 and r2.dims(1) == {0: 1, 1: 0}


def test_empty_map():
    f = GradedLinearMap(SP, Direction.INCREASING, {}, {}, {})
    assert kernel_basis_up_to(f) == []
    assert brute_kernel(f).dim == 0
    assert isinstance(SubspaceBasis.span(SP, 0, []), SubspaceBasis)
