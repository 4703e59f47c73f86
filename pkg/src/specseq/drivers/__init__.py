"""Problem-specific pipelines built on the spectral engine.

* :mod:`.ode` -- polynomial solutions of linear ODEs (INCREASING).
* :mod:`.matrix` -- centralizers of upper-triangular matrices (DECREASING, finite).
* :mod:`.vf` -- centralizers of polynomial vector fields (both directions).
* :mod:`.ham` -- first integrals of Hamiltonians such as Henon-Heiles.

:func:`load_problem` turns the JSON problem format into problem objects.
"""

from __future__ import annotations

import json
from pathlib import Path

from .ham import HamProblem, ham_search, ham_verify, henon_heiles_problem
from .matrix import MatrixProblem, matrix_centralizer
from .ode import OdeProblem, ode_poly_solutions
from .vf import VfMode, VfProblem, vf_bottom_centralizers, vf_centralizers, vf_top_centralizers

__all__ = [
    "HamProblem",
    "MatrixProblem",
    "OdeProblem",
    "VfProblem",
    "VfMode",
    "ham_search",
    "ham_verify",
    "henon_heiles_problem",
    "matrix_centralizer",
    "ode_poly_solutions",
    "vf_bottom_centralizers",
    "vf_centralizers",
    "vf_top_centralizers",
    "load_problem",
    "problem_from_dict",
]

KINDS = ("vf", "ham", "ode", "matrix")


def load_problem(path, overrides=None):
    """Read a JSON problem file; ``overrides`` replaces top-level keys."""
    data = json.loads(Path(path).read_text())
    return problem_from_dict(data, overrides)


def ham_parameters(data) -> dict:
    """The parameter dict of a ham problem; ``params`` is accepted as an alias."""
    params = data.get("parameters", data.get("params", {}))
    if not isinstance(params, dict):
        raise ValueError("ham parameters must be an object mapping names to values or 'indeterminate'")
    return dict(params)


def _ham_from_dict(data):
    from fractions import Fraction

    from ..algebra.parsing import parse_polynomial
    from ..algebra.polynomial import VariableTable

    params = ham_parameters(data)
    if "hamiltonian" not in data:
        return henon_heiles_problem(
            params.get("A"),
            params.get("B"),
            params.get("L"),
            max_degree=int(data.get("max_degree", 4)),
            equal_frequencies=bool(data.get("equal_frequencies", False)),
            candidates=data.get("candidates", ()),
        )
    variables = data.get("variables", ["q1", "q2", "p1", "p2"])
    symbolic = [k for k, v in params.items() if v is None or str(v).lower() == "indeterminate"]
    values = {k: Fraction(str(v)) for k, v in params.items() if k not in symbolic}
    sqrt = dict(data.get("sqrt", {}))
    extra = [s for s in sqrt if s not in params]
    # parse with every parameter declared, then specialize the numeric ones
    full = VariableTable(variables, list(params) + extra, sqrt)
    H = parse_polynomial(data["hamiltonian"], full)
    if values:
        binds = {s: values.get(t, t) if isinstance(t, str) else t for s, t in sqrt.items()}
        table = VariableTable(variables, symbolic + extra, binds)
        H = H.retable(table, values)
    cands = [parse_polynomial(c, full).retable(H.table, values) if values else parse_polynomial(c, full) for c in data.get("candidates", ())]
    return HamProblem(H, int(data.get("max_degree", 4)), cands)


def problem_from_dict(data, overrides=None):
    data = dict(data)
    for k, v in (overrides or {}).items():
        if v is not None:
            data[k] = v
    kind = data.get("kind")
    if kind not in KINDS:
        raise ValueError(f"problem kind must be one of {KINDS}, got {kind!r}")
    if kind == "ode":
        return OdeProblem.parse(
            data["coefficients"],
            variable=data.get("variable", "x"),
            params=data.get("params", ()),
            max_degree=data.get("max_degree"),
        )
    if kind == "matrix":
        return MatrixProblem.from_lists(data["matrix"], data["diagonal"])
    if kind == "vf":
        return VfProblem.parse(
            data["field"],
            data["variables"],
            mode=data.get("mode", "top"),
            degree=int(data.get("max_degree", data.get("degree", 5))),
            order=int(data.get("order", 6)),
            rescale=bool(data.get("rescale", False)),
        )
    return _ham_from_dict(data)
