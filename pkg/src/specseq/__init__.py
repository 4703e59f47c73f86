"""Exact kernels of filtered graded linear maps.

A linear map between graded vector spaces that respects a filtration is
split into its shift components; a two-column spectral sequence then decides
level by level which leading terms extend to kernel elements, and returns
either a corrected kernel element or the differential that obstructs it.

Subpackages and modules:

* :mod:`specseq.algebra` -- parametric scalars, sparse polynomials, parser;
* :mod:`specseq.linalg` -- exact sparse elimination;
* :mod:`specseq.vectorfield` -- polynomial vector fields and Lie brackets;
* :mod:`specseq.hamiltonian` -- Poisson brackets, complex charts, eigenframes;
* :mod:`specseq.spectral` -- graded maps, pages, differentials, witnesses;
* :mod:`specseq.drivers` -- ODE, matrix, vector-field and Hamiltonian pipelines;
* :mod:`specseq.report`, :mod:`specseq.cli` -- output and command line.
"""

from .algebra import (
    ParamSpace,
    Polynomial,
    Scalar,
    VariableTable,
    parse_polynomial,
    parse_scalar,
)
from .hamiltonian import ComplexChart, eigenframe, henon_heiles, poisson_bracket
from .linalg import ExactMatrix, SubspaceBasis, nullspace, rank, solve_affine
from .spectral import (
    Direction,
    GradedLinearMap,
    Obstruction,
    Witness,
    brute_kernel,
    build_graded_map,
    extend_to_kernel,
    formal_extend,
    kernel_basis_up_to,
    page_report,
)
from .vectorfield import PolyVectorField, lie_bracket

__version__ = "0.1.0"

__all__ = [
    "ComplexChart",
    "Direction",
    "ExactMatrix",
    "GradedLinearMap",
    "Obstruction",
    "ParamSpace",
    "PolyVectorField",
    "Polynomial",
    "Scalar",
    "SubspaceBasis",
    "VariableTable",
    "Witness",
    "brute_kernel",
    "build_graded_map",
    "eigenframe",
    "extend_to_kernel",
    "formal_extend",
    "henon_heiles",
    "kernel_basis_up_to",
    "lie_bracket",
    "nullspace",
    "page_report",
    "parse_polynomial",
    "parse_scalar",
    "poisson_bracket",
    "rank",
    "solve_affine",
]
