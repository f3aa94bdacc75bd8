"""Exact reductions of submodules of Z_d^n.

The package is organised bottom-up:

* :mod:`zdreduce.zmod`: scalar arithmetic, canonical gcd, Bezout, CRT;
* :mod:`zdreduce.linalg`: matrices, submodules, kernels, membership;
* :mod:`zdreduce.reduce`: diagonal reduction with certificates;
* :mod:`zdreduce.symplectic`: the symplectic form and symplectic reduction;
* :mod:`zdreduce.lagrangian`: orthogonals, classification, Lagrangian normal form;
* :mod:`zdreduce.fringe`: Gram matrices, fringes, symplectic diagonalisation;
* :mod:`zdreduce.oracle`: brute-force references used by the tests;
* :mod:`zdreduce.cli`: the ``zdreduce`` command.
"""

from .errors import (
    CompositeModulusError,
    DimensionError,
    FamilyNotFreeError,
    InternalCheckError,
    NotAUnitError,
    OracleSizeError,
    ZdError,
)
from .fringe import (
    DOmegaResult,
    FringeReport,
    GramData,
    check_fringe_preservation,
    d_omega,
    fringe_report,
    gram,
    is_nearly_symplectic,
    is_symplectic_submodule,
    k_partition,
)
from .lagrangian import Classification, LagrangianForm, classify, lagrangian_canonical, orthogonal
from .linalg import Submodule, ZdMatrix, contains, det, inverse, kernel, membership, submodule_equal
from .reduce import (
    ReductionCertificate,
    build_isomorphism,
    characteristic_sequence,
    d0,
    sigma_d_contains,
    simple_reduce,
)
from .symplectic import SymplecticSpace, is_symplectic_matrix, symplectic_reduce, trigonalisable
from .zmod import Modulus, bezout_invertible, canonical_gcd, crt_join, crt_split, vp

__version__ = "0.1.0"

__all__ = [
    "ZdError",
    "NotAUnitError",
    "DimensionError",
    "CompositeModulusError",
    "FamilyNotFreeError",
    "OracleSizeError",
    "InternalCheckError",
    "Modulus",
    "bezout_invertible",
    "canonical_gcd",
    "crt_split",
    "crt_join",
    "vp",
    "ZdMatrix",
    "Submodule",
    "det",
    "inverse",
    "kernel",
    "membership",
    "submodule_equal",
    "contains",
    "ReductionCertificate",
    "d0",
    "simple_reduce",
    "characteristic_sequence",
    "build_isomorphism",
    "sigma_d_contains",
    "SymplecticSpace",
    "is_symplectic_matrix",
    "symplectic_reduce",
    "trigonalisable",
    "Classification",
    "LagrangianForm",
    "orthogonal",
    "classify",
    "lagrangian_canonical",
    "GramData",
    "FringeReport",
    "DOmegaResult",
    "gram",
    "k_partition",
    "fringe_report",
    "check_fringe_preservation",
    "d_omega",
    "is_nearly_symplectic",
    "is_symplectic_submodule",
]
