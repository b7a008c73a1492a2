"""Exact computations with Jordan types of quiver representations.

Subpackages and modules:

* ``exactalg`` – rationals / prime fields, matrices, subspaces, polynomials, Groebner bases
* ``quiver``   – quivers, paths, representations and standard modules
* ``flows``    – flow points, semistability, the coefficients phi and F_inj
* ``jordan``   – the nilpotent operator, rank profiles and Jordan types
* ``cjt``      – constant Jordan type: witnesses, sampling and certificates
* ``homprops`` – equal-images / equal-kernels properties, Hom/Ext formulas
* ``sheaves``  – graded Hilbert functions and splitting types (Kronecker quivers)
* ``cli``      – the ``cjtkit`` command
"""

__version__ = "0.1.0"

from .flows import (  # noqa: E402
    EmptySemistableLocus,
    FlowBasis,
    Weight,
    enumerate_flow_points,
    in_F_inj,
    is_semistable,
    kronecker_weight,
    phi_arrow,
    phi_path,
    sample_semistable,
)
from .jordan import (  # noqa: E402
    JordanType,
    RankProfile,
    build_operator,
    generic_jordan_type,
    jordan_type_at,
    rank_profile,
)
from .quiver import (  # noqa: E402
    Path,
    Quiver,
    Representation,
    direct_sum,
    gamma_in,
    gamma_out,
    injective,
    kronecker_I,
    kronecker_P,
    kronecker_quiver,
    loewy_length,
    paths_between,
    projective,
    quotient_by_R,
    quotient_by_S,
    random_rep,
    running_example_quiver,
    simple,
)

__all__ = [
    "__version__",
    "EmptySemistableLocus",
    "FlowBasis",
    "Weight",
    "enumerate_flow_points",
    "in_F_inj",
    "is_semistable",
    "kronecker_weight",
    "phi_arrow",
    "phi_path",
    "sample_semistable",
    "JordanType",
    "RankProfile",
    "build_operator",
    "generic_jordan_type",
    "jordan_type_at",
    "rank_profile",
    "Path",
    "Quiver",
    "Representation",
    "direct_sum",
    "gamma_in",
    "gamma_out",
    "injective",
    "kronecker_I",
    "kronecker_P",
    "kronecker_quiver",
    "loewy_length",
    "paths_between",
    "projective",
    "quotient_by_R",
    "quotient_by_S",
    "random_rep",
    "running_example_quiver",
    "simple",
]
