"""Exact linear algebra for half-spin representations of unitary-orthogonal groups.

Quadratic field towers E0 = Q(sqrt m1) and E = E0(sqrt m2), the exterior
algebra model of the half-spin modules, diagonal Hermitian forms, the
conjugate-linear Hodge star and the operators L+-, and the resulting
rationality verdicts.
"""

from .fieldtower import FieldElement, NormVerdict, TowerSpec, embed_sign, is_norm
from .forms import HermitianData, build_J, build_psi_delta_k, compatibility_lambda, discriminant
from .hodgestar import build_L, hodge_star
from .linop import LinOp
from .rationality import RationalityVerdict, classify_rationality, main_scenario
from .spinrep import g0_basis, spin_lift, so_generator

__version__ = "0.1.0"

__all__ = [
    "FieldElement", "NormVerdict", "TowerSpec", "embed_sign", "is_norm",
    "HermitianData", "build_J", "build_psi_delta_k", "compatibility_lambda", "discriminant",
    "build_L", "hodge_star", "LinOp",
    "RationalityVerdict", "classify_rationality", "main_scenario",
    "g0_basis", "spin_lift", "so_generator",
]
