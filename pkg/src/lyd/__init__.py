"""Exact computations with Lie-Yamaguti algebras, their representations,
cohomology, formal deformations and free algebras."""

__version__ = "0.1.0"

from .algebra import LieYamagutiAlgebra, catalog, check_axioms
from .representation import Representation, adjoint, check_representation
from .cochains import Cochain, CochainPair, OneCochain
from .deformation import TruncatedDeformation, FormalIsomorphism
from .free import FreeLYA, graded_dimensions

__all__ = [
    "LieYamagutiAlgebra", "catalog", "check_axioms",
    "Representation", "adjoint", "check_representation",
    "Cochain", "CochainPair", "OneCochain",
    "TruncatedDeformation", "FormalIsomorphism",
    "FreeLYA", "graded_dimensions",
]
