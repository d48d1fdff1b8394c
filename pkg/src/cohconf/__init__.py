"""Chamber systems, adjacency algebras and coherent configurations over exact rationals."""

from .algebra import AlgebraBasis, RelationPolynomial, algebra_closure, check_relation, presentation
from .architecture import CoherentConfiguration, verify_architecture
from .geometry import LineSpace, affine_plane, chamber_system, clique_plane, petersen_linespace, projective_plane
from .graph import EdgeColouredGraph, adjacency_operator
from .groups import Permutation, PermutationAction
from .linalg import EchelonSpan, RationalMatrix

__version__ = "0.1.0"
