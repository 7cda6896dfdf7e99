"""Chermak-Delgado lattices of finite groups.

Two engines compute CD(G): a brute-force engine over explicit Cayley tables and
a subspace-scan engine for class-2 p-groups given by presentations.
"""

from .cd_engine import CDResult, ClosureViolation, cd_lattice, measure
from .class2 import Class2Presentation, cd_lattice_class2, to_cayley
from .constructions import build
from .fp_linalg import Subspace, gaussian_binomial, subspace_count
from .group_core import CayleyGroup, all_subgroups
from .lattice import FiniteLattice, find_isomorphism, subspace_lattice

__version__ = "0.1.0"

__all__ = [
    "CDResult",
    "CayleyGroup",
    "Class2Presentation",
    "ClosureViolation",
    "FiniteLattice",
    "Subspace",
    "all_subgroups",
    "build",
    "cd_lattice",
    "cd_lattice_class2",
    "find_isomorphism",
    "gaussian_binomial",
    "measure",
    "subspace_count",
    "subspace_lattice",
    "to_cayley",
]
