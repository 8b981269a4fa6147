"""Computational engine for finite monoids with topologies.

Continuity analysis of monoid actions, action topologies and the powder
reflection, right-congruence lattices and equivariant filters, completion
monoids, homomorphism factorizations, and principal-site invariants,
all at exhaustively checkable finite scale.
"""

from .errors import CapExceeded, InternalCheckError, TopactError
from .monoid import FiniteMonoid, SemigroupHom, validate_hom, validate_monoid
from .topology import Topology, generate_topology
from .congruences import CongruenceFilter, RightCongruence
from .actions import MSet, MSetHom

__all__ = [
    "CapExceeded",
    "CongruenceFilter",
    "FiniteMonoid",
    "InternalCheckError",
    "MSet",
    "MSetHom",
    "RightCongruence",
    "SemigroupHom",
    "Topology",
    "TopactError",
    "generate_topology",
    "validate_hom",
    "validate_monoid",
]
