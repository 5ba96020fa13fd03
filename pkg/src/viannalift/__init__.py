"""Lifted Vianna tori: disk potentials by Laurent mutation along the Markov tree."""

from .lattice import LatticePolytope, is_fano, newton_polytope
from .laurent import LaurentPoly, MutationDatum, UnimodularMap, mutate
from .markov import enumerate_tree, is_markov
from .potentials import PotentialRecord, chekanov, clifford, vianna
from .verify import distinguish, verify_theorem, wall_crossing_check

__all__ = [
    "LatticePolytope",
    "LaurentPoly",
    "MutationDatum",
    "PotentialRecord",
    "UnimodularMap",
    "chekanov",
    "clifford",
    "distinguish",
    "enumerate_tree",
    "is_fano",
    "is_markov",
    "mutate",
    "newton_polytope",
    "verify_theorem",
    "vianna",
    "wall_crossing_check",
]
