"""Integral highest-weight lattices, their p-power truncations and slope bounds
for Hecke operators on the cohomology of Gamma_1(p)."""
from .rootsys import RootSystem, root_system
from .pbw import KostantForm, UElement, kostant_form, straighten
from .hwmod import HighestWeightLattice, irreducible_lattice, weight_lattice_index
from .trunc import TruncationSpec, TruncatedModule, build_truncation, phi_isomorphism
from .arithcoh import ReductiveWeight, coset_reps, free_generators, hecke_on_h1, h1_cardinality
from .slopes import charpoly, newton_slopes, prop65_pipeline, uniform_bound, verify_dimension_bound

__version__ = "0.1.0"

__all__ = [
    "RootSystem", "root_system", "KostantForm", "UElement", "kostant_form", "straighten",
    "HighestWeightLattice", "irreducible_lattice", "weight_lattice_index",
    "TruncationSpec", "TruncatedModule", "build_truncation", "phi_isomorphism",
    "ReductiveWeight", "coset_reps", "free_generators", "hecke_on_h1", "h1_cardinality",
    "charpoly", "newton_slopes", "prop65_pipeline", "uniform_bound", "verify_dimension_bound",
]
