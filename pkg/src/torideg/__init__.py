"""Exact flag triangulations, quasi-valuations and fan algebras of lattice polytopes."""

from .errors import ToridegError
from .fanalgebra import (
    GeneratorSet,
    compare_deg_A,
    fixed_minimal_lift,
    generator_set,
    homogenize,
    initial_term,
    is_minimal_monomial,
    kernel_bases,
    multiply_basis,
    shadow_report,
    weight_vector,
)
from .monoidfan import (
    chain_cone,
    component_report,
    degree_one_submonoid,
    fan_of_monoids,
    hilbert_basis,
    monoid_membership,
    saturation_check,
)
from .polytope import FaceLattice, LatticePolytope, face_lattice, is_normal, lattice_points
from .stratification import build_triangulation, default_marking, extremal_data, integral_marking, validate_marking
from .valuation import AOrder, nu_chain, quasi_valuation, quasi_valuation_via_min, valuation_monoid_check

__version__ = "0.1.0"

__all__ = [
    "AOrder", "FaceLattice", "GeneratorSet", "LatticePolytope", "ToridegError",
    "build_triangulation", "chain_cone", "compare_deg_A", "component_report", "default_marking",
    "degree_one_submonoid", "extremal_data", "face_lattice", "fan_of_monoids", "fixed_minimal_lift",
    "generator_set", "hilbert_basis", "homogenize", "initial_term", "integral_marking",
    "is_minimal_monomial", "is_normal", "kernel_bases", "lattice_points", "monoid_membership",
    "multiply_basis", "nu_chain", "quasi_valuation", "quasi_valuation_via_min", "saturation_check",
    "shadow_report", "valuation_monoid_check", "validate_marking", "weight_vector",
]
