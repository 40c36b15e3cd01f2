"""Chevalley algebras and adjoint elementary Chevalley groups over exact rings."""

from .algebra import LieElement, StructureTable, ad_matrix, bracket, build_structure_table
from .autos import (SemilinearAut, centralizer_probe, decompose_monomial, diagram,
                    differential_of_standard, extract_ring_automorphism, inner, split_by_idempotents,
                    standardness_map, torus, weyl)
from .curves import Curve, curve_from_word, filtration_level, rep, tangent_vector
from .group import (GroupElement, exp_generator, is_lie_automorphism, lemma1_certificate,
                    unipotent_power_polynomial, weyl_torus_elements)
from .rings import QQ, Poly, Product, Rationals, Truncated, invert, parse_ring, primitive_idempotents, substitute
from .roots import RootSystem, build_root_system, cartan_pairing, dynkin_symmetries, reduce_to_diagram_symmetry, root_string

__version__ = "0.1.0"
