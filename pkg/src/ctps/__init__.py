"""Canonical tensor product subfactors from skeletal fusion-category data."""
from .fusion_ring import FusionRing, ModularDataError, StructuralError, conjugation_matrix, pf_dimensions, validate_ring, verlinde_fusion
from .induction import (Induction, UncertifiedDimension, alpha_bimodule, check_dimension_preservation,
                        check_extension_axioms, coupling_matrix, hom_alpha, modular_invariants)
from .model_gen import ModelSpec, builtin, gen_pointed, gen_su2k
from .normality import NormalityVerdict, check_n2, classify, find_n3
from .qsystem import NoSolution, QReport, QSystem, solve_qsystem, trivial_qsystem, verify_qsystem
from .skeletal import (ProductData, SkeletalData, check_hexagon, check_pentagon, check_unitarity, left_inverse,
                       recouple, right_inverse, standard_solutions, validate_skeletal)
from .zeta import ZetaSystem, build_zeta, check_braiding_invariance, export_ctps, verify_ctps

__all__ = [n for n in dir() if not n.startswith("_")]
