"""Finite higher dimensional transition systems, labelled symmetric
precubical sets, the realization/nerve adjunction between them, and the
reflections deciding their bisimulation-flavoured weak equivalences.
"""

from .core import (Budget, BudgetExceeded, DEFAULT_BUDGET, HdtsMap, Transition,
                   Verdict, WeakHdts, action_only, boundary, clique,
                   close_composition, compose, construct_basic, cube, double,
                   empty_hdts, identity_map, interval, is_cofibration_hdts,
                   is_cubical, is_isomorphism, make_hdts, make_map,
                   pure_transition, state_only, terminal, tr, validate)
from .cubecat import (CubeArrow, arrow_compose, enumerate_arrows, face,
                      factor_arrow, identity_arrow, symmetry)
from .ops import (Colimit, arrows_isomorphic, colimit, coproduct,
                  coreflect_cubical, cubify, enumerate_cube_maps,
                  find_isomorphism, hom_set, is_isomorphic, pair_into_product,
                  product, pushout, realize_arrow)
from .precub import (LsPrecubSet, PrecubMap, apply_arrow, check_hda,
                     colimit_precub, compose_precub, construct_precub,
                     coproduct_precub, cylinder_precub,
                     find_precub_isomorphism, hom_set_precub,
                     identity_precub_map, is_cofibration_precub,
                     make_precub, make_precub_map, precub_boundary,
                     precub_cube, precub_free, precub_terminal,
                     product_precub, pushout_precub, quotient_precub,
                     sh_reflect, validate_presheaf)
from .realize import (AdjunctionReport, adjunction_check, counit_map, nerve,
                      nerve_with_table, realize, realize_map, realize_of_free,
                      realize_with_cocone)
from .homotopy import (CellAttachment, CellComplexFactorization, FibrancyReport,
                       GeneratorFamily, Named, bls_of_map, bls_reflect,
                       cellularize, csa1_of_map, csa1_reflect, cyl_hdts,
                       fibrancy, fold_into_cylinder, homotopic, injective_wrt,
                       lambda_generate, lift_search, orthogonal_to,
                       parallel_collapse, parallel_collapse_cofibrant,
                       pushout_product, satisfies_csa1, weak_equiv,
                       weak_equiv_precub_localized, wedge_inclusion)

__version__ = "0.1.0"
