"""Finite cell-table presheaves, nerves, and exhaustive lifting checks.

The package builds free strict n-categories on tables of dimensions,
enumerates the functors between them, exposes the resulting presheaf
machinery (representables, boundaries, spines, nerves), and runs bounded
lifting-property verifications including the two-variable box calculus
against finite simplicial sets.
"""

from .ncat import (FiniteNCat, NCatError, NFunctor, build_interval, compose,
                   enumerate_functors, globe, identity_functor, internal_hom,
                   internal_hom_eval, is_fully_faithful, is_iso_fibration,
                   linear_ncat, ncat_from_json, ncat_to_json, raise_level,
                   simply_connected_groupoid, terminal, truncate,
                   truncate_right, truncate_right_map, unique_lift, validate,
                   validate_nfunctor, walking_iso, wreath_delta1)
from .theta import (Table, ThetaError, ThetaMorphism, boundary_monos,
                    delta_table, enumerate_objects, ez_factorize, free_ncat,
                    globe_table, globular_graph, hom, is_mono, is_split_epi,
                    maximal_proper_monos, parse_table, point,
                    spine_inclusions)
from .sites import DeltaSite, ProductSite, SimplexMap, ThetaSite
from .presheaf import (BoundExhaustion, BoundaryTheta, NerveDelta, NerveTheta,
                       Presheaf, PresheafMap, Representable, SimplexBoundary,
                       SimplexHorn, SpineTheta, TerminalPresheaf,
                       count_elements, enumerate_maps, external_product,
                       nerve_map, presheaf_to_json, product_presheaf,
                       pullback_t, segal_check)
from .lifting import (LiftingProblem, anodyne_generators,
                      boundary_generators, check_not_2qcat,
                      check_trivial_fibration, count_lifts,
                      counterexample_square, find_lift, has_rlp,
                      interval_nerve, interval_pushout_product,
                      qcat_generators, spine_generators,
                      verify_counterexample)
from .boxcalc import (Box, DictSimplicial, adjunction_counts, box_product,
                      box_product_map, left_division_map,
                      orthogonality_equivalence_test, p_star, p_star_map,
                      pushout_product, resolution_check, rezk_generators,
                      right_division_map, sampled_orthogonality,
                      simplicial_from_json)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
