"""Hilbert transforms on Coxeter groups and buildings, checked by brute force.

The package decides the nested condition, classifies how group elements move
a root, enumerates balls of Coxeter groups and graph products, and verifies
Cotlar identities for the associated half-space multipliers, both at the
level of symbols and, with exact arithmetic, in the group algebra.
"""
__version__ = "0.1.0"

from .coxeter import CoxeterSystem, m_closure_reduce, named_system, validate_system
from .errors import (
    ConfigError,
    ConstraintViolated,
    CotlarError,
    DecompositionFailed,
    NestedConditionViolated,
    RepDiscoveryFailed,
    WordTooLong,
    WrongSystem,
)
from .geometry import (
    HalfSpaceSide,
    InclusionWitness,
    SixClass,
    classify,
    halfspace_side,
    nested_condition,
    root_relation_check,
    stabilizer_test,
)
from .multipliers import CotlarReport, Symbol, mw_symbol, verify_cotlar
from .graph_product import GraphProduct, graph_product_descriptor
from .buildings import (
    BuildingHandle,
    amalgam_symbol,
    building_symbol,
    check_axioms,
    finer_symbol,
    transitivity_table_check,
    verify_theorem_c,
    weyl_distance,
)
from .a2tilde import a2tilde_subgroup, extension_symbol, factor, lattice_symbol, z2_membership
from .ncalgebra import (
    GroupAlgebraElement,
    apply_multiplier,
    conditional_expectation,
    cotlar_residual,
    ga_adjoint,
    ga_mul,
    lp_norm_even,
    plancherel_trace,
    ratio_report,
)
