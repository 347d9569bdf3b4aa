"""Exact cluster algebras with tropical coefficients.

Seeds and mutation, exchange-graph exploration, freezing, isolated covers of
acyclic seeds, and membership tests for the cluster algebra A and the upper
cluster algebra U.
"""

__version__ = "0.1.0"

from .algebra import LaurentPoly, NotDivisible, TropMonomial, divides, exact_div
from .explore import (
    ExchangeGraph,
    collect_cluster_variables,
    explore_exchange_graph,
    is_finite_type,
    laurent_audit,
)
from .locality import (
    CoverLeaf,
    FrozenSeed,
    MembershipVerdict,
    NotAcyclic,
    NotFiniteType,
    NotIsolated,
    acyclic_a_membership,
    au_differential,
    build_isolated_cover,
    exchange_identity_check,
    find_sink,
    freeze,
    freezing_commutes_check,
    is_acyclic,
    isolated_exchange_constants,
    isolated_membership,
    upper_membership_bounded,
)
from .parse import ParseError, UnknownVariable, parse_element, parse_seed_file
from .seed import (
    ExchangeMatrix,
    InvalidSeed,
    LaurentViolation,
    NotSkewSymmetrizable,
    Seed,
    canonical_form,
    find_symmetrizer,
    mutate_cluster,
    mutate_coefficients,
    mutate_matrix,
    mutate_seed,
    permute_seed,
    validate_seed,
)
