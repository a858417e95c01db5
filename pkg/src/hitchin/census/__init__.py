"""Brute-force groupoid counts of nilpotent Hitchin pairs on the projective line."""

from .bundles import SplittingType, aut_bundle_size, bun_tail_bound, gl_order, hom_dim, splittings_up_to
from .counting import (
    BudgetExceeded,
    StackyCount,
    bun_calibration,
    bun_count,
    chain_closed_form,
    count_chain_stack,
    count_stratum,
    leading_exponent,
    nilpotent_cone_count,
    siegel_mass,
    stratum_table,
    verify_count_identity,
)
from .invariants import (
    CONVENTIONS,
    SAT,
    UNSAT,
    FlagInvariants,
    HitchinPairP1,
    NotNilpotent,
    extract_invariants,
    kernel_splitting,
)

__all__ = [
    "BudgetExceeded", "CONVENTIONS", "FlagInvariants", "HitchinPairP1", "NotNilpotent",
    "SAT", "SplittingType", "StackyCount", "UNSAT", "aut_bundle_size", "bun_calibration",
    "bun_count", "bun_tail_bound", "chain_closed_form", "count_chain_stack", "count_stratum",
    "extract_invariants", "gl_order", "hom_dim", "kernel_splitting", "leading_exponent",
    "nilpotent_cone_count", "siegel_mass", "splittings_up_to", "stratum_table",
    "verify_count_identity",
]
