"""CEGM amplitudes from the tropical integral, and their iterated residues."""

from .amplitude import (
    KinematicSlice, ResidueResult, amplitude, conserving_basis, dual_point,
    evaluate_amplitude, fan_for, is_zero, iterated_residue, m2_tree_oracle,
    planar_trees, random_conserving_point,
)
from .fan import FAN_GUARD, FanGuardError, LinearFan, Simplex, build_fan, build_star
from .termsum import PoleError, TermSum
from .verify import (
    FactorizationReport, channel_propagators, check_separable, expected_factors,
    match_factor, separability_groups, sub_amplitude, verify_factorization,
)
