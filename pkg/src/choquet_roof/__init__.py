"""Convex roofs, concave hulls and the convex order for finite-dimensional quantum states."""

from .choquet import (
    ConvexWitness,
    OrderVerdict,
    TransitionPlan,
    check_dominates,
    mass_on,
    order_necessary_test,
)
from .errors import ChoquetRoofError, ConvergenceError, UnsupportedInputError, ValidationError
from .functionals import (
    KrausChannel,
    StateFunctional,
    apply_channel,
    approx_char_fn,
    entropy,
    ky_fan,
    output_entropy,
    purity_gap,
    truncated_entropy,
)
from .oracles import OracleReport, brute_force_roof, wootters_eof
from .roof import (
    RoofOptions,
    RoofResult,
    concave_hull,
    convex_roof,
    decomposition_from_isometry,
    efn,
    eof,
)
from .states import (
    Ensemble,
    barycenter,
    ensemble_distance,
    refine_to_pure,
    sample_ensemble,
    sample_state,
    steer_barycenter,
)

__all__ = [
    "ChoquetRoofError",
    "ConvergenceError",
    "ConvexWitness",
    "Ensemble",
    "KrausChannel",
    "OracleReport",
    "OrderVerdict",
    "RoofOptions",
    "RoofResult",
    "StateFunctional",
    "TransitionPlan",
    "UnsupportedInputError",
    "ValidationError",
    "apply_channel",
    "approx_char_fn",
    "barycenter",
    "brute_force_roof",
    "check_dominates",
    "concave_hull",
    "convex_roof",
    "decomposition_from_isometry",
    "efn",
    "ensemble_distance",
    "entropy",
    "eof",
    "ky_fan",
    "mass_on",
    "order_necessary_test",
    "output_entropy",
    "purity_gap",
    "refine_to_pure",
    "sample_ensemble",
    "sample_state",
    "steer_barycenter",
    "truncated_entropy",
    "wootters_eof",
]
