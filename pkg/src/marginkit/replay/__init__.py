from .data import FAMILIES, P_FAMILY, Q_FAMILY, mutations, base_profile
from .theorems import (
    THEOREMS,
    ReplayReport,
    StepAssertion,
    derive_sequence,
    replay_family,
    run_theorem,
    verify_theorem1,
    verify_theorem2,
    verify_theorem3,
    verify_theorem4,
    verify_debord_route,
    verify_theorem5,
)

__all__ = [
    "FAMILIES",
    "P_FAMILY",
    "Q_FAMILY",
    "THEOREMS",
    "ReplayReport",
    "StepAssertion",
    "derive_sequence",
    "mutations",
    "base_profile",
    "replay_family",
    "run_theorem",
    "verify_theorem1",
    "verify_theorem2",
    "verify_theorem3",
    "verify_theorem4",
    "verify_debord_route",
    "verify_theorem5",
]
