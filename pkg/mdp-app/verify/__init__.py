"""
Numerical checks of optimality relations and assumptions
"""
from verify.report import Check, VerificationReport
# optimality must load before modules that read vanish (vanish.pipeline imports it)
from verify.optimality import check_acoe, check_chain, check_theorem1_conclusions, check_wacoi, estimate_w_star
from verify.assumptions import (
    check_assumption_B,
    check_assumption_B_underline_seq,
    check_asymptotic_ui,
    check_corollary_conditions,
    check_ec_majorant,
    check_pointwise_limit,
    check_transform_dcoe,
)
from verify.continuity import (
    check_constructions_coincide,
    check_cost_lower_semicontinuity,
    check_equicontinuity,
    check_lower_semi_equicontinuity,
)
from verify.suite import CHECKS, run_suite

__all__ = [
    'Check',
    'VerificationReport',
    'check_acoe',
    'check_chain',
    'check_theorem1_conclusions',
    'check_wacoi',
    'estimate_w_star',
    'check_assumption_B',
    'check_assumption_B_underline_seq',
    'check_asymptotic_ui',
    'check_corollary_conditions',
    'check_ec_majorant',
    'check_pointwise_limit',
    'check_transform_dcoe',
    'check_constructions_coincide',
    'check_cost_lower_semicontinuity',
    'check_equicontinuity',
    'check_lower_semi_equicontinuity',
    'CHECKS',
    'run_suite',
]
