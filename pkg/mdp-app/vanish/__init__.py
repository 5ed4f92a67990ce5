"""
Vanishing-discount limit objects and policy extraction
"""
from vanish.schedule import DiscountSchedule
from vanish.diagnostics import (
    POINTWISE,
    WEAK,
    TraceRecord,
    VanishDiagnostics,
    default_radius_schedule,
    estimate_w_bounds,
    limit_relative_value_pointwise,
    limit_relative_value_weak,
    load_diagnostics,
    lsc_envelope,
    save_diagnostics,
    sequence_diagnostics,
)
from vanish.policy import ActionSets, extract_policy, optimal_action_set
# Imported last: the pipeline depends on verify, which reads vanish submodules
from vanish.pipeline import vanish_pipeline

__all__ = [
    'DiscountSchedule',
    'POINTWISE',
    'WEAK',
    'TraceRecord',
    'VanishDiagnostics',
    'default_radius_schedule',
    'estimate_w_bounds',
    'limit_relative_value_pointwise',
    'limit_relative_value_weak',
    'load_diagnostics',
    'lsc_envelope',
    'save_diagnostics',
    'sequence_diagnostics',
    'ActionSets',
    'extract_policy',
    'optimal_action_set',
    'vanish_pipeline',
]
