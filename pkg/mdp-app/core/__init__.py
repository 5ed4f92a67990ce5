"""
Model layer: data types, validation, documents
"""
from core.model import (
    MdpModel,
    Policy,
    StateRecord,
    ValueFunction,
    ball,
    effective_action_set,
    policy_costs,
    transition_matrix,
    validate_policy,
)
from core.validation import ValidationReport, validate_model
from core.io import load_model, save_model, load_policy, save_policy

__all__ = [
    'MdpModel',
    'Policy',
    'StateRecord',
    'ValueFunction',
    'ball',
    'effective_action_set',
    'policy_costs',
    'transition_matrix',
    'validate_policy',
    'ValidationReport',
    'validate_model',
    'load_model',
    'save_model',
    'load_policy',
    'save_policy',
]
