"""
Discounted solvers and average-cost oracles
"""
from solvers.discounted import (
    RelativeValue,
    bellman_operator,
    discounted_value_iteration,
    finite_horizon_value,
    policy_discounted_value,
    q_values,
    relative_value,
)
from solvers.average import (
    average_cost_oracle,
    enumerate_policies,
    is_unichain,
    policy_average_cost,
    recurrent_classes,
    relative_value_iteration,
    stationary_distribution,
)

__all__ = [
    'RelativeValue',
    'bellman_operator',
    'discounted_value_iteration',
    'finite_horizon_value',
    'policy_discounted_value',
    'q_values',
    'relative_value',
    'average_cost_oracle',
    'enumerate_policies',
    'is_unichain',
    'policy_average_cost',
    'recurrent_classes',
    'relative_value_iteration',
    'stationary_distribution',
]
