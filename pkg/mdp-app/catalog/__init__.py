"""
Example models
"""
from catalog.examples import (
    CATALOG,
    build_model,
    constant_cost,
    example_dirichlet,
    example_indicator,
    random_finite,
    split_absorbing,
    zero_cost,
)

__all__ = [
    'CATALOG',
    'build_model',
    'constant_cost',
    'example_dirichlet',
    'example_indicator',
    'random_finite',
    'split_absorbing',
    'zero_cost',
]
