"""
Monte Carlo simulation of stationary policies
"""
from sim.simulate import (
    SimulationEstimate,
    TauberianResult,
    Trajectory,
    dump_trajectory,
    simulate_average_cost,
    simulate_trajectory,
    tauberian_check,
)

__all__ = [
    'SimulationEstimate',
    'TauberianResult',
    'Trajectory',
    'dump_trajectory',
    'simulate_average_cost',
    'simulate_trajectory',
    'tauberian_check',
]
