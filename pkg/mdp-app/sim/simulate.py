"""
Monte Carlo evaluation of average cost per unit time and the Tauberian cross-check
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, List, Tuple, Union

import numpy as np

from core.config import MDP_THREADS
from core.errors import ModelError
from core.logger import logger
from core.model import MdpModel, Policy, policy_costs, transition_matrix, validate_policy
from solvers.discounted import policy_discounted_value

if TYPE_CHECKING:
    from vanish.schedule import DiscountSchedule

CHECKPOINTS = 100
TAIL_FRACTION = 0.1
BATCHES = 10


@dataclass(frozen=True, eq=False)
class Trajectory:
    x0: int
    steps: List[Tuple[int, int, float]]
    seed: int
    replication: int = 0

    @property
    def costs(self) -> np.ndarray:
        return np.array([c for _, _, c in self.steps])


@dataclass(eq=False)
class SimulationEstimate:
    x0: int
    horizon: int
    replications: int
    seed: int
    averages: List[float]
    limsup_proxies: List[float]
    mean: float
    std_error: float
    limsup_proxy: float

    def to_dict(self) -> dict:
        return {
            "x0": self.x0,
            "horizon": self.horizon,
            "replications": self.replications,
            "seed": self.seed,
            "averages": self.averages,
            "limsup_proxies": self.limsup_proxies,
            "mean": self.mean,
            "std_error": self.std_error,
            "limsup_proxy": self.limsup_proxy,
        }


@dataclass(eq=False)
class TauberianResult:
    x0: int
    alphas: List[float]
    abel_values: List[float]
    estimate: SimulationEstimate
    tolerance: float
    residual: float
    holds: bool
    details: dict = field(default_factory=dict)


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """PCG64 stream for replication i: SeedSequence(seed, spawn_key=(i,))"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(replication,))))


def _check_run(model: MdpModel, policy: Policy, x0: int, horizon: int):
    validate_policy(model, policy)
    if not 0 <= x0 < model.n_states:
        raise ModelError(f"initial state {x0} is not a valid index")
    if horizon < 1:
        raise ModelError(f"horizon must be at least 1, got {horizon}")


def _run_path(model: MdpModel, policy: Policy, x0: int, horizon: int, seed: int, replication: int):
    P = transition_matrix(model, policy)
    c = policy_costs(model, policy)
    cdf = np.cumsum(P, axis=1)
    draws = replication_rng(seed, replication).random(horizon)
    last = model.n_states - 1
    states = np.empty(horizon, dtype=int)
    x = x0
    for t in range(horizon):
        states[t] = x
        x = min(int(np.searchsorted(cdf[x], draws[t], side="right")), last)
    return states, c[states]


def simulate_trajectory(model: MdpModel, policy: Policy, x0: int, horizon: int, seed: int, replication: int = 0) -> Trajectory:
    _check_run(model, policy, x0, horizon)
    states, costs = _run_path(model, policy, x0, horizon, seed, replication)
    steps = [(int(x), int(policy(int(x))), float(cost)) for x, cost in zip(states, costs)]
    return Trajectory(x0, steps, seed, replication)


def dump_trajectory(trajectory: Trajectory, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["# step state action cost"]
    lines += [f"{t} {x} {a} {cost!r}" for t, (x, a, cost) in enumerate(trajectory.steps)]
    path.write_text("\n".join(lines) + "\n")


def _replication(model: MdpModel, policy: Policy, x0: int, horizon: int, seed: int, replication: int) -> Tuple[float, float, np.ndarray]:
    _, costs = _run_path(model, policy, x0, horizon, seed, replication)
    running = np.cumsum(costs)
    every = max(1, horizon // CHECKPOINTS)
    marks = np.arange(every, horizon + 1, every)
    cesaro = running[marks - 1] / marks
    tail = cesaro[-max(1, int(np.ceil(TAIL_FRACTION * len(cesaro)))):]
    return float(running[-1] / horizon), float(tail.max()), costs


def simulate_average_cost(
    model: MdpModel,
    policy: Policy,
    x0: int,
    horizon: int,
    replications: int = 1,
    seed: int = 0,
    workers: int = MDP_THREADS,
) -> SimulationEstimate:
    """Cesaro averages (1/N) sum of costs over independent replications"""
    _check_run(model, policy, x0, horizon)
    if replications < 1:
        raise ModelError(f"replications must be at least 1, got {replications}")

    def run(i):
        return _replication(model, policy, x0, horizon, seed, i)

    if workers > 1 and replications > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(replications)))
    else:
        results = [run(i) for i in range(replications)]

    averages = [r[0] for r in results]
    proxies = [r[1] for r in results]
    mean = float(np.mean(averages))
    if replications > 1:
        std_error = float(np.std(averages, ddof=1) / np.sqrt(replications))
    else:
        # batch means inside the single path
        costs = results[0][2]
        batches = np.array_split(costs, min(BATCHES, horizon))
        means = np.array([b.mean() for b in batches])
        std_error = float(means.std(ddof=1) / np.sqrt(len(means))) if len(means) > 1 else 0.0

    logger.debug(f"simulated {replications}x{horizon} steps from x0={x0}: mean {mean:.6g} (se {std_error:.2g})")
    return SimulationEstimate(
        x0=x0,
        horizon=horizon,
        replications=replications,
        seed=seed,
        averages=averages,
        limsup_proxies=proxies,
        mean=mean,
        std_error=std_error,
        limsup_proxy=float(np.mean(proxies)),
    )


def tauberian_check(
    model: MdpModel,
    policy: Policy,
    x0: int,
    schedule: "DiscountSchedule",
    horizon: int,
    replications: int = 4,
    seed: int = 0,
    workers: int = MDP_THREADS,
) -> TauberianResult:
    """(1 - alpha_n) v_{alpha_n}^phi(x0) <= simulated w^phi(x0) + 3 se + 1e-6 over the tail window"""
    estimate = simulate_average_cost(model, policy, x0, horizon, replications, seed, workers)
    alphas = [schedule.values[n] for n in schedule.tail_indices()]
    abel = [float((1 - a) * policy_discounted_value(model, policy, a)[x0]) for a in alphas]
    tolerance = 3 * estimate.std_error + 1e-6
    residual = max(abel) - estimate.mean
    return TauberianResult(
        x0=x0,
        alphas=alphas,
        abel_values=abel,
        estimate=estimate,
        tolerance=tolerance,
        residual=residual,
        holds=residual <= tolerance,
    )
