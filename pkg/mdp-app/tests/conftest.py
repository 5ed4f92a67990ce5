"""
Shared fixtures and brute-force oracles
"""
import itertools

import numpy as np
import pytest
from scipy import linalg

from catalog.examples import example_dirichlet, example_indicator, random_finite
from core.model import MdpModel, StateRecord, effective_action_set
from vanish.diagnostics import TraceRecord, VanishDiagnostics
from vanish.schedule import DiscountSchedule


# ----------------------------------------------------------------------------
# Oracles
# ----------------------------------------------------------------------------
def path_enumeration_value(model: MdpModel, x: int, N: int, alpha: float, policy=None) -> float:
    """Expected N-stage discounted cost by expanding every history (min over actions when policy is None)"""
    if N == 0:
        return 0.0
    actions = effective_action_set(model, x) if policy is None else (policy(x),)
    best = np.inf
    for a in actions:
        total = model.cost[x, a]
        for y in range(model.n_states):
            p = model.kernel[x, a, y]
            if p > 0:
                total += alpha * p * path_enumeration_value(model, y, N - 1, alpha, policy)
        best = min(best, total)
    return best


def policy_enumeration_discounted(model: MdpModel, alpha: float) -> np.ndarray:
    """min over deterministic stationary policies of (I - alpha P_phi)^-1 c_phi"""
    n = model.n_states
    best = np.full(n, np.inf)
    for combo in itertools.product(*[effective_action_set(model, x) for x in range(n)]):
        idx = np.arange(n), np.array(combo)
        v = linalg.solve(np.eye(n) - alpha * model.kernel[idx], model.cost[idx])
        best = np.minimum(best, v)
    return best


def stationary_average(P: np.ndarray, c: np.ndarray) -> float:
    """Stationary law by eigen-decomposition (independent of the library's linear solve)"""
    values, vectors = np.linalg.eig(P.T)
    pi = np.real(vectors[:, np.argmin(np.abs(values - 1))])
    pi = pi / pi.sum()
    return float(pi @ c)


def make_diag(family, alphas=None, window=None) -> VanishDiagnostics:
    """Diagnostics from a hand-made family u_{alpha_n} (rows n)"""
    family = np.atleast_2d(np.asarray(family, dtype=float))
    n = family.shape[0]
    if alphas is None:
        alphas = [1 - 0.5 ** (k + 1) for k in range(n)]
    schedule = DiscountSchedule.from_list(alphas, window=window)
    trace = [TraceRecord(k, alphas[k], 0.0, 0.0, family[k]) for k in range(n)]
    return VanishDiagnostics(schedule, trace, 0.0, 0.0, model_name="hand-made")


def grid_model(n_states: int, cost=None) -> MdpModel:
    """Single-action self-loop model on a uniform grid of [0,1]"""
    coords = np.linspace(0.0, 1.0, n_states)
    cost = np.zeros(n_states) if cost is None else np.asarray(cost, dtype=float)
    return MdpModel(
        states=tuple(StateRecord(i, (float(coords[i]),)) for i in range(n_states)),
        actions=("a1",),
        cost=cost.reshape(n_states, 1),
        kernel=np.eye(n_states).reshape(n_states, 1, n_states),
        name=f"grid-{n_states}",
    )


# ----------------------------------------------------------------------------
# Fixtures
# ----------------------------------------------------------------------------
@pytest.fixture
def indicator():
    return example_indicator(101)


@pytest.fixture
def dirichlet():
    return example_dirichlet(10)


@pytest.fixture
def two_state():
    """2-state, 2-action unichain model with a closed-form oracle"""
    cost = np.array([[1.0, 0.4], [0.0, 2.0]])
    kernel = np.array([
        [[0.3, 0.7], [0.9, 0.1]],
        [[0.6, 0.4], [0.5, 0.5]],
    ])
    return MdpModel(
        states=(StateRecord(0, (0.0,)), StateRecord(1, (1.0,))),
        actions=("a1", "a2"),
        cost=cost,
        kernel=kernel,
        name="two-state",
    )


@pytest.fixture
def small_random():
    return random_finite(4, 3, seed=7)
