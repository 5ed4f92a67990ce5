"""
Average-cost oracles for finite models: stationary laws, policy enumeration,
relative value iteration
"""
import itertools
from typing import Iterator, List, Tuple

import numpy as np
from scipy import linalg
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from core.config import MDP_MAX_ITERATIONS, MDP_SOLVER_TOL
from core.errors import ModelError, SolverError
from core.logger import logger
from core.model import MdpModel, Policy, effective_action_set, policy_costs, transition_matrix, validate_policy
from solvers.discounted import bellman_operator

# Gains closer than this are treated as ties by the enumeration oracle
TIE_TOL = 1e-12


def recurrent_classes(P: np.ndarray) -> List[Tuple[int, ...]]:
    """Closed strongly connected components of the chain P"""
    n_comp, labels = connected_components(csr_matrix(P > 0), directed=True, connection="strong")
    classes = []
    for k in range(n_comp):
        members = np.flatnonzero(labels == k)
        outside = np.setdiff1d(np.arange(P.shape[0]), members)
        if not (P[np.ix_(members, outside)] > 0).any():
            classes.append(tuple(int(s) for s in members))
    return sorted(classes)


def is_unichain(P: np.ndarray) -> bool:
    return len(recurrent_classes(P)) == 1


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Unique pi with pi P = pi, sum(pi) = 1, for a unichain P"""
    n = P.shape[0]
    if not is_unichain(P):
        raise ModelError("stationary distribution requested for a chain with several recurrent classes")
    system = np.vstack([P.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    pi, *_ = linalg.lstsq(system, rhs)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def policy_average_cost(model: MdpModel, policy: Policy) -> Tuple[float, np.ndarray]:
    """(gain, bias) of a unichain policy; bias solves g + h = c_phi + P_phi h with min h = 0"""
    validate_policy(model, policy)
    P = transition_matrix(model, policy)
    c = policy_costs(model, policy)
    pi = stationary_distribution(P)
    gain = float(pi @ c)

    n = model.n_states
    anchor = recurrent_classes(P)[0][0]
    pin = np.zeros((1, n))
    pin[0, anchor] = 1.0
    system = np.vstack([np.eye(n) - P, pin])
    rhs = np.concatenate([c - gain, [0.0]])
    bias, *_ = linalg.lstsq(system, rhs)
    return gain, bias - bias.min()


def enumerate_policies(model: MdpModel) -> Iterator[Policy]:
    """All deterministic stationary policies in lexicographic order"""
    choices = [effective_action_set(model, x) for x in range(model.n_states)]
    for combo in itertools.product(*choices):
        yield Policy(tuple(combo))


def average_cost_oracle(model: MdpModel) -> Tuple[float, Policy, np.ndarray]:
    """(w*, optimal policy, its bias) by exhaustive enumeration over unichain policies"""
    best = None
    for policy in enumerate_policies(model):
        P = transition_matrix(model, policy)
        if not is_unichain(P):
            continue
        gain, bias = policy_average_cost(model, policy)
        if best is None or gain < best[0] - TIE_TOL:
            best = (gain, policy, bias)
    if best is None:
        raise ModelError(f"model {model.name!r} has no unichain deterministic policy")
    return best


def relative_value_iteration(
    model: MdpModel,
    tol: float = MDP_SOLVER_TOL,
    max_iterations: int = MDP_MAX_ITERATIONS,
) -> Tuple[float, np.ndarray]:
    """(w*, u) for aperiodic unichain models; u is normalized to min 0"""
    h = np.zeros(model.n_states)
    for k in range(1, max_iterations + 1):
        y = bellman_operator(model, h, 1.0)
        d = y - h
        lo, hi = float(d.min()), float(d.max())
        h = y - y.min()
        if hi - lo <= tol:
            logger.debug(f"relative value iteration converged in {k} iterations")
            return (lo + hi) / 2, h
    raise SolverError(
        f"relative value iteration did not converge within {max_iterations} iterations (span {hi - lo:.3g})",
        alpha=1.0,
        residual=hi - lo,
    )
