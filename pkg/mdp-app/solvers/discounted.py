"""
Finite-horizon and discounted solvers producing (m_alpha, u_alpha)
"""
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy import linalg

from core.config import MDP_ITERATION_MARGIN, MDP_MAX_ITERATIONS, MDP_SOLVER_TOL
from core.errors import ModelError, SolverError
from core.logger import logger
from core.model import MdpModel, Policy, ValueFunction, policy_costs, transition_matrix, validate_policy

OPTIMAL = "optimal"

# Stopping thresholds are never set below this many ulps of the iterate scale
_FLOOR_ULPS = 64


@dataclass(frozen=True, eq=False)
class RelativeValue:
    """v_alpha split as u_alpha + m_alpha; `gain` is (1 - alpha) m_alpha computed directly"""
    alpha: float
    v: ValueFunction
    m: float
    u: ValueFunction
    gain: float
    iterations: int = 0
    residual: float = 0.0


def q_values(model: MdpModel, v: np.ndarray, alpha: float) -> np.ndarray:
    """Q(x,a) = c(x,a) + alpha * sum_y v(y) q(y|x,a); +inf outside A(x)"""
    return model.cost + alpha * (model.kernel @ v)


def bellman_operator(model: MdpModel, v: np.ndarray, alpha: float) -> np.ndarray:
    return q_values(model, v, alpha).min(axis=1)


def greedy_policy(model: MdpModel, v: np.ndarray, alpha: float) -> Policy:
    """Argmin selector; np.argmin keeps the lowest action index on ties"""
    return Policy(tuple(int(a) for a in q_values(model, v, alpha).argmin(axis=1)))


def delta_coefficient(model: MdpModel) -> float:
    """Kernel ergodicity coefficient, cached on the model"""
    return model.delta_coefficient


def iteration_cap(model: MdpModel, beta: float, threshold: float) -> int:
    spread = model.cost_range
    if beta == 0 or spread == 0 or threshold >= spread:
        return MDP_ITERATION_MARGIN
    cap = math.ceil(math.log(threshold / spread) / math.log(beta)) + MDP_ITERATION_MARGIN
    return min(cap, MDP_MAX_ITERATIONS)


def _check_alpha(alpha: float, upper_inclusive: bool = False):
    ok = 0 <= alpha <= 1 if upper_inclusive else 0 <= alpha < 1
    if not ok:
        raise ModelError(f"discount factor {alpha} outside {'[0,1]' if upper_inclusive else '[0,1)'}")


def _solve_relative(model: MdpModel, alpha: float, tol: float) -> Tuple[np.ndarray, float, int, float]:
    """Value iteration in normalized coordinates u_k = v_k - min v_k.

    Started from v_0 = c_min / (1 - alpha) (so u_0 = 0). T(u + s) = Tu + alpha s,
    hence normalizing every iterate is exact value iteration up to constants.
    Stops on span(T u - u) <= tol (1 - beta) / beta with beta = alpha * tau,
    which bounds ||u - u_alpha||_inf by tol.
    """
    _check_alpha(alpha)
    if not tol > 0:
        raise ModelError(f"solver tolerance must be positive, got {tol}")

    beta = alpha * delta_coefficient(model)
    threshold = math.inf if beta == 0 else tol * (1 - beta) / beta
    cap = iteration_cap(model, beta, threshold)

    u = np.zeros(model.n_states)
    span = math.inf
    for k in range(1, cap + 1):
        y = bellman_operator(model, u, alpha)
        d = y - u
        span = float(d.max() - d.min())
        u = y - y.min()
        floor = _FLOOR_ULPS * np.finfo(float).eps * max(1.0, float(np.abs(y).max()))
        if span <= max(threshold, floor):
            if floor > threshold:
                logger.warning(f"alpha={alpha}: stopping threshold floored at {floor:.3g}")
            break
    else:
        raise SolverError(
            f"value iteration did not converge for alpha={alpha} within {cap} iterations "
            f"(last span residual {span:.3g})",
            alpha=alpha,
            residual=span,
        )

    gain = float(bellman_operator(model, u, alpha).min())
    logger.debug(f"alpha={alpha}: converged in {k} iterations (span residual {span:.3g})")
    return u, gain, k, span


def relative_value(model: MdpModel, alpha: float, tol: float = MDP_SOLVER_TOL) -> RelativeValue:
    """m_alpha = min_x v_alpha(x) and u_alpha = v_alpha - m_alpha"""
    u, gain, iterations, residual = _solve_relative(model, alpha, tol)
    m = gain / (1 - alpha)
    params = {"alpha": alpha, "tol": tol}
    return RelativeValue(
        alpha=alpha,
        v=ValueFunction(u + m, "v_alpha", params),
        m=m,
        u=ValueFunction(u, "u_alpha", params),
        gain=gain,
        iterations=iterations,
        residual=residual,
    )


def discounted_value_iteration(model: MdpModel, alpha: float, tol: float = MDP_SOLVER_TOL) -> ValueFunction:
    """Optimal infinite-horizon discounted cost v_alpha"""
    return relative_value(model, alpha, tol).v


def policy_discounted_value(model: MdpModel, policy: Policy, alpha: float) -> ValueFunction:
    """Solve v = c_phi + alpha P_phi v directly"""
    _check_alpha(alpha)
    validate_policy(model, policy)
    P = transition_matrix(model, policy)
    c = policy_costs(model, policy)
    v = linalg.solve(np.eye(model.n_states) - alpha * P, c)
    return ValueFunction(v, "v_alpha_policy", {"alpha": alpha, "policy": list(policy.action_of)})


def finite_horizon_value(
    model: MdpModel,
    policy: Union[Policy, str],
    N: int,
    alpha: float,
) -> ValueFunction:
    """v_{N,alpha} by backward induction over N stages"""
    if N < 1:
        raise ModelError(f"horizon must be a positive integer, got {N}")
    _check_alpha(alpha, upper_inclusive=True)
    optimal = isinstance(policy, str)
    if optimal and policy != OPTIMAL:
        raise ModelError(f"unknown policy selector {policy!r}")
    if not optimal:
        validate_policy(model, policy)
        P = transition_matrix(model, policy)
        c = policy_costs(model, policy)

    v = np.zeros(model.n_states)
    for _ in range(N):
        v = bellman_operator(model, v, alpha) if optimal else c + alpha * (P @ v)
    return ValueFunction(v, "v_N_alpha", {"N": N, "alpha": alpha, "policy": OPTIMAL if optimal else list(policy.action_of)})
