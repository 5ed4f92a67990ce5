"""
Optimality inequalities and equations, the bound chain, and conclusions
about the extracted policy
"""
from typing import TYPE_CHECKING, List, Optional, Tuple, Union

import numpy as np

from core.logger import logger
from core.model import MdpModel, Policy, ValueFunction, policy_costs, transition_matrix, validate_policy
from sim.simulate import simulate_average_cost
from solvers.average import is_unichain, stationary_distribution
from solvers.discounted import greedy_policy, q_values
from verify.report import EVIDENCE, EXACT, FAIL, PASS, RESIDUAL, Check

if TYPE_CHECKING:
    from vanish.diagnostics import VanishDiagnostics

CHAIN_SLACK = 1e-9
SAMPLED_STATES = 20


def _values(u: Union[ValueFunction, np.ndarray]) -> np.ndarray:
    return np.asarray(u.values if isinstance(u, ValueFunction) else u, dtype=float)


def check_wacoi(model: MdpModel, policy: Policy, u, w_ref: float, tol: float, name: str = "wacoi") -> Check:
    """max_x [c(x,phi(x)) + sum_y u(y) q(y|x,phi(x)) - w_ref - u(x)] <= tol"""
    validate_policy(model, policy)
    u = _values(u)
    per_state = policy_costs(model, policy) + transition_matrix(model, policy) @ u - w_ref - u
    worst = int(np.argmax(per_state))
    return Check.from_residual(
        name,
        float(per_state[worst]),
        tol,
        notes=f"w_ref={w_ref:.10g}",
        details={"per_state": per_state, "worst_state": worst, "w_ref": w_ref},
    )


def check_acoe(model: MdpModel, u, w_ref: float, tol: float, name: str = "acoe") -> Tuple[Check, Policy]:
    """max_x |w_ref + u(x) - min_a [c(x,a) + sum_y u(y) q(y|x,a)]| and the argmin policy"""
    u = _values(u)
    q = q_values(model, u, 1.0)
    per_state = np.abs(w_ref + u - q.min(axis=1))
    worst = int(np.argmax(per_state))
    check = Check.from_residual(
        name,
        float(per_state[worst]),
        tol,
        notes=f"w_ref={w_ref:.10g}",
        details={"per_state": per_state, "worst_state": worst, "w_ref": w_ref},
    )
    return check, greedy_policy(model, u, 1.0)


def estimate_w_star(
    model: MdpModel,
    policy: Policy,
    seed: int = 0,
    horizon: int = 20000,
    replications: int = 4,
) -> Tuple[float, str]:
    """Average cost of `policy`, minimized over initial states.

    Exact stationary average when the induced chain is unichain, a
    simulated Cesaro average from every state otherwise.
    """
    P = transition_matrix(model, policy)
    c = policy_costs(model, policy)
    if is_unichain(P):
        return float(stationary_distribution(P) @ c), "stationary"
    logger.debug(f"policy chain on {model.name!r} is not unichain; simulating from every state")
    means = [
        simulate_average_cost(model, policy, x0, horizon, replications, seed).mean
        for x0 in range(model.n_states)
    ]
    return float(min(means)), "simulation"


def check_chain(diag: "VanishDiagnostics", w_star_estimate: Optional[float] = None, slack: float = CHAIN_SLACK) -> List[Check]:
    """0 <= w_lower <= w_lower_seq <= w_upper_seq <= w_upper <= w* < inf, link by link"""
    w_star = diag.w_star_estimate if w_star_estimate is None else w_star_estimate
    chain = [("0", 0.0), ("w_lower", diag.w_lower), ("w_lower_seq", diag.w_lower_seq),
             ("w_upper_seq", diag.w_upper_seq), ("w_upper", diag.w_upper), ("w_star", w_star)]

    checks = []
    present = [(label, value) for label, value in chain if value is not None]
    for label, value in chain:
        if value is None:
            checks.append(Check.skipped(
                f"chain:{label}", RESIDUAL,
                f"{label} not estimated; its neighbours are compared directly",
            ))
    for (left, a), (right, b) in zip(present, present[1:]):
        checks.append(Check.from_residual(
            f"chain:{left}<={right}", a - b, slack,
            notes=f"{a:.12g} <= {b:.12g}",
        ))
    if w_star is not None:
        finite = bool(np.isfinite(w_star))
        checks.append(Check("chain:w_star<inf", EXACT, None, 0.0, PASS if finite else FAIL, f"w*={w_star:.12g}"))
    return checks


def check_theorem1_conclusions(
    model: MdpModel,
    policy: Policy,
    u,
    diag: "VanishDiagnostics",
    N_max: int = 100,
    tol: float = 1e-7,
) -> List[Check]:
    """Iterated bound v^phi_{n,1} <= n w_upper_seq + u and tail evidence for (1 - alpha_n) v_{alpha_n} -> w*"""
    u = _values(u)
    w_bar = diag.w_upper_seq
    wacoi = check_wacoi(model, policy, u, w_bar, tol)
    slack = max(wacoi.residual, 0.0)

    V = np.zeros(model.n_states)
    P = transition_matrix(model, policy)
    c = policy_costs(model, policy)
    worst, worst_at = -np.inf, (0, 0)
    for n in range(1, N_max + 1):
        V = c + P @ V
        excess = V - n * w_bar - u
        x = int(np.argmax(excess))
        if excess[x] > worst:
            worst, worst_at = float(excess[x]), (n, x)
    bound = Check.from_residual(
        "theorem1:bound",
        worst,
        tol + N_max * slack,
        notes=f"N <= {N_max}; allowance includes N times the WACOI residual {slack:.2e}",
        details={"worst_n": worst_at[0], "worst_state": worst_at[1]},
    )

    checks = [bound]
    w_star = diag.w_star_estimate
    if w_star is None:
        checks.append(Check.skipped("theorem1:equality", EVIDENCE, "no w* estimate available"))
        return checks
    states = np.unique(np.linspace(0, model.n_states - 1, min(SAMPLED_STATES, model.n_states)).astype(int))
    tail = range(diag.tail_start, len(diag.trace))
    gaps = np.array([
        np.abs(diag.trace[n].gain + (1 - diag.trace[n].alpha) * diag.trace[n].u[states] - w_star)
        for n in tail
    ])
    first, last = float(gaps[0].max()), float(gaps[-1].max())
    holds = last <= max(first, 1e-5)
    checks.append(Check(
        "theorem1:equality", EVIDENCE, last, max(first, 1e-5), PASS if holds else FAIL,
        notes=f"|(1-a_n) v_a_n(x) - w*| over the tail window at {len(states)} sampled states",
        details={"states": states, "gaps": gaps.max(axis=1)},
    ))
    return checks

