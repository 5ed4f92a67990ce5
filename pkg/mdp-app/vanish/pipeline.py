"""
End-to-end vanishing-discount run: trace, limit construction, A*(x),
extraction, bounds and w* estimate
"""
from typing import Optional, Sequence, Tuple

import numpy as np

from core.config import MDP_SOLVER_TOL, MDP_THREADS
from core.errors import ModelError
from core.logger import logger
from core.model import MdpModel, Policy
from vanish.diagnostics import (
    POINTWISE,
    WEAK,
    VanishDiagnostics,
    default_radius_schedule,
    estimate_w_bounds,
    limit_relative_value_pointwise,
    limit_relative_value_weak,
    sequence_diagnostics,
)
from vanish.policy import default_astar_tol, extract_policy, optimal_action_set
from vanish.schedule import DiscountSchedule
from verify.optimality import estimate_w_star


def vanish_pipeline(
    model: MdpModel,
    schedule: DiscountSchedule,
    construction: str = POINTWISE,
    tol: float = MDP_SOLVER_TOL,
    astar_tol: Optional[float] = None,
    use_lower: bool = False,
    refine: bool = False,
    radius_floor: Optional[float] = None,
    radius_schedule: Optional[Sequence[float]] = None,
    workers: int = MDP_THREADS,
    seed: int = 0,
) -> Tuple[VanishDiagnostics, Optional[Policy]]:
    """Returns the diagnostics and the extracted policy (None when some A*(x) is empty)"""
    if construction not in (POINTWISE, WEAK):
        raise ModelError(f"unknown construction {construction!r} (expected {POINTWISE} or {WEAK})")

    diag = sequence_diagnostics(model, schedule, tol, workers)

    if construction == WEAK:
        radii = radius_schedule or default_radius_schedule(model, radius_floor)
        diag.u, diag.U_m, diag.u_lower_m = limit_relative_value_weak(diag, model, radii)
    else:
        diag.u = limit_relative_value_pointwise(diag)
    diag.construction = construction

    w_ref = diag.w_lower_seq if use_lower else diag.w_upper_seq
    if astar_tol is None:
        # Along a truncated schedule the discounted argmin meets the inequality
        # only up to (1 - alpha_n) * sum_y u q
        u_max = float(np.max(diag.u.values))
        astar_tol = default_astar_tol(diag.u.values, w_ref) + (1 - schedule.values[diag.tail_start]) * u_max
    a_star = optimal_action_set(model, diag.u, w_ref, astar_tol)
    diag.a_star = list(a_star.sets)
    diag.astar_tol = astar_tol
    diag.empty_states = list(a_star.empty_states)

    if refine:
        diag.w_lower, diag.w_upper = estimate_w_bounds(model, tol=tol, workers=workers, base=schedule)

    policy = None
    if diag.empty_states:
        logger.warning(f"⚠️ A*(x) empty at states {diag.empty_states} (tol {astar_tol:.3g}); no policy extracted")
    else:
        policy = extract_policy(a_star)
        diag.w_star_estimate, diag.w_star_method = estimate_w_star(model, policy, seed=seed)
        logger.info(f"✅ Extracted policy {list(policy.action_of)}; w* estimate {diag.w_star_estimate:.10g} ({diag.w_star_method})")
    return diag, policy
