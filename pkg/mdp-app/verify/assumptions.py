"""
Assumptions on the relative-value family: boundedness, majorants,
asymptotic uniform integrability, tail convergence
"""
from typing import List, Optional, Sequence

import numpy as np

from core.config import MDP_SOLVER_TOL
from core.model import MdpModel
from verify.optimality import check_acoe, check_wacoi
from verify.report import EVIDENCE, EXACT, FAIL, PASS, RESIDUAL, Check
from vanish.diagnostics import VanishDiagnostics, sequence_diagnostics
from vanish.schedule import DiscountSchedule

# Tail growth exponents above this count as unbounded growth
GROWTH_SLOPE = 0.1


def _growth_slopes(diag: VanishDiagnostics) -> np.ndarray:
    """Least-squares slope of log(1 + u_{alpha_n}(x)) against log 1/(1 - alpha_n) on the tail"""
    tail = diag.tail_family
    if tail.shape[0] < 2:
        return np.zeros(tail.shape[1])
    t = np.log(1 / (1 - diag.alphas[diag.tail_start:]))
    slope, _ = np.polyfit(t, np.log1p(tail), 1)
    return slope


def check_assumption_B(model: MdpModel, schedule: Optional[DiscountSchedule] = None, diag: Optional[VanishDiagnostics] = None) -> Check:
    """Evidence for sup_alpha u_alpha(x) < inf: per-state max along the schedule and tail growth"""
    if diag is None:
        diag = sequence_diagnostics(model, schedule)
    family = diag.family
    max_u = family.max(axis=0)
    slopes = _growth_slopes(diag)
    growing = [int(x) for x in np.flatnonzero(slopes > GROWTH_SLOPE)]
    w_star = diag.w_star_estimate if diag.w_star_estimate is not None else diag.w_upper_seq
    b_i = bool(np.isfinite(w_star))
    holds = b_i and not growing and bool(np.isfinite(max_u).all())
    return Check(
        "assumption_b", EVIDENCE, float(slopes.max()), GROWTH_SLOPE, PASS if holds else FAIL,
        notes=(f"max_n u = {max_u.max():.6g}; growing states {growing or 'none'}; "
               f"B(i) via w* = {w_star:.6g}; evidence on {diag.schedule.spec()}"),
        details={"max_u": max_u, "growth_slope": slopes, "growing_states": growing, "w_star_finite": b_i},
    )


def check_assumption_B_underline_seq(diag: VanishDiagnostics) -> Check:
    """Evidence for liminf_n u_{alpha_n}(x) < inf: tail-window minimum per state"""
    tail_min = diag.tail_family.min(axis=0)
    slopes = _growth_slopes(diag)
    growing = [int(x) for x in np.flatnonzero(slopes > GROWTH_SLOPE)]
    holds = bool(np.isfinite(tail_min).all()) and not growing
    return Check(
        "assumption_b_seq", EVIDENCE, float(slopes.max()), GROWTH_SLOPE, PASS if holds else FAIL,
        notes=f"tail min of u up to {tail_min.max():.6g}; growing states {growing or 'none'}",
        details={"tail_min_u": tail_min, "growth_slope": slopes, "growing_states": growing},
    )


def check_ec_majorant(family: np.ndarray, model: MdpModel, U_majorant: Sequence[float]) -> Check:
    """U >= u_{alpha_n} for every n, and U finite wherever a kernel row puts mass"""
    family = np.atleast_2d(np.asarray(family, dtype=float))
    U = np.asarray(U_majorant, dtype=float)
    excess = family - U[None, :]
    n, x = np.unravel_index(int(np.argmax(excess)), excess.shape)
    residual = float(max(excess[n, x], 0.0))
    support = model.kernel.reshape(-1, model.n_states).sum(axis=0) > 0
    infinite_on_support = [int(y) for y in np.flatnonzero(support & ~np.isfinite(U))]
    verdict = PASS if residual <= 0 and not infinite_on_support else FAIL
    notes = f"witness (n={n}, x={x})" if residual > 0 else "U dominates the family"
    if infinite_on_support:
        notes += f"; U infinite on kernel support at {infinite_on_support}"
    return Check(
        "ec_majorant", EXACT, residual, 0.0, verdict, notes,
        details={"witness": [int(n), int(x)], "infinite_on_support": infinite_on_support},
    )


def check_asymptotic_ui(family: np.ndarray, model: MdpModel, K_list: Sequence[float], tol: float = 0.0) -> Check:
    """T(K) = max over (x,a) and the family of sum_y u(y) [u(y) >= K] q(y|x,a); T must reach tol by the last K"""
    family = np.atleast_2d(np.asarray(family, dtype=float))
    K_list = [float(K) for K in K_list]
    if any(b <= a for a, b in zip(K_list, K_list[1:])):
        return Check("asymptotic_ui", EVIDENCE, None, tol, FAIL, "K_list must be increasing")
    rows = model.kernel[model.admissible]
    T = []
    for K in K_list:
        truncated = np.where(family >= K, family, 0.0)
        T.append(float((truncated @ rows.T).max()))
    last = T[-1]
    return Check(
        "asymptotic_ui", EVIDENCE, last, tol, PASS if last <= tol else FAIL,
        notes=f"T(K) for K in {K_list}: {[f'{t:.3g}' for t in T]}",
        details={"K": K_list, "T": T},
    )


def check_pointwise_limit(family: np.ndarray, tol: float = 1e-6) -> Check:
    """Tail oscillation max_n u - min_n u per state"""
    family = np.atleast_2d(np.asarray(family, dtype=float))
    oscillation = family.max(axis=0) - family.min(axis=0)
    worst = int(np.argmax(oscillation))
    return Check(
        "pointwise_limit", EVIDENCE, float(oscillation[worst]), tol,
        PASS if oscillation[worst] <= tol else FAIL,
        notes=f"largest tail oscillation at state {worst}",
        details={"oscillation": oscillation},
    )


def check_corollary_conditions(model: MdpModel, diag: VanishDiagnostics, mode: str, tol: float, policy=None) -> List[Check]:
    """Convergence of (1 - alpha_n) m_{alpha_n} on the tail; on success the
    inequality (acoi_3_4) or equation (acoe_3_7) is rerun with w_lower_seq"""
    gains = diag.gains[diag.tail_start:]
    oscillation = float(gains.max() - gains.min())
    name = "corollary_3_4" if mode == "acoi_3_4" else "corollary_3_7"
    converged = Check(
        f"{name}:convergence", EVIDENCE, oscillation, tol, PASS if oscillation <= tol else FAIL,
        notes=f"tail oscillation of (1-a_n) m_a_n; w_lower_seq={diag.w_lower_seq:.12g}, w_upper_seq={diag.w_upper_seq:.12g}",
        details={"tail_gains": gains},
    )
    checks = [converged]
    if converged.failed:
        return checks
    if diag.u is None:
        checks.append(Check.skipped(f"{name}:rerun", RESIDUAL, "no limit relative value in diagnostics"))
    elif mode == "acoi_3_4":
        if policy is None:
            _, policy = check_acoe(model, diag.u, diag.w_lower_seq, tol)
        checks.append(check_wacoi(model, policy, diag.u, diag.w_lower_seq, tol, name=f"{name}:acoi"))
    else:
        acoe, _ = check_acoe(model, diag.u, diag.w_lower_seq, tol, name=f"{name}:acoe")
        checks.append(acoe)
    return checks


def check_transform_dcoe(model: MdpModel, diag: VanishDiagnostics, tol: float = 10 * MDP_SOLVER_TOL) -> Check:
    """(1 - alpha_n) m_{alpha_n} + u_{alpha_n}(x) <= c(x,a) + sum_y u_{alpha_n}(y) q(y|x,a) on the tail"""
    worst, worst_n = -np.inf, diag.tail_start
    for record in diag.trace[diag.tail_start:]:
        gap = record.gain + record.u[:, None] - model.cost - model.kernel @ record.u
        value = float(gap[model.admissible].max())
        if value > worst:
            worst, worst_n = value, record.index
    return Check.from_residual(
        "transform_dcoe", worst, tol,
        notes=f"worst tail index {worst_n}",
        details={"worst_index": worst_n},
    )
