"""
Named verification suite over a model and its vanishing-discount diagnostics
"""
import math
from typing import Optional, Sequence

import numpy as np

from core.errors import ModelError
from core.logger import logger
from core.model import MdpModel, Policy
from vanish.diagnostics import VanishDiagnostics, limit_relative_value_pointwise
from vanish.policy import default_astar_tol, extract_policy
from verify.assumptions import (
    check_assumption_B,
    check_assumption_B_underline_seq,
    check_asymptotic_ui,
    check_corollary_conditions,
    check_ec_majorant,
    check_pointwise_limit,
    check_transform_dcoe,
)
from verify.continuity import (
    DEFAULT_EPS,
    check_constructions_coincide,
    check_cost_lower_semicontinuity,
    check_equicontinuity,
    check_lower_semi_equicontinuity,
)
from verify.optimality import check_acoe, check_chain, check_theorem1_conclusions, check_wacoi, estimate_w_star
from verify.report import VerificationReport

CHECKS = (
    "wacoi", "acoi", "acoe", "chain", "theorem1",
    "assumption_b", "assumption_b_seq", "lsec", "equicontinuity",
    "ec_majorant", "asymptotic_ui", "pointwise_limit",
    "corollary_3_4", "corollary_3_7", "transform_dcoe",
    "constructions", "cost_lsc",
)


def default_k_list(family: np.ndarray) -> list:
    """Powers of two up to twice the largest value in the family"""
    top = float(np.max(family)) if family.size else 0.0
    return [2.0 ** k for k in range(int(math.ceil(math.log2(top + 1))) + 2)]


def suite_tolerance(diag: VanishDiagnostics, u: np.ndarray) -> float:
    """Same truncation-aware tolerance the pipeline uses for A*(x)"""
    if diag.astar_tol is not None:
        return diag.astar_tol
    return default_astar_tol(u, diag.w_upper_seq) + (1 - diag.schedule.values[diag.tail_start]) * float(np.max(u))


def run_suite(
    model: MdpModel,
    diag: VanishDiagnostics,
    checks: Optional[Sequence[str]] = None,
    tol: Optional[float] = None,
    policy: Optional[Policy] = None,
    eps_list: Sequence[float] = DEFAULT_EPS,
    K_list: Optional[Sequence[float]] = None,
    U_majorant: Optional[Sequence[float]] = None,
    N_max: int = 100,
    seed: int = 0,
) -> VerificationReport:
    names = list(CHECKS if checks is None else checks)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ModelError(f"unknown checks {unknown}; available: {', '.join(CHECKS)}")

    u = diag.u.values if diag.u is not None else limit_relative_value_pointwise(diag).values
    tol = suite_tolerance(diag, u) if tol is None else tol

    if policy is None:
        if diag.a_star is not None and not diag.empty_states:
            policy = extract_policy(diag.a_star)
        else:
            _, policy = check_acoe(model, u, diag.w_upper_seq, tol)
    if diag.w_star_estimate is None:
        diag.w_star_estimate, diag.w_star_method = estimate_w_star(model, policy, seed=seed)

    report = VerificationReport(model_name=model.name)
    for name in names:
        logger.debug(f"running check {name}")
        if name == "wacoi":
            report.add(check_wacoi(model, policy, u, diag.w_upper_seq, tol))
        elif name == "acoi":
            w_lower = diag.w_lower if diag.w_lower is not None else diag.w_lower_seq
            report.add(check_wacoi(model, policy, u, w_lower, tol, name="acoi"))
        elif name == "acoe":
            report.add(check_acoe(model, u, diag.w_upper_seq, tol)[0])
        elif name == "chain":
            report.extend(check_chain(diag))
        elif name == "theorem1":
            report.extend(check_theorem1_conclusions(model, policy, u, diag, N_max, max(tol, 1e-7)))
        elif name == "assumption_b":
            report.add(check_assumption_B(model, diag=diag))
        elif name == "assumption_b_seq":
            report.add(check_assumption_B_underline_seq(diag))
        elif name == "lsec":
            report.add(check_lower_semi_equicontinuity(diag.family, model, eps_list))
        elif name == "equicontinuity":
            report.add(check_equicontinuity(diag.family, model, eps_list))
        elif name == "ec_majorant":
            U = diag.family.max(axis=0) if U_majorant is None else U_majorant
            report.add(check_ec_majorant(diag.family, model, U))
        elif name == "asymptotic_ui":
            family = diag.tail_family
            report.add(check_asymptotic_ui(family, model, K_list or default_k_list(family)))
        elif name == "pointwise_limit":
            report.add(check_pointwise_limit(diag.tail_family, tol))
        elif name == "corollary_3_4":
            report.extend(check_corollary_conditions(model, diag, "acoi_3_4", tol, policy))
        elif name == "corollary_3_7":
            report.extend(check_corollary_conditions(model, diag, "acoe_3_7", tol))
        elif name == "transform_dcoe":
            report.add(check_transform_dcoe(model, diag, 10 * diag.solver_tol))
        elif name == "constructions":
            report.add(check_constructions_coincide(diag, model))
        elif name == "cost_lsc":
            report.add(check_cost_lower_semicontinuity(model, eps_list))

    logger.info(f"🔎 {model.name or 'model'}: {len(report.checks)} checks, {'PASS' if report.passed else 'FAIL'}")
    return report
