"""
Grid evidence for lower semi-equicontinuity, equicontinuity and lower
semicontinuity of costs
"""
import math
from typing import List, Sequence

import numpy as np

from core.model import MdpModel
from verify.report import EVIDENCE, FAIL, PASS, Check
from vanish.diagnostics import (
    VanishDiagnostics,
    default_radius_schedule,
    limit_relative_value_pointwise,
    limit_relative_value_weak,
)

DEFAULT_EPS = (0.1, 0.5)


def _lsec_state(D: np.ndarray, family: np.ndarray, s: int, eps: float):
    """(delta, verdict) at s; verdict is 'pass', 'fail' or 'ambiguous'.

    A neighbour s' violates when f_n(s') <= f_n(s) - eps for some n. delta
    is the distance of the nearest ring holding a violator. s fails when
    every neighbour on the nearest ring violates.
    """
    with np.errstate(invalid="ignore"):
        violators = (family - family[:, [s]] <= -eps).any(axis=0)
    violators[s] = False
    others = np.flatnonzero(np.arange(D.shape[0]) != s)
    if others.size == 0 or not violators.any():
        return math.inf, PASS
    delta = float(D[s, violators].min())
    nearest = others[D[s, others] == D[s, others].min()]
    hits = violators[nearest]
    if hits.all():
        return delta, FAIL
    return delta, "ambiguous" if hits.any() else PASS


def check_lower_semi_equicontinuity(
    family: np.ndarray,
    model: MdpModel,
    eps_list: Sequence[float] = DEFAULT_EPS,
    name: str = "lsec",
) -> Check:
    """For every state and eps, the largest realized delta with f_n(s') > f_n(s) - eps on B_delta(s)"""
    family = np.atleast_2d(np.asarray(family, dtype=float))
    D = model.distance_matrix
    failing, ambiguous, deltas = {}, {}, {}
    for eps in eps_list:
        results = [_lsec_state(D, family, s, eps) for s in range(model.n_states)]
        deltas[eps] = [d for d, _ in results]
        failing[eps] = [s for s, (_, v) in enumerate(results) if v == FAIL]
        ambiguous[eps] = [s for s, (_, v) in enumerate(results) if v == "ambiguous"]

    failed_states = sorted({s for states in failing.values() for s in states})
    ambiguous_states = sorted({s for states in ambiguous.values() for s in states} - set(failed_states))
    notes = f"evidence at grid resolution h={model.resolution:.6g}"
    if failed_states:
        notes += f"; fails at states {failed_states}"
    if ambiguous_states:
        notes += f"; ambiguous at resolution h at states {ambiguous_states}"
    return Check(
        name, EVIDENCE, float(len(failed_states)), 0.0, FAIL if failed_states else PASS, notes,
        details={
            "eps": list(eps_list),
            "delta": {str(e): d for e, d in deltas.items()},
            "failing_states": {str(e): s for e, s in failing.items()},
            "ambiguous_states": ambiguous_states,
        },
    )


def check_equicontinuity(
    family: np.ndarray,
    model: MdpModel,
    eps_list: Sequence[float] = DEFAULT_EPS,
) -> Check:
    """Lower semi-equicontinuity of the family and of its negation"""
    family = np.atleast_2d(np.asarray(family, dtype=float))
    lower = check_lower_semi_equicontinuity(family, model, eps_list, name="lsec:lower")
    upper = check_lower_semi_equicontinuity(-family, model, eps_list, name="lsec:upper")
    holds = not lower.failed and not upper.failed
    return Check(
        "equicontinuity", EVIDENCE, lower.residual + upper.residual, 0.0, PASS if holds else FAIL,
        notes=f"lower side: {lower.notes}; upper side: {upper.notes}",
        details={"lower": lower.details, "upper": upper.details},
    )


def check_constructions_coincide(diag: VanishDiagnostics, model: MdpModel, tol: float = 1e-9) -> Check:
    """Weak and pointwise liminf constructions agree state by state"""
    pointwise = limit_relative_value_pointwise(diag).values
    weak, _, _ = limit_relative_value_weak(diag, model, default_radius_schedule(model))
    gap = pointwise - weak.values
    differing: List[int] = [int(x) for x in np.flatnonzero(gap > tol)]
    return Check(
        "constructions", EVIDENCE, float(np.abs(gap).max()), tol, FAIL if differing else PASS,
        notes=f"weak < pointwise at states {differing}" if differing else "constructions coincide",
        details={"differing_states": differing},
    )


def check_cost_lower_semicontinuity(model: MdpModel, eps_list: Sequence[float] = DEFAULT_EPS) -> Check:
    """Grid evidence that x -> c(x,a) is lower semicontinuous for every action"""
    check = check_lower_semi_equicontinuity(model.cost.T, model, eps_list, name="cost_lsc")
    declared = model.continuity_class
    note = "K-inf-compactness is automatic on finite models"
    if declared == "W*":
        note += "; W* needs c lower semicontinuous"
    elif declared == "S*":
        note += "; S* needs c(x,.) lower semicontinuous in a only, automatic for finite action sets"
    check.notes = f"{check.notes}; declared {declared}: {note}"
    return check
