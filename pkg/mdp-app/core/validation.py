"""
Model validation: every failure is reported, nothing is thrown
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np

from core.config import MDP_STOCHASTIC_TOL
from core.errors import ModelError
from core.model import MdpModel

# Exhaustive triangle checks up to this many states, sampled triples above
_TRIANGLE_EXHAUSTIVE = 150
_TRIANGLE_SAMPLES = 200_000


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), "notes": list(self.notes)}


def _check_kernel(model: MdpModel, report: ValidationReport):
    kernel = model.kernel
    for x in range(model.n_states):
        for a in range(model.n_actions):
            if not model.admissible[x, a]:
                continue
            row = kernel[x, a]
            if (row < 0).any():
                report.violations.append(f"nonnegativity ({x},{a})")
            if abs(row.sum() - 1.0) > MDP_STOCHASTIC_TOL:
                report.violations.append(f"row-stochasticity ({x},{a})")


def _check_costs(model: MdpModel, report: ValidationReport):
    cost = model.cost
    if np.isnan(cost).any() or np.isneginf(cost).any():
        report.violations.append("cost bounded below (nan or -inf entry)")
    if not model.admissible.any():
        report.violations.append("cost bounded below (no finite entry)")
    for x in range(model.n_states):
        if not model.admissible[x].any():
            report.violations.append(f"nonempty A({x})")


def _check_metric(model: MdpModel, report: ValidationReport):
    try:
        d = model.distance_matrix
    except ModelError as e:
        report.violations.append(f"metric ({e})")
        return
    n = model.n_states
    if d.shape != (n, n):
        report.violations.append(f"metric dimension {d.shape} != {(n, n)}")
        return
    if not np.isfinite(d).all() or (d < 0).any():
        report.violations.append("metric nonnegativity")
    if (np.diag(d) != 0).any():
        report.violations.append("metric zero diagonal")
    if not np.array_equal(d, d.T):
        report.violations.append("metric symmetry")
    slack = MDP_STOCHASTIC_TOL * max(1.0, float(np.abs(d).max(initial=0.0)))
    if n <= _TRIANGLE_EXHAUSTIVE:
        # d[i,k] <= d[i,j] + d[j,k] for all triples
        worst = (d[:, None, :] - d[:, :, None] - d[None, :, :]).max(initial=0.0)
    else:
        rng = np.random.default_rng(0)
        i, j, k = rng.integers(0, n, size=(3, _TRIANGLE_SAMPLES))
        worst = (d[i, k] - d[i, j] - d[j, k]).max(initial=0.0)
        report.notes.append(f"triangle inequality sampled on {_TRIANGLE_SAMPLES} triples")
    if worst > slack:
        report.violations.append(f"metric triangle inequality (excess {worst:.3g})")
    if (d[~np.eye(n, dtype=bool)] == 0).any():
        report.notes.append("pseudometric: distinct states at distance 0")


def validate_model(model: MdpModel) -> ValidationReport:
    """Return the list of violated invariants; empty iff well-formed"""
    report = ValidationReport()
    _check_costs(model, report)
    _check_kernel(model, report)
    _check_metric(model, report)
    if model.load_deviation > 0:
        report.notes.append(f"kernel rows renormalized at load (max deviation {model.load_deviation:.3g})")
    if model.continuity_class in ("W*", "S*"):
        report.notes.append(f"continuity class {model.continuity_class} is declared; "
                            "inf-compactness is automatic on finite models")
    return report
