"""
Vanishing-discount diagnostics: per-alpha trace, tail estimates of the
average-cost bounds, and the two liminf constructions of u
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import MDP_SOLVER_TOL, MDP_THREADS
from core.errors import ModelError, SolverError
from core.io import from_number, read_document, write_document
from core.logger import logger
from core.model import MdpModel, ValueFunction
from solvers.discounted import RelativeValue, relative_value
from vanish.schedule import DiscountSchedule

POINTWISE = "pointwise"
WEAK = "weak"
CONSTRUCTION_TAGS = {
    POINTWISE: "setwise construction",
    WEAK: "weak construction",
}


@dataclass(frozen=True, eq=False)
class TraceRecord:
    index: int
    alpha: float
    m: float
    gain: float
    u: np.ndarray
    iterations: int = 0
    residual: float = 0.0

    @classmethod
    def from_relative_value(cls, index: int, rv: RelativeValue) -> "TraceRecord":
        return cls(index, rv.alpha, rv.m, rv.gain, np.asarray(rv.u.values), rv.iterations, rv.residual)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "alpha": self.alpha,
            "m": self.m,
            "gain": self.gain,
            "u": self.u,
            "iterations": self.iterations,
            "residual": self.residual,
        }


@dataclass(eq=False)
class VanishDiagnostics:
    """Everything the vanishing-discount pipeline learns about one model.

    Filled in stages: sequence_diagnostics sets the trace and the tail
    estimates, a limit construction sets `u` (and U_m / u_lower_m for the
    weak one), the pipeline adds A*(x) and the w* estimate.
    """
    schedule: DiscountSchedule
    trace: List[TraceRecord]
    w_lower_seq: float
    w_upper_seq: float
    model_name: str = ""
    solver_tol: float = MDP_SOLVER_TOL
    w_lower: Optional[float] = None
    w_upper: Optional[float] = None
    u: Optional[ValueFunction] = None
    construction: Optional[str] = None
    U_m: Optional[np.ndarray] = None
    u_lower_m: Optional[np.ndarray] = None
    a_star: Optional[List[Tuple[int, ...]]] = None
    astar_tol: Optional[float] = None
    empty_states: List[int] = field(default_factory=list)
    w_star_estimate: Optional[float] = None
    w_star_method: Optional[str] = None

    @property
    def tail_window(self) -> int:
        return self.schedule.tail_window

    @property
    def tail_start(self) -> int:
        return self.schedule.tail_start

    @property
    def alphas(self) -> np.ndarray:
        return np.array([r.alpha for r in self.trace])

    @property
    def gains(self) -> np.ndarray:
        """(1 - alpha_n) m_{alpha_n} along the schedule"""
        return np.array([r.gain for r in self.trace])

    @property
    def family(self) -> np.ndarray:
        """u_{alpha_n}(x) stacked as rows n"""
        return np.vstack([r.u for r in self.trace])

    @property
    def tail_family(self) -> np.ndarray:
        return self.family[self.tail_start:]

    def to_dict(self) -> dict:
        return {
            "model": self.model_name,
            "schedule": self.schedule.spec(),
            "window": self.schedule.window,
            "tail_window": self.tail_window,
            "solver_tol": self.solver_tol,
            "trace": [r.to_dict() for r in self.trace],
            "w_lower_seq": self.w_lower_seq,
            "w_upper_seq": self.w_upper_seq,
            "w_lower": self.w_lower,
            "w_upper": self.w_upper,
            "u": None if self.u is None else self.u.values,
            "construction": self.construction,
            "U_m": self.U_m,
            "u_lower_m": self.u_lower_m,
            "a_star": self.a_star,
            "astar_tol": self.astar_tol,
            "empty_states": self.empty_states,
            "w_star_estimate": self.w_star_estimate,
            "w_star_method": self.w_star_method,
            "estimates_note": "tail-window estimates on a truncated schedule, not limits",
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "VanishDiagnostics":
        try:
            schedule = DiscountSchedule.parse(doc["schedule"], window=doc.get("window"))
            trace = [
                TraceRecord(
                    index=int(r["index"]),
                    alpha=from_number(r["alpha"]),
                    m=from_number(r["m"]),
                    gain=from_number(r["gain"]),
                    u=np.array([from_number(v) for v in r["u"]]),
                    iterations=int(r.get("iterations", 0)),
                    residual=from_number(r.get("residual", 0.0)),
                )
                for r in doc["trace"]
            ]
            diag = cls(
                schedule=schedule,
                trace=trace,
                w_lower_seq=from_number(doc["w_lower_seq"]),
                w_upper_seq=from_number(doc["w_upper_seq"]),
                model_name=doc.get("model", ""),
                solver_tol=from_number(doc.get("solver_tol", MDP_SOLVER_TOL)),
            )
        except (KeyError, TypeError) as e:
            raise ModelError(f"malformed diagnostics document: missing or invalid {e}") from e

        def optional(key):
            return None if doc.get(key) is None else from_number(doc[key])

        diag.w_lower = optional("w_lower")
        diag.w_upper = optional("w_upper")
        diag.astar_tol = optional("astar_tol")
        diag.w_star_estimate = optional("w_star_estimate")
        diag.w_star_method = doc.get("w_star_method")
        diag.construction = doc.get("construction")
        if doc.get("u") is not None:
            diag.u = ValueFunction(
                [from_number(v) for v in doc["u"]], "u",
                {"construction": diag.construction, "tag": CONSTRUCTION_TAGS.get(diag.construction)},
            )
        for key in ("U_m", "u_lower_m"):
            if doc.get(key) is not None:
                setattr(diag, key, np.array([[from_number(v) for v in row] for row in doc[key]]))
        if doc.get("a_star") is not None:
            diag.a_star = [tuple(int(a) for a in s) for s in doc["a_star"]]
        diag.empty_states = [int(x) for x in doc.get("empty_states", [])]
        return diag


def sequence_diagnostics(
    model: MdpModel,
    schedule: DiscountSchedule,
    tol: float = MDP_SOLVER_TOL,
    workers: int = MDP_THREADS,
) -> VanishDiagnostics:
    """Solve every alpha_n and estimate the liminf/limsup of (1 - alpha_n) m_{alpha_n}"""
    if schedule.n_max < 2:
        raise ModelError(f"schedule needs n_max >= 2, got {schedule.n_max}")

    def solve(index: int) -> TraceRecord:
        alpha = schedule.values[index]
        try:
            return TraceRecord.from_relative_value(index, relative_value(model, alpha, tol))
        except SolverError as e:
            raise SolverError(f"schedule index {index}: {e}", alpha=alpha, residual=e.residual, index=index) from e

    indices = range(len(schedule))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            trace = list(pool.map(solve, indices))
    else:
        trace = [solve(i) for i in indices]

    tail = np.array([r.gain for r in trace[schedule.tail_start:]])
    diag = VanishDiagnostics(
        schedule=schedule,
        trace=trace,
        w_lower_seq=float(tail.min()),
        w_upper_seq=float(tail.max()),
        model_name=model.name,
        solver_tol=tol,
    )
    logger.info(
        f"📈 {model.name or 'model'}: solved {len(trace)} discount factors ({schedule.spec()}), "
        f"tail estimates [{diag.w_lower_seq:.10g}, {diag.w_upper_seq:.10g}]"
    )
    return diag


def default_radius_schedule(model: MdpModel, floor: Optional[float] = None) -> Tuple[float, ...]:
    """Radii from above the diameter down to the smallest positive distance.

    A ball B_R(x) with R equal to a realized distance d holds exactly the
    points strictly closer than d, so the smallest radius yields the
    distance-zero class of x. Radii below `floor` are dropped.
    """
    distinct = model.distinct_distances
    if distinct.size == 0:
        return (1.0,)
    radii = [2.0 * float(distinct[-1])] + [float(d) for d in distinct[::-1]]
    if floor is not None:
        radii = [radii[0]] + [r for r in radii[1:] if r >= floor]
    return tuple(radii)


def lsc_envelope(model: MdpModel, f: np.ndarray, radii: Optional[Sequence[float]] = None) -> np.ndarray:
    """Discrete liminf_{y->x} f(y) = max over R of min_{y in B_R(x)} f(y)"""
    f = np.asarray(f, dtype=float)
    if radii is None:
        radii = default_radius_schedule(model)
    if any(r <= 0 for r in radii):
        raise ModelError("ball radii must be positive")
    D = model.distance_matrix
    envelope = np.full(model.n_states, -np.inf)
    for R in radii:
        ball_min = np.where(D < R, f[None, :], np.inf).min(axis=1)
        envelope = np.maximum(envelope, ball_min)
    return envelope


def limit_relative_value_pointwise(diag: VanishDiagnostics) -> ValueFunction:
    """liminf_n u_{alpha_n}(x) estimated by the tail-window minimum"""
    return ValueFunction(
        diag.tail_family.min(axis=0),
        "u",
        {"construction": POINTWISE, "tag": CONSTRUCTION_TAGS[POINTWISE], "tail_window": diag.tail_window},
    )


def limit_relative_value_weak(
    diag: VanishDiagnostics,
    model: MdpModel,
    radius_schedule: Optional[Sequence[float]] = None,
) -> Tuple[ValueFunction, np.ndarray, np.ndarray]:
    """U_m = min_{m<=n<=n_max} u_{alpha_n}, u_lower_m = discrete liminf_{y->x} U_m(y),
    u = max_m u_lower_m.

    m runs up to the first tail index, so U_m at the last retained m is the
    tail-window minimum of the pointwise construction.
    """
    radii = tuple(radius_schedule) if radius_schedule is not None else default_radius_schedule(model)
    suffix_min = np.minimum.accumulate(diag.family[::-1], axis=0)[::-1]
    U_m = suffix_min[: diag.tail_start + 1]
    u_lower_m = np.vstack([lsc_envelope(model, row, radii) for row in U_m])
    u = ValueFunction(
        u_lower_m.max(axis=0),
        "u",
        {"construction": WEAK, "tag": CONSTRUCTION_TAGS[WEAK], "radii": len(radii), "m_max": diag.tail_start},
    )
    return u, U_m, u_lower_m


def estimate_w_bounds(
    model: MdpModel,
    schedules: Optional[Sequence[DiscountSchedule]] = None,
    tol: float = MDP_SOLVER_TOL,
    workers: int = MDP_THREADS,
    base: Optional[DiscountSchedule] = None,
) -> Tuple[float, float]:
    """(w_lower, w_upper) estimates: min/max of the tail estimates over a schedule family"""
    if schedules is None:
        base = base or DiscountSchedule.geometric(0.5, 30)
        schedules = [base, DiscountSchedule.harmonic(base.n_max), DiscountSchedule.geometric(0.7, base.n_max)]
    lows, highs = [], []
    for schedule in schedules:
        diag = sequence_diagnostics(model, schedule, tol, workers)
        lows.append(diag.w_lower_seq)
        highs.append(diag.w_upper_seq)
    return min(lows), max(highs)


def save_diagnostics(diag: VanishDiagnostics, path: Union[str, Path]) -> None:
    write_document(diag.to_dict(), path)
    logger.info(f"💾 Diagnostics written to {path}")


def load_diagnostics(source: Union[str, Path, dict]) -> VanishDiagnostics:
    return VanishDiagnostics.from_dict(read_document(source))
