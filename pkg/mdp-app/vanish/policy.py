"""
Near-optimal action sets A*(x) and deterministic policy extraction
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from core.config import MDP_ASTAR_TOL
from core.errors import ExtractionError, ModelError
from core.model import MdpModel, Policy, ValueFunction


@dataclass(frozen=True)
class ActionSets:
    sets: Tuple[Tuple[int, ...], ...]
    tol: float
    w_ref: float

    @property
    def empty_states(self) -> Tuple[int, ...]:
        return tuple(x for x, s in enumerate(self.sets) if not s)

    def __getitem__(self, x):
        return self.sets[x]

    def __len__(self):
        return len(self.sets)


def default_astar_tol(u: np.ndarray, w_ref: float) -> float:
    return MDP_ASTAR_TOL * (1 + abs(w_ref) + float(np.max(u)))


def optimal_action_set(
    model: MdpModel,
    u: Union[ValueFunction, np.ndarray],
    w_ref: float,
    tol: Optional[float] = None,
) -> ActionSets:
    """A*(x) = {a in A(x) : c(x,a) + sum_y u(y) q(y|x,a) <= w_ref + u(x) + tol}"""
    u = np.asarray(u.values if isinstance(u, ValueFunction) else u, dtype=float)
    if not np.isfinite(u).all() or not np.isfinite(w_ref):
        raise ModelError("A*(x) needs a finite u and a finite reference value")
    if tol is None:
        tol = default_astar_tol(u, w_ref)
    lhs = model.cost + model.kernel @ u
    admitted = lhs <= (w_ref + u + tol)[:, None]
    sets = tuple(tuple(int(a) for a in np.flatnonzero(row)) for row in admitted)
    return ActionSets(sets, tol, w_ref)


def extract_policy(a_star: Union[ActionSets, Sequence[Sequence[int]]]) -> Policy:
    """Lowest action index in every A*(x)"""
    sets = a_star.sets if isinstance(a_star, ActionSets) else a_star
    actions = []
    for x, s in enumerate(sets):
        if not s:
            raise ExtractionError(f"A*({x}) is empty: no action satisfies the optimality inequality", state=x)
        actions.append(int(min(s)))
    return Policy(tuple(actions))
