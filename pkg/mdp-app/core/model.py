"""
MDP data model: metric state set, actions, extended-real costs, kernel
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple, Union

import numpy as np

from core.errors import ModelError

EUCLIDEAN = "euclidean-on-coord"
CONTINUITY_CLASSES = ("W*", "S*", "none")


@dataclass(frozen=True)
class StateRecord:
    id: int
    coord: Optional[Tuple[float, ...]] = None
    label: Optional[str] = None


@dataclass(frozen=True, eq=False)
class MdpModel:
    """Finite MDP on a metric state set.

    `cost` is |X|x|A| with +inf marking actions outside A(x); `kernel` is
    |X|x|A|x|X| with kernel[x, a] = q(.|x, a). Rows of pairs with infinite
    cost are all zero and never enter a minimization.
    """
    states: Tuple[StateRecord, ...]
    actions: Tuple[str, ...]
    cost: np.ndarray
    kernel: np.ndarray
    metric: Union[str, np.ndarray] = EUCLIDEAN
    continuity_class: str = "none"
    name: str = ""
    load_deviation: float = 0.0

    def __post_init__(self):
        cost = np.array(self.cost, dtype=float)
        kernel = np.array(self.kernel, dtype=float)
        if cost.shape != (len(self.states), len(self.actions)):
            raise ModelError(f"cost table has shape {cost.shape}, expected {(len(self.states), len(self.actions))}")
        if kernel.shape != (len(self.states), len(self.actions), len(self.states)):
            raise ModelError(f"kernel has shape {kernel.shape}, expected {(len(self.states), len(self.actions), len(self.states))}")
        if self.continuity_class not in CONTINUITY_CLASSES:
            raise ModelError(f"unknown continuity class {self.continuity_class!r}")
        # Pairs outside A(x) never carry transition mass
        kernel[~np.isfinite(cost)] = 0.0
        cost.setflags(write=False)
        kernel.setflags(write=False)
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "kernel", kernel)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "actions", tuple(self.actions))
        if not isinstance(self.metric, str):
            metric = np.array(self.metric, dtype=float)
            metric.setflags(write=False)
            object.__setattr__(self, "metric", metric)
        elif self.metric != EUCLIDEAN:
            raise ModelError(f"unknown metric {self.metric!r}")

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @cached_property
    def admissible(self) -> np.ndarray:
        """Boolean |X|x|A| mask of finite-cost pairs"""
        return np.isfinite(self.cost)

    @cached_property
    def c_min(self) -> float:
        finite = self.cost[self.admissible]
        return float(finite.min()) if finite.size else float("inf")

    @cached_property
    def cost_range(self) -> float:
        finite = self.cost[self.admissible]
        return float(finite.max() - finite.min()) if finite.size else 0.0

    @cached_property
    def delta_coefficient(self) -> float:
        """max over admissible pairs of 1 - sum_y min(q(y|x,a), q(y|x',a'))"""
        rows = self.kernel[self.admissible]
        tau = 0.0
        for row in rows:
            overlap = np.minimum(row, rows).sum(axis=1)
            tau = max(tau, float(1.0 - overlap.min()))
        return min(max(tau, 0.0), 1.0)

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """Resolved metric; an explicit matrix wins over coordinates"""
        if not isinstance(self.metric, str):
            return self.metric
        coords = [s.coord for s in self.states]
        if any(c is None for c in coords):
            raise ModelError("euclidean metric requires a coordinate on every state")
        points = np.array(coords, dtype=float).reshape(self.n_states, -1)
        diff = points[:, None, :] - points[None, :, :]
        distances = np.sqrt((diff ** 2).sum(axis=-1))
        distances.setflags(write=False)
        return distances

    @cached_property
    def distinct_distances(self) -> np.ndarray:
        """Sorted distinct positive pairwise distances"""
        d = self.distance_matrix
        return np.unique(d[d > 0])

    @cached_property
    def resolution(self) -> float:
        """Smallest positive pairwise distance (grid spacing h)"""
        distinct = self.distinct_distances
        return float(distinct[0]) if distinct.size else float("inf")

    def labels(self) -> Tuple[Optional[str], ...]:
        return tuple(s.label for s in self.states)


@dataclass(frozen=True)
class Policy:
    """Deterministic stationary policy x -> action index"""
    action_of: Tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.action_of[x]

    def __len__(self):
        return len(self.action_of)


@dataclass(frozen=True, eq=False)
class ValueFunction:
    values: np.ndarray
    quantity: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __getitem__(self, x):
        return self.values[x]

    def __len__(self):
        return len(self.values)


def _check_state(model: MdpModel, x: int):
    if not 0 <= x < model.n_states:
        raise ModelError(f"state {x} is not a valid index (|X| = {model.n_states})")


def effective_action_set(model: MdpModel, x: int) -> Tuple[int, ...]:
    """A(x) = {a : c(x,a) < +inf}, in action-index order"""
    _check_state(model, x)
    return tuple(int(a) for a in np.flatnonzero(model.admissible[x]))


def ball(model: MdpModel, x: int, R: float) -> Tuple[int, ...]:
    """B_R(x) = {y : rho(y, x) < R}"""
    _check_state(model, x)
    if not R > 0:
        raise ModelError(f"ball radius must be positive, got {R}")
    return tuple(int(y) for y in np.flatnonzero(model.distance_matrix[x] < R))


def validate_policy(model: MdpModel, policy: Policy) -> None:
    if len(policy) != model.n_states:
        raise ModelError(f"policy has {len(policy)} entries, model has {model.n_states} states")
    for x, a in enumerate(policy.action_of):
        if not 0 <= a < model.n_actions or not model.admissible[x, a]:
            raise ModelError(f"policy action {a} is not in A({x})")


def transition_matrix(model: MdpModel, policy: Policy) -> np.ndarray:
    """P_phi[x, y] = q(y | x, phi(x))"""
    return model.kernel[np.arange(model.n_states), np.array(policy.action_of)]


def policy_costs(model: MdpModel, policy: Policy) -> np.ndarray:
    """c_phi[x] = c(x, phi(x))"""
    return model.cost[np.arange(model.n_states), np.array(policy.action_of)]
