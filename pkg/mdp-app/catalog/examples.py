"""
Catalog of example models: the indicator and Dirichlet counterexamples,
seeded random models, and small synthetic fixtures
"""
import inspect
from typing import Callable, Dict, Optional

import numpy as np

from core.errors import ModelError
from core.model import MdpModel, StateRecord

RATIONAL = "rational"
IRRATIONAL = "irrational"

# Floor added to random kernel weights before normalization (keeps rows strictly positive)
KERNEL_FLOOR = 0.05


def _single_action_model(coords, cost, target, name, continuity_class, labels=None, metric="euclidean-on-coord") -> MdpModel:
    n = len(coords)
    labels = labels or [None] * n
    kernel = np.zeros((n, 1, n))
    kernel[:, 0, target] = 1.0
    return MdpModel(
        states=tuple(StateRecord(i, (float(coords[i]),), labels[i]) for i in range(n)),
        actions=("a1",),
        cost=np.asarray(cost, dtype=float).reshape(n, 1),
        kernel=kernel,
        metric=metric,
        continuity_class=continuity_class,
        name=name,
    )


def example_indicator(grid_size: int = 101) -> MdpModel:
    """Uniform grid on [0,1]; one action sends everything to 0; c(x) = I{x != 0}"""
    if grid_size < 2:
        raise ModelError(f"grid_size must be at least 2, got {grid_size}")
    coords = np.linspace(0.0, 1.0, grid_size)
    cost = (np.arange(grid_size) != 0).astype(float)
    return _single_action_model(coords, cost, 0, f"indicator-{grid_size}", "W*")


def example_dirichlet(n_pairs: int = 50) -> MdpModel:
    """2 n_pairs + 1 points k/(2 n_pairs) labeled rational/irrational alternately.

    Cost is 1 on irrational labels. Each irrational state sits at distance 0
    from its rational predecessor, so rational points approach every
    irrational one at any grid resolution.
    """
    if n_pairs < 1:
        raise ModelError(f"n_pairs must be at least 1, got {n_pairs}")
    n = 2 * n_pairs + 1
    coords = np.arange(n) / (2 * n_pairs)
    labels = [RATIONAL if k % 2 == 0 else IRRATIONAL for k in range(n)]
    cost = np.array([1.0 if label == IRRATIONAL else 0.0 for label in labels])
    anchors = coords[[k - 1 if labels[k] == IRRATIONAL else k for k in range(n)]]
    metric = np.abs(anchors[:, None] - anchors[None, :])
    return _single_action_model(coords, cost, 0, f"dirichlet-{n_pairs}", "S*", labels, metric)


def random_finite(n_states: int = 4, n_actions: int = 3, seed: int = 0, sparsity: float = 0.0) -> MdpModel:
    """Seeded model with strictly positive kernel rows and costs in [0,1].

    `sparsity` is the probability that an action other than the first is
    removed from A(x) (cost +inf).
    """
    if n_states < 1 or n_actions < 1:
        raise ModelError(f"need at least one state and one action, got {n_states}x{n_actions}")
    if not 0 <= sparsity < 1:
        raise ModelError(f"sparsity must lie in [0,1), got {sparsity}")
    rng = np.random.default_rng(seed)
    coords = rng.random(n_states)
    cost = rng.random((n_states, n_actions))
    weights = rng.random((n_states, n_actions, n_states)) + KERNEL_FLOOR
    kernel = weights / weights.sum(axis=2, keepdims=True)
    removed = rng.random((n_states, n_actions)) < sparsity
    removed[:, 0] = False
    cost[removed] = np.inf
    return MdpModel(
        states=tuple(StateRecord(i, (float(coords[i]),)) for i in range(n_states)),
        actions=tuple(f"a{k + 1}" for k in range(n_actions)),
        cost=cost,
        kernel=kernel,
        continuity_class="none",
        name=f"random-{n_states}x{n_actions}-seed{seed}",
    )


def constant_cost(n_states: int = 3, cost: float = 1.0) -> MdpModel:
    """c == cost with a uniform kernel"""
    if n_states < 1:
        raise ModelError(f"n_states must be at least 1, got {n_states}")
    coords = np.linspace(0.0, 1.0, n_states) if n_states > 1 else np.zeros(1)
    kernel = np.full((n_states, 1, n_states), 1.0 / n_states)
    return MdpModel(
        states=tuple(StateRecord(i, (float(coords[i]),)) for i in range(n_states)),
        actions=("a1",),
        cost=np.full((n_states, 1), float(cost)),
        kernel=kernel,
        continuity_class="W*",
        name=f"constant-{n_states}",
    )


def zero_cost(n_states: int = 1) -> MdpModel:
    """c == 0, every state a self-loop"""
    if n_states < 1:
        raise ModelError(f"n_states must be at least 1, got {n_states}")
    coords = np.linspace(0.0, 1.0, n_states) if n_states > 1 else np.zeros(1)
    return MdpModel(
        states=tuple(StateRecord(i, (float(coords[i]),)) for i in range(n_states)),
        actions=("a1",),
        cost=np.zeros((n_states, 1)),
        kernel=np.eye(n_states).reshape(n_states, 1, n_states),
        continuity_class="W*",
        name=f"zero-{n_states}",
    )


def split_absorbing() -> MdpModel:
    """Two absorbing states with costs 0 and 1; u_alpha(1) = 1/(1 - alpha) grows without bound"""
    return MdpModel(
        states=(StateRecord(0, (0.0,)), StateRecord(1, (1.0,))),
        actions=("a1",),
        cost=np.array([[0.0], [1.0]]),
        kernel=np.eye(2).reshape(2, 1, 2),
        continuity_class="W*",
        name="split-absorbing",
    )


CATALOG: Dict[str, Callable[..., MdpModel]] = {
    "indicator": example_indicator,
    "dirichlet": example_dirichlet,
    "random": random_finite,
    "constant": constant_cost,
    "zero": zero_cost,
    "split_absorbing": split_absorbing,
}


def build_model(name: str, params: Optional[Dict[str, str]] = None) -> MdpModel:
    """Construct a catalog model from string parameters (as given on the command line)"""
    if name not in CATALOG:
        raise ModelError(f"unknown catalog model {name!r}; available: {', '.join(CATALOG)}")
    constructor = CATALOG[name]
    signature = inspect.signature(constructor)
    kwargs = {}
    for key, raw in (params or {}).items():
        if key not in signature.parameters:
            raise ModelError(f"{name} has no parameter {key!r}; accepted: {', '.join(signature.parameters)}")
        annotation = signature.parameters[key].annotation
        try:
            kwargs[key] = annotation(raw) if annotation in (int, float) else raw
        except ValueError as e:
            raise ModelError(f"parameter {key}={raw!r}: {e}") from e
    return constructor(**kwargs)
