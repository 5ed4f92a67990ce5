"""
Model / policy / report documents (JSON-compatible text)
"""
import json
import math
from pathlib import Path
from typing import Any, Union

import numpy as np

from core.config import MDP_NORMALIZE_TOL, MDP_STOCHASTIC_TOL
from core.errors import ModelError
from core.logger import logger
from core.model import EUCLIDEAN, MdpModel, Policy, StateRecord


def to_jsonable(obj: Any) -> Any:
    """Convert numpy containers and non-finite floats to plain JSON values"""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return obj


def from_number(value: Any) -> float:
    if isinstance(value, str):
        if value in ("inf", "+inf", "Infinity"):
            return float("inf")
        if value in ("-inf", "-Infinity"):
            return float("-inf")
        raise ModelError(f"unexpected string {value!r} where a number was expected")
    if value is None:
        return float("nan")
    return float(value)


def dumps(document: Any) -> str:
    """Deterministic text form; floats keep full round-trip precision"""
    return json.dumps(to_jsonable(document), indent=2, allow_nan=False) + "\n"


def write_document(document: Any, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(document))


def read_document(source: Union[str, Path, dict]) -> Any:
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as e:
        raise ModelError(f"cannot read {path}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e


# ----------------------------------------------------------------------------
# Models
# ----------------------------------------------------------------------------
def model_from_dict(doc: dict) -> MdpModel:
    for key in ("states", "actions", "cost", "kernel"):
        if key not in doc:
            raise ModelError(f"model document is missing key {key!r}")
    try:
        states = tuple(
            StateRecord(
                id=int(s.get("id", i)),
                coord=tuple(float(c) for c in s["coord"]) if s.get("coord") is not None else None,
                label=s.get("label"),
            )
            for i, s in enumerate(doc["states"])
        )
        actions = tuple(str(a) for a in doc["actions"])
        n, k = len(states), len(actions)
        cost = np.array([[from_number(c) for c in row] for row in doc["cost"]], dtype=float)
        if cost.shape != (n, k):
            raise ModelError(f"cost table has shape {cost.shape}, expected {(n, k)}")

        kernel = np.zeros((n, k, n))
        for key, entries in doc["kernel"].items():
            x, a = (int(part) for part in key.split(","))
            if not (0 <= x < n and 0 <= a < k):
                raise ModelError(f"kernel key {key!r} out of range")
            for entry in entries:
                y = int(entry["state"])
                if not 0 <= y < n:
                    raise ModelError(f"kernel entry state {y} out of range for key {key!r}")
                kernel[x, a, y] += float(entry["prob"])

        deviation = 0.0
        for x in range(n):
            for a in range(k):
                if not np.isfinite(cost[x, a]):
                    continue
                total = kernel[x, a].sum()
                gap = abs(total - 1.0)
                if MDP_STOCHASTIC_TOL < gap <= MDP_NORMALIZE_TOL:
                    kernel[x, a] /= total
                    deviation = max(deviation, gap)
        if deviation > 0:
            logger.warning(f"Kernel rows renormalized at load (max deviation {deviation:.3g})")

        metric = doc.get("metric", EUCLIDEAN)
        if not isinstance(metric, str):
            metric = np.array(metric, dtype=float)

        return MdpModel(
            states=states,
            actions=actions,
            cost=cost,
            kernel=kernel,
            metric=metric,
            continuity_class=doc.get("continuity_class", "none"),
            name=doc.get("name", ""),
            load_deviation=deviation,
        )
    except ModelError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ModelError(f"malformed model document: {e}") from e


def model_to_dict(model: MdpModel) -> dict:
    kernel = {}
    for x in range(model.n_states):
        for a in range(model.n_actions):
            if not model.admissible[x, a]:
                continue
            row = model.kernel[x, a]
            kernel[f"{x},{a}"] = [{"state": int(y), "prob": float(row[y])} for y in np.flatnonzero(row)]
    states = []
    for s in model.states:
        record = {"id": s.id}
        if s.coord is not None:
            record["coord"] = list(s.coord)
        if s.label is not None:
            record["label"] = s.label
        states.append(record)
    return to_jsonable({
        "name": model.name,
        "states": states,
        "metric": model.metric,
        "actions": list(model.actions),
        "cost": model.cost,
        "kernel": kernel,
        "continuity_class": model.continuity_class,
    })


def load_model(source: Union[str, Path, dict]) -> MdpModel:
    model = model_from_dict(read_document(source))
    logger.debug(f"Loaded model {model.name!r}: |X|={model.n_states}, |A|={model.n_actions}")
    return model


def save_model(model: MdpModel, path: Union[str, Path]) -> None:
    write_document(model_to_dict(model), path)
    logger.info(f"💾 Model {model.name!r} written to {path}")


# ----------------------------------------------------------------------------
# Policies
# ----------------------------------------------------------------------------
def policy_to_dict(policy: Policy) -> dict:
    return {"actions": list(policy.action_of)}


def load_policy(source: Union[str, Path, dict]) -> Policy:
    doc = read_document(source)
    try:
        return Policy(tuple(int(a) for a in doc["actions"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ModelError(f"malformed policy document: {e}") from e


def save_policy(policy: Policy, path: Union[str, Path]) -> None:
    write_document(policy_to_dict(policy), path)
