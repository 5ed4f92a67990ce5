"""
Discount schedules alpha_0 < alpha_1 < ... < alpha_{n_max} < 1
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from core.errors import ModelError

GEOMETRIC = "geometric"
HARMONIC = "harmonic"
LIST = "list"


@dataclass(frozen=True)
class DiscountSchedule:
    kind: str
    values: Tuple[float, ...]
    gamma: Optional[float] = None
    window: Optional[int] = None

    def __post_init__(self):
        values = tuple(float(a) for a in self.values)
        if not values:
            raise ModelError("discount schedule is empty")
        if any(not 0 <= a < 1 for a in values):
            raise ModelError(f"discount factors must lie in [0,1): {values}")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ModelError(f"discount schedule is not strictly increasing: {values}")
        if self.window is not None and not 1 <= self.window <= len(values):
            raise ModelError(f"tail window {self.window} outside 1..{len(values)}")
        object.__setattr__(self, "values", values)

    @classmethod
    def geometric(cls, gamma: float, n_max: int, window: Optional[int] = None) -> "DiscountSchedule":
        """alpha_n = 1 - gamma^(n+1)"""
        if not 0 < gamma < 1:
            raise ModelError(f"geometric ratio must lie in (0,1), got {gamma}")
        _check_n_max(n_max)
        return cls(GEOMETRIC, tuple(1 - gamma ** (n + 1) for n in range(n_max + 1)), gamma=gamma, window=window)

    @classmethod
    def harmonic(cls, n_max: int, window: Optional[int] = None) -> "DiscountSchedule":
        """alpha_n = 1 - 1/(n+2)"""
        _check_n_max(n_max)
        return cls(HARMONIC, tuple(1 - 1 / (n + 2) for n in range(n_max + 1)), window=window)

    @classmethod
    def from_list(cls, values: Sequence[float], window: Optional[int] = None) -> "DiscountSchedule":
        return cls(LIST, tuple(values), window=window)

    @classmethod
    def parse(cls, text: str, window: Optional[int] = None) -> "DiscountSchedule":
        """Accepts geometric:<gamma>:<n_max>, harmonic:<n_max> or list:a0,a1,..."""
        kind, _, rest = text.strip().partition(":")
        try:
            if kind == GEOMETRIC:
                gamma, n_max = rest.split(":")
                return cls.geometric(float(gamma), int(n_max), window)
            if kind == HARMONIC:
                return cls.harmonic(int(rest), window)
            if kind == LIST:
                return cls.from_list([float(a) for a in rest.split(",")], window)
        except ValueError as e:
            raise ModelError(f"malformed schedule {text!r}: {e}") from e
        raise ModelError(f"unknown schedule kind in {text!r} (expected geometric, harmonic or list)")

    def spec(self) -> str:
        if self.kind == GEOMETRIC:
            return f"{GEOMETRIC}:{self.gamma!r}:{self.n_max}"
        if self.kind == HARMONIC:
            return f"{HARMONIC}:{self.n_max}"
        return f"{LIST}:" + ",".join(repr(a) for a in self.values)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    @property
    def tail_window(self) -> int:
        """Last ceil(n_max/3) indices unless set explicitly"""
        if self.window is not None:
            return self.window
        return max(1, math.ceil(self.n_max / 3))

    @property
    def tail_start(self) -> int:
        return self.n_max + 1 - self.tail_window

    def tail_indices(self) -> range:
        return range(self.tail_start, self.n_max + 1)

    def __len__(self):
        return len(self.values)


def _check_n_max(n_max: int):
    if n_max < 0:
        raise ModelError(f"n_max must be nonnegative, got {n_max}")
