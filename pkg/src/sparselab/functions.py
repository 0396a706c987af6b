"""Step functions attached to atom partitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dyadic import AtomPartition
from .errors import ParameterError


@dataclass(frozen=True, eq=False)
class StepFunction:
    """A real-valued function that is constant on each atom of a partition."""

    partition: AtomPartition
    values: np.ndarray
    nonneg: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(self.partition),):
            raise ParameterError(
                f"expected {len(self.partition)} atom values, got shape {vals.shape}"
            )
        if self.nonneg and np.any(vals < 0):
            raise ParameterError("step function flagged nonnegative has a negative value")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def scaled(self, c: float) -> "StepFunction":
        return StepFunction(self.partition, c * self.values, nonneg=self.nonneg and c >= 0)
