"""Dense tensor values at a point, with covariant/contravariant slot tags."""

from dataclasses import dataclass

import numpy as np

UPPER = "upper"
LOWER = "lower"


@dataclass(frozen=True)
class TensorValue:
    """A rank-k tensor at a single point.

    ``entries`` has one axis of size n per slot; ``variance`` tags each
    slot as ``"upper"`` (contravariant) or ``"lower"`` (covariant).
    """

    entries: np.ndarray
    variance: tuple

    def __post_init__(self):
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=float))
        if self.entries.ndim != len(self.variance):
            raise ValueError("variance length must match tensor rank")
        if any(v not in (UPPER, LOWER) for v in self.variance):
            raise ValueError("variance tags must be 'upper' or 'lower'")

    @property
    def rank(self):
        return self.entries.ndim

    @property
    def dim(self):
        return self.entries.shape[0] if self.rank else 0

    def raise_slot(self, slot, metric_inv):
        """Contract slot with the inverse metric, making it contravariant."""
        if self.variance[slot] != LOWER:
            raise ValueError(f"slot {slot} is already contravariant")
        entries = np.tensordot(self.entries, metric_inv, axes=([slot], [0]))
        entries = np.moveaxis(entries, -1, slot)
        variance = self.variance[:slot] + (UPPER,) + self.variance[slot + 1:]
        return TensorValue(entries, variance)

    def lower_slot(self, slot, metric):
        """Contract slot with the metric, making it covariant."""
        if self.variance[slot] != UPPER:
            raise ValueError(f"slot {slot} is already covariant")
        entries = np.tensordot(self.entries, metric, axes=([slot], [0]))
        entries = np.moveaxis(entries, -1, slot)
        variance = self.variance[:slot] + (LOWER,) + self.variance[slot + 1:]
        return TensorValue(entries, variance)
