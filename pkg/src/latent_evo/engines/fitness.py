"""Fitness values exchanged between the evaluator and the engines."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BadConfig, SizeMismatch


@dataclass(frozen=True)
class FitnessBatch:
    """Reward values for one generation, keyed by genome id.

    Higher is always better; minimization objectives are negated upstream.
    """

    ids: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if v.size != len(self.ids):
            raise SizeMismatch(
                f"{len(self.ids)} ids but {v.size} fitness values")
        if len(set(self.ids)) != len(self.ids):
            raise BadConfig("fitness ids must be unique")
        if not np.all(np.isfinite(v)):
            raise BadConfig("fitness values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "ids", tuple(int(i) for i in self.ids))

    def aligned_to(self, genomes) -> np.ndarray:
        """Values reordered to match a candidate list; SizeMismatch if short."""
        lookup = dict(zip(self.ids, self.values))
        wanted = [g.id for g in genomes]
        if len(wanted) != len(self.ids) or any(i not in lookup for i in wanted):
            raise SizeMismatch("fitness batch does not cover the candidate set")
        return np.array([lookup[i] for i in wanted], dtype=np.float64)
