"""Evolutionary search engines with a uniform propose/evaluate/update cycle.

Engines never touch the generator or the reward: they emit candidate genomes,
an external evaluator scores them, and the scores come back as a
:class:`FitnessBatch`.  Higher fitness is always better; minimization
objectives are negated at the reward boundary before they reach an engine.
"""

from __future__ import annotations

import numpy as np

from ..core import SeededRng
from ..errors import NotEvaluated
from ..genome import Genome
from .fitness import FitnessBatch
from .ga import GaConfig, GaState, ga_init, ga_propose, ga_state_from_json, \
    ga_state_to_json, ga_update, uniform_crossover
from .pgpe import PgpeState, pgpe_init, pgpe_propose, pgpe_state_from_json, \
    pgpe_state_to_json, pgpe_update
from .snes import SnesState, snes_init, snes_propose, snes_state_from_json, \
    snes_state_to_json, snes_update

__all__ = [
    "FitnessBatch",
    "GaConfig", "GaState", "ga_init", "ga_propose", "ga_update",
    "ga_state_to_json", "ga_state_from_json", "uniform_crossover",
    "SnesState", "snes_init", "snes_propose", "snes_update",
    "snes_state_to_json", "snes_state_from_json",
    "PgpeState", "pgpe_init", "pgpe_propose", "pgpe_update",
    "pgpe_state_to_json", "pgpe_state_from_json",
    "CosyneEngine", "SnesEngine", "PgpeEngine",
]


class CosyneEngine:
    """Ask/tell wrapper over the genetic-algorithm step functions."""

    def __init__(self, state: GaState):
        self.state = state
        self._pending: list[Genome] | None = None

    def propose(self, rng: SeededRng) -> list[Genome]:
        self._pending = ga_propose(self.state, rng)
        return self._pending

    def update(self, fitness: FitnessBatch) -> None:
        if self._pending is None:
            raise NotEvaluated("update called before propose")
        self.state = ga_update(self.state, self._pending, fitness)
        self._pending = None


class SnesEngine:
    """Ask/tell wrapper over the SNES step functions."""

    def __init__(self, state: SnesState, population: int):
        self.state = state
        self.population = int(population)
        self._draws: np.ndarray | None = None

    def propose(self, rng: SeededRng) -> list[Genome]:
        candidates, draws = snes_propose(self.state, self.population, rng)
        self._draws = draws
        return candidates

    def update(self, fitness: FitnessBatch) -> None:
        if self._draws is None:
            raise NotEvaluated("update called before propose")
        self.state = snes_update(self.state, self._draws, fitness)
        self._draws = None


class PgpeEngine:
    """Ask/tell wrapper over the PGPE step functions."""

    def __init__(self, state: PgpeState, population: int):
        self.state = state
        self.population = int(population)
        self._perturbations: np.ndarray | None = None

    def propose(self, rng: SeededRng) -> list[Genome]:
        candidates, eps = pgpe_propose(self.state, self.population, rng)
        self._perturbations = eps
        return candidates

    def update(self, fitness: FitnessBatch) -> None:
        if self._perturbations is None:
            raise NotEvaluated("update called before propose")
        self.state = pgpe_update(self.state, self._perturbations, fitness)
        self._perturbations = None
