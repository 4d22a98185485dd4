"""Black-box baselines: Best-of-N sampling and zero-order hill climbing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LatentShape, LatentTensor, SeededRng, sample_standard_gaussian
from .engines.fitness import FitnessBatch
from .errors import BadConfig
from .evaluate import BudgetLedger, batch_evaluate
from .genome import DIRECT, Genome


@dataclass(frozen=True)
class BestOfNResult:
    best_latent: LatentTensor
    best_reward: float
    rewards: np.ndarray


def best_of_n(generator, scorer, n: int, rng: SeededRng, batch_size: int = 16,
              ledger: BudgetLedger | None = None,
              shape: LatentShape | None = None) -> BestOfNResult:
    """Draw n independent shell samples and keep the best; ties to the first.

    Exactly n reward evaluations are recorded, independent of batching.
    """
    if n < 1:
        raise BadConfig(f"n must be >= 1, got {n}")
    latent_shape = shape or generator.latent_shape
    genomes = [
        Genome(DIRECT, i,
               direct=sample_standard_gaussian(latent_shape, rng.child(i)))
        for i in range(n)
    ]
    batch = batch_evaluate(genomes, None, generator, scorer, batch_size, ledger)
    best = int(np.argmax(batch.values))  # argmax takes the first on ties
    return BestOfNResult(genomes[best].direct, float(batch.values[best]),
                         np.array(batch.values))


@dataclass(frozen=True)
class ZoState:
    """Hill-climbing pivot; reward is -inf until the first step evaluates."""

    pivot: LatentTensor
    pivot_reward: float
    scale: float

    def __post_init__(self):
        if self.scale < 0:
            raise BadConfig(f"neighborhood scale must be >= 0, got {self.scale}")


def zero_order_init(shape: LatentShape, rng: SeededRng,
                    scale: float = 0.3) -> ZoState:
    """Fresh pivot on the shell.

    The pivot starts unevaluated (reward -inf) so the first step both scores
    the first neighborhood and adopts its best member; a run of S steps with
    P neighbors then costs exactly S * P evaluations.
    """
    return ZoState(sample_standard_gaussian(shape, rng), float("-inf"), scale)


@dataclass(frozen=True)
class ZoStepResult:
    state: ZoState
    fitness: FitnessBatch
    moved: bool


def zero_order_step(state: ZoState, population: int, rng: SeededRng,
                    generator, scorer, batch_size: int = 16,
                    ledger: BudgetLedger | None = None) -> ZoStepResult:
    """Evaluate P norm-preserving neighbors; move greedily on improvement.

    Neighbors are pivot + scale * g renormalized to the pivot's own norm, so
    every candidate sits on the pivot's shell exactly.
    """
    if population < 1:
        raise BadConfig(f"population must be >= 1, got {population}")
    pivot = state.pivot.values
    pivot_norm = float(np.linalg.norm(pivot))
    shape = state.pivot.shape
    candidates = []
    for i in range(population):
        step = rng.child(i).gaussian(shape.dim)
        moved = pivot + state.scale * step
        moved = moved * (pivot_norm / np.linalg.norm(moved))
        candidates.append(Genome(DIRECT, i, direct=LatentTensor(shape, moved)))
    batch = batch_evaluate(candidates, None, generator, scorer, batch_size,
                           ledger)
    best = int(np.argmax(batch.values))
    if batch.values[best] > state.pivot_reward:
        new_state = ZoState(candidates[best].direct,
                            float(batch.values[best]), state.scale)
        return ZoStepResult(new_state, batch, True)
    return ZoStepResult(state, batch, False)
