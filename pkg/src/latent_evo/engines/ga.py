"""Cooperative genetic algorithm over latent or transform genomes.

Each step proposes the current population plus half as many offspring (an
extended set of 1.5 * P candidates), all of which are evaluated; survivors are
the top P by fitness.  Offspring come from tournament selection, uniform
crossover, and additive Gaussian mutation; a cross-member coordinate
permutation then shuffles values at random coordinate positions across all
non-elite candidates.  Uniform crossover and permutation both preserve
standard-normal coordinate marginals, which keeps a Gaussian-initialized
population on the high-density shell.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..core import LatentShape, SeededRng
from ..errors import BadConfig, NotEvaluated
from ..genome import DIRECT, TRANSFORM, Genome, genome_dim, genome_from_vector
from .fitness import FitnessBatch


@dataclass(frozen=True)
class GaConfig:
    """Operator rates; defaults follow the population-of-16 reference setup."""

    elite_count: int = 1
    tournament_size: int = 2
    mutation_sigma: float = 0.1
    mutation_prob: float = 0.5
    crossover_prob: float = 1.0
    permute_prob: float = 0.2

    def __post_init__(self):
        if self.elite_count < 0:
            raise BadConfig("elite_count must be non-negative")
        if self.tournament_size < 2:
            raise BadConfig("tournament_size must be at least 2")
        if self.mutation_sigma <= 0:
            raise BadConfig("mutation_sigma must be positive")
        for name in ("mutation_prob", "crossover_prob", "permute_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise BadConfig(f"{name} must be a probability, got {p}")


@dataclass(frozen=True, eq=False)
class GaState:
    """Population, its last-known fitnesses, and the operator configuration."""

    population: tuple[Genome, ...]
    fitnesses: np.ndarray | None
    config: GaConfig
    kind: str
    shape: LatentShape
    generation: int = 0
    next_id: int = 0

    def __post_init__(self):
        p = len(self.population)
        if p < 4 or p % 2:
            raise BadConfig(f"population must be even and >= 4, got {p}")
        if self.config.elite_count >= p:
            raise BadConfig("elite_count must be smaller than the population")

    @property
    def best(self) -> tuple[Genome, float] | None:
        """Best member and fitness of the current population, if evaluated."""
        if self.fitnesses is None:
            return None
        i = _ranking(self.fitnesses,
                     np.array([g.id for g in self.population]))[0]
        return self.population[i], float(self.fitnesses[i])


def _ranking(fitness: np.ndarray, ids: np.ndarray) -> np.ndarray:
    """Indices sorted best-first: higher fitness, ties to the lower id."""
    return np.lexsort((ids, -fitness))


def ga_init(population: int, kind: str, shape: LatentShape, config: GaConfig,
            rng: SeededRng) -> GaState:
    """Fresh population with i.i.d. standard-normal coordinates."""
    if population < 4 or population % 2:
        raise BadConfig(f"population must be even and >= 4, got {population}")
    if kind not in (DIRECT, TRANSFORM):
        raise BadConfig(f"unknown genome kind {kind!r}")
    d = genome_dim(kind, shape)
    members = tuple(
        genome_from_vector(kind, rng.child(i).gaussian(d), shape, i)
        for i in range(population))
    return GaState(members, None, config, kind, shape,
                   generation=0, next_id=population)


def uniform_crossover(parent_a: np.ndarray, parent_b: np.ndarray,
                      take_a_prob: float, rng: SeededRng) -> np.ndarray:
    """Child taking each coordinate from parent_a with the given probability."""
    mask = rng.uniform(parent_a.size) < take_a_prob
    return np.where(mask, parent_a, parent_b)


def _tournament(fitness: np.ndarray, ids: np.ndarray, size: int,
                rng: SeededRng) -> int:
    """Index of the tournament winner among uniformly sampled contestants."""
    contestants = rng.generator().integers(0, fitness.size, size=size)
    best = contestants[0]
    for i in contestants[1:]:
        if fitness[i] > fitness[best] or (
                fitness[i] == fitness[best] and ids[i] < ids[best]):
            best = i
    return int(best)


def ga_propose(state: GaState, rng: SeededRng) -> list[Genome]:
    """Extended candidate set: current members plus P/2 new offspring.

    A fresh state (no fitnesses yet) proposes its initial members unchanged
    as the parent block; offspring selection then falls back to the id
    tie-break, so every step evaluates the same 1.5 * P candidates and the
    evaluation budget is uniform from step one.
    """
    cfg = state.config
    pop = state.population
    p = len(pop)
    d = genome_dim(state.kind, state.shape)

    if state.fitnesses is None:
        if state.generation > 0:
            raise NotEvaluated("population has no fitnesses to select against")
        fitness = np.zeros(p)
    else:
        fitness = state.fitnesses
    ids = np.array([g.id for g in pop], dtype=np.int64)

    parents = np.stack([g.vector() for g in pop])
    offspring = np.empty((p // 2, d))
    for k in range(p // 2):
        i = _tournament(fitness, ids, cfg.tournament_size, rng.child(0, k, 0))
        j = _tournament(fitness, ids, cfg.tournament_size, rng.child(0, k, 1))
        cross_rng = rng.child(1, k)
        if cross_rng.uniform(1)[0] < cfg.crossover_prob:
            child = uniform_crossover(parents[i], parents[j], 0.5,
                                      cross_rng.child(0))
        else:
            child = parents[i].copy()
        mut_rng = rng.child(2, k)
        mut_mask = mut_rng.uniform(d) < cfg.mutation_prob
        if mut_mask.any():
            child = child + mut_mask * (
                cfg.mutation_sigma * mut_rng.child(0).gaussian(d))
        offspring[k] = child

    extended = np.concatenate([parents, offspring])

    # cross-member permutation: shuffle selected coordinate positions across
    # every candidate except the current elites
    elite_rows = set(int(i) for i in _ranking(fitness, ids)[:cfg.elite_count])
    movable = np.array([i for i in range(extended.shape[0])
                        if i not in elite_rows], dtype=np.intp)
    coords = np.nonzero(rng.child(3).uniform(d) < cfg.permute_prob)[0]
    shuffler = rng.child(4).generator()
    for c in coords:
        order = shuffler.permutation(movable.size)
        extended[movable, c] = extended[movable[order], c]

    # wrap candidates; any member whose coordinates changed gets a fresh id,
    # assigned in candidate order
    candidates: list[Genome] = []
    next_id = state.next_id
    for row in range(extended.shape[0]):
        if row < p and np.array_equal(extended[row], pop[row].vector()):
            candidates.append(pop[row])
            continue
        candidates.append(genome_from_vector(state.kind, extended[row],
                                             state.shape, next_id))
        next_id += 1
    return candidates


def ga_update(state: GaState, extended: list[Genome],
              fitness: FitnessBatch) -> GaState:
    """Keep the top P of the extended set; ties go to the lower id."""
    values = fitness.aligned_to(extended)
    ids = np.array([g.id for g in extended], dtype=np.int64)
    order = _ranking(values, ids)
    keep = order[:len(state.population)]
    new_pop = tuple(extended[i] for i in keep)
    new_fit = values[keep]
    next_id = max(state.next_id, int(ids.max()) + 1)
    return replace(state, population=new_pop, fitnesses=new_fit,
                   generation=state.generation + 1, next_id=next_id)


def ga_state_to_json(state: GaState) -> dict:
    """Snapshot for resumable runs; inverse of :func:`ga_state_from_json`."""
    from ..genome import genome_to_json

    return {
        "engine": "cosyne",
        "population": [genome_to_json(g) for g in state.population],
        "fitnesses": None if state.fitnesses is None
        else [float(v) for v in state.fitnesses],
        "config": {
            "elite_count": state.config.elite_count,
            "tournament_size": state.config.tournament_size,
            "mutation_sigma": state.config.mutation_sigma,
            "mutation_prob": state.config.mutation_prob,
            "crossover_prob": state.config.crossover_prob,
            "permute_prob": state.config.permute_prob,
        },
        "kind": state.kind,
        "shape": list(state.shape.as_tuple()),
        "generation": state.generation,
        "next_id": state.next_id,
    }


def ga_state_from_json(obj: dict) -> GaState:
    from ..genome import genome_from_json

    fitnesses = obj["fitnesses"]
    return GaState(
        population=tuple(genome_from_json(g) for g in obj["population"]),
        fitnesses=None if fitnesses is None else np.asarray(fitnesses),
        config=GaConfig(**obj["config"]),
        kind=obj["kind"],
        shape=LatentShape(*obj["shape"]),
        generation=int(obj["generation"]),
        next_id=int(obj["next_id"]))
