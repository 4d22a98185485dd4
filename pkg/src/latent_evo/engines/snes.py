"""Separable natural evolution strategy.

Maintains a per-coordinate Gaussian search distribution (mu, sigma).  Updates
follow rank-based utilities along the estimated natural gradient: the mean
moves by sigma-scaled utility-weighted draws, and sigma is adapted
multiplicatively through an exponential map, so it stays strictly positive.
The mean is initialized from a fresh shell sample with a small sigma; a
zero-mean isotropic start would let early updates wander off the shell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..core import LatentShape, SeededRng
from ..errors import BadConfig, SizeMismatch
from ..genome import DIRECT, TRANSFORM, Genome, genome_dim, genome_from_vector
from .fitness import FitnessBatch


@dataclass(frozen=True, eq=False)
class SnesState:
    mu: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    kind: str = DIRECT
    shape: LatentShape | None = None
    learn_rate_mu: float = 1.0
    learn_rate_sigma: float = 0.0
    step_count: int = 0
    next_id: int = 0

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=np.float64).reshape(-1)
        sigma = np.asarray(self.sigma, dtype=np.float64).reshape(-1)
        if mu.size != sigma.size:
            raise SizeMismatch("mu and sigma lengths differ")
        if not np.all(sigma > 0.0):
            raise BadConfig("sigma coordinates must stay positive")
        mu.setflags(write=False)
        sigma.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)


def default_sigma_learn_rate(dim: int) -> float:
    """Standard SNES schedule: (3 + ln d) / (5 sqrt(d))."""
    return (3.0 + math.log(dim)) / (5.0 * math.sqrt(dim))


def rank_utilities(population: int) -> np.ndarray:
    """Log-rank utilities, best first: normalized to sum 1, shifted by -1/P."""
    raw = np.maximum(0.0, np.log(population / 2.0 + 1.0)
                     - np.log(np.arange(1, population + 1)))
    return raw / raw.sum() - 1.0 / population


def snes_init(kind: str, shape: LatentShape, sigma0: float, rng: SeededRng,
              learn_rate_mu: float = 1.0,
              learn_rate_sigma: float | None = None) -> SnesState:
    """Center the search distribution on a fresh shell point."""
    if sigma0 <= 0:
        raise BadConfig(f"sigma0 must be positive, got {sigma0}")
    if kind not in (DIRECT, TRANSFORM):
        raise BadConfig(f"unknown genome kind {kind!r}")
    d = genome_dim(kind, shape)
    if learn_rate_sigma is None:
        learn_rate_sigma = default_sigma_learn_rate(d)
    return SnesState(mu=rng.gaussian(d), sigma=np.full(d, float(sigma0)),
                     kind=kind, shape=shape, learn_rate_mu=learn_rate_mu,
                     learn_rate_sigma=learn_rate_sigma)


def snes_propose(state: SnesState, population: int,
                 rng: SeededRng) -> tuple[list[Genome], np.ndarray]:
    """Sample candidates mu + sigma * s_i; returns them with the raw draws."""
    if population < 4:
        raise BadConfig(f"population must be >= 4, got {population}")
    d = state.mu.size
    draws = rng.gaussian(population * d).reshape(population, d)
    candidates = [
        genome_from_vector(state.kind, state.mu + state.sigma * draws[i],
                           state.shape, state.next_id + i)
        for i in range(population)
    ]
    return candidates, draws


def snes_update(state: SnesState, draws: np.ndarray,
                fitness: FitnessBatch) -> SnesState:
    """Natural-gradient step from rank utilities over the stored draws."""
    values = np.asarray(fitness.values, dtype=np.float64)
    if draws.shape[0] != values.size:
        raise SizeMismatch(
            f"{draws.shape[0]} draws but {values.size} fitness values")
    # best first; ties keep draw order
    order = np.argsort(-values, kind="stable")
    utilities = rank_utilities(values.size)
    s = draws[order]
    grad_mu = utilities @ s
    grad_sigma = utilities @ (s * s - 1.0)
    mu = state.mu + state.learn_rate_mu * state.sigma * grad_mu
    sigma = state.sigma * np.exp(0.5 * state.learn_rate_sigma * grad_sigma)
    return replace(state, mu=mu, sigma=sigma,
                   step_count=state.step_count + 1,
                   next_id=max(state.next_id, max(fitness.ids) + 1))


def snes_state_to_json(state: SnesState) -> dict:
    from ..core import floats_to_b64

    return {
        "engine": "snes",
        "mu": floats_to_b64(state.mu),
        "sigma": floats_to_b64(state.sigma),
        "kind": state.kind,
        "shape": list(state.shape.as_tuple()),
        "learn_rate_mu": state.learn_rate_mu,
        "learn_rate_sigma": state.learn_rate_sigma,
        "step_count": state.step_count,
        "next_id": state.next_id,
    }


def snes_state_from_json(obj: dict) -> SnesState:
    from ..core import floats_from_b64

    return SnesState(
        mu=floats_from_b64(obj["mu"]), sigma=floats_from_b64(obj["sigma"]),
        kind=obj["kind"], shape=LatentShape(*obj["shape"]),
        learn_rate_mu=float(obj["learn_rate_mu"]),
        learn_rate_sigma=float(obj["learn_rate_sigma"]),
        step_count=int(obj["step_count"]), next_id=int(obj["next_id"]))
