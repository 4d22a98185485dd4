"""Parameter-exploring policy gradients with symmetric sampling.

Candidates come in mirrored pairs mu +/- eps around the distribution mean,
which cancels reward-level noise in the mean gradient.  Rewards are
rank-normalized to [-0.5, 0.5] before use (average ranks, so exact ties map
to equal scores), making updates invariant to the reward's units; a moving
baseline centers the sigma gradient.  Sigma updates are additive and clamped
from below.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import rankdata

from ..core import LatentShape, SeededRng
from ..errors import BadConfig, OddPopulation, SizeMismatch
from ..genome import DIRECT, TRANSFORM, Genome, genome_dim, genome_from_vector
from .fitness import FitnessBatch

SIGMA_FLOOR = 1e-8


@dataclass(frozen=True, eq=False)
class PgpeState:
    mu: np.ndarray = field(repr=False)
    sigma: np.ndarray = field(repr=False)
    kind: str = DIRECT
    shape: LatentShape | None = None
    learn_rate_mu: float = 0.1
    learn_rate_sigma: float = 0.05
    baseline: float = 0.0
    step_count: int = 0
    next_id: int = 0

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=np.float64).reshape(-1)
        sigma = np.asarray(self.sigma, dtype=np.float64).reshape(-1)
        if mu.size != sigma.size:
            raise SizeMismatch("mu and sigma lengths differ")
        if not np.all(sigma >= SIGMA_FLOOR):
            raise BadConfig(f"sigma coordinates must be >= {SIGMA_FLOOR}")
        mu.setflags(write=False)
        sigma.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)


def centered_ranks(values: np.ndarray) -> np.ndarray:
    """Average-rank normalization onto [-0.5, 0.5]; ties score equally."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 1:
        return np.zeros(1)
    return (rankdata(v, method="average") - 1.0) / (v.size - 1.0) - 0.5


def pgpe_init(kind: str, shape: LatentShape, sigma0: float, rng: SeededRng,
              learn_rate_mu: float = 0.1,
              learn_rate_sigma: float = 0.05) -> PgpeState:
    """Center the search distribution on a fresh shell point."""
    if sigma0 <= 0:
        raise BadConfig(f"sigma0 must be positive, got {sigma0}")
    if kind not in (DIRECT, TRANSFORM):
        raise BadConfig(f"unknown genome kind {kind!r}")
    d = genome_dim(kind, shape)
    return PgpeState(mu=rng.gaussian(d), sigma=np.full(d, float(sigma0)),
                     kind=kind, shape=shape, learn_rate_mu=learn_rate_mu,
                     learn_rate_sigma=learn_rate_sigma)


def pgpe_propose(state: PgpeState, population: int,
                 rng: SeededRng) -> tuple[list[Genome], np.ndarray]:
    """P/2 perturbations emitted as interleaved pairs (mu+eps, mu-eps)."""
    if population % 2:
        raise OddPopulation(f"population must be even, got {population}")
    if population < 4:
        raise BadConfig(f"population must be >= 4, got {population}")
    d = state.mu.size
    half = population // 2
    eps = state.sigma * rng.gaussian(half * d).reshape(half, d)
    candidates = []
    for i in range(half):
        candidates.append(genome_from_vector(
            state.kind, state.mu + eps[i], state.shape,
            state.next_id + 2 * i))
        candidates.append(genome_from_vector(
            state.kind, state.mu - eps[i], state.shape,
            state.next_id + 2 * i + 1))
    return candidates, eps


def pgpe_update(state: PgpeState, eps: np.ndarray,
                fitness: FitnessBatch) -> PgpeState:
    """Symmetric-pair gradient step on mu and sigma with a reward baseline."""
    values = np.asarray(fitness.values, dtype=np.float64)
    if values.size != 2 * eps.shape[0]:
        raise SizeMismatch(
            f"{eps.shape[0]} pairs need {2 * eps.shape[0]} fitness values, "
            f"got {values.size}")
    scores = centered_ranks(values)
    plus, minus = scores[0::2], scores[1::2]
    mu_grad = ((plus - minus) / 2.0) @ eps / eps.shape[0]
    pair_mean = (plus + minus) / 2.0
    sigma_grad = (pair_mean - state.baseline) @ (
        (eps * eps - state.sigma ** 2) / state.sigma) / eps.shape[0]
    mu = state.mu + state.learn_rate_mu * mu_grad
    sigma = np.maximum(state.sigma + state.learn_rate_sigma * sigma_grad,
                       SIGMA_FLOOR)
    baseline = 0.9 * state.baseline + 0.1 * float(scores.mean())
    return replace(state, mu=mu, sigma=sigma, baseline=baseline,
                   step_count=state.step_count + 1,
                   next_id=max(state.next_id, max(fitness.ids) + 1))


def pgpe_state_to_json(state: PgpeState) -> dict:
    from ..core import floats_to_b64

    return {
        "engine": "pgpe",
        "mu": floats_to_b64(state.mu),
        "sigma": floats_to_b64(state.sigma),
        "kind": state.kind,
        "shape": list(state.shape.as_tuple()),
        "learn_rate_mu": state.learn_rate_mu,
        "learn_rate_sigma": state.learn_rate_sigma,
        "baseline": state.baseline,
        "step_count": state.step_count,
        "next_id": state.next_id,
    }


def pgpe_state_from_json(obj: dict) -> PgpeState:
    from ..core import floats_from_b64

    return PgpeState(
        mu=floats_from_b64(obj["mu"]), sigma=floats_from_b64(obj["sigma"]),
        kind=obj["kind"], shape=LatentShape(*obj["shape"]),
        learn_rate_mu=float(obj["learn_rate_mu"]),
        learn_rate_sigma=float(obj["learn_rate_sigma"]),
        baseline=float(obj["baseline"]),
        step_count=int(obj["step_count"]), next_id=int(obj["next_id"]))
