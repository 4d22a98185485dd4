import numpy as np
import pytest

from latent_evo import (BudgetLedger, LatentShape, SeededRng,
                        best_of_n, sample_standard_gaussian, zero_order_init,
                        zero_order_step)
from latent_evo.errors import BadConfig

SHAPE_16 = LatentShape(4, 2, 2)


class LatentPassthrough:
    """Generator stand-in handing the latent straight to the scorer."""

    def __init__(self, shape):
        self.latent_shape = shape

    def generate(self, z):
        return z


def sphere_scorer(target):
    return lambda z: -float(np.sum((z.values - target) ** 2))


def test_best_of_one_returns_the_sample():
    gen = LatentPassthrough(SHAPE_16)
    rng = SeededRng(0)
    result = best_of_n(gen, sphere_scorer(np.zeros(16)), 1, rng)
    expected = sample_standard_gaussian(SHAPE_16, rng.child(0))
    assert np.array_equal(result.best_latent.values, expected.values)
    assert result.rewards.shape == (1,)


def test_best_of_n_budget_and_validation():
    gen = LatentPassthrough(SHAPE_16)
    ledger = BudgetLedger()
    best_of_n(gen, sphere_scorer(np.zeros(16)), 240, SeededRng(1),
              batch_size=32, ledger=ledger)
    assert ledger.reward_evaluations == 240
    with pytest.raises(BadConfig):
        best_of_n(gen, sphere_scorer(np.zeros(16)), 0, SeededRng(1))


def test_best_of_n_superset_dominates():
    gen = LatentPassthrough(SHAPE_16)
    scorer = sphere_scorer(SeededRng(2).gaussian(16))
    small = best_of_n(gen, scorer, 10, SeededRng(3))
    large = best_of_n(gen, scorer, 100, SeededRng(3))
    # the first 10 draws of the large run are exactly the small run
    assert np.array_equal(large.rewards[:10], small.rewards)
    assert large.best_reward >= small.best_reward


def test_zero_order_scale_zero_keeps_pivot():
    gen = LatentPassthrough(SHAPE_16)
    state = zero_order_init(SHAPE_16, SeededRng(4), scale=0.0)
    result = zero_order_step(state, 8, SeededRng(5), gen,
                             sphere_scorer(np.zeros(16)))
    assert np.array_equal(result.state.pivot.values, state.pivot.values)
    assert np.all(result.fitness.values == result.fitness.values[0])


def test_zero_order_candidates_stay_on_the_pivot_shell():
    captured = []

    class Capture(LatentPassthrough):
        def generate(self, z):
            captured.append(z)
            return z

    gen = Capture(SHAPE_16)
    state = zero_order_init(SHAPE_16, SeededRng(6), scale=0.7)
    zero_order_step(state, 16, SeededRng(7), gen, sphere_scorer(np.zeros(16)))
    pivot_norm = np.linalg.norm(state.pivot.values)
    for z in captured:
        assert abs(np.linalg.norm(z.values) - pivot_norm) <= 1e-9 * pivot_norm


def test_zero_order_reward_monotone_and_budget():
    gen = LatentPassthrough(SHAPE_16)
    scorer = sphere_scorer(SeededRng(8).gaussian(16))
    ledger = BudgetLedger()
    state = zero_order_init(SHAPE_16, SeededRng(9), scale=0.3)
    last = float("-inf")
    rng = SeededRng(10)
    for t in range(15):
        result = zero_order_step(state, 16, rng.child(t), gen, scorer,
                                 ledger=ledger)
        state = result.state
        assert state.pivot_reward >= last
        last = state.pivot_reward
    assert ledger.reward_evaluations == 240  # 15 steps x 16 candidates


def test_zero_order_hill_climbs_the_sphere():
    gen = LatentPassthrough(SHAPE_16)
    improved = 0
    for seed in range(100):
        rng = SeededRng(3000 + seed)
        target = rng.child(0).gaussian(16)
        scorer = sphere_scorer(target)
        state = zero_order_init(SHAPE_16, rng.child(1), scale=0.3)
        initial = scorer(state.pivot)
        for t in range(50):
            state = zero_order_step(state, 16, rng.child(2, t), gen,
                                    scorer).state
        improved += state.pivot_reward > initial
    assert improved >= 95
