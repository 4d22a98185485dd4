import numpy as np
import pytest

from latent_evo import (DIRECT, BudgetLedger, Genome, LatentShape, SeededRng,
                        batch_evaluate, sample_standard_gaussian)
from latent_evo.errors import BadConfig, EvaluationFailed, MalformedOutput
from latent_evo.evaluate import THREADS_ENV, thread_cap

SHAPE = LatentShape(4, 2, 2)


class LatentPassthrough:
    latent_shape = SHAPE

    def generate(self, z):
        return z


def make_genomes(n, seed=0):
    rng = SeededRng(seed)
    return [Genome(DIRECT, i,
                   direct=sample_standard_gaussian(SHAPE, rng.child(i)))
            for i in range(n)]


def norm_scorer(z):
    return -float(np.sum(z.values ** 2))


def test_ledger_counts_one_per_candidate():
    genomes = make_genomes(24)
    ledger = BudgetLedger()
    batch_evaluate(genomes, None, LatentPassthrough(), norm_scorer, 8, ledger)
    assert ledger.reward_evaluations == 24
    assert ledger.generator_calls == 24


def test_batch_size_does_not_change_values():
    genomes = make_genomes(24, seed=1)
    results = {}
    for b in (1, 5, 24):
        batch = batch_evaluate(genomes, None, LatentPassthrough(),
                               norm_scorer, b)
        results[b] = batch.values
        assert batch.ids == tuple(range(24))
    assert np.array_equal(results[1], results[5])
    assert np.array_equal(results[1], results[24])


def test_batch_validation():
    with pytest.raises(BadConfig):
        batch_evaluate(make_genomes(4), None, LatentPassthrough(),
                       norm_scorer, 0)


def test_failures_carry_genome_ids():
    genomes = make_genomes(6, seed=2)

    def flaky(z):
        if abs(z.values[0]) > 0.2:
            raise MalformedOutput("boom")
        return 0.0

    with pytest.raises(EvaluationFailed) as err:
        batch_evaluate(genomes, None, LatentPassthrough(), flaky, 1)
    failures = err.value.failures
    assert failures, "expected at least one failing candidate"
    assert all(isinstance(e, MalformedOutput) for _, e in failures)
    failing_ids = {i for i, _ in failures}
    assert failing_ids <= set(range(6))


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "2")
    assert thread_cap() == 2
    monkeypatch.setenv(THREADS_ENV, "0")
    assert thread_cap() == 1
    monkeypatch.setenv(THREADS_ENV, "banana")
    with pytest.raises(BadConfig):
        thread_cap()
    monkeypatch.delenv(THREADS_ENV)
    assert thread_cap() >= 1
