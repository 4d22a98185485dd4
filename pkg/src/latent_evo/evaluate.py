"""Batched candidate evaluation and evaluation-budget accounting.

Each candidate is realized, generated, and scored independently, so results
are bit-identical however the set is batched; the batch size only bounds how
many evaluations run concurrently.  A batched evaluation of B candidates
counts as B reward evaluations.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import BadConfig, EvaluationFailed
from .genome import BaseNoise, Genome, realize
from .engines.fitness import FitnessBatch

THREADS_ENV = "LATENT_EVO_THREADS"


def thread_cap() -> int:
    """Evaluation parallelism limit from the environment (>= 1)."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise BadConfig(f"{THREADS_ENV} must be an integer, got {raw!r}")


class BudgetLedger:
    """Monotone counters of generator calls and reward evaluations."""

    def __init__(self):
        self._lock = threading.Lock()
        self.generator_calls = 0
        self.reward_evaluations = 0
        self.step_wall_ms: list[float] = []

    def record_evaluation(self, n: int = 1) -> None:
        with self._lock:
            self.generator_calls += n
            self.reward_evaluations += n

    def record_step_time(self, ms: float) -> None:
        with self._lock:
            self.step_wall_ms.append(float(ms))

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "generator_calls": self.generator_calls,
                "reward_evaluations": self.reward_evaluations,
            }


def batch_evaluate(genomes: list[Genome], base: BaseNoise | None, generator,
                   scorer, batch_size: int,
                   ledger: BudgetLedger | None = None) -> FitnessBatch:
    """Realize, generate, and score candidates in batches of ``batch_size``.

    Scoring is order-stable: values line up with the input list no matter the
    batch size or thread interleaving.  Per-candidate failures are collected
    and raised together as EvaluationFailed, tagged with genome ids.
    """
    if batch_size < 1:
        raise BadConfig(f"batch size must be >= 1, got {batch_size}")
    values = np.empty(len(genomes))
    failures: list[tuple[int, Exception]] = []

    def run_one(genome: Genome) -> float:
        img = generator.generate(realize(genome, base))
        score = float(scorer(img))
        if ledger is not None:
            ledger.record_evaluation()
        return score

    workers = min(batch_size, thread_cap())
    if workers == 1:
        for i, g in enumerate(genomes):
            try:
                values[i] = run_one(g)
            except Exception as exc:
                failures.append((g.id, exc))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for start in range(0, len(genomes), batch_size):
                chunk = genomes[start:start + batch_size]
                futures = [pool.submit(run_one, g) for g in chunk]
                for offset, fut in enumerate(futures):
                    try:
                        values[start + offset] = fut.result()
                    except Exception as exc:
                        failures.append((chunk[offset].id, exc))
    if failures:
        raise EvaluationFailed(failures)
    return FitnessBatch(tuple(g.id for g in genomes), values)
