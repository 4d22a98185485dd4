"""Acceptance suite: one test per criterion, one pass/fail line each.

Statistical criteria run on frozen seed sets, so outcomes are exactly
reproducible; thresholds and runtime budgets are asserted as stated.
A failed criterion shows up as the test failure itself; passed criteria
are listed in the "acceptance criteria" section of the run summary.
"""

import json
import sys
import time

import numpy as np
import pytest
from scipy import stats

from conftest import record_pass

import latent_evo as le
from latent_evo.cli import cli_main
from latent_evo.engines import (FitnessBatch, GaConfig, ga_init, ga_propose,
                                ga_update, pgpe_init, pgpe_propose,
                                pgpe_update, snes_init, snes_propose,
                                snes_update, uniform_crossover)
from latent_evo.errors import EvaluationFailed, MalformedOutput
from latent_evo.harness import (RunConfig, make_instances,
                                run_alignment, strip_wall_times)

SHAPE_16 = le.LatentShape(4, 2, 2)
SHAPE_256 = [4, 8, 8]
SHAPE_3072 = le.LatentShape(4, 24, 32)


def announce(name, detail):
    record_pass(name, detail)
    print(f"\nACCEPTANCE PASS {name}: {detail}")


class LatentPassthrough:
    """Feeds the latent straight to the scorer (latent-space objectives)."""

    def __init__(self, shape):
        self.latent_shape = shape

    def generate(self, z):
        return z


def toy_config(**overrides):
    base = {
        "version": 1,
        "algorithm": "cosyne",
        "solution_space": "direct",
        "population": 16,
        "batch": 16,
        "steps": 15,
        "seeds": [0],
        "generator": {"kind": "toy", "latent_shape": SHAPE_256,
                      "resolution": [64, 64], "decoder_seed": 0},
        "reward": {"kind": "target_mean",
                   "params": {"target_rgb": [134.0, 122.0, 130.0]}},
        "engine": {},
        "output_dir": None,
    }
    base.update(overrides)
    return RunConfig.from_dict(base)


def test_criterion_1_crossover_lemma():
    t0 = time.perf_counter()
    rng = le.SeededRng(0xC1)
    for tag, p in enumerate((0.1, 0.5, 0.9)):
        pooled = []
        n = 0
        for i in range(13):
            a = rng.child(tag, i, 0).gaussian(8192)
            b = rng.child(tag, i, 1).gaussian(8192)
            pooled.append(uniform_crossover(a, b, p, rng.child(tag, i, 2)))
            n += 8192
            if n >= 100000:
                break
        pooled = np.concatenate(pooled)[:100000]
        assert pooled.size == 100000
        result = stats.kstest(pooled, "norm")
        assert result.pvalue > 0.01, f"KS failed for p={p}"
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    announce("criterion-1",
             f"uniform crossover keeps N(0,1) marginals for p in "
             f"{{0.1, 0.5, 0.9}} (KS at 0.01, {elapsed:.1f}s)")


def test_criterion_2_shell_preservation():
    t0 = time.perf_counter()
    rng = le.SeededRng(0xC2)
    base = le.make_base_noise(SHAPE_3072, rng.child(0))
    base_norm = le.l2_norm(base.z_t)
    for i in range(1000):
        a = rng.child(1, i).gaussian(16).reshape(4, 4)
        q = le.qr_orthonormal(a)
        assert np.max(np.abs(q.T @ q - np.eye(4))) < 1e-10
        realized = le.realize(le.Genome(le.TRANSFORM, i, transform=a), base)
        assert abs(le.l2_norm(realized) - base_norm) <= 1e-9 * base_norm
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    announce("criterion-2",
             f"1000 channel-transform genomes stay on the base shell "
             f"(rel 1e-9; Q'Q within 1e-10, {elapsed:.1f}s)")


def test_criterion_3_evaluation_accounting():
    report = run_alignment(toy_config())
    assert report.runs[0].ledger["reward_evaluations"] == 360
    assert all(s.evals == 24 * s.step for s in report.runs[0].steps)

    bon = run_alignment(toy_config(algorithm="best_of_n", population=240,
                                   steps=1))
    assert bon.runs[0].ledger["reward_evaluations"] == 240

    st = ga_init(16, le.DIRECT, le.LatentShape(*SHAPE_256), GaConfig(),
                 le.SeededRng(1))
    assert len(ga_propose(st, le.SeededRng(2))) == 24
    announce("criterion-3",
             "exact budgets: cosyne P=16 S=15 -> 360, best-of-240 -> 240, "
             "intermediate population 24")


def test_criterion_4_optimizer_sanity_on_sphere():
    t0 = time.perf_counter()
    d = 16
    threshold = -0.01 * d

    def target_for(rng):
        return rng.child(100).gaussian(d)

    snes_hits = 0
    for seed in range(50):
        rng = le.SeededRng(40_000 + seed)
        target = target_for(rng)
        st = snes_init(le.DIRECT, SHAPE_16, 0.1, rng.child(1))
        best = -np.inf
        for t in range(200):
            cands, draws = snes_propose(st, 16, rng.child(2, t))
            vals = np.array([-np.sum((c.vector() - target) ** 2)
                             for c in cands])
            best = max(best, vals.max())
            if best > threshold:
                break
            st = snes_update(st, draws,
                             FitnessBatch(tuple(c.id for c in cands), vals))
        snes_hits += best > threshold
    assert snes_hits >= 45, f"SNES solved only {snes_hits}/50"

    pgpe_hits = 0
    for seed in range(50):
        rng = le.SeededRng(41_000 + seed)
        target = target_for(rng)
        # sigma0 / sigma learn rate chosen for the additive-sigma dynamics
        st = pgpe_init(le.DIRECT, SHAPE_16, 1.5, rng.child(1),
                       learn_rate_sigma=0.1)
        best = -np.inf
        for t in range(500):
            cands, eps = pgpe_propose(st, 16, rng.child(2, t))
            vals = np.array([-np.sum((c.vector() - target) ** 2)
                             for c in cands])
            best = max(best, vals.max())
            if best > threshold:
                break
            st = pgpe_update(st, eps,
                             FitnessBatch(tuple(c.id for c in cands), vals))
        pgpe_hits += best > threshold
    assert pgpe_hits >= 40, f"PGPE solved only {pgpe_hits}/50"

    monotone = 0
    for seed in range(50):
        rng = le.SeededRng(42_000 + seed)
        target = target_for(rng)
        st = ga_init(16, le.DIRECT, SHAPE_16, GaConfig(), rng.child(1))
        ok, last = True, -np.inf
        for t in range(60):
            cands = ga_propose(st, rng.child(2, t))
            vals = np.array([-np.sum((c.vector() - target) ** 2)
                             for c in cands])
            st = ga_update(st, cands,
                           FitnessBatch(tuple(c.id for c in cands), vals))
            best = st.best[1]
            ok = ok and best >= last
            last = best
        monotone += ok
    assert monotone == 50, f"GA monotone in only {monotone}/50 runs"

    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    announce("criterion-4",
             f"sphere sanity: SNES {snes_hits}/50, PGPE {pgpe_hits}/50, "
             f"GA monotone 50/50 ({elapsed:.0f}s)")


def test_criterion_5_sample_efficiency_ordering():
    t0 = time.perf_counter()
    instances = make_instances(60, master_seed=0)
    ga_beats_bon = ga_beats_zo = 0
    for k, inst in enumerate(instances):
        seed = 5000 + k
        gen = {"kind": "toy", "latent_shape": SHAPE_256,
               "resolution": [64, 64], "decoder_seed": inst.decoder_seed}
        reward = {"kind": "target_mean",
                  "params": {"target_rgb": list(inst.target_rgb)}}

        def best_for(algorithm, population, steps):
            cfg = toy_config(algorithm=algorithm, population=population,
                             steps=steps, seeds=[seed], generator=dict(gen),
                             reward=dict(reward))
            report = run_alignment(cfg)
            assert report.runs[0].ledger["reward_evaluations"] == 360
            return report.runs[0].steps[-1].cumulative_best

        ga = best_for("cosyne", 16, 15)       # 15 * 24 = 360
        bon = best_for("best_of_n", 360, 1)   # 360
        zo = best_for("zero_order", 24, 15)   # 15 * 24 = 360
        ga_beats_bon += ga > bon
        ga_beats_zo += ga > zo
    elapsed = time.perf_counter() - t0
    assert ga_beats_bon >= 48, f"GA beat Best-of-N on {ga_beats_bon}/60"
    assert ga_beats_zo >= 36, f"GA beat Zero-Order on {ga_beats_zo}/60"
    assert elapsed < 300.0
    announce("criterion-5",
             f"equal-budget (360) ordering: GA>BoN {ga_beats_bon}/60, "
             f"GA>ZO {ga_beats_zo}/60 ({elapsed:.0f}s)")


def test_criterion_6_diversity_dynamics():
    t0 = time.perf_counter()
    collapses = sustained = 0
    for seed in range(50):
        ga = run_alignment(toy_config(steps=50, seeds=[100 + seed]))
        ga_stds = [s.std for s in ga.runs[0].steps]
        # SNES benchmark config: sigma0 0.5 keeps its exploration moderate
        snes = run_alignment(toy_config(algorithm="snes", steps=50,
                                        seeds=[100 + seed],
                                        engine={"sigma0": 0.5}))
        snes_stds = [s.std for s in snes.runs[0].steps]
        collapses += ga_stds[-1] < ga_stds[0]
        sustained += snes_stds[-1] > ga_stds[-1]
    elapsed = time.perf_counter() - t0
    assert collapses >= 48, f"GA diversity collapsed in {collapses}/50"
    assert sustained >= 40, f"SNES out-diversified GA in {sustained}/50"
    assert elapsed < 600.0
    announce("criterion-6",
             f"diversity: GA std50<std1 in {collapses}/50, SNES std50 > "
             f"GA std50 in {sustained}/50 ({elapsed:.0f}s)")


def test_criterion_7_selection_pressure_ablation():
    t0 = time.perf_counter()
    shape = le.LatentShape(*SHAPE_256)
    dec = le.ToyDecoder(shape, 64, 64, decoder_seed=0)
    # a hard, unreachable target keeps selection pressure driving the decay
    target = np.array([152.0, 104.0, 150.0])

    def collapse_step(seed, tournament_size, steps=50):
        rng = le.SeededRng(seed)
        st = ga_init(16, le.DIRECT, shape,
                     GaConfig(tournament_size=tournament_size), rng.child(1))
        first = None
        for t in range(steps):
            cands = ga_propose(st, rng.child(2, t))
            vals = np.array([
                le.reward_target_mean(dec.generate(le.realize(c)), target)
                for c in cands])
            std = float(vals.std())
            if first is None:
                first = std
            if std < 0.25 * first:
                return t + 1
            st = ga_update(st, cands,
                           FitnessBatch(tuple(c.id for c in cands), vals))
        return steps + 1

    ordered = 0
    for seed in range(30):
        steps = [collapse_step(200 + seed, t) for t in (2, 4, 8)]
        ordered += steps[0] >= steps[1] >= steps[2]
    elapsed = time.perf_counter() - t0
    assert ordered >= 24, f"collapse step ordered in only {ordered}/30"
    announce("criterion-7",
             f"selection pressure: collapse step non-increasing over "
             f"tournament sizes 2/4/8 in {ordered}/30 seeds ({elapsed:.0f}s)")


def test_criterion_8_jpeg_reward_viability():
    t0 = time.perf_counter()
    shape = le.LatentShape(4, 4, 4)
    dec = le.ToyDecoder(shape, 128, 128, decoder_seed=0)

    def jpeg_bytes(genome):
        return le.reward_jpeg_size(dec.generate(le.realize(genome)))

    reduced = 0
    for seed in range(20):
        rng = le.SeededRng(1000 + seed)
        st = ga_init(16, le.DIRECT, shape, GaConfig(), rng.child(1))
        initial_best = min(jpeg_bytes(g) for g in st.population)
        best = initial_best
        for t in range(15):
            cands = ga_propose(st, rng.child(2, t))
            sizes = np.array([jpeg_bytes(c) for c in cands])
            best = min(best, float(sizes.min()))
            st = ga_update(st, cands,
                           FitnessBatch(tuple(c.id for c in cands), -sizes))
        reduced += best <= 0.8 * initial_best
    elapsed = time.perf_counter() - t0
    assert reduced >= 18, f"20% size cut reached in only {reduced}/20 seeds"
    assert elapsed < 180.0
    announce("criterion-8",
             f"jpeg minimization cut best size by >=20% in {reduced}/20 "
             f"seeds ({elapsed:.0f}s)")


def test_criterion_9_determinism_and_batch_invariance(tmp_path):
    out = tmp_path / "det"
    cfg = toy_config(steps=5, output_dir=str(out))
    run_alignment(cfg)
    first = (out / "report.json").read_bytes()
    run_alignment(cfg)
    second = (out / "report.json").read_bytes()
    norm = lambda raw: json.dumps(strip_wall_times(json.loads(raw)),
                                  sort_keys=True).encode()
    assert norm(first) == norm(second)

    shape = le.LatentShape(*SHAPE_256)
    dec = le.ToyDecoder(shape, 64, 64, decoder_seed=0)
    scorer = le.make_scorer(le.RewardSpec.target_mean([134, 122, 130]))
    rng = le.SeededRng(9)
    genomes = [le.Genome(le.DIRECT, i,
                         direct=le.sample_standard_gaussian(shape,
                                                            rng.child(i)))
               for i in range(24)]
    b1 = le.batch_evaluate(genomes, None, dec, scorer, 1)
    b16 = le.batch_evaluate(genomes, None, dec, scorer, 16)
    assert b1.ids == b16.ids
    assert np.array_equal(b1.values, b16.values)
    announce("criterion-9",
             "byte-identical reports modulo wall time; fitness invariant "
             "to batch size")


def test_criterion_10_subprocess_protocol(tmp_path):
    stub = tmp_path / "stub.py"
    assert cli_main(["gen-stub", "--out", str(stub)]) == 0

    ok_cfg = toy_config(
        steps=2, population=4, batch=2,
        generator={"kind": "subprocess", "latent_shape": [4, 2, 2],
                   "resolution": [8, 8],
                   "command": [sys.executable, str(stub), "--width", "8",
                               "--height", "8"]},
        output_dir=str(tmp_path / "ok"))
    report = run_alignment(ok_cfg)
    assert len(report.runs[0].steps) == 2
    assert (tmp_path / "ok" / "best.ppm").exists()

    bad_cfg = toy_config(
        steps=2, population=4, batch=2,
        generator={"kind": "subprocess", "latent_shape": [4, 2, 2],
                   "resolution": [8, 8],
                   "command": [sys.executable, str(stub), "--mode",
                               "truncate"]})
    with pytest.raises(EvaluationFailed) as err:
        run_alignment(bad_cfg)
    assert all(isinstance(e, MalformedOutput) for _, e in err.value.failures)
    announce("criterion-10",
             "stub round-trip completes a run; truncated output surfaces "
             "MalformedOutput cleanly")
