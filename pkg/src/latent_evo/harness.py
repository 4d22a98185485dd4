"""Experiment orchestration: configs, the run loop, reports, and aggregation.

A run executes one algorithm over one (generator, reward) pair for a list of
seeds, recording per-step statistics and exact evaluation budgets.  Reports
serialize to JSON and round-trip losslessly; aggregation reproduces the
best-sample / mean-sample table convention and flags unequal budgets.
"""

from __future__ import annotations

import base64
import csv
import io
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .baselines import best_of_n, zero_order_init, zero_order_step
from .core import LatentShape, SeededRng, tensor_to_bytes
from .engines import CosyneEngine, GaConfig, PgpeEngine, SnesEngine, ga_init, \
    pgpe_init, snes_init
from .errors import ConfigError, HeterogeneousReward, IoError, \
    NotPopulationAlgorithm
from .evaluate import BudgetLedger, batch_evaluate
from .generators import SubprocessGenerator, ToyDecoder
from .genome import DIRECT, TRANSFORM, Genome, genome_to_json, \
    make_base_noise, realize
from .images import write_ppm
from .rewards import JPEG_SIZE, MAXIMIZE, MINIMIZE, RewardSpec, make_scorer

CONFIG_VERSION = 1
REPORT_VERSION = 1

COSYNE = "cosyne"
SNES = "snes"
PGPE = "pgpe"
BEST_OF_N = "best_of_n"
ZERO_ORDER = "zero_order"

ALGORITHMS = (COSYNE, SNES, PGPE, BEST_OF_N, ZERO_ORDER)

STEP_PRESETS = {"short": 15, "long": 50}

_ENGINE_KEYS = {
    COSYNE: {"elite_count", "tournament_size", "mutation_sigma",
             "mutation_prob", "crossover_prob", "permute_prob"},
    SNES: {"sigma0", "learn_rate_mu", "learn_rate_sigma"},
    PGPE: {"sigma0", "learn_rate_mu", "learn_rate_sigma"},
    BEST_OF_N: set(),
    ZERO_ORDER: {"scale"},
}


def _require_keys(obj: dict, allowed: set, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")


@dataclass(frozen=True)
class GeneratorConfig:
    """Which generator to build and how."""

    kind: str
    latent_shape: LatentShape
    width: int = 64
    height: int = 64
    decoder_seed: int = 0
    command: tuple[str, ...] = ()
    timeout_s: float = 30.0

    def __post_init__(self):
        if self.kind not in ("toy", "subprocess"):
            raise ConfigError(f"unknown generator kind {self.kind!r}")
        if self.kind == "subprocess" and not self.command:
            raise ConfigError("subprocess generator needs a command")

    def build(self):
        if self.kind == "toy":
            return ToyDecoder(self.latent_shape, self.width, self.height,
                              self.decoder_seed)
        return SubprocessGenerator(self.latent_shape, self.width, self.height,
                                   list(self.command), self.timeout_s)

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind,
            "latent_shape": list(self.latent_shape.as_tuple()),
            "resolution": [self.width, self.height],
        }
        if self.kind == "toy":
            out["decoder_seed"] = self.decoder_seed
        else:
            out["command"] = list(self.command)
            out["timeout_s"] = self.timeout_s
        return out

    @staticmethod
    def from_dict(obj: dict) -> "GeneratorConfig":
        _require_keys(obj, {"kind", "latent_shape", "resolution",
                            "decoder_seed", "command", "timeout_s"},
                      "generator")
        try:
            kind = obj["kind"]
            c, h, w = (int(v) for v in obj["latent_shape"])
            res = obj.get("resolution", [64, 64])
            width, height = int(res[0]), int(res[1])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed generator config: {exc}") from exc
        return GeneratorConfig(
            kind=kind, latent_shape=LatentShape(c, h, w),
            width=width, height=height,
            decoder_seed=int(obj.get("decoder_seed", 0)),
            command=tuple(obj.get("command", ())),
            timeout_s=float(obj.get("timeout_s", 30.0)))


def _reward_from_dict(obj: dict) -> RewardSpec:
    _require_keys(obj, {"kind", "direction", "params"}, "reward")
    try:
        kind = obj["kind"]
    except KeyError as exc:
        raise ConfigError("reward config needs a kind") from exc
    direction = obj.get("direction",
                        MINIMIZE if kind == JPEG_SIZE else MAXIMIZE)
    try:
        return RewardSpec(kind, direction, dict(obj.get("params", {})))
    except Exception as exc:
        raise ConfigError(f"malformed reward config: {exc}") from exc


def _reward_to_dict(spec: RewardSpec) -> dict:
    return {"kind": spec.kind, "direction": spec.direction,
            "params": dict(spec.params)}


@dataclass(frozen=True)
class RunConfig:
    """Everything one experiment run needs, JSON-serializable."""

    algorithm: str
    generator: GeneratorConfig
    reward: RewardSpec
    solution_space: str = DIRECT
    population: int = 16
    batch: int = 16
    steps: int = 15
    seeds: tuple[int, ...] = (0,)
    engine: dict = field(default_factory=dict)
    output_dir: str | None = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.solution_space not in (DIRECT, TRANSFORM):
            raise ConfigError(
                f"unknown solution space {self.solution_space!r}")
        if self.algorithm in (BEST_OF_N, ZERO_ORDER) \
                and self.solution_space != DIRECT:
            raise ConfigError(
                f"{self.algorithm} searches latents directly; "
                f"solution_space must be 'direct'")
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps}")
        if self.algorithm == BEST_OF_N and self.steps != 1:
            raise ConfigError("best_of_n is single-step; set steps to 1")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if self.population < 1:
            raise ConfigError("population must be positive")
        if self.algorithm in (COSYNE, PGPE) and (
                self.population < 4 or self.population % 2):
            raise ConfigError(
                f"{self.algorithm} needs an even population >= 4")
        if self.algorithm == SNES and self.population < 4:
            raise ConfigError("snes needs a population >= 4")
        if self.batch < 1:
            raise ConfigError("batch must be >= 1")
        if self.batch > self.evaluations_per_step():
            raise ConfigError(
                f"batch {self.batch} exceeds the evaluated set of "
                f"{self.evaluations_per_step()}")
        _require_keys(self.engine, _ENGINE_KEYS[self.algorithm],
                      f"engine ({self.algorithm})")
        object.__setattr__(self, "seeds",
                           tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "engine", dict(self.engine))

    def evaluations_per_step(self) -> int:
        """Size of the evaluated candidate set at every step."""
        if self.algorithm == COSYNE:
            return self.population + self.population // 2
        return self.population

    def expected_evaluations(self) -> int:
        """Closed-form reward-evaluation total for one seed."""
        if self.algorithm == BEST_OF_N:
            return self.population
        return self.steps * self.evaluations_per_step()

    def to_dict(self) -> dict:
        return {
            "version": CONFIG_VERSION,
            "algorithm": self.algorithm,
            "solution_space": self.solution_space,
            "population": self.population,
            "batch": self.batch,
            "steps": self.steps,
            "seeds": list(self.seeds),
            "generator": self.generator.to_dict(),
            "reward": _reward_to_dict(self.reward),
            "engine": dict(self.engine),
            "output_dir": self.output_dir,
        }

    @staticmethod
    def from_dict(obj: dict) -> "RunConfig":
        _require_keys(obj, {"version", "algorithm", "solution_space",
                            "population", "batch", "steps", "seeds",
                            "generator", "reward", "engine", "output_dir"},
                      "run config")
        version = obj.get("version", CONFIG_VERSION)
        if version != CONFIG_VERSION:
            raise ConfigError(f"unsupported config version {version}")
        for key in ("algorithm", "generator", "reward"):
            if key not in obj:
                raise ConfigError(f"run config is missing {key!r}")
        steps = obj.get("steps", 15)
        if isinstance(steps, str):
            if steps not in STEP_PRESETS:
                raise ConfigError(
                    f"steps preset must be one of {sorted(STEP_PRESETS)}, "
                    f"got {steps!r}")
            steps = STEP_PRESETS[steps]
        try:
            return RunConfig(
                algorithm=obj["algorithm"],
                generator=GeneratorConfig.from_dict(obj["generator"]),
                reward=_reward_from_dict(obj["reward"]),
                solution_space=obj.get("solution_space", DIRECT),
                population=int(obj.get("population", 16)),
                batch=int(obj.get("batch", 16)),
                steps=int(steps),
                seeds=tuple(obj.get("seeds", (0,))),
                engine=dict(obj.get("engine", {})),
                output_dir=obj.get("output_dir"))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed run config: {exc}") from exc

    @staticmethod
    def load(path) -> "RunConfig":
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            obj = json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {p} is not valid JSON: {exc}") \
                from exc
        return RunConfig.from_dict(obj)


def population_std(values: np.ndarray) -> float:
    """Population (divide-by-n) standard deviation."""
    return float(np.std(np.asarray(values, dtype=np.float64)))


def lower_median(values: np.ndarray) -> float:
    """Exact middle element; the lower of the two middles for even sizes."""
    s = np.sort(np.asarray(values, dtype=np.float64))
    return float(s[(s.size - 1) // 2])


@dataclass(frozen=True)
class StepStats:
    """Statistics of the evaluated candidate set at one step."""

    step: int
    best: float
    mean: float
    median: float
    std: float
    cumulative_best: float
    evals: int
    wall_ms: float

    @staticmethod
    def from_values(step: int, values: np.ndarray, cumulative_best: float,
                    evals: int, wall_ms: float) -> "StepStats":
        v = np.asarray(values, dtype=np.float64)
        return StepStats(step=step, best=float(v.max()), mean=float(v.mean()),
                         median=lower_median(v), std=population_std(v),
                         cumulative_best=cumulative_best, evals=evals,
                         wall_ms=wall_ms)

    def to_dict(self) -> dict:
        return {"step": self.step, "best": self.best, "mean": self.mean,
                "median": self.median, "std": self.std,
                "cumulative_best": self.cumulative_best,
                "evals": self.evals, "wall_ms": self.wall_ms}

    @staticmethod
    def from_dict(obj: dict) -> "StepStats":
        return StepStats(step=int(obj["step"]), best=float(obj["best"]),
                         mean=float(obj["mean"]), median=float(obj["median"]),
                         std=float(obj["std"]),
                         cumulative_best=float(obj["cumulative_best"]),
                         evals=int(obj["evals"]),
                         wall_ms=float(obj["wall_ms"]))


@dataclass(frozen=True)
class SeedRun:
    """One seed's trajectory and final best."""

    seed: int
    steps: tuple[StepStats, ...]
    best_genome: dict
    best_latent: str  # base64 latent container of the realized best
    best_fitness: float
    best_raw: float
    best_image: str | None
    ledger: dict
    wall_ms: float

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "steps": [s.to_dict() for s in self.steps],
            "final": {
                "best_genome": self.best_genome,
                "best_latent": self.best_latent,
                "best_fitness": self.best_fitness,
                "best_raw": self.best_raw,
                "best_image": self.best_image,
            },
            "ledger": dict(self.ledger),
            "wall_ms": self.wall_ms,
        }

    @staticmethod
    def from_dict(obj: dict) -> "SeedRun":
        final = obj["final"]
        return SeedRun(
            seed=int(obj["seed"]),
            steps=tuple(StepStats.from_dict(s) for s in obj["steps"]),
            best_genome=dict(final["best_genome"]),
            best_latent=final["best_latent"],
            best_fitness=float(final["best_fitness"]),
            best_raw=float(final["best_raw"]),
            best_image=final["best_image"],
            ledger=dict(obj["ledger"]),
            wall_ms=float(obj["wall_ms"]))


@dataclass(frozen=True)
class RunReport:
    """Config echo, per-seed trajectories, and cross-seed aggregates."""

    config: dict
    runs: tuple[SeedRun, ...]
    aggregate: dict

    def to_dict(self) -> dict:
        return {
            "format": "latent-evo-report",
            "version": REPORT_VERSION,
            "config": dict(self.config),
            "runs": [r.to_dict() for r in self.runs],
            "aggregate": dict(self.aggregate),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @staticmethod
    def from_dict(obj: dict) -> "RunReport":
        if obj.get("format") != "latent-evo-report":
            raise IoError("not a latent-evo report")
        if obj.get("version") != REPORT_VERSION:
            raise IoError(f"unsupported report version {obj.get('version')}")
        return RunReport(config=dict(obj["config"]),
                         runs=tuple(SeedRun.from_dict(r)
                                    for r in obj["runs"]),
                         aggregate=dict(obj["aggregate"]))

    @staticmethod
    def from_json(text: str) -> "RunReport":
        return RunReport.from_dict(json.loads(text))

    @staticmethod
    def load(path) -> "RunReport":
        p = Path(path)
        if not p.exists():
            raise IoError(f"report file not found: {p}")
        return RunReport.from_json(p.read_text())


def compute_aggregate(runs) -> dict:
    """Cross-seed aggregates, recomputable from the per-step records."""
    best = np.array([r.steps[-1].cumulative_best for r in runs])
    mean_sample = np.array([r.steps[-1].mean for r in runs])
    return {
        "runs": len(runs),
        "best_sample_mean": float(best.mean()),
        "best_sample_std": population_std(best),
        "mean_sample_mean": float(mean_sample.mean()),
    }


def _drive_engine(config: RunConfig, engine, base, generator, scorer,
                  ledger, root: SeededRng, on_step) -> tuple[Genome, float]:
    best_genome, best_fitness = None, float("-inf")
    for t in range(1, config.steps + 1):
        t0 = time.perf_counter()
        candidates = engine.propose(root.child(2, t))
        batch = batch_evaluate(candidates, base, generator, scorer,
                               config.batch, ledger)
        i = int(np.argmax(batch.values))
        if batch.values[i] > best_fitness:
            best_genome, best_fitness = candidates[i], float(batch.values[i])
        engine.update(batch)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        ledger.record_step_time(wall_ms)
        on_step(t, batch.values, best_fitness, wall_ms)
    return best_genome, best_fitness


def _run_seed(config: RunConfig, seed: int):
    root = SeededRng(seed)
    shape = config.generator.latent_shape
    base = make_base_noise(shape, root.child(0)) \
        if config.solution_space == TRANSFORM else None
    generator = config.generator.build()
    scorer = make_scorer(config.reward)
    ledger = BudgetLedger()
    stats: list[StepStats] = []
    t_start = time.perf_counter()

    def on_step(step, values, cumulative_best, wall_ms):
        stats.append(StepStats.from_values(
            step, values, cumulative_best,
            ledger.snapshot()["reward_evaluations"], wall_ms))

    algo = config.algorithm
    init_rng = root.child(1)
    if algo == COSYNE:
        ga_cfg = GaConfig(**config.engine)
        engine = CosyneEngine(ga_init(config.population,
                                      config.solution_space, shape, ga_cfg,
                                      init_rng))
        best_genome, best_fitness = _drive_engine(
            config, engine, base, generator, scorer, ledger, root, on_step)
    elif algo == SNES:
        hp = config.engine
        state = snes_init(config.solution_space, shape,
                          hp.get("sigma0", 0.1), init_rng,
                          hp.get("learn_rate_mu", 1.0),
                          hp.get("learn_rate_sigma"))
        engine = SnesEngine(state, config.population)
        best_genome, best_fitness = _drive_engine(
            config, engine, base, generator, scorer, ledger, root, on_step)
    elif algo == PGPE:
        hp = config.engine
        state = pgpe_init(config.solution_space, shape,
                          hp.get("sigma0", 0.1), init_rng,
                          hp.get("learn_rate_mu", 0.1),
                          hp.get("learn_rate_sigma", 0.05))
        engine = PgpeEngine(state, config.population)
        best_genome, best_fitness = _drive_engine(
            config, engine, base, generator, scorer, ledger, root, on_step)
    elif algo == BEST_OF_N:
        t0 = time.perf_counter()
        result = best_of_n(generator, scorer, config.population, init_rng,
                           config.batch, ledger, shape=shape)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        ledger.record_step_time(wall_ms)
        on_step(1, result.rewards, result.best_reward, wall_ms)
        best_genome = Genome(DIRECT, 0, direct=result.best_latent)
        best_fitness = result.best_reward
    else:  # zero_order
        state = zero_order_init(shape, init_rng,
                                float(config.engine.get("scale", 0.3)))
        best_genome, best_fitness = None, float("-inf")
        for t in range(1, config.steps + 1):
            t0 = time.perf_counter()
            result = zero_order_step(state, config.population,
                                     root.child(2, t), generator, scorer,
                                     config.batch, ledger)
            state = result.state
            if state.pivot_reward > best_fitness:
                best_genome = Genome(DIRECT, t, direct=state.pivot)
                best_fitness = state.pivot_reward
            wall_ms = (time.perf_counter() - t0) * 1000.0
            ledger.record_step_time(wall_ms)
            on_step(t, result.fitness.values, best_fitness, wall_ms)

    total_ms = (time.perf_counter() - t_start) * 1000.0
    sign = -1.0 if config.reward.direction == MINIMIZE else 1.0
    best_latent = realize(best_genome, base)
    best_image = generator.generate(best_latent)
    return SeedRun(
        seed=seed,
        steps=tuple(stats),
        best_genome=genome_to_json(best_genome),
        best_latent=base64.b64encode(tensor_to_bytes(best_latent))
        .decode("ascii"),
        best_fitness=best_fitness,
        best_raw=sign * best_fitness,
        best_image=None,  # filled in at persist time
        ledger=ledger.snapshot(),
        wall_ms=total_ms,
    ), best_image


def _steps_csv_rows(run: SeedRun):
    yield ("step", "best", "mean", "median", "std", "evals", "ms")
    for s in run.steps:
        yield (s.step, repr(s.best), repr(s.mean), repr(s.median),
               repr(s.std), s.evals, repr(s.wall_ms))


def _persist(out_dir: Path, config: RunConfig, runs: list[SeedRun],
             images: dict, partial: bool = False) -> RunReport:
    out_dir.mkdir(parents=True, exist_ok=True)
    named_runs = []
    single = len(config.seeds) == 1
    for run in runs:
        suffix = "" if single else f"-seed{run.seed}"
        image_name = f"best{suffix}.ppm"
        named_runs.append(replace(run, best_image=image_name))
        write_ppm(out_dir / image_name, images[run.seed])
        with open(out_dir / f"steps{suffix}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerows(_steps_csv_rows(run))
    aggregate = compute_aggregate(named_runs) if named_runs else {}
    if partial:
        aggregate = dict(aggregate)
        aggregate["partial"] = True
    report = RunReport(config.to_dict(), tuple(named_runs), aggregate)
    (out_dir / "report.json").write_text(report.to_json())
    return report


def run_alignment(config: RunConfig) -> RunReport:
    """Execute the configured run for every seed and persist artifacts.

    Results already computed are flushed to the output directory before any
    error propagates.
    """
    out_dir = Path(config.output_dir) if config.output_dir else None
    runs: list[SeedRun] = []
    images: dict = {}
    try:
        for seed in config.seeds:
            run, image = _run_seed(config, seed)
            runs.append(run)
            images[run.seed] = image
    except Exception:
        if out_dir is not None and runs:
            _persist(out_dir, config, runs, images, partial=True)
        raise
    if out_dir is not None:
        return _persist(out_dir, config, runs, images)
    return RunReport(config.to_dict(), tuple(runs), compute_aggregate(runs))


def strip_wall_times(report_dict: dict) -> dict:
    """Copy of a report dict with every wall-time field zeroed."""
    out = json.loads(json.dumps(report_dict))
    for run in out.get("runs", []):
        run["wall_ms"] = 0.0
        for step in run.get("steps", []):
            step["wall_ms"] = 0.0
    return out


@dataclass(frozen=True)
class AggregateRow:
    label: str
    runs: int
    best_mean: float
    best_std: float
    mean_sample_mean: float
    evals_per_run: int


@dataclass(frozen=True)
class AggregateSummary:
    reward_kind: str
    rows: tuple[AggregateRow, ...]
    budget_mismatches: tuple[tuple[str, str, int, int], ...]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["algorithm", "runs", "best_mean", "best_std",
                         "mean_sample_mean", "evals_per_run"])
        for row in self.rows:
            writer.writerow([row.label, row.runs, repr(row.best_mean),
                             repr(row.best_std), repr(row.mean_sample_mean),
                             row.evals_per_run])
        return buf.getvalue()

    def to_text(self) -> str:
        head = ("algorithm", "runs", "best mean +/- std", "mean sample",
                "evals/run")
        body = [(row.label, str(row.runs),
                 f"{row.best_mean:.6g} +/- {row.best_std:.6g}",
                 f"{row.mean_sample_mean:.6g}", str(row.evals_per_run))
                for row in self.rows]
        widths = [max(len(head[i]), *(len(b[i]) for b in body)) if body
                  else len(head[i]) for i in range(len(head))]
        lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(head))]
        lines.append("  ".join("-" * w for w in widths))
        for b in body:
            lines.append("  ".join(b[i].ljust(widths[i])
                                   for i in range(len(b))))
        for a, b, ea, eb in self.budget_mismatches:
            lines.append(f"WARNING: unequal budgets: {a} ran {ea} "
                         f"evaluations/run but {b} ran {eb}")
        return "\n".join(lines) + "\n"


def aggregate_reports(reports: list[RunReport]) -> AggregateSummary:
    """Per-algorithm best-sample / mean-sample table over many reports.

    All reports must share one reward; rows are grouped by
    (algorithm, solution space).  Pairs of rows whose per-run evaluation
    totals differ are flagged, supporting equal-budget comparisons.
    """
    if not reports:
        raise ConfigError("no reports to aggregate")
    rewards = {json.dumps(r.config["reward"], sort_keys=True)
               for r in reports}
    if len(rewards) > 1:
        raise HeterogeneousReward(
            "reports use different rewards and cannot be pooled")
    groups: dict[str, list] = {}
    evals: dict[str, set] = {}
    for report in reports:
        label = report.config["algorithm"]
        if report.config.get("solution_space", DIRECT) != DIRECT:
            label += f"/{report.config['solution_space']}"
        groups.setdefault(label, []).extend(report.runs)
        for run in report.runs:
            evals.setdefault(label, set()).add(
                int(run.ledger["reward_evaluations"]))
    rows = []
    for label in sorted(groups):
        runs = groups[label]
        best = np.array([r.steps[-1].cumulative_best for r in runs])
        mean_sample = np.array([r.steps[-1].mean for r in runs])
        per_run = sorted(evals[label])
        rows.append(AggregateRow(
            label=label, runs=len(runs), best_mean=float(best.mean()),
            best_std=population_std(best),
            mean_sample_mean=float(mean_sample.mean()),
            evals_per_run=per_run[-1]))
    mismatches = []
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            a, b = rows[i], rows[j]
            if a.evals_per_run != b.evals_per_run:
                mismatches.append((a.label, b.label, a.evals_per_run,
                                   b.evals_per_run))
    reward_kind = reports[0].config["reward"]["kind"]
    return AggregateSummary(reward_kind, tuple(rows), tuple(mismatches))


def diversity_series(report: RunReport) -> list[tuple[int, int, float]]:
    """(seed, step, reward std) rows; the population-diversity proxy."""
    if report.config["algorithm"] == BEST_OF_N:
        raise NotPopulationAlgorithm(
            "best_of_n has no per-step population to track")
    rows = []
    for run in report.runs:
        for s in run.steps:
            rows.append((run.seed, s.step, s.std))
    return rows


def diversity_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["seed", "step", "std"])
    for seed, step, std in diversity_series(report):
        writer.writerow([seed, step, repr(std)])
    return buf.getvalue()


@dataclass(frozen=True)
class Instance:
    """A named experiment instance: one generator seed, one reward target."""

    name: str
    decoder_seed: int
    target_rgb: tuple[float, float, float]


def make_instances(count: int = 60, master_seed: int = 0,
                   target_lo: float = 112.0,
                   target_hi: float = 144.0) -> list[Instance]:
    """Seeded instance list standing in for a prompt dataset."""
    root = SeededRng(master_seed, 0x696E7374)
    instances = []
    for i in range(count):
        u = root.child(i).uniform(3)
        target = tuple(float(target_lo + (target_hi - target_lo) * x)
                       for x in u)
        instances.append(Instance(f"instance-{i:03d}",
                                  decoder_seed=master_seed * 100000 + i,
                                  target_rgb=target))
    return instances
