"""Black-box latent-noise search with evolutionary engines.

Candidate latents (or orthonormal channel transforms of a fixed base noise)
are evolved against arbitrary reward functions computed on the output of a
pluggable, deterministic generator.  Engines follow a propose/evaluate/update
cycle and never see the generator, so any pipeline speaking the latent
container protocol can sit behind the evaluation boundary.
"""

from .baselines import BestOfNResult, ZoState, best_of_n, zero_order_init, \
    zero_order_step
from .core import LatentShape, LatentTensor, SeededRng, l2_norm, read_tensor, \
    sample_standard_gaussian, shell_distance, tensor_from_bytes, \
    tensor_to_bytes, write_tensor
from .engines import CosyneEngine, FitnessBatch, GaConfig, GaState, \
    PgpeEngine, PgpeState, SnesEngine, SnesState, ga_init, ga_propose, \
    ga_update, pgpe_init, pgpe_propose, pgpe_update, snes_init, snes_propose, \
    snes_update, uniform_crossover
from .evaluate import BudgetLedger, batch_evaluate
from .generators import SubprocessGenerator, ToyDecoder
from .genome import DIRECT, TRANSFORM, BaseNoise, Genome, apply_transform, \
    genome_from_json, genome_to_json, make_base_noise, qr_orthonormal, realize
from .harness import GeneratorConfig, Instance, RunConfig, RunReport, \
    aggregate_reports, diversity_csv, diversity_series, make_instances, \
    run_alignment, strip_wall_times
from .images import Image, image_from_array, parse_ppm, ppm_bytes, read_ppm, \
    write_png, write_ppm
from .rewards import RewardSpec, make_scorer, raw_reward, reward_jpeg_size, \
    reward_smoothness, reward_sphere_proxy, reward_target_mean

__version__ = "0.1.0"
