"""Direct latent-noise search with the genetic engine.

Evolves latent tensors against a target mean color on the toy decoder and
prints the per-step reward statistics, ending with the exact evaluation
budget the run consumed.
"""

import numpy as np

import latent_evo as le
from latent_evo.engines import GaConfig, ga_init, ga_propose, ga_update

shape = le.LatentShape(4, 8, 8)
decoder = le.ToyDecoder(shape, width=64, height=64, decoder_seed=0)
scorer = le.make_scorer(le.RewardSpec.target_mean([140.0, 118.0, 126.0]))

rng = le.SeededRng(seed=7)
ledger = le.BudgetLedger()
state = ga_init(16, le.DIRECT, shape, GaConfig(), rng.child(0))

print("step  best      mean      std    evals")
best_so_far = -np.inf
for step in range(1, 16):
    candidates = ga_propose(state, rng.child(1, step))
    fitness = le.batch_evaluate(candidates, None, decoder, scorer,
                                batch_size=8, ledger=ledger)
    state = ga_update(state, candidates, fitness)
    best_so_far = max(best_so_far, fitness.values.max())
    print(f"{step:4d}  {fitness.values.max():8.3f}  "
          f"{fitness.values.mean():8.3f}  {fitness.values.std():5.2f}  "
          f"{ledger.reward_evaluations:5d}")

print(f"\nbest reward found: {best_so_far:.3f}")
print(f"total reward evaluations: {ledger.reward_evaluations} "
      f"(15 steps x 24 extended candidates)")

best_genome, best_fitness = state.best
image = decoder.generate(le.realize(best_genome))
le.write_ppm("direct_search_best.ppm", image)
print("best image written to direct_search_best.ppm")
