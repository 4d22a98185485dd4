"""Equal-budget comparison: genetic search vs Best-of-N vs Zero-Order.

All three algorithms spend exactly 360 reward evaluations on the same
generator and reward, mirroring the evaluation-count accounting the engines
report (the genetic engine evaluates 1.5x its population per step, so 15
steps at P=16 cost 360).  The aggregate table flags any budget mismatch.
"""

from pathlib import Path

from latent_evo.harness import RunConfig, aggregate_reports, run_alignment

out = Path("baseline_budget_reports")
common = {
    "version": 1,
    "solution_space": "direct",
    "batch": 16,
    "seeds": [0, 1, 2],
    "generator": {"kind": "toy", "latent_shape": [4, 8, 8],
                  "resolution": [64, 64], "decoder_seed": 0},
    "reward": {"kind": "target_mean",
               "params": {"target_rgb": [138.0, 121.0, 131.0]}},
    "engine": {},
    "output_dir": None,
}

reports = []
for algorithm, population, steps in [("cosyne", 16, 15),
                                     ("best_of_n", 360, 1),
                                     ("zero_order", 24, 15)]:
    config = RunConfig.from_dict({**common, "algorithm": algorithm,
                                  "population": population, "steps": steps,
                                  "output_dir": str(out / algorithm)})
    report = run_alignment(config)
    evals = report.runs[0].ledger["reward_evaluations"]
    print(f"{algorithm:11s} spent {evals} evaluations per seed")
    reports.append(report)

print()
print(aggregate_reports(reports).to_text())
print(f"reports and per-step CSVs under {out}/")
