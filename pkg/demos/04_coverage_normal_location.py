"""Credible-interval coverage for a normal mean.

Each replicate draws a fresh dataset of 100 observations with mean 0, runs
an abcEL chain and records whether the 95% interval contains 0.  Two
summary choices are compared: the sample mean alone, and the first four
raw moments.  Chains are short here so the script finishes in about a
minute; the acceptance suite uses 10k + 10k iterations and 100 replicates.
"""

from abcel.harness import ExperimentSpec, run_coverage

spec = ExperimentSpec("coverage", "normal_location",
                      summaries=("mean", "moments4"), m=25, replicates=10,
                      iterations=2000, burn_in=2000, seed=7)
report = run_coverage(spec)
for row in report.rows:
    print(f"{row.label:9s} coverage {row.coverage:.2f} "
          f"(+/- {row.coverage_se:.2f}), mean length {row.mean_length:.3f}, "
          f"failed {row.n_failed}")
for label, sd in report.proposal_sd.items():
    print(f"tuned walk scale for {label}: {float(sd[0]):.3f}")
