"""Three methods on the g-and-k distribution.

The g-and-k law has a closed-form quantile function but no closed-form
density, which makes it a standard likelihood-free test.  One dataset of
1000 draws is analysed with rejection ABC (regression adjusted), the abcEL
posterior and synthetic likelihood, using the mean and three quartiles as
summaries.  Short chains keep the run to a few minutes.  Rejection ABC
uses a 20000-draw pool here, so its intervals stay wide.
"""

from abcel.harness import ExperimentSpec, run_compare

spec = ExperimentSpec("compare", "gk", m=40, replicates=1, seed=5,
                      iterations=2000, burn_in=2000)
res = run_compare(spec)
print("truth:", ", ".join(f"{p}={t:g}" for p, t in
                          zip(res.model.param_names, res.model.theta_truth)))
for method in spec.methods:
    print(method)
    for r in res.select(method=method):
        if r["ok"]:
            print(f"  {r['parameter']}: mean {r['mean']:.3f} "
                  f"[{r['lower']:.3f}, {r['upper']:.3f}]")
        else:
            print(f"  {r['parameter']}: failed ({r['error']})")
