"""Shape of the estimated log-posterior for a normal variance.

One hundred observations come from N(0, 4).  For each grid value of the
variance the estimated log-posterior is computed from 100 independent sets
of m simulated summaries.  The mean curve and a 95% band are compared with
the exact log-posterior after matching maxima.  With more replicates the
band tightens and the mean curve flattens.
"""

import numpy as np

from abcel.harness import ExperimentSpec, run_profile

for m in (25, 500):
    res = run_profile(ExperimentSpec("profile", "normal_variance",
                                     summaries="g1", m=m, repeats=100,
                                     grid_points=13, seed=11))
    t = res.table
    print(f"m = {m}: observed summary {res.obs_summary[0]:.3f}")
    print("   theta     mean    lower    upper   exact")
    for g in range(len(res.grid)):
        print(f"  {res.grid[g]:6.3f} {t.mean[g]:8.3f} {t.lower[g]:8.3f} "
              f"{t.upper[g]:8.3f} {res.analytic[g]:7.3f}")
    print(f"  exact curve inside band at {res.analytic_in_band:.0%} of "
          f"points; mean curve range {res.mean_range:.3f}")
    print()
