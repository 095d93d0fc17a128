"""Empirical-likelihood weights for a handful of simulated summaries.

Each simulated summary s_i is turned into a constraint vector h_i = s_i - s_obs.
The weights maximise the product of m * w_i on the simplex subject to
sum_i w_i h_i = 0.  When the origin lies outside the convex hull of the h_i
there are no such weights and the estimate is zero.
"""

import numpy as np

from abcel import compute_constraints, solve_el, stream

### A one-dimensional example that can be checked by hand
################################################################################

sims = np.array([[-1.0], [0.5], [2.0]])
obs = np.array([0.0])
sol = solve_el(compute_constraints(sims, obs))
print("simulated summaries:", sims.ravel())
print("weights:            ", np.round(sol.weights, 6))
print("dual multiplier:    ", sol.lam)
print("sum w_i h_i:        ", float(sol.weights @ sims.ravel()))
print("mean log weight:    ", sol.mean_log_weight)
print()

# moving the observation past the largest simulation empties the feasible set
far = solve_el(compute_constraints(sims, np.array([3.0])))
print("observation at 3.0 -> feasible:", far.feasible,
      "mean log weight:", far.mean_log_weight)
print()

### Two summaries, many replicates
################################################################################

# as m grows the weights approach 1/m and the mean log weight approaches
# -log m, since the sample mean of h is close to zero
rng = stream(1)
for m in (10, 100, 1000):
    h = rng.standard_normal((m, 2))
    sol = solve_el(h)
    print(f"m={m:5d}  feasible={sol.feasible}  "
          f"mean log w + log m = {sol.mean_log_weight + np.log(m):+.5f}  "
          f"Newton iterations = {sol.iterations}")
