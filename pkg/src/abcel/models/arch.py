"""ARCH(1) time series."""

from __future__ import annotations

import math

import numba
import numpy as np

from ..errors import SimulationError
from ..priors import PriorSpec, Uniform
from ..summaries import g4_summary
from .base import GenerativeModel

ARCH_BURN_IN = 100


@numba.njit(cache=True)
def _arch_paths(eps, a0, a1, burn_in):
    # X_0 from the stationary scale, then burn_in discarded steps
    m, total = eps.shape
    n = total - burn_in - 1
    out = np.empty((m, n))
    x0_scale = np.sqrt(a0 / (1.0 - a1))
    for i in range(m):
        x = x0_scale * eps[i, 0]
        for t in range(1, total):
            x = np.sqrt(a0 + a1 * x * x) * eps[i, t]
            if t > burn_in:
                out[i, t - burn_in - 1] = x
    return out


def arch_summaries(x) -> np.ndarray:
    """Quartiles of ``|x|`` followed by :func:`g4_summary`."""
    x = np.asarray(x, dtype=float)
    q = np.quantile(np.abs(x), [0.25, 0.5, 0.75], axis=-1)
    return np.concatenate([np.moveaxis(q, 0, -1),
                           g4_summary(x)[..., None]], axis=-1)


class Arch1(GenerativeModel):
    """``X_j = sigma_j eps_j``, ``sigma_j^2 = a0 + a1 X_{j-1}^2``.

    Prior ``U(0, 5) x U(0, 1)`` on ``(a0, a1)``.
    """

    name = "arch1"
    param_names = ("alpha0", "alpha1")
    default_entropy = "weighted_kl"

    def __init__(self, n_obs=1000, theta_truth=(3.0, 0.75),
                 proposal_sd=(0.3, 0.05), summaries="abs_quartiles_g4",
                 burn_in=ARCH_BURN_IN):
        if summaries != "abs_quartiles_g4":
            raise KeyError(f"unknown summaries {summaries!r}; "
                           f"sets: ['abs_quartiles_g4']")
        super().__init__(PriorSpec([Uniform(0.0, 5.0), Uniform(0.0, 1.0)]),
                         n_obs, ("abs_q1", "abs_median", "abs_q3", "g4"),
                         theta_truth=theta_truth, proposal_sd=proposal_sd,
                         summary_set=summaries)
        self.burn_in = int(burn_in)

    def check_theta(self, theta):
        theta = super().check_theta(theta)
        if theta[0] <= 0 or not 0 <= theta[1] < 1:
            raise SimulationError(
                f"ARCH(1) needs alpha0 > 0 and 0 <= alpha1 < 1, got {theta}")
        return theta

    def _paths(self, theta, m, n, rng):
        a0, a1 = self.check_theta(theta)
        eps = rng.standard_normal((m, n + self.burn_in + 1))
        return _arch_paths(eps, a0, a1, self.burn_in)

    def simulate(self, theta, rng, n_obs=None):
        return self._paths(theta, 1, n_obs or self.n_obs, rng)[0]

    def summarize(self, data):
        return arch_summaries(data)

    def simulate_summaries(self, theta, m, rng):
        return arch_summaries(self._paths(theta, m, self.n_obs, rng))

    @staticmethod
    def stationary_variance(a0: float, a1: float) -> float:
        return a0 / (1.0 - a1) if a1 < 1 else math.inf
