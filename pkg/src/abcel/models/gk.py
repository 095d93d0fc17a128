"""g-and-k distribution."""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

from ..errors import SimulationError
from ..priors import PriorSpec, Uniform
from .base import GenerativeModel
from .normal import _moment_quantile_summaries, resolve_summary_set

GK_C = 0.8

_GK_STATS = {
    "mean": ("moment", 1),
    "q1": ("quantile", 0.25),
    "median": ("quantile", 0.5),
    "q3": ("quantile", 0.75),
}
GK_SUMMARY_SETS = {"mean_quartiles": ("mean", "q1", "median", "q3")}


def gk_quantile_z(z, A, B, g, k, c=GK_C):
    """g-and-k quantile as a function of the standard normal quantile ``z``."""
    z = np.asarray(z, dtype=float)
    # (1 - exp(-g z)) / (1 + exp(-g z)) == tanh(g z / 2), without overflow
    return A + B * (1.0 + c * np.tanh(0.5 * g * z)) * (1.0 + z * z) ** k * z


def gk_quantile(p, A, B, g, k, c=GK_C):
    """Quantile function ``Q(p; A, B, g, k)`` of the g-and-k distribution."""
    return gk_quantile_z(ndtri(np.asarray(p, dtype=float)), A, B, g, k, c)


class GAndK(GenerativeModel):
    """``n`` i.i.d. g-and-k draws; summaries are the mean and the quartiles."""

    name = "gk"
    param_names = ("A", "B", "g", "k")
    default_entropy = "gaussian"

    def __init__(self, summaries="mean_quartiles", n_obs=1000,
                 theta_truth=(3.0, 1.0, 2.0, 0.5),
                 proposal_sd=(0.03, 0.03, 0.1, 0.03)):
        names = resolve_summary_set(summaries, GK_SUMMARY_SETS, _GK_STATS)
        super().__init__(PriorSpec([Uniform(0.0, 10.0)] * 4), n_obs, names,
                         theta_truth=theta_truth, proposal_sd=proposal_sd,
                         summary_set=summaries)

    def check_theta(self, theta):
        theta = super().check_theta(theta)
        if theta[1] <= 0 or theta[3] <= -0.5:
            raise SimulationError(f"g-and-k needs B > 0 and k > -1/2, got "
                                  f"{theta}")
        return theta

    def simulate(self, theta, rng, n_obs=None):
        A, B, g, k = self.check_theta(theta)
        u = rng.random(n_obs or self.n_obs)
        return gk_quantile(u, A, B, g, k)

    def summarize(self, data):
        return _moment_quantile_summaries(data, self.summary_names, _GK_STATS)

    def simulate_summaries(self, theta, m, rng):
        A, B, g, k = self.check_theta(theta)
        x = gk_quantile(rng.random((m, self.n_obs)), A, B, g, k)
        return _moment_quantile_summaries(x, self.summary_names, _GK_STATS)

    def simulate_prior_predictive(self, thetas, rng, chunk=500):
        thetas = np.asarray(thetas, dtype=float)
        if np.any(thetas[:, 1] <= 0) or np.any(thetas[:, 3] <= -0.5):
            raise SimulationError("g-and-k needs B > 0 and k > -1/2")
        out = np.empty((thetas.shape[0], self.dim_summary))
        for a in range(0, thetas.shape[0], chunk):
            t = thetas[a:a + chunk]
            x = gk_quantile(rng.random((t.shape[0], self.n_obs)),
                            t[:, :1], t[:, 1:2], t[:, 2:3], t[:, 3:4])
            out[a:a + chunk] = _moment_quantile_summaries(
                x, self.summary_names, _GK_STATS)
        return out
