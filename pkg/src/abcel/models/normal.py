"""Normal location and normal variance benchmark models."""

from __future__ import annotations

import math

import numpy as np
from scipy import stats

from ..errors import SimulationError
from ..priors import Normal, PriorSpec, Uniform
from ..summaries import raw_moment_summary
from .base import GenerativeModel

# name -> raw moment order, or quantile level
_LOCATION_STATS = {
    "mean": ("moment", 1),
    "raw2": ("moment", 2),
    "raw3": ("moment", 3),
    "raw4": ("moment", 4),
    "median": ("quantile", 0.5),
    "q1": ("quantile", 0.25),
    "q3": ("quantile", 0.75),
}

LOCATION_SUMMARY_SETS = {
    "mean": ("mean",),
    "median": ("median",),
    "moments2": ("mean", "raw2"),
    "moments3": ("mean", "raw2", "raw3"),
    "moments4": ("mean", "raw2", "raw3", "raw4"),
    "quartiles": ("median", "q1", "q3"),
    "mean_median": ("mean", "median"),
}


def resolve_summary_set(selector: str, sets: dict, known) -> tuple[str, ...]:
    """Named set, or a comma-separated list of statistic names."""
    if selector in sets:
        return tuple(sets[selector])
    names = tuple(s.strip() for s in selector.split(",") if s.strip())
    bad = [s for s in names if s not in known]
    if not names or bad:
        raise KeyError(
            f"unknown summaries {selector!r}; sets: {sorted(sets)}, "
            f"statistics: {sorted(known)}")
    return names


def _moment_quantile_summaries(x: np.ndarray, names, table) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape[:-1] + (len(names),))
    probs = [table[n][1] for n in names if table[n][0] == "quantile"]
    if probs:
        q = np.quantile(x, probs, axis=-1)
    qi = 0
    for c, name in enumerate(names):
        kind, arg = table[name]
        if kind == "moment":
            out[..., c] = raw_moment_summary(x, arg)
        else:
            out[..., c] = q[qi]
            qi += 1
    return out


class NormalLocation(GenerativeModel):
    """``n`` i.i.d. ``N(mu, 1)`` draws, ``N(0, 1)`` prior on ``mu``."""

    name = "normal_location"
    param_names = ("mu",)
    default_entropy = "gaussian"

    def __init__(self, summaries="mean", n_obs=100, theta_truth=(0.0,),
                 proposal_sd=None):
        names = resolve_summary_set(summaries, LOCATION_SUMMARY_SETS,
                                    _LOCATION_STATS)
        if proposal_sd is None:
            proposal_sd = (1.0 / math.sqrt(n_obs),)
        super().__init__(PriorSpec([Normal(0.0, 1.0)]), n_obs, names,
                         theta_truth=theta_truth, proposal_sd=proposal_sd,
                         summary_set=summaries)

    def simulate(self, theta, rng, n_obs=None):
        mu = self.check_theta(theta)[0]
        return mu + rng.standard_normal(n_obs or self.n_obs)

    def summarize(self, data):
        return _moment_quantile_summaries(data, self.summary_names,
                                          _LOCATION_STATS)

    def simulate_summaries(self, theta, m, rng):
        mu = self.check_theta(theta)[0]
        x = mu + rng.standard_normal((m, self.n_obs))
        return _moment_quantile_summaries(x, self.summary_names,
                                          _LOCATION_STATS)

    def simulate_prior_predictive(self, thetas, rng):
        mu = np.asarray(thetas, dtype=float)[:, :1]
        x = mu + rng.standard_normal((mu.shape[0], self.n_obs))
        return _moment_quantile_summaries(x, self.summary_names,
                                          _LOCATION_STATS)

    @staticmethod
    def exact_posterior(data):
        """Mean and variance of the conjugate posterior given the full data."""
        data = np.asarray(data, dtype=float)
        n = data.shape[-1]
        return data.sum(axis=-1) / (n + 1), 1.0 / (n + 1)


VARIANCE_SUMMARY_SETS = {"g1": ("g1",), "g2": ("g2",), "g1g2": ("g1", "g2")}


class NormalVariance(GenerativeModel):
    """``n`` i.i.d. ``N(0, theta)`` draws, ``U(0, 10)`` prior on ``theta``.

    Summaries: ``g1`` is the mean of squares, ``g2`` the maximum.
    """

    name = "normal_variance"
    param_names = ("theta",)
    default_entropy = "gaussian"

    def __init__(self, summaries="g1", n_obs=100, theta_truth=(4.0,),
                 proposal_sd=(0.5,)):
        names = resolve_summary_set(summaries, VARIANCE_SUMMARY_SETS,
                                    ("g1", "g2"))
        super().__init__(PriorSpec([Uniform(0.0, 10.0)]), n_obs, names,
                         theta_truth=theta_truth, proposal_sd=proposal_sd,
                         summary_set=summaries)

    def check_theta(self, theta):
        theta = super().check_theta(theta)
        if theta[0] <= 0:
            raise SimulationError(f"variance must be positive, got {theta[0]}")
        return theta

    def simulate(self, theta, rng, n_obs=None):
        var = self.check_theta(theta)[0]
        return math.sqrt(var) * rng.standard_normal(n_obs or self.n_obs)

    def summarize(self, data):
        data = np.asarray(data, dtype=float)
        cols = []
        for name in self.summary_names:
            if name == "g1":
                cols.append((data * data).mean(axis=-1))
            else:
                cols.append(data.max(axis=-1))
        return np.stack(cols, axis=-1)

    def simulate_summaries(self, theta, m, rng):
        var = self.check_theta(theta)[0]
        return self.summarize(math.sqrt(var)
                              * rng.standard_normal((m, self.n_obs)))

    def analytic_log_posterior(self, theta, obs_summary) -> np.ndarray:
        """Unnormalised exact log posterior given a single summary.

        For ``g1``, ``n * g1 / theta`` is chi-square with ``n`` degrees of
        freedom; for ``g2`` the density of the maximum of ``n`` normals is
        ``n phi(g/s) Phi(g/s)^(n-1) / s`` with ``s = sqrt(theta)``.
        """
        if self.dim_summary != 1:
            raise ValueError("analytic posterior needs a single summary")
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        g = float(np.ravel(obs_summary)[0])
        n = self.n_obs
        out = np.full(theta.shape, -np.inf)
        ok = (theta > 0) & (theta < 10)
        t = theta[ok]
        if self.summary_names[0] == "g1":
            out[ok] = np.log(n / t) + stats.chi2.logpdf(n * g / t, n)
        else:
            s = np.sqrt(t)
            out[ok] = (math.log(n) + stats.norm.logpdf(g / s) - np.log(s)
                       + (n - 1) * stats.norm.logcdf(g / s))
        return out - math.log(10.0)
