"""Generative model contract."""

from __future__ import annotations

import numpy as np

from ..errors import SimulationError
from ..priors import PriorSpec


class GenerativeModel:
    """A simulator with a prior and a summary map.

    Subclasses implement :meth:`simulate` and :meth:`summarize`; they may
    override :meth:`simulate_summaries` with a vectorised batch path.  Both
    must be deterministic functions of the generator state.

    Attributes
    ----------
    name : str
    param_names : tuple of str
    prior : PriorSpec
    n_obs : int
        Sample size of one dataset.
    summary_names : tuple of str
        Labels of the summary coordinates, in order.
    theta_truth : ndarray or None
        Parameter used to generate observed data in studies.
    default_entropy : str
        Entropy mode used by the posterior unless overridden.
    transforms : tuple of str
        Per-coordinate MCMC transform names.
    proposal_sd : ndarray
        Default random-walk scales on the transformed scale.
    """

    name = "model"
    param_names: tuple[str, ...] = ()
    default_entropy = "gaussian"

    def __init__(self, prior: PriorSpec, n_obs: int, summary_names,
                 theta_truth=None, transforms=None, proposal_sd=None,
                 summary_set: str = ""):
        self.prior = prior
        self.n_obs = int(n_obs)
        self.summary_names = tuple(summary_names)
        self.summary_set = summary_set
        self.theta_truth = (None if theta_truth is None
                            else np.asarray(theta_truth, dtype=float))
        d = len(self.param_names)
        self.transforms = tuple(transforms or ("identity",) * d)
        self.proposal_sd = (np.full(d, 0.1) if proposal_sd is None
                            else np.asarray(proposal_sd, dtype=float))

    def __repr__(self):
        return (f"{type(self).__name__}(summaries={self.summary_names}, "
                f"n_obs={self.n_obs})")

    @property
    def dim_theta(self) -> int:
        return len(self.param_names)

    @property
    def dim_summary(self) -> int:
        return len(self.summary_names)

    def check_theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        if theta.shape[0] != self.dim_theta:
            raise SimulationError(
                f"{self.name} expects {self.dim_theta} parameters, "
                f"got {theta.shape[0]}")
        if not np.all(np.isfinite(theta)):
            raise SimulationError(f"non-finite parameter {theta}")
        return theta

    def simulate(self, theta, rng, n_obs=None):
        raise NotImplementedError

    def summarize(self, data) -> np.ndarray:
        raise NotImplementedError

    def simulate_summaries(self, theta, m: int, rng) -> np.ndarray:
        """``(m, r)`` array of summaries of ``m`` independent datasets."""
        out = np.empty((m, self.dim_summary))
        for i in range(m):
            out[i] = self.summarize(self.simulate(theta, rng))
        return out

    def simulate_prior_predictive(self, thetas, rng) -> np.ndarray:
        """Summaries of one dataset at each row of ``thetas``."""
        thetas = np.asarray(thetas, dtype=float)
        out = np.empty((thetas.shape[0], self.dim_summary))
        for i, theta in enumerate(thetas):
            out[i] = self.simulate_summaries(theta, 1, rng)[0]
        return out

    def observe(self, rng, theta=None, n_obs=None):
        """Dataset at ``theta`` (default: ``theta_truth``) and its summary."""
        theta = self.theta_truth if theta is None else theta
        data = self.simulate(theta, rng, n_obs=n_obs)
        return data, self.summarize(data)


def finite_or_raise(s: np.ndarray, model: str, theta) -> np.ndarray:
    if not np.all(np.isfinite(s)):
        raise SimulationError(f"{model}: non-finite summaries at theta={theta}")
    return s
