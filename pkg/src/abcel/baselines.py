"""Reference methods: Gaussian synthetic likelihood and rejection ABC."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .el import LOG_ZERO
from .errors import DimensionError, SimulationError
from .models.base import GenerativeModel
from .rng import as_generator

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SynthLikValue:
    """Gaussian log-density of the observed summary.

    ``log_density`` and ``cov_logdet`` are ``-inf`` when the sample
    covariance of the simulated summaries is singular.
    """

    log_density: float
    mean: np.ndarray
    cov_logdet: float


def gaussian_loglik(sims, obs_summary) -> SynthLikValue:
    """Log-density of ``obs_summary`` under ``N(mean, cov)`` fitted to the
    rows of ``sims`` with the unbiased covariance."""
    sims = np.asarray(sims, dtype=float)
    if sims.ndim == 1:
        sims = sims[:, None]
    obs = np.atleast_1d(np.asarray(obs_summary, dtype=float))
    m, r = sims.shape
    if obs.shape != (r,):
        raise DimensionError(f"observed summary has shape {obs.shape}, "
                             f"simulations have {r} columns")
    if m < r + 2:
        raise DimensionError(f"synthetic likelihood needs m >= r+2={r + 2}, "
                             f"got {m}")
    mean = sims.mean(axis=0)
    centred = sims - mean
    cov = centred.T @ centred / (m - 1)
    # same singularity rule as the Gaussian entropy: rounding lets Cholesky
    # through on rank-deficient matrices with pivots near sqrt(eps)
    eig = np.linalg.eigvalsh(cov)
    if not eig[0] > 1e-12 * max(eig[-1], 1e-300):
        return SynthLikValue(LOG_ZERO, mean, LOG_ZERO)
    chol = np.linalg.cholesky(cov)
    diag = np.diag(chol)
    logdet = 2.0 * float(np.log(diag).sum())
    z = np.linalg.solve(chol, obs - mean)
    logd = -0.5 * (r * _LOG_2PI + logdet + float(z @ z))
    return SynthLikValue(logd, mean, logdet)


@dataclass(frozen=True)
class SyntheticConfig:
    model: GenerativeModel
    obs_summary: np.ndarray
    m: int

    def __post_init__(self):
        obs = np.atleast_1d(np.asarray(self.obs_summary, dtype=float))
        r = self.model.dim_summary
        if obs.shape != (r,):
            raise DimensionError(f"observed summary has shape {obs.shape}, "
                                 f"model produces {r} summaries")
        if self.m < r + 2:
            raise DimensionError(f"synthetic likelihood needs m >= "
                                 f"{r + 2}, got {self.m}")
        object.__setattr__(self, "obs_summary", obs)


def synthetic_loglik(theta, cfg: SyntheticConfig, rng) -> SynthLikValue:
    """Simulate ``m`` summaries at ``theta`` and evaluate
    :func:`gaussian_loglik` at the observed summary."""
    sims = cfg.model.simulate_summaries(theta, cfg.m, as_generator(rng))
    if not np.all(np.isfinite(sims)):
        raise SimulationError(f"{cfg.model.name}: non-finite summaries at "
                              f"theta={theta}")
    return gaussian_loglik(sims, cfg.obs_summary)


@dataclass(frozen=True)
class SynthPosteriorValue:
    log_prior: float
    log_density: float
    total: float
    feasible: bool


class SyntheticEvaluator:
    """Callable ``(theta, rng) -> SynthPosteriorValue`` for the samplers."""

    method = "synthetic"

    def __init__(self, cfg: SyntheticConfig):
        self.cfg = cfg
        self.model = cfg.model
        self.prior = cfg.model.prior

    def __call__(self, theta, rng) -> SynthPosteriorValue:
        theta = np.asarray(theta, dtype=float).reshape(-1)
        lp = self.prior.logpdf(theta)
        if lp == -math.inf:
            return SynthPosteriorValue(lp, LOG_ZERO, LOG_ZERO, False)
        ld = synthetic_loglik(theta, self.cfg, rng).log_density
        if ld == LOG_ZERO:
            return SynthPosteriorValue(lp, ld, LOG_ZERO, False)
        return SynthPosteriorValue(lp, ld, lp + ld, True)


@dataclass(frozen=True)
class AbcSample:
    """Accepted rejection-ABC draws.

    ``distances`` are the MAD-scaled Euclidean distances of the accepted
    draws, in acceptance order (nondecreasing).  ``n_clamped`` counts
    adjusted coordinates moved back onto the prior support.
    """

    theta_draws: np.ndarray
    distances: np.ndarray
    adjusted: bool
    tolerance: float
    summaries: np.ndarray
    n_clamped: int = 0


def mad_scale(sims) -> np.ndarray:
    """Per-column median absolute deviation; zero columns get scale 1."""
    sims = np.asarray(sims, dtype=float)
    mad = np.median(np.abs(sims - np.median(sims, axis=0)), axis=0)
    return np.where(mad > 0, mad, 1.0)


def regression_adjust(theta, sims, obs_summary):
    """Linear regression adjustment with uniform weights.

    Each parameter column is regressed on ``s - s_obs`` (with intercept)
    and the fitted slope term is subtracted.  Summary columns that are
    constant over the accepted draws are left out of the design.
    """
    theta = np.asarray(theta, dtype=float)
    X = np.asarray(sims, dtype=float) - np.asarray(obs_summary, dtype=float)
    varying = np.ptp(X, axis=0) > 0
    if not varying.all():
        warnings.warn(
            f"summary columns {np.flatnonzero(~varying).tolist()} are constant "
            f"over the accepted draws and are left out of the adjustment",
            RuntimeWarning, stacklevel=2)
    X = X[:, varying]
    if X.shape[1] == 0 or X.shape[0] <= X.shape[1] + 1:
        return theta.copy()
    design = np.column_stack([np.ones(X.shape[0]), X])
    coef = np.linalg.lstsq(design, theta, rcond=None)[0]
    return theta - X @ coef[1:]


def rejection_abc(model: GenerativeModel, obs_summary, n_sims: int,
                  keep_fraction: float, adjust: bool, rng) -> AbcSample:
    """Rejection ABC from the prior with optional regression adjustment.

    Parameters
    ----------
    n_sims : int
        Number of prior draws, one simulated dataset each.
    keep_fraction : float
        Fraction of draws kept, closest first; at least one is kept.
    adjust : bool
        Apply :func:`regression_adjust`, then clamp into the prior support.
    """
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError("keep_fraction must lie in (0, 1]")
    if n_sims < 1:
        raise ValueError("n_sims must be positive")
    rng = as_generator(rng)
    obs = np.atleast_1d(np.asarray(obs_summary, dtype=float))
    thetas = model.prior.sample(rng, n_sims)
    sims = model.simulate_prior_predictive(thetas, rng)
    if not np.all(np.isfinite(sims)):
        raise SimulationError(f"{model.name}: non-finite prior-predictive "
                              f"summaries")
    scale = mad_scale(sims)
    dist = np.sqrt((((sims - obs) / scale) ** 2).sum(axis=1))
    n_keep = max(1, int(round(keep_fraction * n_sims)))
    order = np.argsort(dist, kind="stable")[:n_keep]
    kept = thetas[order]
    n_clamped = 0
    if adjust:
        kept = regression_adjust(kept, sims[order], obs)
        clipped = model.prior.clip(kept)
        n_clamped = int(np.sum(clipped != kept))
        if n_clamped:
            warnings.warn(f"{n_clamped} adjusted coordinates clamped to the "
                          f"prior support", RuntimeWarning, stacklevel=2)
        kept = clipped
    return AbcSample(theta_draws=kept, distances=dist[order],
                     adjusted=bool(adjust), tolerance=float(dist[order[-1]]),
                     summaries=sims[order], n_clamped=n_clamped)
