"""The abcEL log-posterior: log prior + mean log EL weight + entropy.

One evaluation simulates ``m`` fresh datasets at ``theta``, solves the
empirical likelihood problem for the constraints ``g(X_i) - g(X_o)`` and
estimates the differential entropy of the summary density from the same
``m`` simulated summaries.  Zero prior density or an infeasible EL problem
give the sentinel value ``-inf`` for the total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .el import DEFAULT_MAX_ITER, DEFAULT_TOL, LOG_ZERO, solve_el
from .entropy import (NuWeights, default_k, gaussian_entropy, kl_entropy,
                      solve_nu)
from .errors import (DimensionError, DuplicatePointsError,
                     SimulationError, SingularCovarianceError)
from .models.base import GenerativeModel
from .rng import PHASE_PROFILE, as_generator, stream

ENTROPY_MODES = ("weighted_kl", "gaussian", "none")


@dataclass(frozen=True)
class EvaluatorConfig:
    """Everything needed to evaluate the abcEL log-posterior.

    ``entropy_mode`` is ``None`` for the model's default.  ``k`` only
    matters for ``weighted_kl`` and defaults to :func:`default_k`.
    """

    model: GenerativeModel
    obs_summary: np.ndarray
    m: int
    entropy_mode: str | None = None
    k: int | None = None
    el_tol: float = DEFAULT_TOL
    el_max_iter: int = DEFAULT_MAX_ITER
    nu: NuWeights | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        obs = np.atleast_1d(np.asarray(self.obs_summary, dtype=float))
        r = self.model.dim_summary
        if obs.shape != (r,):
            raise DimensionError(
                f"observed summary has shape {obs.shape}, model "
                f"{self.model.name} produces {r} summaries")
        if not np.all(np.isfinite(obs)):
            raise DimensionError("observed summary must be finite")
        if self.m < max(3, r + 2):
            raise DimensionError(
                f"m={self.m} is too small; need m >= {max(3, r + 2)} for "
                f"{r} summaries")
        mode = self.entropy_mode or self.model.default_entropy
        if mode not in ENTROPY_MODES:
            raise ValueError(f"unknown entropy mode {mode!r}; "
                             f"valid: {ENTROPY_MODES}")
        obs.setflags(write=False)
        object.__setattr__(self, "obs_summary", obs)
        object.__setattr__(self, "entropy_mode", mode)
        if mode == "weighted_kl":
            k = int(self.k) if self.k is not None else default_k(self.m)
            object.__setattr__(self, "k", k)
            object.__setattr__(self, "nu", solve_nu(k, r))


@dataclass(frozen=True)
class LogPosteriorValue:
    """Decomposed abcEL log-posterior in nats (unnormalised).

    ``entropy`` is NaN when it was not computed because the evaluation had
    already hit the sentinel.
    """

    log_prior: float
    mean_log_w: float
    entropy: float
    total: float
    feasible: bool


def _sentinel(log_prior: float, mean_log_w: float = LOG_ZERO,
              entropy: float = math.nan) -> LogPosteriorValue:
    return LogPosteriorValue(log_prior=log_prior, mean_log_w=mean_log_w,
                             entropy=entropy, total=LOG_ZERO, feasible=False)


def eval_log_posterior(theta, cfg: EvaluatorConfig, rng) -> LogPosteriorValue:
    """Estimate the abcEL log-posterior at ``theta``.

    Nothing is simulated when the prior density is zero.  Coincident
    simulated summaries (for the weighted estimator) or a singular sample
    covariance (for the Gaussian one) make the entropy undefined and are
    reported as the sentinel.

    Raises
    ------
    DimensionError
        If ``theta`` has the wrong length.
    SimulationError
        If the model cannot simulate at ``theta``.
    """
    model = cfg.model
    theta = np.asarray(theta, dtype=float).reshape(-1)
    if theta.shape[0] != model.dim_theta:
        raise DimensionError(f"{model.name} has {model.dim_theta} "
                             f"parameters, got {theta.shape[0]}")
    log_prior = model.prior.logpdf(theta)
    if log_prior == -math.inf:
        return _sentinel(log_prior)
    sims = model.simulate_summaries(theta, cfg.m, as_generator(rng))
    if not np.all(np.isfinite(sims)):
        raise SimulationError(f"{model.name}: non-finite summaries at "
                              f"theta={theta}")
    sol = solve_el(sims - cfg.obs_summary, cfg.el_tol, cfg.el_max_iter)
    if not sol.feasible:
        return _sentinel(log_prior)
    mlw = sol.mean_log_weight
    try:
        if cfg.entropy_mode == "weighted_kl":
            ent = kl_entropy(sims, cfg.k, cfg.nu).value
        elif cfg.entropy_mode == "gaussian":
            ent = gaussian_entropy(sims).value
        else:
            ent = 0.0
    except (DuplicatePointsError, SingularCovarianceError):
        return _sentinel(log_prior, mlw)
    return LogPosteriorValue(log_prior=log_prior, mean_log_w=mlw,
                             entropy=ent, total=log_prior + mlw + ent,
                             feasible=True)


class AbcElEvaluator:
    """Callable ``(theta, rng) -> LogPosteriorValue`` for the samplers."""

    method = "abcel"

    def __init__(self, cfg: EvaluatorConfig):
        self.cfg = cfg
        self.model = cfg.model
        self.prior = cfg.model.prior

    def __call__(self, theta, rng) -> LogPosteriorValue:
        return eval_log_posterior(theta, self.cfg, rng)


@dataclass(frozen=True)
class ProfileTable:
    """Per-grid-point summary of repeated log-posterior evaluations.

    ``mean`` averages the feasible repeats only (NaN if there are none);
    ``lower`` and ``upper`` are the 2.5% and 97.5% quantiles over all
    repeats with sentinels counted as ``-inf``.
    """

    theta: np.ndarray
    mean: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    feasible_fraction: np.ndarray
    totals: np.ndarray = field(repr=False)

    def __len__(self):
        return self.theta.shape[0]


def sentinel_quantile(values, q) -> np.ndarray:
    """Type-7 quantiles along the last axis of values that may contain
    ``-inf``; an interpolation touching a ``-inf`` order statistic gives
    ``-inf``."""
    v = np.sort(np.asarray(values, dtype=float), axis=-1)
    n = v.shape[-1]
    out = []
    for p in np.atleast_1d(q):
        h = (n - 1) * float(p)
        lo = int(math.floor(h))
        hi = min(lo + 1, n - 1)
        a, b = v[..., lo], v[..., hi]
        frac = h - lo
        with np.errstate(invalid="ignore"):
            val = np.where(np.isneginf(a), -np.inf,
                           a + frac * (b - a) if frac else a)
        out.append(val)
    return np.array(out)


def grid_profile(cfg: EvaluatorConfig, theta_grid, repeats: int,
                 seed: int = 0) -> ProfileTable:
    """Evaluate the log-posterior ``repeats`` times at every grid point.

    Repeat ``j`` at grid point ``g`` draws from its own stream keyed by
    ``(seed, PHASE_PROFILE, g, j)``.
    """
    grid = np.asarray(theta_grid, dtype=float)
    if grid.ndim == 1:
        grid = grid[:, None]
    if grid.shape[0] == 0:
        raise ValueError("empty grid")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")
    totals = np.empty((grid.shape[0], repeats))
    for g, theta in enumerate(grid):
        for j in range(repeats):
            rng = stream(seed, PHASE_PROFILE, g, j)
            totals[g, j] = eval_log_posterior(theta, cfg, rng).total
    feasible = np.isfinite(totals)
    n_ok = feasible.sum(axis=1)
    with np.errstate(invalid="ignore"):
        mean = np.where(feasible, totals, 0.0).sum(axis=1) / n_ok
    mean[n_ok == 0] = np.nan
    lower, upper = sentinel_quantile(totals, [0.025, 0.975])
    return ProfileTable(theta=grid, mean=mean, lower=lower, upper=upper,
                        feasible_fraction=n_ok / repeats, totals=totals)


def max_align(curve, reference) -> np.ndarray:
    """Shift ``reference`` so that its maximum equals the maximum of
    ``curve`` (both ignoring non-finite entries)."""
    curve = np.asarray(curve, dtype=float)
    reference = np.asarray(reference, dtype=float)
    return reference + (np.nanmax(np.where(np.isfinite(curve), curve, np.nan))
                        - np.nanmax(np.where(np.isfinite(reference),
                                             reference, np.nan)))
