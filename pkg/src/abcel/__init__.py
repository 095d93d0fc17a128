"""Likelihood-free Bayesian inference with the abcEL posterior.

The estimated log-posterior at ``theta`` is the log prior plus the mean log
empirical-likelihood weight of ``m`` simulated summaries relative to the
observed one, plus an estimate of the differential entropy of the summary
distribution.  Baselines (synthetic likelihood, rejection ABC), a
pseudo-marginal Metropolis sampler, benchmark models and an experiment
harness are included.
"""

from .baselines import (AbcSample, SynthLikValue, SyntheticConfig,
                        SyntheticEvaluator, rejection_abc, synthetic_loglik)
from .el import (LOG_ZERO, ELSolution, compute_constraints, el_log_weight,
                 mean_log_weight, solve_el)
from .entropy import (EntropyEstimate, NuWeights, default_k, digamma,
                      gaussian_entropy, kl_entropy, knn_distances, solve_nu)
from .errors import (AbcElError, DimensionError, DuplicatePointsError,
                     InitializationError, NonConvergenceError,
                     NuWeightsError, SimulationError,
                     SingularCovarianceError)
from .mcmc import (Chain, ChainSummary, McmcConfig, run_chain,
                   summarize_chain, tune_proposal)
from .models import MODELS, GenerativeModel, make_model
from .posterior import (AbcElEvaluator, EvaluatorConfig, LogPosteriorValue,
                        eval_log_posterior, grid_profile)
from .rng import stream

__version__ = "0.1.0"

__all__ = [
    "LOG_ZERO", "ELSolution", "compute_constraints", "solve_el",
    "mean_log_weight", "el_log_weight", "NuWeights", "EntropyEstimate",
    "digamma", "default_k", "knn_distances", "solve_nu", "kl_entropy",
    "gaussian_entropy", "GenerativeModel", "MODELS", "make_model",
    "EvaluatorConfig", "LogPosteriorValue", "eval_log_posterior",
    "grid_profile", "AbcElEvaluator", "SynthLikValue", "SyntheticConfig",
    "SyntheticEvaluator", "synthetic_loglik", "AbcSample", "rejection_abc",
    "McmcConfig", "Chain", "ChainSummary", "run_chain", "summarize_chain",
    "tune_proposal", "stream", "AbcElError", "DimensionError",
    "NonConvergenceError", "NuWeightsError", "DuplicatePointsError",
    "SingularCovarianceError", "SimulationError", "InitializationError",
]
