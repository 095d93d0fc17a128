"""Pseudo-marginal random-walk Metropolis over model parameters.

The walk moves on a transformed scale ``phi = T(theta)`` (identity, log or
logit per coordinate) with independent normal increments.  The target on
that scale includes the log-Jacobian of ``T^{-1}``.  The noisy
log-posterior estimate of the current state is kept until a proposal is
accepted; it is never refreshed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InitializationError, NonConvergenceError
from .rng import PHASE_CHAIN, PHASE_INIT, PHASE_PILOT, PHASE_SIMULATE, stream


def _identity(x):
    return x


def _logit(p):
    return math.log(p) - math.log1p(-p)


def _expit(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _log_jac_expit(x):
    # log(theta * (1 - theta)) for theta = expit(x)
    return -abs(x) - 2.0 * math.log1p(math.exp(-abs(x)))


# name -> (forward, inverse, log |d inverse / d phi|)
TRANSFORMS = {
    "identity": (_identity, _identity, lambda x: 0.0),
    "log": (math.log, math.exp, _identity),
    "logit": (_logit, _expit, _log_jac_expit),
}


@dataclass(frozen=True)
class McmcConfig:
    """Sampler settings.

    ``iterations`` counts recorded draws; ``burn_in`` further iterations
    run first and are discarded.  ``init`` is a parameter vector, a
    sequence of candidate vectors tried in turn, or ``"prior"`` (draw from
    the prior until the estimate is feasible).
    ``stream_keys`` prefix every random stream, e.g. a replicate index.
    """

    iterations: int
    proposal_sd: tuple
    burn_in: int = 0
    seed: int = 0
    init: object = "prior"
    transform: tuple | None = None
    init_budget: int = 1000
    stream_keys: tuple = ()

    def __post_init__(self):
        sd = np.atleast_1d(np.asarray(self.proposal_sd, dtype=float))
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if self.burn_in < 0:
            raise ValueError("burn_in must be nonnegative")
        if not np.all(sd > 0):
            raise ValueError("proposal_sd must be positive elementwise")
        object.__setattr__(self, "proposal_sd", tuple(float(s) for s in sd))
        if self.transform is not None:
            bad = [t for t in self.transform if t not in TRANSFORMS]
            if bad:
                raise ValueError(f"unknown transforms {bad}; valid: "
                                 f"{sorted(TRANSFORMS)}")
            object.__setattr__(self, "transform", tuple(self.transform))
        if not isinstance(self.init, str):
            arr = np.asarray(self.init, dtype=float)
            if arr.ndim == 2:
                init = tuple(tuple(float(x) for x in row) for row in arr)
            else:
                init = tuple(float(x) for x in np.atleast_1d(arr))
            object.__setattr__(self, "init", init)
        elif self.init != "prior":
            raise ValueError("init must be a parameter vector or 'prior'")


@dataclass(frozen=True)
class Chain:
    """Recorded draws on the original parameter scale.

    ``acceptance_rate`` refers to the recorded iterations.  Proposals whose
    estimate hit the sentinel count in ``n_infeasible_proposals``; the EL
    solver failing to converge counts in ``n_nonconverged`` and is also
    treated as a rejection.
    """

    draws: np.ndarray
    log_post_trace: np.ndarray
    acceptance_rate: float
    n_infeasible_proposals: int
    n_nonconverged: int = 0
    burn_in_acceptance_rate: float = math.nan
    init: np.ndarray = field(default=None, repr=False)
    n_init_draws: int = 0


def _total(value) -> float:
    return float(getattr(value, "total", value))


def find_initial_point(evaluator, cfg: McmcConfig, prior, rng_sim):
    """First feasible state, as ``(theta, log_post, n_tries)``."""
    rng_init = stream(cfg.seed, *cfg.stream_keys, PHASE_INIT)
    model = getattr(evaluator, "model", None)
    for attempt in range(1, cfg.init_budget + 1):
        if cfg.init == "prior":
            theta = np.asarray(prior.sample(rng_init), dtype=float)
        elif isinstance(cfg.init[0], tuple):
            theta = np.asarray(cfg.init[(attempt - 1) % len(cfg.init)])
        else:
            theta = np.asarray(cfg.init, dtype=float)
        try:
            lp = _total(evaluator(theta, rng_sim))
        except NonConvergenceError:
            continue
        if lp > -math.inf:
            return theta, lp, attempt
    if cfg.init == "prior":
        where = "prior draws"
    elif isinstance(cfg.init[0], tuple):
        where = f"tries over {len(cfg.init)} candidate points"
    else:
        where = f"tries at {cfg.init}"
    name = getattr(model, "name", "model")
    m = getattr(getattr(evaluator, "cfg", None), "m", "?")
    raise InitializationError(
        f"no feasible starting point for {name} with m={m} after "
        f"{cfg.init_budget} {where}")


def run_chain(evaluator, cfg: McmcConfig, prior=None) -> Chain:
    """Run a pseudo-marginal random-walk Metropolis chain.

    Parameters
    ----------
    evaluator : callable
        ``evaluator(theta, rng)`` returning an object with a ``total``
        attribute (or a float); ``-inf`` marks a sentinel.
    cfg : McmcConfig
    prior : PriorSpec, optional
        Defaults to ``evaluator.prior``.

    Raises
    ------
    InitializationError
        If no feasible start is found within ``cfg.init_budget`` tries.
    """
    prior = prior if prior is not None else evaluator.prior
    d = len(prior)
    sd = np.asarray(cfg.proposal_sd, dtype=float)
    if sd.shape[0] == 1 and d > 1:
        sd = np.repeat(sd, d)
    if sd.shape[0] != d:
        raise ValueError(f"proposal_sd has {sd.shape[0]} entries, "
                         f"parameter has {d}")
    names = cfg.transform or ("identity",) * d
    fwd = [TRANSFORMS[t][0] for t in names]
    inv = [TRANSFORMS[t][1] for t in names]
    ljac = [TRANSFORMS[t][2] for t in names]

    rng_sim = stream(cfg.seed, *cfg.stream_keys, PHASE_SIMULATE)
    theta, lp, n_init = find_initial_point(evaluator, cfg, prior, rng_sim)
    init = theta.copy()
    phi = np.array([f(x) for f, x in zip(fwd, theta)])
    jac = sum(j(x) for j, x in zip(ljac, phi))

    total = cfg.burn_in + cfg.iterations
    rng = stream(cfg.seed, *cfg.stream_keys, PHASE_CHAIN)
    steps = rng.standard_normal((total, d)) * sd
    log_u = np.log(rng.random(total))
    draws = np.empty((cfg.iterations, d))
    trace = np.empty(cfg.iterations)
    accepted_burn = accepted = n_infeasible = n_nonconv = 0
    for it in range(total):
        phi_new = phi + steps[it]
        try:
            theta_new = np.array([g(x) for g, x in zip(inv, phi_new)])
            ok = bool(np.all(np.isfinite(theta_new)))
        except (OverflowError, ValueError):
            ok = False
        lp_new = -math.inf
        if ok:
            try:
                lp_new = _total(evaluator(theta_new, rng_sim))
            except NonConvergenceError:
                n_nonconv += 1
                lp_new = None
        if lp_new is not None and lp_new == -math.inf:
            n_infeasible += 1
        elif lp_new is not None:
            jac_new = sum(j(x) for j, x in zip(ljac, phi_new))
            if log_u[it] < lp_new + jac_new - lp - jac:
                phi, theta, lp, jac = phi_new, theta_new, lp_new, jac_new
                if it < cfg.burn_in:
                    accepted_burn += 1
                else:
                    accepted += 1
        if it >= cfg.burn_in:
            draws[it - cfg.burn_in] = theta
            trace[it - cfg.burn_in] = lp
    return Chain(draws=draws, log_post_trace=trace,
                 acceptance_rate=accepted / cfg.iterations,
                 n_infeasible_proposals=n_infeasible,
                 n_nonconverged=n_nonconv,
                 burn_in_acceptance_rate=(accepted_burn / cfg.burn_in
                                          if cfg.burn_in else math.nan),
                 init=init, n_init_draws=n_init)


def _walk_spread(chain, transform) -> np.ndarray:
    """Per-coordinate standard deviation of a chain on the walk scale."""
    names = transform or ("identity",) * chain.draws.shape[1]
    phi = np.column_stack([[TRANSFORMS[t][0](x) for x in chain.draws[:, j]]
                           for j, t in enumerate(names)])
    return phi.std(axis=0)


def tune_proposal(evaluator, cfg: McmcConfig, rounds: int = 5,
                  iterations: int = 500, target=(0.15, 0.40),
                  prior=None) -> tuple[tuple, object]:
    """Pilot runs that set the walk scales.

    Each round runs a short chain from the end of the previous one.  The
    first round that makes at least ``max(20, 5 d)`` moves sets the scales
    to ``2.38 / sqrt(d)`` times the per-coordinate spread of its draws on
    the walk scale.  Otherwise all scales are multiplied by
    ``acc / mid(target)`` (clipped to ``[0.3, 3]``) while the acceptance
    rate is outside ``target``.  When a shrink fails to raise the
    acceptance rate, rejections are driven by the noise of the estimator
    rather than the step size; the previous scales are restored and tuning
    stops.  Returns the tuned scales and the last pilot state, for use as
    the recorded run's ``proposal_sd`` and ``init``.
    """
    sd = np.asarray(cfg.proposal_sd, dtype=float)
    d = sd.size
    init = cfg.init
    mid = 0.5 * (target[0] + target[1])
    prev_sd, prev_acc = None, None
    shaped = False
    for k in range(rounds):
        pilot = McmcConfig(iterations=iterations, proposal_sd=tuple(sd),
                           seed=cfg.seed, init=init,
                           transform=cfg.transform,
                           init_budget=cfg.init_budget,
                           stream_keys=(*cfg.stream_keys, PHASE_PILOT, k))
        chain = run_chain(evaluator, pilot, prior)
        init = tuple(chain.draws[-1])
        acc = chain.acceptance_rate
        if not shaped and acc * iterations >= max(20, 5 * d):
            spread = _walk_spread(chain, cfg.transform)
            if np.all(spread > 0):
                sd = 2.38 / math.sqrt(d) * spread
                shaped, prev_sd, prev_acc = True, None, None
                continue
        if target[0] <= acc <= target[1]:
            break
        if (prev_acc is not None and 0 < prev_acc and acc < target[0]
                and acc <= 1.2 * prev_acc):
            sd = prev_sd
            break
        factor = float(np.clip(acc / mid, 0.3, 3.0))
        prev_sd, prev_acc = (sd, acc) if factor < 1.0 else (None, None)
        sd = sd * factor
    return tuple(float(x) for x in sd), init


def effective_sample_size(x) -> float:
    """ESS from Geyer's initial monotone sequence of autocorrelations.

    A constant chain gives 1.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    xc = x - x.mean()
    var = float(xc @ xc) / n
    if n < 2 or not var > 0:
        return 1.0
    size = 1 << int(2 * n - 1).bit_length()
    f = np.fft.rfft(xc, size)
    acf = np.fft.irfft(f * np.conj(f), size)[:n] / (n * var)
    n_pairs = n // 2
    gam = acf[:2 * n_pairs:2] + acf[1:2 * n_pairs:2]
    neg = np.flatnonzero(gam <= 0)
    gam = gam[:neg[0]] if neg.size else gam
    gam = np.minimum.accumulate(gam)
    tau = -1.0 + 2.0 * float(gam.sum())
    return float(min(max(n / max(tau, 1e-12), 1.0), n * math.log10(max(n, 10))))


@dataclass(frozen=True)
class ChainSummary:
    """Per-coordinate posterior summaries; ``interval`` is the central 95%
    credible interval."""

    mean: np.ndarray
    probs: tuple
    quantiles: np.ndarray
    interval: np.ndarray
    ess: np.ndarray

    @property
    def interval_length(self) -> np.ndarray:
        return self.interval[:, 1] - self.interval[:, 0]


def summarize_chain(chain, probs=(0.025, 0.5, 0.975)) -> ChainSummary:
    """Mean, type-7 quantiles at ``probs``, central 95% interval and ESS.

    ``chain`` is a :class:`Chain` or an ``(n, d)`` array of draws.
    """
    draws = np.asarray(getattr(chain, "draws", chain), dtype=float)
    if draws.ndim == 1:
        draws = draws[:, None]
    if draws.shape[0] == 0:
        raise ValueError("empty chain")
    probs = tuple(float(p) for p in probs)
    q = np.quantile(draws, probs, axis=0).T
    interval = np.quantile(draws, [0.025, 0.975], axis=0).T
    ess = np.array([effective_sample_size(draws[:, j])
                    for j in range(draws.shape[1])])
    return ChainSummary(mean=draws.mean(axis=0), probs=probs, quantiles=q,
                        interval=interval, ess=ess)
