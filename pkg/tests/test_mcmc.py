import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special, stats

from abcel.errors import InitializationError, NonConvergenceError
from abcel.mcmc import (TRANSFORMS, McmcConfig, effective_sample_size,
                        run_chain, summarize_chain, tune_proposal)
from abcel.priors import Beta, Normal, PriorSpec, Uniform
from abcel.rng import stream


class Analytic:
    """Exact log posterior, optionally with a support restriction."""

    def __init__(self, prior, loglik):
        self.prior = prior
        self.loglik = loglik
        self.calls = 0

    def __call__(self, theta, rng):
        self.calls += 1
        lp = self.prior.logpdf(theta)
        if lp == -math.inf:
            return lp
        return lp + self.loglik(theta)


class Scripted:
    """Returns a fixed sequence of totals, then repeats the last one."""

    def __init__(self, prior, values):
        self.prior = prior
        self.values = list(values)
        self.i = 0

    def __call__(self, theta, rng):
        v = self.values[min(self.i, len(self.values) - 1)]
        self.i += 1
        if isinstance(v, Exception):
            raise v
        return v


def _normal_target():
    return Analytic(PriorSpec([Normal(0.0, 100.0)]),
                    lambda t: -0.5 * ((t[0] - 1.0) / 0.5) ** 2)


def test_config_validation():
    with pytest.raises(ValueError):
        McmcConfig(iterations=0, proposal_sd=(1.0,))
    with pytest.raises(ValueError):
        McmcConfig(iterations=10, proposal_sd=(0.0,))
    with pytest.raises(ValueError):
        McmcConfig(iterations=10, proposal_sd=(1.0,), transform=("nope",))


def test_higher_proposal_always_accepted():
    prior = PriorSpec([Uniform(-10, 10)])
    ev = Scripted(prior, [0.0] + [1.0 + i for i in range(50)])
    chain = run_chain(ev, McmcConfig(iterations=50, proposal_sd=(0.1,),
                                     init=(0.0,)))
    assert chain.acceptance_rate == 1.0
    np.testing.assert_array_equal(chain.log_post_trace, np.arange(1.0, 51.0))


def test_sentinel_everywhere_but_init_never_moves():
    prior = PriorSpec([Uniform(-10, 10)])
    ev = Scripted(prior, [0.0] + [-math.inf] * 5)
    chain = run_chain(ev, McmcConfig(iterations=100, proposal_sd=(1.0,),
                                     init=(0.5,)))
    assert chain.acceptance_rate == 0.0
    assert chain.n_infeasible_proposals == 100
    np.testing.assert_array_equal(chain.draws, 0.5)


def test_nonconvergence_is_a_rejection():
    prior = PriorSpec([Uniform(-10, 10)])
    ev = Scripted(prior, [0.0] + [NonConvergenceError("x")] * 3)
    chain = run_chain(ev, McmcConfig(iterations=20, proposal_sd=(1.0,),
                                     init=(0.5,)))
    assert chain.n_nonconverged == 20
    assert chain.acceptance_rate == 0.0


def test_current_estimate_is_held_fixed():
    # a noisy evaluator: the stored value only changes on acceptance
    prior = PriorSpec([Uniform(-5, 5)])
    noise = stream(9)

    def ev(theta, rng):
        return -0.5 * theta[0] ** 2 + noise.normal()

    ev.prior = prior
    chain = run_chain(ev, McmcConfig(iterations=2000, proposal_sd=(1.0,),
                                     init=(0.0,)))
    moved = np.flatnonzero(np.any(np.diff(chain.draws, axis=0) != 0, axis=1))
    changed = np.flatnonzero(np.diff(chain.log_post_trace) != 0)
    np.testing.assert_array_equal(moved, changed)


def test_initialization_failure_names_model_and_m():
    class Ev:
        prior = PriorSpec([Uniform(0, 1)])

        class model:
            name = "toy"

        class cfg:
            m = 7

        def __call__(self, theta, rng):
            return -math.inf

    with pytest.raises(InitializationError, match="toy with m=7"):
        run_chain(Ev(), McmcConfig(iterations=5, proposal_sd=(0.1,),
                                   init_budget=20))


def test_prior_init_draws_until_feasible():
    prior = PriorSpec([Uniform(0, 1)])
    ev = Analytic(prior, lambda t: 0.0 if t[0] > 0.9 else -math.inf)
    chain = run_chain(ev, McmcConfig(iterations=10, proposal_sd=(0.01,),
                                     seed=3))
    assert chain.init[0] > 0.9
    assert chain.n_init_draws > 1


def test_candidate_init_cycles():
    prior = PriorSpec([Uniform(0, 10)])
    ev = Analytic(prior, lambda t: 0.0 if t[0] > 5 else -math.inf)
    cfg = McmcConfig(iterations=5, proposal_sd=(0.01,),
                     init=[[1.0], [2.0], [7.0]])
    chain = run_chain(ev, cfg)
    assert chain.init[0] == 7.0 and chain.n_init_draws == 3


def test_reproducible():
    ev = _normal_target()
    cfg = McmcConfig(iterations=500, burn_in=100, proposal_sd=(0.7,), seed=4,
                     init=(0.0,))
    a, b = run_chain(ev, cfg), run_chain(ev, cfg)
    np.testing.assert_array_equal(a.draws, b.draws)
    np.testing.assert_array_equal(a.log_post_trace, b.log_post_trace)
    c = run_chain(ev, McmcConfig(iterations=500, burn_in=100,
                                 proposal_sd=(0.7,), seed=5, init=(0.0,)))
    assert not np.array_equal(a.draws, c.draws)


def test_detailed_balance_quantiles():
    ev = _normal_target()
    chain = run_chain(ev, McmcConfig(iterations=100_000, burn_in=1000,
                                     proposal_sd=(1.2,), seed=1, init=(1.0,)))
    x = chain.draws[:, 0]
    ess = effective_sample_size(x)
    for p in (0.025, 0.25, 0.5, 0.75, 0.975):
        q = stats.norm.ppf(p, 1.0, 0.5)
        se = math.sqrt(p * (1 - p) / ess) / stats.norm.pdf(q, 1.0, 0.5)
        assert abs(np.quantile(x, p) - q) <= 3 * se


def test_logit_walk_targets_beta():
    # flat likelihood: the chain must reproduce the prior through the
    # Jacobian of the logit transform
    prior = PriorSpec([Beta(2.0, 5.0)])
    ev = Analytic(prior, lambda t: 0.0)
    chain = run_chain(ev, McmcConfig(iterations=60_000, burn_in=1000,
                                     proposal_sd=(1.0,), seed=2,
                                     init=(0.3,), transform=("logit",)))
    x = chain.draws[:, 0]
    se = x.std() / math.sqrt(effective_sample_size(x))
    assert abs(x.mean() - 2 / 7) <= 3 * se
    assert np.all((x > 0) & (x < 1))


def test_log_walk_targets_gamma_like():
    prior = PriorSpec([Uniform(0.0, 50.0)])
    ev = Analytic(prior, lambda t: 2.0 * math.log(t[0]) - t[0])
    chain = run_chain(ev, McmcConfig(iterations=60_000, burn_in=1000,
                                     proposal_sd=(0.8,), seed=3,
                                     init=(2.0,), transform=("log",)))
    x = chain.draws[:, 0]
    se = x.std() / math.sqrt(effective_sample_size(x))
    assert abs(x.mean() - 3.0) <= 3 * se


@settings(max_examples=50)
@given(st.floats(-30, 30))
def test_transform_roundtrip(x):
    for name in ("identity", "log", "logit"):
        fwd, inv, _ = TRANSFORMS[name]
        theta = inv(x)
        if name == "logit" and not 0 < theta < 1:
            continue
        # logit near 0 or 1 amplifies rounding by about exp(|x|)
        tol = 1e-12 + (4e-16 * math.exp(abs(x)) if name == "logit" else 0)
        assert fwd(theta) == pytest.approx(x, rel=1e-12, abs=tol)


@settings(max_examples=50)
@given(st.floats(-700, 700))
def test_logit_jacobian(x):
    _, _, ljac = TRANSFORMS["logit"]
    assert ljac(x) == pytest.approx(special.log_expit(x)
                                    + special.log_expit(-x), rel=1e-12)


def test_draws_stay_in_support():
    prior = PriorSpec([Uniform(0, 1), Uniform(-1, 1)])
    ev = Analytic(prior, lambda t: 0.0)
    chain = run_chain(ev, McmcConfig(iterations=2000, proposal_sd=(0.5, 0.5),
                                     init=(0.5, 0.0)))
    assert all(prior.in_support(t) for t in chain.draws)


def test_proposal_sd_length_checked():
    ev = _normal_target()
    with pytest.raises(ValueError):
        run_chain(ev, McmcConfig(iterations=5, proposal_sd=(1.0, 1.0),
                                 init=(0.0,)))


def test_tuning_reaches_target_band():
    ev = _normal_target()
    cfg = McmcConfig(iterations=10, proposal_sd=(20.0,), init=(1.0,), seed=6)
    sd, init = tune_proposal(ev, cfg, rounds=6, iterations=500)
    chain = run_chain(ev, McmcConfig(iterations=4000, proposal_sd=sd,
                                     init=init, seed=7))
    assert sd[0] < 20.0
    assert 0.15 <= chain.acceptance_rate <= 0.6


def test_ess_constant_chain():
    assert effective_sample_size(np.ones(100)) == 1.0


def test_ess_iid_close_to_length():
    x = stream(8).standard_normal(10_000)
    assert effective_sample_size(x) == pytest.approx(10_000, rel=0.1)


def test_ess_ar1():
    rho, n = 0.9, 200_000
    e = stream(9).standard_normal(n)
    x = np.empty(n)
    x[0] = e[0]
    for i in range(1, n):
        x[i] = rho * x[i - 1] + e[i]
    expect = n * (1 - rho) / (1 + rho)
    assert effective_sample_size(x) == pytest.approx(expect, rel=0.15)


def test_summary_constant_chain():
    s = summarize_chain(np.full((50, 2), 3.0))
    np.testing.assert_array_equal(s.quantiles, 3.0)
    np.testing.assert_array_equal(s.ess, 1.0)
    np.testing.assert_array_equal(s.interval_length, 0.0)


def test_summary_iid_normal_interval():
    s = summarize_chain(stream(10).standard_normal(10_000))
    assert s.interval[0, 0] == pytest.approx(-1.96, abs=0.1)
    assert s.interval[0, 1] == pytest.approx(1.96, abs=0.1)


def test_summary_probs_give_interval():
    x = stream(11).standard_normal((1000, 1))
    s = summarize_chain(x, probs=(0.025, 0.975))
    np.testing.assert_array_equal(s.quantiles, s.interval)


def test_summary_empty_chain():
    with pytest.raises(ValueError):
        summarize_chain(np.empty((0, 1)))
