import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcel.errors import DimensionError, SimulationError
from abcel.models import NormalLocation, NormalVariance
from abcel.models.base import GenerativeModel
from abcel.posterior import (AbcElEvaluator, EvaluatorConfig,
                             eval_log_posterior, grid_profile, max_align,
                             sentinel_quantile)
from abcel.priors import PriorSpec, Uniform
from abcel.rng import stream


class Counting(NormalVariance):
    def __init__(self, **kw):
        super().__init__(**kw)
        self.calls = 0

    def simulate_summaries(self, theta, m, rng):
        self.calls += 1
        return super().simulate_summaries(theta, m, rng)


class Lattice(GenerativeModel):
    """Summaries on a coarse lattice, so replicates often coincide."""

    name = "lattice"
    param_names = ("theta",)

    def __init__(self, output=None):
        super().__init__(PriorSpec([Uniform(-5, 5)]), 1, ("s",))
        self.output = output

    def simulate_summaries(self, theta, m, rng):
        if self.output is not None:
            return np.full((m, 1), self.output)
        return np.round(theta[0] + rng.standard_normal((m, 1)))


def _cfg(model=None, obs=(0.0,), m=25, **kw):
    return EvaluatorConfig(model or NormalLocation(), np.array(obs), m, **kw)


def test_zero_prior_skips_simulation():
    model = Counting()
    cfg = EvaluatorConfig(model, np.array([4.0]), 25)
    val = eval_log_posterior([11.0], cfg, stream(0))
    assert val.total == -math.inf and not val.feasible
    assert val.log_prior == -math.inf
    assert model.calls == 0
    eval_log_posterior([4.0], cfg, stream(0))
    assert model.calls == 1


def test_far_observation_is_infeasible():
    val = eval_log_posterior([0.0], _cfg(obs=(5.0,)), stream(1))
    assert not val.feasible and val.total == -math.inf
    assert val.mean_log_w == -math.inf and math.isnan(val.entropy)


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.0, 1.0), st.integers(0, 2**32 - 1))
def test_decomposition_identity(theta, seed):
    val = eval_log_posterior([theta], _cfg(), stream(seed))
    if val.feasible:
        assert val.total == val.log_prior + val.mean_log_w + val.entropy
    else:
        assert val.total == -math.inf


def test_same_stream_same_value():
    cfg = _cfg(NormalVariance(), obs=(4.0,))
    a = eval_log_posterior([4.0], cfg, stream(5, 1))
    b = eval_log_posterior([4.0], cfg, stream(5, 1))
    assert a == b


def test_entropy_modes():
    cfg = _cfg(entropy_mode="none")
    val = eval_log_posterior([0.0], cfg, stream(2))
    assert val.entropy == 0.0
    kl = eval_log_posterior([0.0], _cfg(entropy_mode="weighted_kl"),
                            stream(2))
    ga = eval_log_posterior([0.0], _cfg(entropy_mode="gaussian"), stream(2))
    assert kl.mean_log_w == ga.mean_log_w == val.mean_log_w
    assert kl.entropy != ga.entropy


def test_model_default_entropy():
    assert _cfg().entropy_mode == "gaussian"
    cfg = _cfg(entropy_mode="weighted_kl")
    assert cfg.k == 5 and cfg.nu.k == 5


def test_unknown_entropy_mode():
    with pytest.raises(ValueError):
        _cfg(entropy_mode="bogus")


def test_config_checks_dimensions():
    with pytest.raises(DimensionError):
        _cfg(obs=(0.0, 1.0))
    with pytest.raises(DimensionError):
        _cfg(m=2)
    with pytest.raises(DimensionError):
        EvaluatorConfig(NormalLocation(summaries="moments4"),
                        np.zeros(4), 5)
    with pytest.raises(DimensionError):
        _cfg(obs=(np.nan,))


def test_theta_dimension_checked():
    with pytest.raises(DimensionError):
        eval_log_posterior([0.0, 1.0], _cfg(), stream(0))


def test_nonfinite_simulation_is_an_error():
    cfg = EvaluatorConfig(Lattice(output=np.nan), np.array([0.0]), 10)
    with pytest.raises(SimulationError):
        eval_log_posterior([0.0], cfg, stream(0))


def test_duplicate_summaries_give_sentinel():
    cfg = EvaluatorConfig(Lattice(), np.array([0.0]), 25,
                          entropy_mode="weighted_kl")
    val = eval_log_posterior([0.0], cfg, stream(0))
    assert not val.feasible and val.total == -math.inf
    assert val.mean_log_w > -math.inf


def test_singular_covariance_gives_sentinel():
    cfg = EvaluatorConfig(Lattice(output=0.0), np.array([0.0]), 10,
                          entropy_mode="gaussian")
    val = eval_log_posterior([0.0], cfg, stream(0))
    assert not val.feasible


def test_evaluator_callable():
    ev = AbcElEvaluator(_cfg())
    assert ev.method == "abcel" and ev.prior is ev.model.prior
    assert ev([0.0], stream(3)) == eval_log_posterior([0.0], ev.cfg,
                                                       stream(3))


def test_sentinel_quantile():
    v = np.array([-np.inf, 1.0, 2.0, 3.0])
    lo, hi = sentinel_quantile(v, [0.0, 1.0])
    assert lo == -np.inf and hi == 3.0
    assert sentinel_quantile(v, [0.1])[0] == -np.inf
    assert sentinel_quantile(v, [0.5])[0] == pytest.approx(1.5)
    np.testing.assert_allclose(sentinel_quantile(np.arange(5.0), [0.3]),
                               np.quantile(np.arange(5.0), [0.3]))


def test_max_align():
    out = max_align([1.0, 3.0, -np.inf], [0.0, -2.0, 5.0])
    np.testing.assert_allclose(out, [-2.0, -4.0, 3.0])


def test_profile_single_repeat_collapses_band():
    cfg = _cfg(NormalVariance(), obs=(4.0,))
    table = grid_profile(cfg, [3.5, 4.0, 4.5], repeats=1, seed=1)
    fin = np.isfinite(table.totals[:, 0])
    np.testing.assert_array_equal(table.lower[fin], table.upper[fin])
    np.testing.assert_array_equal(table.mean[fin], table.totals[fin, 0])


def test_profile_one_point_grid():
    table = grid_profile(_cfg(NormalVariance(), obs=(4.0,)), [4.0], 5)
    assert len(table) == 1 and table.totals.shape == (1, 5)


def test_profile_outside_prior_rows():
    table = grid_profile(_cfg(NormalVariance(), obs=(4.0,)), [-1.0, 12.0], 3)
    assert np.all(np.isnan(table.mean))
    np.testing.assert_array_equal(table.feasible_fraction, 0.0)
    np.testing.assert_array_equal(table.upper, -np.inf)


def test_profile_argument_checks():
    cfg = _cfg(NormalVariance(), obs=(4.0,))
    with pytest.raises(ValueError):
        grid_profile(cfg, [], 3)
    with pytest.raises(ValueError):
        grid_profile(cfg, [4.0], 0)


def test_profile_reproducible():
    cfg = _cfg(NormalVariance(), obs=(4.0,))
    a = grid_profile(cfg, [3.0, 4.0], 4, seed=9)
    b = grid_profile(cfg, [3.0, 4.0], 4, seed=9)
    np.testing.assert_array_equal(a.totals, b.totals)


def test_profile_argmax_near_analytic_mode():
    model = NormalVariance()
    grid = np.linspace(2, 8, 61)
    analytic = model.analytic_log_posterior(grid, [4.0])
    table = grid_profile(_cfg(model, obs=(4.0,)), grid, 100, seed=11)
    mode = grid[np.argmax(analytic)]
    assert abs(grid[np.nanargmax(table.mean)] - mode) <= 0.5


def test_band_narrower_with_more_replicates():
    model = NormalVariance()
    grid = [3.6, 4.0, 4.4]
    width = {}
    for m in (25, 500):
        t = grid_profile(_cfg(model, obs=(4.0,), m=m), grid, 20, seed=m)
        width[m] = t.upper - t.lower
    assert np.all(width[500] < width[25])
