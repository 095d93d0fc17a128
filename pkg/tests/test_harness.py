import json
import math

import numpy as np
import pytest

from abcel.harness import (DESK_ITERATIONS, FULL_ITERATIONS, ExperimentSpec,
                           SpecError, _model, _moment_match, analytic_grid,
                           label_key, run, run_compare, run_coverage,
                           run_profile, run_sample)
from abcel.io import read_csv
from abcel.models import NormalVariance
from abcel.rng import PHASE_INIT, stream

QUICK = dict(iterations=200, burn_in=100, abc_sims=2000, abc_keep=0.05,
             tune=False)


def test_spec_defaults_and_scales():
    s = ExperimentSpec("coverage", "normal_location")
    assert s.iterations == s.burn_in == DESK_ITERATIONS
    f = ExperimentSpec("coverage", "normal_location", full=True)
    assert f.iterations == f.burn_in == FULL_ITERATIONS
    assert ExperimentSpec("profile", "normal_location",
                          summaries="mean").summaries == ("mean",)
    assert ExperimentSpec("profile", "normal_location",
                          entropy="kl").entropy == "weighted_kl"


@pytest.mark.parametrize("kw", [
    dict(kind="bogus"), dict(model="bogus"), dict(summaries=("nope",)),
    dict(entropy="bogus"), dict(methods=("mcmc",)), dict(replicates=0),
    dict(init="somewhere"),
])
def test_spec_rejects_unknown_names(kw):
    args = dict(kind="coverage", model="normal_location") | kw
    with pytest.raises(SpecError):
        ExperimentSpec(**args)


def test_spec_dict_is_json_ready():
    d = ExperimentSpec("compare", "gk", m=40).to_dict()
    assert json.loads(json.dumps(d))["model"] == "gk"


def test_label_key_stable():
    assert label_key("mean") == label_key("mean") != label_key("moments4")
    assert label_key(None) == label_key("None")


def test_analytic_grid_covers_mode():
    model = NormalVariance()
    grid = analytic_grid(model, np.array([4.0]), 61)
    assert len(grid) == 61 and grid[0] < 4.0 < grid[-1]
    assert np.all(np.diff(grid) > 0)


def test_profile_outputs(tmp_path):
    spec = ExperimentSpec("profile", "normal_variance", summaries="g1",
                          grid=(3, 5, 5), repeats=4, m=25, seed=1)
    res = run_profile(spec)
    assert len(res.grid) == 5 and res.analytic is not None
    assert 0.0 <= res.analytic_in_band <= 1.0
    paths = res.write(tmp_path / "p.csv")
    header, rows = read_csv(paths[0])
    assert header == list(res.HEADER) and len(rows) == 5
    meta = json.loads(paths[1].read_text())
    assert meta["summaries"] == "g1" and meta["spec"]["repeats"] == 4
    assert "profile" in res.summary_line()


def test_profile_default_grid_without_analytic():
    spec = ExperimentSpec("profile", "normal_location",
                          summaries="moments4", grid_points=3, repeats=2)
    res = run_profile(spec)
    assert len(res.grid) == 3 and res.analytic is None
    assert math.isnan(res.analytic_in_band)


def test_sample_chain(tmp_path):
    spec = ExperimentSpec("sample", "normal_location", seed=3, **QUICK)
    res = run_sample(spec)
    assert res.chain.draws.shape == (200, 1)
    assert res.chain.acceptance_rate > 0
    paths = res.write(tmp_path / "c.csv")
    assert read_csv(paths[0])[0] == ["theta_1", "log_post"]
    assert "acceptance" in res.summary_line()


def test_coverage_report(tmp_path):
    spec = ExperimentSpec("coverage", "normal_location",
                          summaries=("mean", "moments4"), replicates=3,
                          seed=4, **QUICK)
    rep = run_coverage(spec)
    assert [r.label for r in rep.rows] == ["mean", "moments4"]
    row = rep.row("mean")
    assert row.n_replicates + row.n_failed == 3
    assert 0.0 <= row.coverage <= 1.0 and row.mean_length > 0
    paths = rep.write(tmp_path / "cov.csv")
    assert [p.name for p in paths] == ["cov.csv", "cov.replicates.csv",
                                       "cov.json"]
    _, rows = read_csv(paths[1])
    assert len(rows) == 6


def test_coverage_replicates_independent_of_other_configurations():
    one = run_coverage(ExperimentSpec("coverage", "normal_location",
                                      summaries="mean", replicates=2,
                                      seed=5, **QUICK))
    two = run_coverage(ExperimentSpec("coverage", "normal_location",
                                      summaries=("moments4", "mean"),
                                      replicates=2, seed=5, **QUICK))
    a = [r for r in one.replicates]
    b = [r for r in two.replicates if r.label == "mean"]
    assert a == b


def test_coverage_worker_count_does_not_change_results():
    spec = dict(kind="coverage", model="normal_location", replicates=2,
                seed=6, **QUICK)
    serial = run_coverage(ExperimentSpec(**spec))
    parallel = run_coverage(ExperimentSpec(**spec, workers=2))
    assert serial.replicates == parallel.replicates


def test_compare_methods(tmp_path):
    spec = ExperimentSpec("compare", "normal_location", replicates=1, seed=7,
                          **QUICK)
    res = run_compare(spec)
    assert {r["method"] for r in res.rows} == {"abcel", "synthetic",
                                               "rejection_abc"}
    assert all(r["ok"] for r in res.rows)
    paths = res.write(tmp_path / "cmp.csv")
    header, rows = read_csv(paths[1])
    assert header == ["replicate", "method", "draw", "mu"]
    assert "intervals contain the truth" in res.summary_line()


def test_compare_failure_is_recorded_not_raised():
    # four summaries need m >= 6 for a synthetic-likelihood covariance
    spec = ExperimentSpec("compare", "normal_location", summaries="moments4",
                          m=5, replicates=1, seed=8, methods=("synthetic",),
                          **QUICK)
    res = run_compare(spec)
    assert [r["ok"] for r in res.rows] == [0]
    assert res.rows[0]["error"].startswith("DimensionError")
    assert "1 failed" in res.summary_line()


def test_run_dispatch():
    spec = ExperimentSpec("profile", "normal_variance", grid=(3, 5, 3),
                          repeats=2)
    assert run(spec).grid.size == 3


def test_observed_data_depend_only_on_seed_and_replicate():
    model = NormalVariance()
    a = model.observe(stream(9, 0, 0))[1]
    b = model.observe(stream(9, 0, 0))[1]
    np.testing.assert_array_equal(a, b)


def test_moment_match_finds_the_observed_mean():
    spec = ExperimentSpec("sample", "normal_location", m=30, seed=4)
    model = _model(spec, spec.labels()[0])
    _, obs = model.observe(stream(4))
    cands = [np.array([3.0]), np.array([-2.0])]
    optima = list(_moment_match(spec, model, obs, cands, (0,)))
    assert optima
    # the synthetic-likelihood optimum matches the simulated mean to obs
    sims = model.simulate_summaries(optima[0], spec.m,
                                    stream(4, 0, PHASE_INIT, 2))
    assert abs(sims.mean() - obs[0]) < 1e-3


def test_moment_match_needs_enough_replicates():
    spec = ExperimentSpec("sample", "gk", m=5, seed=1)
    model = _model(spec, spec.labels()[0])
    _, obs = model.observe(stream(1))
    assert list(_moment_match(spec, model, obs, [model.theta_truth],
                              (0,))) == []
