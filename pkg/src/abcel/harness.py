"""Experiment orchestration: posterior profiles, single chains, coverage
studies and method comparisons, with CSV/JSON outputs.

Seed discipline: replicate ``i`` draws its observed dataset from stream
``(seed, i, PHASE_OBSERVED)`` and its chain streams from keys starting with
``(i, label_key)``, where ``label_key`` is a CRC32 of the configuration
label.  Results therefore do not depend on execution order, worker count
or which other configurations run alongside.
"""

from __future__ import annotations

import math
import warnings
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from pathlib import Path

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import minimize

from .baselines import (SyntheticConfig, SyntheticEvaluator, gaussian_loglik,
                        rejection_abc)
from .errors import AbcElError
from .io import sidecar_path, write_csv, write_json
from .mcmc import McmcConfig, run_chain, summarize_chain, tune_proposal
from .models import MODELS, make_model
from .posterior import (AbcElEvaluator, EvaluatorConfig, grid_profile,
                        max_align)
from .rng import PHASE_ABC, PHASE_INIT, PHASE_OBSERVED, PHASE_PILOT, stream

KINDS = ("profile", "sample", "coverage", "compare")
METHODS = ("abcel", "synthetic", "rejection_abc")
ENTROPY_ALIASES = {"kl": "weighted_kl", "weighted_kl": "weighted_kl",
                   "gaussian": "gaussian", "none": "none"}
DESK_ITERATIONS = 10_000
FULL_ITERATIONS = 50_000
PROFILE_DENSITY_FLOOR = 0.05


class SpecError(ValueError):
    """An experiment spec names something that does not exist."""


@dataclass(frozen=True)
class ExperimentSpec:
    """Resolved description of one experiment.

    ``summaries`` lists one summary-set selector per configuration (empty
    means the model default).  ``iterations`` and ``burn_in`` default to
    the desk scale, or to the full scale when ``full`` is set.  ``grid`` is
    ``(low, high, n)``; without it, profiles span the region where the
    normalised analytic posterior density exceeds 0.05.

    ``init`` selects where chains start: ``"abc"`` (best of a few points
    from a regression-ABC pilot of ``abc_sims`` draws keeping
    ``abc_keep``), ``"truth"`` or ``"prior"`` (prior draws until the
    estimate is feasible).
    """

    kind: str
    model: str
    summaries: tuple = ()
    m: int = 25
    seed: int = 0
    out: str | None = None
    entropy: str | None = None
    k: int | None = None
    iterations: int | None = None
    burn_in: int | None = None
    full: bool = False
    replicates: int = 1
    grid: tuple | None = None
    grid_points: int = 61
    repeats: int = 100
    methods: tuple = METHODS
    n_obs: int | None = None
    workers: int = 1
    init: str = "abc"
    tune: bool = True
    proposal_sd: tuple | None = None
    abc_sims: int = 20_000
    abc_keep: float = 0.02

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown experiment kind {self.kind!r}; "
                            f"valid: {list(KINDS)}")
        if self.model not in MODELS:
            raise SpecError(f"unknown model {self.model!r}; valid: "
                            f"{sorted(MODELS)}")
        summaries = ((self.summaries,) if isinstance(self.summaries, str)
                     else tuple(self.summaries))
        object.__setattr__(self, "summaries", summaries)
        for sel in summaries or (None,):
            try:
                make_model(self.model, sel, self.n_obs)
            except KeyError as exc:
                raise SpecError(exc.args[0]) from None
        if self.entropy is not None:
            if self.entropy not in ENTROPY_ALIASES:
                raise SpecError(f"unknown entropy mode {self.entropy!r}; "
                                f"valid: kl, gaussian, none")
            object.__setattr__(self, "entropy",
                               ENTROPY_ALIASES[self.entropy])
        methods = ((self.methods,) if isinstance(self.methods, str)
                   else tuple(self.methods))
        bad = [mt for mt in methods if mt not in METHODS]
        if bad or not methods:
            raise SpecError(f"unknown methods {bad}; valid: {list(METHODS)}")
        object.__setattr__(self, "methods", methods)
        if self.replicates < 1 or self.repeats < 1:
            raise SpecError("replicates and repeats must be at least 1")
        if self.init not in ("prior", "truth", "abc"):
            raise SpecError("init must be one of prior, truth, abc")
        scale = FULL_ITERATIONS if self.full else DESK_ITERATIONS
        if self.iterations is None:
            object.__setattr__(self, "iterations", scale)
        if self.burn_in is None:
            object.__setattr__(self, "burn_in", scale)
        if self.grid is not None:
            a, b, n = self.grid
            object.__setattr__(self, "grid", (float(a), float(b), int(n)))

    def labels(self) -> tuple:
        return self.summaries or (None,)

    def to_dict(self) -> dict:
        return asdict(self)


def label_key(label) -> int:
    return zlib.crc32(str(label).encode())


def _model(spec: ExperimentSpec, summaries=None):
    return make_model(spec.model, summaries, spec.n_obs)


def _observe(spec: ExperimentSpec, model, replicate: int):
    return model.observe(stream(spec.seed, replicate, PHASE_OBSERVED))


def _evaluator(spec: ExperimentSpec, method: str, model, obs):
    if method == "abcel":
        return AbcElEvaluator(EvaluatorConfig(
            model, obs, spec.m, entropy_mode=spec.entropy, k=spec.k))
    if method == "synthetic":
        return SyntheticEvaluator(SyntheticConfig(model, obs, spec.m))
    raise SpecError(f"{method} is not an MCMC method")


ABC_START_CANDIDATES = 50
MOMENT_MATCH_EVALS = 1000
MOMENT_MATCH_BUDGET = 10000


def _best_candidate(evaluator, cands, rng):
    best, best_lp = None, -math.inf
    for c in cands:
        try:
            lp = float(evaluator(c, rng).total)
        except AbcElError:
            continue
        if lp > best_lp:
            best, best_lp = c, lp
    return best


def _moment_match(spec, model, obs, cands, keys):
    """Local maximisers of the synthetic likelihood, with common random numbers.

    Every evaluation reuses one stream, so the objective is a smooth
    function of ``theta`` that Nelder-Mead can follow.  Its maximiser centres
    the simulated summaries on the observed one, which is where an abcEL
    estimate is most often feasible.  The surface has poor local optima, so
    the search restarts from the ABC mean and median and then from the
    candidates in order of objective value.  Optima are yielded one at a
    time until ``MOMENT_MATCH_BUDGET`` objective evaluations are spent.
    Nothing is yielded when the synthetic likelihood is unavailable.
    """
    if spec.m < model.dim_summary + 2 or not cands:
        return
    key = (spec.seed, *keys, PHASE_INIT, 2)
    prior = model.prior
    spent = 0

    def objective(theta):
        nonlocal spent
        spent += 1
        if not prior.in_support(theta):
            return math.inf
        try:
            sims = model.simulate_summaries(np.asarray(theta), spec.m,
                                            stream(*key))
        except AbcElError:
            return math.inf
        val = gaussian_loglik(sims, obs).log_density
        return -val if math.isfinite(val) else math.inf

    vals = np.array([objective(c) for c in cands])
    order = [i for i in np.argsort(vals, kind="stable")
             if math.isfinite(vals[i])]
    starts = dict.fromkeys([i for i in (0, 1) if i in order] + order)
    for i in starts:
        if spent >= MOMENT_MATCH_BUDGET:
            return
        res = minimize(objective, np.asarray(cands[i], dtype=float),
                       method="Nelder-Mead",
                       options=dict(maxfev=MOMENT_MATCH_EVALS, xatol=1e-3,
                                    fatol=1e-4))
        x = res.x if res.fun <= vals[i] else np.asarray(cands[i])
        if prior.in_support(x):
            yield x


def _initial_point(spec, model, evaluator, obs, keys, abc=None):
    """Chain start for ``spec.init``.

    For ``"abc"`` the candidates are the mean and median of a
    regression-ABC pilot plus its closest accepted draws; each is
    evaluated once and the best feasible one is returned.  If none is
    feasible for an abcEL chain, the optima of :func:`_moment_match` are
    tried next, each up to three times.  When that fails too, all
    candidates are returned for the sampler to cycle through.
    """
    if spec.init == "truth":
        return tuple(model.theta_truth)
    if spec.init == "prior":
        return "prior"
    if abc is None:
        abc = _abc(spec, model, obs, keys)
    draws = abc.theta_draws
    cands = [np.mean(draws, axis=0), np.median(draws, axis=0),
             *draws[:ABC_START_CANDIDATES]]
    cands = [c for c in cands if model.prior.in_support(c)] or list(draws)
    rng = stream(spec.seed, *keys, PHASE_INIT)
    best = _best_candidate(evaluator, cands, rng)
    if best is None and evaluator.method != "synthetic":
        matched = []
        for x in _moment_match(spec, model, obs, cands, keys):
            matched.append(x)
            best = _best_candidate(evaluator, [x] * 3, rng)
            if best is not None:
                break
        cands = matched + cands
    if best is not None:
        return tuple(best)
    return tuple(tuple(c) for c in cands)


def _chain_config(spec, model, keys, init, sd) -> McmcConfig:
    return McmcConfig(iterations=spec.iterations, burn_in=spec.burn_in,
                      proposal_sd=tuple(sd), seed=spec.seed, init=init,
                      transform=model.transforms, stream_keys=tuple(keys))


def _tuned(spec, evaluator, model, keys, init, sd):
    if not spec.tune:
        return tuple(sd), init
    pilot = replace(_chain_config(spec, model, keys, init, sd), iterations=1,
                    burn_in=0)
    return tune_proposal(evaluator, pilot)


def _map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- coverage

@dataclass(frozen=True)
class ReplicateResult:
    label: str
    replicate: int
    ok: bool
    lower: tuple = ()
    upper: tuple = ()
    mean: tuple = ()
    contains: tuple = ()
    acceptance_rate: float = math.nan
    error: str = ""


@dataclass(frozen=True)
class CoverageRow:
    label: str
    parameter: str
    coverage: float
    coverage_se: float
    mean_length: float
    length_se: float
    n_replicates: int
    n_failed: int


@dataclass
class CoverageReport:
    spec: ExperimentSpec
    rows: list
    replicates: list
    proposal_sd: dict = field(default_factory=dict)

    HEADER = ("summaries", "parameter", "coverage", "coverage_se",
              "mean_length", "length_se", "replicates", "failed")

    def row(self, label=None, parameter=None) -> CoverageRow:
        for r in self.rows:
            if ((label is None or r.label == label)
                    and (parameter is None or r.parameter == parameter)):
                return r
        raise KeyError((label, parameter))

    def write(self, out) -> list:
        out = Path(out)
        write_csv(out, self.HEADER, (
            (r.label, r.parameter, r.coverage, r.coverage_se, r.mean_length,
             r.length_se, r.n_replicates, r.n_failed) for r in self.rows))
        rep_path = out.with_name(out.stem + ".replicates.csv")
        rep_rows = []
        for r in self.replicates:
            for j in range(max(1, len(r.lower))):
                rep_rows.append((
                    r.label, r.replicate, j + 1, int(r.ok),
                    r.lower[j] if r.ok else math.nan,
                    r.upper[j] if r.ok else math.nan,
                    r.mean[j] if r.ok else math.nan,
                    int(r.contains[j]) if r.ok else "",
                    r.acceptance_rate, r.error))
        write_csv(rep_path, ("summaries", "replicate", "parameter", "ok",
                             "lower", "upper", "mean", "contains",
                             "acceptance_rate", "error"), rep_rows)
        write_json(sidecar_path(out), {"spec": self.spec.to_dict(),
                                       "proposal_sd": self.proposal_sd})
        return [out, rep_path, sidecar_path(out)]

    def summary_line(self) -> str:
        parts = [f"{r.label}/{r.parameter}: coverage {r.coverage:.3f} "
                 f"length {r.mean_length:.4f} (n={r.n_replicates}, "
                 f"failed={r.n_failed})" for r in self.rows]
        return "coverage " + "; ".join(parts)


def _coverage_replicate(spec, label, sd, replicate) -> ReplicateResult:
    model = _model(spec, label)
    name = label or model.summary_set
    try:
        _, obs = _observe(spec, model, replicate)
        ev = _evaluator(spec, "abcel", model, obs)
        init = _initial_point(spec, model, ev, obs, (replicate,))
        cfg = _chain_config(spec, model, (replicate, label_key(name)),
                            init, sd)
        chain = run_chain(ev, cfg)
    except AbcElError as exc:
        return ReplicateResult(name, replicate, False,
                               error=f"{type(exc).__name__}: {exc}")
    s = summarize_chain(chain)
    lo, hi = s.interval[:, 0], s.interval[:, 1]
    truth = model.theta_truth
    return ReplicateResult(
        name, replicate, True, lower=tuple(lo), upper=tuple(hi),
        mean=tuple(s.mean),
        contains=tuple(bool(a <= t <= b) for a, t, b in zip(lo, truth, hi)),
        acceptance_rate=chain.acceptance_rate)


def tune_for_configuration(spec: ExperimentSpec, model, name: str):
    """Walk scales tuned once on a pilot dataset, shared by all replicates."""
    sd = spec.proposal_sd or tuple(model.proposal_sd)
    if not spec.tune:
        return tuple(sd)
    key = label_key(name)
    _, obs = model.observe(stream(spec.seed, PHASE_PILOT, key))
    ev = _evaluator(spec, "abcel", model, obs)
    init = _initial_point(spec, model, ev, obs, (PHASE_PILOT, key))
    sd, _ = _tuned(spec, ev, model, (PHASE_PILOT, key), init, sd)
    return sd


def run_coverage(spec: ExperimentSpec) -> CoverageReport:
    """Credible-interval coverage of the truth over replicated datasets."""
    rows, reps, sds = [], [], {}
    for label in spec.labels():
        model = _model(spec, label)
        if model.theta_truth is None:
            raise SpecError(f"{spec.model} has no true parameter")
        name = label or model.summary_set
        sd = tune_for_configuration(spec, model, name)
        sds[name] = sd
        results = _map(partial(_coverage_replicate, spec, label, sd),
                       range(spec.replicates), spec.workers)
        reps.extend(results)
        ok = [r for r in results if r.ok]
        n_fail = len(results) - len(ok)
        for j, pname in enumerate(model.param_names):
            hits = np.array([r.contains[j] for r in ok], dtype=float)
            lengths = np.array([r.upper[j] - r.lower[j] for r in ok])
            n = len(ok)
            cov = float(hits.mean()) if n else math.nan
            rows.append(CoverageRow(
                label=name, parameter=pname, coverage=cov,
                coverage_se=(math.sqrt(cov * (1 - cov) / n) if n
                             else math.nan),
                mean_length=float(lengths.mean()) if n else math.nan,
                length_se=(float(lengths.std(ddof=1) / math.sqrt(n))
                           if n > 1 else math.nan),
                n_replicates=n, n_failed=n_fail))
    return CoverageReport(spec, rows, reps, sds)


# ----------------------------------------------------------------- profile

def analytic_grid(model, obs, n_points: int,
                  floor: float = PROFILE_DENSITY_FLOOR) -> np.ndarray:
    """Evenly spaced grid over where the normalised analytic posterior
    density exceeds ``floor``."""
    low, high = model.prior.bounds[0]
    fine = np.linspace(low, high, 20_001)[1:-1]
    logp = model.analytic_log_posterior(fine, obs)
    dens = np.exp(logp - logp.max())
    dens /= trapezoid(dens, fine)
    above = fine[dens > floor]
    return np.linspace(above.min(), above.max(), n_points)


@dataclass
class ProfileResult:
    spec: ExperimentSpec
    label: str
    grid: np.ndarray
    table: object
    analytic: np.ndarray | None
    obs_summary: np.ndarray

    HEADER = ("theta", "mean", "lower", "upper", "feasible_fraction",
              "sentinel", "analytic")

    @property
    def analytic_in_band(self) -> float:
        """Fraction of grid points where the max-aligned analytic curve lies
        inside the empirical 95% band."""
        if self.analytic is None:
            return math.nan
        t = self.table
        inside = (t.lower <= self.analytic) & (self.analytic <= t.upper)
        return float(inside.mean())

    @property
    def mean_range(self) -> float:
        mean = self.table.mean[np.isfinite(self.table.mean)]
        return float(mean.max() - mean.min()) if mean.size else math.nan

    def rows(self):
        t = self.table
        an = (self.analytic if self.analytic is not None
              else np.full(len(self.grid), math.nan))
        for g in range(len(self.grid)):
            yield (self.grid[g], t.mean[g], t.lower[g], t.upper[g],
                   t.feasible_fraction[g], int(t.feasible_fraction[g] == 0),
                   an[g])

    def write(self, out) -> list:
        write_csv(out, self.HEADER, self.rows())
        write_json(sidecar_path(out), {
            "spec": self.spec.to_dict(), "summaries": self.label,
            "obs_summary": self.obs_summary,
            "analytic_in_band": self.analytic_in_band,
            "mean_range": self.mean_range})
        return [Path(out), sidecar_path(out)]

    def summary_line(self) -> str:
        return (f"profile {self.spec.model}/{self.label} m={self.spec.m}: "
                f"{len(self.grid)} grid points, mean range "
                f"{self.mean_range:.4f}, analytic in band "
                f"{self.analytic_in_band:.3f}")


def run_profile(spec: ExperimentSpec, summaries=None) -> ProfileResult:
    """Mean and 95% band of the estimated log-posterior along a grid.

    The grid varies the first parameter with any others held at the truth.
    The analytic curve, when the model provides one, is shifted so that its
    maximum matches the maximum of the mean curve.
    """
    label = summaries if summaries is not None else spec.labels()[0]
    model = _model(spec, label)
    _, obs = _observe(spec, model, 0)
    has_analytic = (hasattr(model, "analytic_log_posterior")
                    and model.dim_summary == 1)
    if spec.grid is not None:
        grid1 = np.linspace(*spec.grid)
    elif has_analytic:
        grid1 = analytic_grid(model, obs, spec.grid_points)
    else:
        b = model.prior.bounds[0]
        lo = b[0] if np.isfinite(b[0]) else model.theta_truth[0] - 3.0
        hi = b[1] if np.isfinite(b[1]) else model.theta_truth[0] + 3.0
        grid1 = np.linspace(lo, hi, spec.grid_points + 2)[1:-1]
    grid = np.tile(model.theta_truth, (grid1.size, 1))
    grid[:, 0] = grid1
    cfg = EvaluatorConfig(model, obs, spec.m, entropy_mode=spec.entropy,
                          k=spec.k)
    table = grid_profile(cfg, grid, spec.repeats, seed=spec.seed)
    analytic = None
    if has_analytic:
        analytic = max_align(table.mean,
                             model.analytic_log_posterior(grid1, obs))
    return ProfileResult(spec, label or model.summary_set, grid1, table,
                         analytic, obs)


# ------------------------------------------------------------------ sample

@dataclass
class SampleResult:
    spec: ExperimentSpec
    model: object
    chain: object
    proposal_sd: tuple

    def write(self, out) -> list:
        from .io import write_chain
        write_chain(out, self.chain, self.model.param_names, {
            "spec": self.spec.to_dict(), "proposal_sd": self.proposal_sd,
            "seed": self.spec.seed})
        return [Path(out), sidecar_path(out)]

    def summary_line(self) -> str:
        s = summarize_chain(self.chain)
        parts = [f"{p} {mu:.4g} [{lo:.4g}, {hi:.4g}]" for p, mu, (lo, hi)
                 in zip(self.model.param_names, s.mean, s.interval)]
        return (f"sample {self.spec.model}: acceptance "
                f"{self.chain.acceptance_rate:.3f}; " + "; ".join(parts))


def _abc(spec, model, obs, replicate):
    keys = replicate if isinstance(replicate, tuple) else (replicate,)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return rejection_abc(model, obs, spec.abc_sims, spec.abc_keep, True,
                             stream(spec.seed, *keys, PHASE_ABC))


def run_sample(spec: ExperimentSpec) -> SampleResult:
    """One abcEL chain on the observed dataset of replicate 0."""
    model = _model(spec, spec.labels()[0])
    _, obs = _observe(spec, model, 0)
    ev = _evaluator(spec, "abcel", model, obs)
    init = _initial_point(spec, model, ev, obs, (0,))
    sd = spec.proposal_sd or tuple(model.proposal_sd)
    key = label_key("abcel")
    sd, init = _tuned(spec, ev, model, (0, key, PHASE_PILOT), init, sd)
    chain = run_chain(ev, _chain_config(spec, model, (0, key), init, sd))
    return SampleResult(spec, model, chain, sd)


# ----------------------------------------------------------------- compare

@dataclass
class CompareResult:
    spec: ExperimentSpec
    model: object
    rows: list
    draws: list

    HEADER = ("replicate", "method", "parameter", "truth", "mean", "lower",
              "upper", "contains", "acceptance_rate", "ess", "ok", "error")

    def select(self, method=None, parameter=None, replicate=None):
        return [r for r in self.rows
                if (method is None or r["method"] == method)
                and (parameter is None or r["parameter"] == parameter)
                and (replicate is None or r["replicate"] == replicate)]

    def write(self, out) -> list:
        out = Path(out)
        write_csv(out, self.HEADER,
                  ([r[h] for h in self.HEADER] for r in self.rows))
        draws_path = out.with_name(out.stem + ".draws.csv")
        write_csv(draws_path, ("replicate", "method", "draw",
                               *self.model.param_names),
                  ((rep, meth, i, *row) for rep, meth, arr in self.draws
                   for i, row in enumerate(arr)))
        write_json(sidecar_path(out), {"spec": self.spec.to_dict()})
        return [out, draws_path, sidecar_path(out)]

    def summary_line(self) -> str:
        parts = []
        for meth in self.spec.methods:
            rows = self.select(method=meth)
            ok = [r for r in rows if r["ok"]]
            hit = sum(r["contains"] for r in ok)
            parts.append(f"{meth}: {hit}/{len(ok)} intervals contain the "
                         f"truth" + (f", {len(rows) - len(ok)} failed"
                                     if len(ok) < len(rows) else ""))
        return f"compare {self.spec.model}: " + "; ".join(parts)


def _compare_rows(model, replicate, method, draws, acc, ess, error=""):
    rows = []
    truth = model.theta_truth
    if draws is None:
        for j, p in enumerate(model.param_names):
            rows.append(dict(replicate=replicate, method=method, parameter=p,
                             truth=truth[j], mean=math.nan, lower=math.nan,
                             upper=math.nan, contains=0, acceptance_rate=acc,
                             ess=math.nan, ok=0, error=error))
        return rows
    s = summarize_chain(draws)
    for j, p in enumerate(model.param_names):
        lo, hi = s.interval[j]
        rows.append(dict(replicate=replicate, method=method, parameter=p,
                         truth=truth[j], mean=s.mean[j], lower=lo, upper=hi,
                         contains=int(lo <= truth[j] <= hi),
                         acceptance_rate=acc,
                         ess=ess[j] if ess is not None else s.ess[j],
                         ok=1, error=""))
    return rows


def _compare_replicate(spec, replicate):
    model = _model(spec, spec.labels()[0])
    _, obs = _observe(spec, model, replicate)
    rows, draws = [], []
    abc = None
    if "rejection_abc" in spec.methods or spec.init == "abc":
        try:
            abc = _abc(spec, model, obs, replicate)
        except AbcElError as exc:
            abc = exc
    for method in spec.methods:
        try:
            if method == "rejection_abc":
                if isinstance(abc, Exception):
                    raise abc
                rows += _compare_rows(model, replicate, method,
                                      abc.theta_draws, math.nan,
                                      np.full(model.dim_theta, math.nan))
                draws.append((replicate, method, abc.theta_draws))
                continue
            ev = _evaluator(spec, method, model, obs)
            sd = spec.proposal_sd or tuple(model.proposal_sd)
            if isinstance(abc, Exception):
                raise abc
            key = label_key(method)
            init = _initial_point(spec, model, ev, obs, (replicate, key),
                                  abc)
            sd, init = _tuned(spec, ev, model, (replicate, key, PHASE_PILOT),
                              init, sd)
            chain = run_chain(ev, _chain_config(spec, model,
                                                (replicate, key), init, sd))
            rows += _compare_rows(model, replicate, method, chain.draws,
                                  chain.acceptance_rate, None)
            draws.append((replicate, method, chain.draws))
        except AbcElError as exc:
            rows += _compare_rows(model, replicate, method, None, math.nan,
                                  None, f"{type(exc).__name__}: {exc}")
    return rows, draws


def run_compare(spec: ExperimentSpec) -> CompareResult:
    """Each requested method on the same observed dataset per replicate."""
    model = _model(spec, spec.labels()[0])
    if model.theta_truth is None:
        raise SpecError(f"{spec.model} has no true parameter")
    out = _map(partial(_compare_replicate, spec), range(spec.replicates),
               spec.workers)
    rows = [r for rr, _ in out for r in rr]
    draws = [d for _, dd in out for d in dd]
    return CompareResult(spec, model, rows, draws)


def run(spec: ExperimentSpec):
    """Dispatch on ``spec.kind``."""
    if spec.kind == "profile":
        return run_profile(spec)
    if spec.kind == "sample":
        return run_sample(spec)
    if spec.kind == "coverage":
        return run_coverage(spec)
    return run_compare(spec)
