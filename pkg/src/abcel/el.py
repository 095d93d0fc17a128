"""Empirical likelihood on simplex weights, solved through the Lagrange dual.

Given constraint vectors ``h_i = g(X_i) - g(X_o)`` for ``i = 1..m`` the
weights maximising ``prod(m * w_i)`` over the simplex subject to
``sum(w_i * h_i) = 0`` are ``w_i = 1 / (m * (1 + lam @ h_i))`` where ``lam``
solves ``sum(h_i / (1 + lam @ h_i)) = 0``.  ``lam`` is found by damped Newton
on the convex dual objective ``-sum(log*(1 + lam @ h_i))``, where ``log*`` is
the logarithm continued quadratically below ``1/m`` so the objective is
finite everywhere.  When the origin is not strictly inside the convex hull
of the ``h_i`` the dual is unbounded and ``lam`` diverges; that case is
reported as infeasible with zero weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import DimensionError, NonConvergenceError

LOG_ZERO = -np.inf
"""Sentinel for the logarithm of an empirical likelihood that is zero."""

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100
LAMBDA_DIVERGED = 1e8
SUM_TOL = 1e-10

_CONVERGED = 0
_DIVERGED = 1
_STALLED = 2
_MAX_ITER = 3


@dataclass(frozen=True)
class ELSolution:
    """Result of :func:`solve_el`.

    ``weights`` are all zero and ``mean_log_weight`` is ``LOG_ZERO`` when the
    problem is infeasible.
    """

    weights: np.ndarray
    lam: np.ndarray
    mean_log_weight: float
    feasible: bool
    iterations: int
    residual_norm: float


def compute_constraints(sim_summaries, obs_summary) -> np.ndarray:
    """Stack ``sim_summaries[i] - obs_summary`` into an ``(m, r)`` matrix."""
    sims = np.asarray(sim_summaries, dtype=float)
    obs = np.atleast_1d(np.asarray(obs_summary, dtype=float))
    if sims.ndim == 1:
        sims = sims[:, None]
    if sims.ndim != 2 or obs.ndim != 1:
        raise DimensionError("summaries must be vectors")
    if sims.shape[1] != obs.shape[0]:
        raise DimensionError(
            f"simulated summaries have length {sims.shape[1]}, "
            f"observed summary has length {obs.shape[0]}")
    if sims.shape[0] < 2:
        raise DimensionError(f"need at least 2 replicates, got {sims.shape[0]}")
    if not (np.all(np.isfinite(sims)) and np.all(np.isfinite(obs))):
        raise DimensionError("summaries must be finite")
    return sims - obs


@numba.njit(cache=True)
def _objective(H, lam, inv_m, m_f):
    # returns -sum(log*(z)); log* is log above 1/m, quadratic below
    m = H.shape[0]
    total = 0.0
    for i in range(m):
        z = 1.0
        for k in range(H.shape[1]):
            z += lam[k] * H[i, k]
        if z >= inv_m:
            total -= np.log(z)
        else:
            mz = m_f * z
            total -= np.log(inv_m) - 1.5 + 2.0 * mz - 0.5 * mz * mz
    return total


@numba.njit(cache=True)
def _derivatives(H, lam, inv_m, m_f, grad, hess):
    m, r = H.shape
    for a in range(r):
        grad[a] = 0.0
        for b in range(r):
            hess[a, b] = 0.0
    total = 0.0
    for i in range(m):
        z = 1.0
        for k in range(r):
            z += lam[k] * H[i, k]
        if z >= inv_m:
            d1 = 1.0 / z
            d2 = d1 * d1
            total -= np.log(z)
        else:
            mz = m_f * z
            d1 = 2.0 * m_f - m_f * mz
            d2 = m_f * m_f
            total -= np.log(inv_m) - 1.5 + 2.0 * mz - 0.5 * mz * mz
        for a in range(r):
            grad[a] -= d1 * H[i, a]
            for b in range(r):
                hess[a, b] += d2 * H[i, a] * H[i, b]
    return total


@numba.njit(cache=True)
def _newton_step(hess, grad):
    # Cholesky solve of hess @ step = -grad; min-norm least squares when
    # hess is (numerically) singular
    r = grad.shape[0]
    L = np.zeros((r, r))
    diag_max = 0.0
    for a in range(r):
        diag_max = max(diag_max, hess[a, a])
    ok = diag_max > 0.0
    if ok:
        for a in range(r):
            s = hess[a, a]
            for c in range(a):
                s -= L[a, c] * L[a, c]
            if s <= 1e-13 * diag_max:
                ok = False
                break
            L[a, a] = np.sqrt(s)
            for b in range(a + 1, r):
                s2 = hess[b, a]
                for c in range(a):
                    s2 -= L[b, c] * L[a, c]
                L[b, a] = s2 / L[a, a]
    if not ok:
        return np.linalg.lstsq(hess, -grad, 1e-12)[0]
    y = np.empty(r)
    for a in range(r):
        s = -grad[a]
        for c in range(a):
            s -= L[a, c] * y[c]
        y[a] = s / L[a, a]
    x = np.empty(r)
    for a in range(r - 1, -1, -1):
        s = y[a]
        for c in range(a + 1, r):
            s -= L[c, a] * x[c]
        x[a] = s / L[a, a]
    return x


@numba.njit(cache=True)
def _solve(H, tol, max_iter, lam_max):
    # Newton runs on whitened constraints Hs = sqrt(m) U from the thin SVD
    # H = U S V^T; directions with negligible singular values are dropped.
    # The weights only depend on the column space of H, so they are
    # unchanged, and lam = V S^-1 sqrt(m) lam_s.
    m, r = H.shape
    U, S, Vt = np.linalg.svd(H, full_matrices=False)
    rank = 0
    for k in range(S.shape[0]):
        if S[k] > 1e-12 * S[0]:
            rank += 1
    lam = np.zeros(r)
    w = np.full(m, 1.0 / m)
    if rank == 0:
        return lam, w, _CONVERGED, 0, 0.0, 1.0, 0.0
    root_m = np.sqrt(float(m))
    Hs = np.empty((m, rank))
    for i in range(m):
        for k in range(rank):
            Hs[i, k] = U[i, k] * root_m
    lam_s, status, iters, resid = _dual_newton(Hs, tol, max_iter, lam_max)
    for a in range(r):
        s = 0.0
        for k in range(rank):
            s += Vt[k, a] * lam_s[k] * root_m / S[k]
        lam[a] = s
    # weights from lam on the original scale, so that they satisfy the
    # primal-dual relation with the reported multiplier
    zmin = np.inf
    for i in range(m):
        z = 1.0
        for a in range(r):
            z += H[i, a] * lam[a]
        zmin = min(zmin, z)
        w[i] = 1.0 / (m * z)
    resid_h = 0.0
    for a in range(r):
        s = 0.0
        for i in range(m):
            s += w[i] * H[i, a]
        resid_h = max(resid_h, abs(s))
    return lam, w, status, iters, resid_h, zmin, np.sqrt(np.sum(lam_s * lam_s))


@numba.njit(cache=True)
def _dual_newton(H, tol, max_iter, lam_max):
    m, r = H.shape
    m_f = float(m)
    inv_m = 1.0 / m_f
    lam = np.zeros(r)
    grad = np.empty(r)
    hess = np.empty((r, r))
    trial = np.empty(r)
    grad_t = np.empty(r)
    hess_t = np.empty((r, r))
    f = _derivatives(H, lam, inv_m, m_f, grad, hess)
    resid = np.max(np.abs(grad)) / m_f
    status = _MAX_ITER
    polish = 0
    it = 0
    while it < max_iter:
        if resid <= tol:
            # a couple of extra steps drive the residual to rounding level
            if polish >= 2 or resid <= 1e-15:
                status = _CONVERGED
                break
            polish += 1
        it += 1
        step = _newton_step(hess, grad)
        slope = 0.0
        for a in range(r):
            slope += grad[a] * step[a]
        t = 1.0
        accepted = False
        while t > 1e-12:
            for a in range(r):
                trial[a] = lam[a] + t * step[a]
            f_new = _objective(H, trial, inv_m, m_f)
            if f_new <= f + 1e-4 * t * slope:
                accepted = True
                break
            if f_new <= f + 1e-13 * (1.0 + abs(f)):
                # decrease lost in rounding of f: accept on a smaller gradient
                _derivatives(H, trial, inv_m, m_f, grad_t, hess_t)
                if np.max(np.abs(grad_t)) < np.max(np.abs(grad)):
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            status = _CONVERGED if resid <= tol else _STALLED
            break
        for a in range(r):
            lam[a] = trial[a]
        if np.sqrt(np.sum(lam * lam)) > lam_max:
            status = _DIVERGED
            break
        f = _derivatives(H, lam, inv_m, m_f, grad, hess)
        resid_new = np.max(np.abs(grad)) / m_f
        if polish > 0 and resid_new >= resid:
            status = _CONVERGED
            break
        resid = resid_new
    else:
        if resid <= tol:
            status = _CONVERGED
    return lam, status, it, resid


def solve_el(H, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER) -> ELSolution:
    """Maximise ``prod(m * w_i)`` over simplex weights with ``sum(w_i h_i) = 0``.

    Parameters
    ----------
    H : array_like, shape (m, r)
        Constraint matrix, one row per simulated replicate.
    tol : float
        Bound on the infinity norm of ``sum(w_i h_i)`` at convergence.
    max_iter : int
        Newton iteration budget.

    Raises
    ------
    NonConvergenceError
        If the budget runs out (or the line search stalls) while the
        multiplier stays bounded, i.e. the instance does not look
        infeasible.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim == 1:
        H = H[:, None]
    if H.ndim != 2 or H.shape[0] < 2:
        raise DimensionError("constraint matrix must be (m, r) with m >= 2")
    if not np.isfinite(H).all():
        raise DimensionError("constraint matrix must be finite")
    if not tol > 0:
        raise ValueError("tol must be positive")
    m, r = H.shape
    # constraints are whitened inside the kernel, which makes the divergence
    # threshold on lam unit-free and keeps collinear summaries well posed
    lam, w, status, iters, resid, zmin, lam_norm = _solve(
        H, float(tol), int(max_iter), LAMBDA_DIVERGED)
    if status in (_STALLED, _MAX_ITER):
        if lam_norm > 1e4 * m or zmin < 1.0 / m:
            status = _DIVERGED
        else:
            raise NonConvergenceError(
                f"dual Newton did not converge in {iters} iterations "
                f"(m={m}, r={r})")
    # sum(w) = 1 - lam . sum(w h) at the root: when a rounding-level residual
    # times the multiplier is visible in the total, the origin lies on the
    # hull boundary to working precision and is treated as outside it
    if (status == _CONVERGED and zmin > 0.0 and resid <= tol
            and abs(w.sum() - 1.0) <= SUM_TOL):
        w = w / w.sum()
        return ELSolution(weights=w, lam=lam,
                          mean_log_weight=float(np.log(w).mean()),
                          feasible=True, iterations=int(iters),
                          residual_norm=float(resid))
    return ELSolution(weights=np.zeros(m), lam=lam, mean_log_weight=LOG_ZERO,
                      feasible=False, iterations=int(iters),
                      residual_norm=float("nan"))


def mean_log_weight(sol: ELSolution) -> float:
    """``mean(log w)`` for a feasible solution, ``LOG_ZERO`` otherwise."""
    if not sol.feasible:
        return LOG_ZERO
    return float(np.mean(np.log(sol.weights)))


def el_log_weight(sim_summaries, obs_summary, tol: float = DEFAULT_TOL,
                  max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Shortcut: constraints, solve, and return the mean log-weight."""
    return solve_el(compute_constraints(sim_summaries, obs_summary), tol,
                    max_iter).mean_log_weight
