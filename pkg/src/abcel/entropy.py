"""Differential entropy of the summary distribution from simulated draws.

Two estimators are provided: the weighted Kozachenko-Leonenko k-nearest
neighbour estimator (Berrett, Samworth & Yuan 2019), whose neighbour
weights cancel the leading bias terms in dimension ``r``, and the
closed-form entropy of a Gaussian fitted by the sample covariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import gammaln

from .errors import (DimensionError, DuplicatePointsError, NuWeightsError,
                     SingularCovarianceError)

BRUTE_FORCE_MAX = 512

_EULER_GAMMA = 0.57721566490153286061
# B_2k / (2k) for k = 1..7
_ASYMPTOTIC = (1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132,
               -691.0 / 32760, 1.0 / 12)


@dataclass(frozen=True)
class NuWeights:
    """Neighbour-order weights ``nu[j-1]`` for ``j = 1..k``."""

    k: int
    r: int
    nu: np.ndarray

    @property
    def support(self) -> tuple[int, ...]:
        return nu_support(self.k, self.r)


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    method: str
    k: int = 0


def digamma(x: float) -> float:
    """Digamma function for ``x > 0``.

    Upward recurrence to ``x >= 10`` followed by the asymptotic series.
    """
    x = float(x)
    if not x > 0:
        raise ValueError(f"digamma is only defined here for x > 0, got {x}")
    if x == 1.0:
        return -_EULER_GAMMA
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for c in _ASYMPTOTIC:
        series += c * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - series


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise DimensionError("points must be an (m, r) array")
    return pts


def default_k(m: int) -> int:
    """``ceil(sqrt(m))`` clamped to ``[3, m - 1]``."""
    return int(max(1, min(max(3, math.ceil(math.sqrt(m))), m - 1)))


def knn_distances(points, k: int, method: str = "auto") -> np.ndarray:
    """Distances from each point to its ``k`` nearest other points.

    Entry ``(i, j)`` is the distance to the ``(j+1)``-th nearest neighbour
    of point ``i``.  Ties are ordered by index.  Coincident points give zero
    entries; they are not rejected here.

    ``method`` is ``"brute"`` (exhaustive sort), ``"tree"`` (k-d tree search)
    or ``"auto"`` (brute force up to 512 points).  Both paths evaluate the
    distances with the same arithmetic and return identical matrices.
    """
    pts = _as_points(points)
    m = pts.shape[0]
    k = int(k)
    if k < 1:
        raise ValueError("k must be at least 1")
    if m < k + 1:
        raise DimensionError(f"need at least k+1={k + 1} points, got {m}")
    if method == "auto":
        method = "brute" if m <= BRUTE_FORCE_MAX else "tree"
    if method == "brute":
        d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
        np.fill_diagonal(d, np.inf)
        order = np.argsort(d, axis=1, kind="stable")[:, :k]
        return np.take_along_axis(d, order, axis=1)
    if method != "tree":
        raise ValueError(f"unknown method {method!r}")
    _, idx = cKDTree(pts).query(pts, k=k + 1)
    out = np.empty((m, k))
    for i in range(m):
        nb = idx[i][idx[i] != i][:k]
        dist = np.sqrt(((pts[nb] - pts[i]) ** 2).sum(-1))
        out[i] = np.sort(dist, kind="stable")
    return out


def nu_support(k: int, r: int) -> tuple[int, ...]:
    """Neighbour orders allowed a nonzero weight.

    ``{floor(j*k/r) : j = 1..r} | {k}``, with 0 dropped.
    """
    s = {(j * k) // r for j in range(1, r + 1)}
    s.add(k)
    s.discard(0)
    return tuple(sorted(s))


@lru_cache(maxsize=None)
def _solve_nu_cached(k: int, r: int) -> tuple[float, ...]:
    support = np.array(nu_support(k, r), dtype=float)
    n_gamma = r // 4
    A = np.ones((1 + n_gamma, support.size))
    for l in range(1, n_gamma + 1):
        A[l] = np.exp(gammaln(support + 2.0 * l / r) - gammaln(support))
    b = np.zeros(1 + n_gamma)
    b[0] = 1.0
    if support.size < A.shape[0] or np.linalg.matrix_rank(A) < A.shape[0]:
        raise NuWeightsError(
            f"k={k} gives support {tuple(int(s) for s in support)}, too few "
            f"neighbour orders for {n_gamma} bias constraint(s) in dimension "
            f"r={r}; increase k")
    # minimising sum_j (m nu_j - 1)^2 under sum(nu) = 1 is minimising |nu|^2
    nu_s = A.T @ np.linalg.solve(A @ A.T, b)
    if np.max(np.abs(A @ nu_s - b) / np.maximum(1.0, np.abs(A).max(1))) > 1e-10:
        raise NuWeightsError(f"ill-conditioned weight system for k={k}, r={r}")
    nu = np.zeros(k)
    nu[support.astype(int) - 1] = nu_s
    return tuple(nu)


def solve_nu(k: int, r: int) -> NuWeights:
    """Minimum Euclidean-likelihood weight vector for the weighted estimator."""
    k, r = int(k), int(r)
    if k < 1 or r < 1:
        raise ValueError("k and r must be positive")
    return NuWeights(k=k, r=r, nu=np.array(_solve_nu_cached(k, r)))


def kl_entropy(points, k: int | None = None,
               nu: NuWeights | None = None) -> EntropyEstimate:
    """Weighted Kozachenko-Leonenko entropy estimate in nats.

    ``mean_i sum_j nu_j log((m-1) V_r rho_{j,i}^r exp(-psi(j)))`` where
    ``V_r`` is the volume of the unit ``r``-ball and ``rho_{j,i}`` the
    distance from point ``i`` to its ``j``-th nearest neighbour.
    """
    pts = _as_points(points)
    m, r = pts.shape
    if k is None:
        k = nu.k if nu is not None else default_k(m)
    if nu is None:
        nu = solve_nu(k, r)
    if nu.k != k or nu.r != r:
        raise DimensionError(f"weights are for (k={nu.k}, r={nu.r}), "
                             f"data need (k={k}, r={r})")
    rho = knn_distances(pts, k)
    if np.any(rho[:, 0] <= 0.0):
        raise DuplicatePointsError(
            f"{int(np.sum(rho[:, 0] <= 0.0))} points have a coincident "
            f"neighbour; the estimator needs distinct points")
    log_vr = 0.5 * r * math.log(math.pi) - math.lgamma(1.0 + 0.5 * r)
    mean_log_rho = np.log(rho).mean(axis=0)
    value = 0.0
    for j in np.flatnonzero(nu.nu):
        value += nu.nu[j] * (math.log(m - 1) + log_vr - digamma(j + 1)
                             + r * mean_log_rho[j])
    return EntropyEstimate(value=float(value), method="weighted_kl", k=int(k))


def gaussian_entropy(points) -> EntropyEstimate:
    """Entropy ``0.5 log((2 pi e)^r det S)`` of a Gaussian with the unbiased
    sample covariance ``S`` of ``points``."""
    pts = _as_points(points)
    m, r = pts.shape
    if m < r + 2:
        raise DimensionError(f"need at least r+2={r + 2} points, got {m}")
    if r == 1:
        var = float(np.var(pts[:, 0], ddof=1))
        scale = float(np.mean(pts[:, 0] ** 2))
        if not var > 1e-14 * max(scale, 1e-300):
            raise SingularCovarianceError("sample variance is zero")
        return EntropyEstimate(
            value=0.5 * (math.log(2 * math.pi * math.e) + math.log(var)),
            method="gaussian")
    cov = np.cov(pts, rowvar=False)
    eig = np.linalg.eigvalsh(cov)
    if not eig[0] > 1e-12 * max(eig[-1], 1e-300):
        raise SingularCovarianceError("sample covariance is singular")
    logdet = float(np.sum(np.log(eig)))
    return EntropyEstimate(
        value=0.5 * (r * math.log(2 * math.pi * math.e) + logdet),
        method="gaussian")
