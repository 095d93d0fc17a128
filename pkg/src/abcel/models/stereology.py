"""Elliptical inclusion model for planar sections of steel.

Protocol (fixed for every method that uses this model):

* ``N ~ Poisson(BLOCK * lam)`` inclusions are candidates for one planar
  section; ``BLOCK = 4`` is the sampled volume in units of the intensity
  ``lam``, chosen so that section counts near the observed 112 are
  reachable inside the prior range of ``lam``.
* Each inclusion's largest principal diameter is ``V = v0 + GPD(sigma, xi)``;
  the other two are ``V * U1`` and ``V * U2`` with independent ``U(0, 1)``.
* The section plane has a uniformly random orientation relative to the
  inclusion axes and a signed offset ``t ~ U(-V/2, V/2)`` from the centre,
  so an inclusion is cut with probability proportional to its extent
  normal to the plane.
* A cut inclusion yields an elliptical section; its largest diameter is
  recorded when it exceeds ``v0``.

The recorded diameters form one dataset; its length ``L`` is random.
"""

from __future__ import annotations

import numpy as np

from ..errors import SimulationError
from ..priors import PriorSpec, Uniform
from .base import GenerativeModel

V0 = 5.0
BLOCK = 4.0
L_CENTRE = 112
SIX = 6.0


def gpd_quantile(u, v0, sigma, xi):
    """Inverse CDF of ``v0 + GPD(sigma, xi)``."""
    u = np.asarray(u, dtype=float)
    lg = np.log1p(-u)
    if abs(xi) < 1e-12:
        return v0 - sigma * lg
    return v0 + sigma * np.expm1(-xi * lg) / xi


def gpd_cdf(v, v0, sigma, xi):
    """``P(V <= v | V > v0)``."""
    y = np.maximum(np.asarray(v, dtype=float) - v0, 0.0) / sigma
    if abs(xi) < 1e-12:
        return -np.expm1(-y)
    base = np.maximum(1.0 + xi * y, 0.0)
    with np.errstate(divide="ignore"):
        return np.where(base > 0, 1.0 - base ** (-1.0 / xi), 1.0)


def section_diameters(V, u1, u2, direction, offset):
    """Largest diameter of the plane sections of axis-aligned ellipsoids.

    ``V`` are the largest principal diameters, ``V*u1`` and ``V*u2`` the
    other two; ``direction`` (``(N, 3)`` unit vectors) is the plane normal in
    the ellipsoid frame and ``offset`` the signed distance of the plane from
    the centre.  Returns ``nan`` where the plane misses the ellipsoid.
    """
    semi = 0.5 * np.stack([V, V * u1, V * u2], axis=1)
    d = direction
    half_height = np.sqrt(np.sum((semi * d) ** 2, axis=1))
    s = 1.0 - (offset / half_height) ** 2
    # orthonormal basis (p, q) of the plane
    helper = np.zeros_like(d)
    use_y = np.abs(d[:, 0]) > 0.9
    helper[~use_y, 0] = 1.0
    helper[use_y, 1] = 1.0
    p = helper - np.sum(helper * d, axis=1, keepdims=True) * d
    p /= np.linalg.norm(p, axis=1, keepdims=True)
    q = np.cross(d, p)
    inv = 1.0 / semi ** 2
    a = np.sum(inv * p * p, axis=1)
    b = np.sum(inv * p * q, axis=1)
    c = np.sum(inv * q * q, axis=1)
    lam_min = 0.5 * (a + c) - np.sqrt(0.25 * (a - c) ** 2 + b * b)
    with np.errstate(invalid="ignore", divide="ignore"):
        diam = 2.0 * np.sqrt(s / lam_min)
    return np.where(s > 0, diam, np.nan)


def stereology_summaries(diameters) -> np.ndarray:
    """``((L - 112)/100, mean, median, fraction <= 6)`` of one dataset."""
    x = np.asarray(diameters, dtype=float)
    L = x.size
    if L == 0:
        return np.array([-L_CENTRE / 100.0, 0.0, 0.0, 0.0])
    return np.array([(L - L_CENTRE) / 100.0, x.mean(), np.median(x),
                     np.mean(x <= SIX)])


class Stereology(GenerativeModel):
    """Planar inclusion diameters; parameters ``(lam, sigma, xi)``."""

    name = "stereology"
    param_names = ("lam", "sigma", "xi")
    default_entropy = "weighted_kl"

    def __init__(self, theta_truth=(100.0, 2.0, 0.1),
                 proposal_sd=(5.0, 0.2, 0.1), summaries="count_mean_median_le6",
                 v0=V0):
        if summaries != "count_mean_median_le6":
            raise KeyError(f"unknown summaries {summaries!r}; "
                           f"sets: ['count_mean_median_le6']")
        prior = PriorSpec([Uniform(1.0, 200.0), Uniform(0.0, 10.0),
                           Uniform(-5.0, 5.0)])
        super().__init__(prior, L_CENTRE, ("count", "mean", "median", "le6"),
                         theta_truth=theta_truth, proposal_sd=proposal_sd,
                         summary_set=summaries)
        self.v0 = float(v0)

    def check_theta(self, theta):
        theta = super().check_theta(theta)
        if theta[0] <= 0 or theta[1] <= 0:
            raise SimulationError(f"need lam > 0 and sigma > 0, got {theta}")
        return theta

    def _sections(self, theta, count, rng):
        lam, sigma, xi = theta
        V = gpd_quantile(rng.random(count), self.v0, sigma, xi)
        u1 = rng.random(count)
        u2 = rng.random(count)
        d = rng.standard_normal((count, 3))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        offset = (rng.random(count) - 0.5) * V
        diam = section_diameters(V, u1, u2, d, offset)
        keep = diam > self.v0
        return diam, keep

    def simulate(self, theta, rng, n_obs=None):
        theta = self.check_theta(theta)
        count = rng.poisson(BLOCK * theta[0])
        diam, keep = self._sections(theta, count, rng)
        out = diam[keep]
        if not np.all(np.isfinite(out)):
            raise SimulationError(f"non-finite diameters at theta={theta}")
        return out

    def summarize(self, data):
        return stereology_summaries(data)

    def simulate_summaries(self, theta, m, rng):
        theta = self.check_theta(theta)
        counts = rng.poisson(BLOCK * theta[0], size=m)
        diam, keep = self._sections(theta, int(counts.sum()), rng)
        out = np.empty((m, 4))
        start = 0
        for i, c in enumerate(counts):
            sl = slice(start, start + c)
            out[i] = stereology_summaries(diam[sl][keep[sl]])
            start += c
        if not np.all(np.isfinite(out)):
            raise SimulationError(f"non-finite summaries at theta={theta}")
        return out
