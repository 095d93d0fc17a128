"""Independent per-coordinate priors."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special


@dataclass(frozen=True)
class Uniform:
    low: float
    high: float

    def logpdf(self, x: float) -> float:
        if self.low < x < self.high:
            return -math.log(self.high - self.low)
        return -math.inf

    def sample(self, rng, size=None):
        return rng.uniform(self.low, self.high, size)

    @property
    def bounds(self):
        return (self.low, self.high)


@dataclass(frozen=True)
class Normal:
    mu: float
    var: float

    def logpdf(self, x: float) -> float:
        return -0.5 * (math.log(2 * math.pi * self.var)
                       + (x - self.mu) ** 2 / self.var)

    def sample(self, rng, size=None):
        return rng.normal(self.mu, math.sqrt(self.var), size)

    @property
    def bounds(self):
        return (-math.inf, math.inf)


@dataclass(frozen=True)
class Beta:
    a: float
    b: float

    def logpdf(self, x: float) -> float:
        if not 0.0 < x < 1.0:
            return -math.inf
        return ((self.a - 1) * math.log(x) + (self.b - 1) * math.log1p(-x)
                - special.betaln(self.a, self.b))

    def sample(self, rng, size=None):
        return rng.beta(self.a, self.b, size)

    @property
    def bounds(self):
        return (0.0, 1.0)


class PriorSpec:
    """Product of independent one-dimensional priors."""

    def __init__(self, factors):
        self.factors = tuple(factors)

    def __len__(self):
        return len(self.factors)

    def __repr__(self):
        return f"PriorSpec({list(self.factors)!r})"

    def logpdf(self, theta) -> float:
        total = 0.0
        for f, x in zip(self.factors, theta):
            lp = f.logpdf(float(x))
            if lp == -math.inf:
                return -math.inf
            total += lp
        return total

    def in_support(self, theta) -> bool:
        return self.logpdf(theta) > -math.inf

    def sample(self, rng, size=None) -> np.ndarray:
        """One draw of shape ``(d,)`` or ``size`` draws of shape ``(size, d)``."""
        cols = [f.sample(rng, size) for f in self.factors]
        return np.stack(cols, axis=-1) if size is not None else np.array(cols)

    @property
    def bounds(self) -> np.ndarray:
        return np.array([f.bounds for f in self.factors], dtype=float)

    def clip(self, theta):
        """Clamp into the closed support box."""
        b = self.bounds
        return np.clip(theta, b[:, 0], b[:, 1])
