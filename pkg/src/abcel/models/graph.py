"""Erdos-Renyi random graph with edge and triangle count summaries."""

from __future__ import annotations

import math

import numba
import numpy as np

from ..priors import Beta, PriorSpec
from .base import GenerativeModel

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@numba.njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@numba.njit(cache=True)
def _fill_adjacency(u32, pos, t, adj):
    # pair (i, j), i < j, in row-major order is an edge when its 32-bit
    # uniform is below t
    # branch-free: with p near 1/2 the comparison is unpredictable
    n = adj.shape[0]
    edges = np.uint64(0)
    for i in range(n):
        for j in range(i + 1, n):
            bit = np.uint64(u32[pos] < t)
            adj[i, j >> 6] |= bit << np.uint64(j & 63)
            adj[j, i >> 6] |= bit << np.uint64(i & 63)
            edges += bit
            pos += 1
    return edges


@numba.njit(cache=True)
def _count_triangles(adj):
    # each triangle is seen once from each of its three edges
    n, n_words = adj.shape
    one = np.uint64(1)
    common = np.uint64(0)
    for i in range(n):
        for j in range(i + 1, n):
            c = np.uint64(0)
            for w in range(n_words):
                c += _popcount(adj[i, w] & adj[j, w])
            common += c * ((adj[i, j >> 6] >> np.uint64(j & 63)) & one)
    return common // np.uint64(3)


@numba.njit(cache=True)
def _edge_triangle_counts(u32, threshold, n, m):
    n_words = (n + 63) // 64
    n_pairs = n * (n - 1) // 2
    out = np.zeros((m, 2))
    adj = np.zeros((n, n_words), dtype=np.uint64)
    t = np.uint64(threshold)
    for g in range(m):
        adj[:, :] = 0
        out[g, 0] = _fill_adjacency(u32, g * n_pairs, t, adj)
        out[g, 1] = _count_triangles(adj)
    return out


def _threshold(p: float) -> int:
    return int(min(max(p, 0.0), 1.0) * 4294967296.0)


class ErdosRenyi(GenerativeModel):
    """``G(n, p)`` graph; summaries are the edge and triangle counts scaled
    by their maxima ``C(n, 2)`` and ``C(n, 3)``.

    Datasets are edge lists, an ``(E, 2)`` integer array with ``i < j``.
    """

    name = "erdos_renyi"
    param_names = ("p",)
    default_entropy = "gaussian"

    def __init__(self, n_nodes=100, theta_truth=(0.5,), proposal_sd=(0.1,),
                 summaries="edges_triangles"):
        if n_nodes < 3:
            raise ValueError("need at least 3 nodes")
        if summaries != "edges_triangles":
            raise KeyError(f"unknown summaries {summaries!r}; "
                           f"sets: ['edges_triangles']")
        super().__init__(PriorSpec([Beta(1.5, 1.5)]), n_nodes,
                         ("edges", "triangles"), theta_truth=theta_truth,
                         transforms=("logit",), proposal_sd=proposal_sd,
                         summary_set=summaries)
        self.n_pairs = n_nodes * (n_nodes - 1) // 2
        self.n_triples = math.comb(n_nodes, 3)

    @property
    def n_nodes(self) -> int:
        return self.n_obs

    @staticmethod
    def _uniforms32(count, rng):
        # 32-bit uniforms, two per 64-bit word, low half first
        raw = np.asarray(rng.bit_generator.random_raw((count + 1) // 2),
                         dtype="<u8")
        return raw.view("<u4")[:count]

    def simulate(self, theta, rng, n_obs=None):
        p = self.check_theta(theta)[0]
        n = n_obs or self.n_obs
        n_pairs = n * (n - 1) // 2
        u = self._uniforms32(n_pairs, rng).astype(np.uint64)
        i, j = np.triu_indices(n, 1)
        keep = u < _threshold(p)
        return np.stack([i[keep], j[keep]], axis=1)

    def count(self, edges, n_nodes=None) -> tuple[int, int]:
        """Raw (edges, triangles) of an edge list."""
        n = n_nodes or self.n_obs
        a = np.zeros((n, n))
        a[edges[:, 0], edges[:, 1]] = 1.0
        a[edges[:, 1], edges[:, 0]] = 1.0
        return len(edges), int(round(((a @ a) * a).sum() / 6.0))

    def summarize(self, data):
        e, t = self.count(np.asarray(data, dtype=int))
        return np.array([e / self.n_pairs, t / self.n_triples])

    def simulate_summaries(self, theta, m, rng):
        p = self.check_theta(theta)[0]
        u = self._uniforms32(m * self.n_pairs, rng)
        counts = _edge_triangle_counts(u, _threshold(p), self.n_obs, m)
        counts[:, 0] /= self.n_pairs
        counts[:, 1] /= self.n_triples
        return counts
