"""Benchmark generative models, addressable by name."""

from .arch import Arch1
from .base import GenerativeModel
from .gk import GAndK, gk_quantile
from .graph import ErdosRenyi
from .normal import (LOCATION_SUMMARY_SETS, VARIANCE_SUMMARY_SETS,
                     NormalLocation, NormalVariance)
from .stereology import Stereology, gpd_cdf, gpd_quantile


def normal_location_model(summaries="mean", n_obs=100, **kw):
    return NormalLocation(summaries=summaries, n_obs=n_obs, **kw)


def normal_variance_model(summaries="g1", n_obs=100, **kw):
    return NormalVariance(summaries=summaries, n_obs=n_obs, **kw)


def erdos_renyi_model(n_nodes=100, **kw):
    return ErdosRenyi(n_nodes=n_nodes, **kw)


def gk_model(**kw):
    return GAndK(**kw)


def arch1_model(**kw):
    return Arch1(**kw)


def stereology_model(**kw):
    return Stereology(**kw)


MODELS = {
    "normal_location": NormalLocation,
    "normal_variance": NormalVariance,
    "erdos_renyi": ErdosRenyi,
    "gk": GAndK,
    "arch1": Arch1,
    "stereology": Stereology,
}

SUMMARY_SETS = {
    "normal_location": tuple(LOCATION_SUMMARY_SETS),
    "normal_variance": tuple(VARIANCE_SUMMARY_SETS),
    "erdos_renyi": ("edges_triangles",),
    "gk": ("mean_quartiles",),
    "arch1": ("abs_quartiles_g4",),
    "stereology": ("count_mean_median_le6",),
}


def make_model(name: str, summaries: str | None = None,
               n_obs: int | None = None) -> GenerativeModel:
    """Build a model by registry name.

    Raises ``KeyError`` with the valid options for unknown names.
    """
    if name not in MODELS:
        raise KeyError(f"unknown model {name!r}; valid: {sorted(MODELS)}")
    kw = {}
    if summaries is not None:
        kw["summaries"] = summaries
    if n_obs is not None:
        kw["n_nodes" if name == "erdos_renyi" else "n_obs"] = n_obs
    return MODELS[name](**kw)


__all__ = [
    "GenerativeModel", "NormalLocation", "NormalVariance", "ErdosRenyi",
    "GAndK", "Arch1", "Stereology", "MODELS", "SUMMARY_SETS", "make_model",
    "gk_quantile", "gpd_quantile", "gpd_cdf", "normal_location_model",
    "normal_variance_model", "erdos_renyi_model", "gk_model", "arch1_model",
    "stereology_model",
]
