"""Exact, self-checking tools for matroid basis exchange.

Rank oracles and matroid families live in :mod:`mxl.matroid`, weighted
intersection in :mod:`mxl.optimize`, certified exchanges in
:mod:`mxl.exchange`, determinant identities in :mod:`mxl.pluecker` and noisy
local search in :mod:`mxl.localsearch`.
"""
from .algebra import GF, NEG_INF, QQ, QQt, ExactMatrix, Poly, field_from_name
from .exchange import ExchangeInstance, ExchangePair, find_exchange
from .matroid import (
    ExplicitMatroid,
    FreeMatroid,
    GraphicMatroid,
    LinearMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
)
from .optimize import min_weight_basis, min_weight_common_basis

__version__ = "0.1.0"

__all__ = [
    "GF", "NEG_INF", "QQ", "QQt", "ExactMatrix", "Poly", "field_from_name",
    "ExchangeInstance", "ExchangePair", "find_exchange",
    "ExplicitMatroid", "FreeMatroid", "GraphicMatroid", "LinearMatroid", "Matroid", "PartitionMatroid",
    "UniformMatroid", "min_weight_basis", "min_weight_common_basis",
]
