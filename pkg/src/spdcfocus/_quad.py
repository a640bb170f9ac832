"""Cached Gauss-Legendre nodes/weights shared by the quadrature call sites."""

from __future__ import annotations

from functools import lru_cache

from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=64)
def gauss_legendre(n: int):
    """Nodes and weights on [-1, 1]; cached, read-only arrays."""
    nodes, weights = leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights
