"""Gauss-Legendre rules on [-1, 1] split at the barrier."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

DEFAULT_NODES = 64


@lru_cache(maxsize=16)
def split_rule(n: int = DEFAULT_NODES) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights with ``n`` points on each of [-1, 0] and [0, 1].

    Splitting at the origin keeps the rule spectrally accurate for functions
    whose derivative jumps at ``x = 0``.
    """
    t, w = np.polynomial.legendre.leggauss(n)
    x = np.concatenate([0.5 * (t - 1.0), 0.5 * (t + 1.0)])
    weights = np.concatenate([0.5 * w, 0.5 * w])
    x.setflags(write=False)
    weights.setflags(write=False)
    return x, weights


def integrate(values: np.ndarray, n: int = DEFAULT_NODES) -> float:
    """Integrate samples taken at ``split_rule(n)`` nodes."""
    _, w = split_rule(n)
    return float(np.dot(w, values))
