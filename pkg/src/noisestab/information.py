"""Mutual information between a uniform string X and f(Y), Y = X through BSC(eps).

Because f is Boolean, ``I(X; f(Y)) = H(E f) - H(f(Y) | X)`` and the
conditional entropy is an average of binary entropies of ``T_eps f(x)``.
All entropies are in bits.
"""

from __future__ import annotations

import numpy as np

from .cube import BooleanFunction
from .noise import PhiSpec, channel_values, xlog2x


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return float(-(xlog2x(np.float64(p)) + xlog2x(np.float64(1.0 - p))))


def neg_cond_entropy(f: BooleanFunction, eps: float) -> float:
    """``-H(f(Y) | X)``; never positive."""
    t = channel_values(f, eps)
    return float(np.mean(xlog2x(t) + xlog2x(1.0 - t)))


def mutual_information(f: BooleanFunction, eps: float) -> float:
    return binary_entropy(f.mean) + neg_cond_entropy(f, eps)


def phi_entropy(values: np.ndarray, phi: PhiSpec) -> float:
    """``E Phi(g) - Phi(E g)`` for a function given by its values."""
    values = np.asarray(values, dtype=np.float64)
    return float(np.mean(phi(values)) - phi(np.array([values.mean()]))[0])
