"""Influence of coordinates and edge boundaries on the cube.

Three routes to the same numbers:

* ``flip``: count points whose value changes when coordinate i is flipped;
* ``boundary``: count cut edges ``(x, sigma_i(x))`` with ``x`` in the support;
* ``fourier``: ``I_i(f) = 4 * sum_{A containing i} fhat(A)**2``.

The first two are integer counts and agree exactly; the Fourier route is float.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cube import BooleanFunction, walsh_hadamard

METHODS = ("flip", "fourier", "boundary")


@dataclass(frozen=True)
class InfluenceReport:
    per_coordinate: tuple[float, ...]
    total: float
    method: str


def boundary_counts(tables: np.ndarray, n: int) -> np.ndarray:
    """Cut edges per direction, shape ``tables.shape[:-1] + (n,)``.

    Each unordered edge is counted once.
    """
    tables = np.asarray(tables, dtype=bool)
    lead = tables.shape[:-1]
    out = np.empty(lead + (n,), dtype=np.int64)
    for i in range(n):
        view = tables.reshape(lead + (-1, 2, 1 << i))
        out[..., i] = np.count_nonzero(view[..., 0, :] ^ view[..., 1, :], axis=(-2, -1))
    return out


def flip_counts(tables: np.ndarray, n: int) -> np.ndarray:
    """Number of points ``x`` with ``f(x) != f(sigma_i(x))``, per direction."""
    tables = np.asarray(tables, dtype=bool)
    lead = tables.shape[:-1]
    idx = np.arange(1 << n)
    out = np.empty(lead + (n,), dtype=np.int64)
    for i in range(n):
        out[..., i] = np.count_nonzero(tables != tables[..., idx ^ (1 << i)], axis=-1)
    return out


def fourier_influences(tables: np.ndarray, n: int) -> np.ndarray:
    coeffs = walsh_hadamard(np.asarray(tables, dtype=np.float64), n) / (1 << n)
    sq = coeffs ** 2
    masks = np.arange(1 << n)
    return np.stack([4.0 * sq[..., (masks >> i) & 1 == 1].sum(axis=-1) for i in range(n)], axis=-1)


def influence(f: BooleanFunction, method: str = "flip") -> InfluenceReport:
    if method == "flip":
        per = flip_counts(f.table, f.n) / (1 << f.n)
    elif method == "boundary":
        per = boundary_counts(f.table, f.n) / (1 << (f.n - 1))
    elif method == "fourier":
        per = fourier_influences(f.table, f.n)
    else:
        raise ValueError(f"unknown influence method {method!r}; choose from {METHODS}")
    per = tuple(float(v) for v in per)
    return InfluenceReport(per, float(sum(per)), method)


def total_influence(f: BooleanFunction) -> float:
    return influence(f, "boundary").total


def edge_boundary(f: BooleanFunction) -> tuple[tuple[int, ...], int]:
    """Per-direction cut-edge counts and their total."""
    counts = tuple(int(c) for c in boundary_counts(f.table, f.n))
    return counts, sum(counts)
