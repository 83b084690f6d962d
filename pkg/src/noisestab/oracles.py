"""Brute-force reference computations.

These enumerate the channel explicitly (point pairs, full joint laws) and
share no code with the spectral or butterfly routes they are used to check.
They are only practical for small ``n``.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np

from .cube import BooleanFunction


def channel_matrix(n: int, eps: float) -> np.ndarray:
    """``K[x, y] = P(Y = y | X = x)`` for a BSC(eps) on n bits."""
    size = 1 << n
    dist = np.array([[bin(x ^ y).count("1") for y in range(size)] for x in range(size)])
    return eps**dist * (1.0 - eps) ** (n - dist)


def noisy_by_enumeration(f: BooleanFunction, eps: float) -> np.ndarray:
    return channel_matrix(f.n, eps) @ f.table.astype(float)


def pair_agreement(f: BooleanFunction, g: BooleanFunction, eps: float) -> float:
    """``P(f(Y1) = g(Y2))`` summing over all (x, y1, y2) triples."""
    k = channel_matrix(f.n, eps)
    a, b = f.table.astype(float), g.table.astype(float)
    joint11 = np.einsum("xy,xz,y,z->", k, k, a, b) / (1 << f.n)
    joint00 = np.einsum("xy,xz,y,z->", k, k, 1 - a, 1 - b) / (1 << f.n)
    return float(joint11 + joint00)


def pair_correlation(f: BooleanFunction, g: BooleanFunction, eps: float) -> float:
    """``E f(Y1) g(Y2)`` from the joint law of the two received strings."""
    k = channel_matrix(f.n, eps)
    joint = k.T @ k / (1 << f.n)
    return float(f.table.astype(float) @ joint @ g.table.astype(float))


def mutual_information_joint(f: BooleanFunction, eps: float) -> float:
    """``I(X; f(Y))`` in bits from the joint law of ``(X, f(Y))``."""
    size = 1 << f.n
    p1 = channel_matrix(f.n, eps) @ f.table.astype(float)
    joint = np.stack([1.0 - p1, p1], axis=1) / size
    pb = joint.sum(axis=0)
    total = 0.0
    for x, b in product(range(size), range(2)):
        if joint[x, b] > 0:
            total += joint[x, b] * math.log2(joint[x, b] / (pb[b] / size))
    return total


def flip_influence(f: BooleanFunction, i: int) -> float:
    """``P(f(x) != f(sigma_i x))`` by looping over points."""
    size = 1 << f.n
    return sum(f.table[x] != f.table[x ^ (1 << (i - 1))] for x in range(size)) / size
