"""Named candidate functions: lexicographic sets, majorities, Hamming-ball-like sets."""

from __future__ import annotations

import numpy as np

from .cube import BooleanFunction, _check_dim, from_support, popcounts


def _bit_reverse(values: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(values)
    for i in range(n):
        out |= ((values >> i) & 1) << (n - 1 - i)
    return out


def lexicographic(n: int, s: int, *, reflected: bool = False) -> BooleanFunction:
    """First ``s`` strings in dictionary order on ``(x_1, ..., x_n)``, ``x_1`` most significant.

    The initial segment starts at ``0...0``. ``reflected=True`` applies
    ``x -> 1 - x`` so the segment starts at ``1...1`` instead; for
    ``s = 2**(n-m)`` that is the subcube ``x_1 = ... = x_m = 1``.
    """
    _check_dim(n)
    if not 0 <= s <= 1 << n:
        raise ValueError(f"support size must lie in [0, 2**{n}], got {s}")
    points = _bit_reverse(np.arange(s, dtype=np.int64), n)
    if reflected:
        points = ((1 << n) - 1) ^ points
    return from_support(n, points)


def majority(n: int, r: int) -> BooleanFunction:
    """``1`` iff more than half of ``x_1..x_r`` are 1."""
    _check_dim(n)
    if r % 2 == 0 or not 1 <= r <= n:
        raise ValueError(f"r must be odd with 1 <= r <= n, got r={r}, n={n}")
    weight = popcounts(r)[np.arange(1 << n) & ((1 << r) - 1)]
    return BooleanFunction(n, 2 * weight > r)


def dictator(n: int, i: int = 1) -> BooleanFunction:
    """``f(x) = x_i``."""
    _check_dim(n)
    if not 1 <= i <= n:
        raise ValueError(f"coordinate must lie in [1, {n}], got {i}")
    return BooleanFunction(n, (np.arange(1 << n) >> (i - 1)) & 1 == 1)


def parity(n: int) -> BooleanFunction:
    """Indicator of odd Hamming weight, ``(1 - W_[n]) / 2``."""
    _check_dim(n)
    return BooleanFunction(n, popcounts(n) % 2 == 1)


def hamming_ball_like(n: int, s: int) -> BooleanFunction:
    """``1...1`` plus the ``s - 1`` neighbours obtained by zeroing ``x_1, x_2, ...`` in turn."""
    _check_dim(n)
    if not 1 <= s <= n + 1:
        raise ValueError(f"support size must lie in [1, n+1], got {s}")
    top = (1 << n) - 1
    return from_support(n, [top] + [top ^ (1 << i) for i in range(s - 1)])


def is_monotone(f: BooleanFunction) -> bool:
    t = f.table
    for i in range(f.n):
        view = t.reshape(-1, 2, 1 << i)
        if np.any(view[:, 0, :] & ~view[:, 1, :]):
            return False
    return True


def monotone_mask(tables: np.ndarray, n: int) -> np.ndarray:
    """Row-wise ``is_monotone`` for a stack of tables."""
    tables = np.asarray(tables, dtype=bool)
    lead = tables.shape[:-1]
    ok = np.ones(lead, dtype=bool)
    for i in range(n):
        view = tables.reshape(lead + (-1, 2, 1 << i))
        ok &= ~np.any(view[..., 0, :] & ~view[..., 1, :], axis=(-2, -1))
    return ok


def named(n: int, spec: str) -> BooleanFunction:
    """Parse ``maj:r``, ``lex:s``, ``rlex:s``, ``ball:s``, ``dict[:i]``, ``parity``,
    ``const:0|1`` or ``hex:<table>``."""
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "maj":
            return majority(n, int(arg))
        if kind == "lex":
            return lexicographic(n, int(arg))
        if kind == "rlex":
            return lexicographic(n, int(arg), reflected=True)
        if kind == "ball":
            return hamming_ball_like(n, int(arg))
        if kind == "dict":
            return dictator(n, int(arg) if arg else 1)
        if kind == "parity":
            return parity(n)
        if kind == "const":
            return BooleanFunction.constant(n, int(arg))
        if kind == "hex":
            return BooleanFunction.from_hex(n, arg)
    except ValueError as exc:
        raise ValueError(f"bad candidate {spec!r}: {exc}") from None
    raise ValueError(f"unknown candidate {spec!r}")
