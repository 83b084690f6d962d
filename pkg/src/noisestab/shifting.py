"""Up-compression of supports toward a monotone function.

``shift_up(f, i)`` looks at every pair of points differing only in coordinate
``i``. When exactly one of the pair is in the support, that point is moved to
the ``x_i = 1`` end. The support size never changes, and for every convex Phi
the value ``E Phi(T_eps f)`` never decreases. Sweeping i = 1..n until nothing
moves reaches a monotone function; each moving step raises the potential
``sum_{x in S} |x|`` by the number of moved points, so at most ``n * |S|``
points can ever move.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .cube import BooleanFunction, popcounts


@dataclass
class ShiftTrace:
    steps: list[tuple[int, int]] = field(default_factory=list)
    passes: int = 0
    final_potential: int = 0


def shift_tables(tables: np.ndarray, n: int, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Apply the coordinate-``i`` shift to a stack of tables.

    Returns ``(shifted, moved)`` where ``moved`` counts relocated points per row.
    """
    if not 1 <= i <= n:
        raise ValueError(f"coordinate must lie in [1, {n}], got {i}")
    tables = np.asarray(tables, dtype=bool)
    lead = tables.shape[:-1]
    view = tables.reshape(lead + (-1, 2, 1 << (i - 1)))
    low, high = view[..., 0, :], view[..., 1, :]
    moved = np.count_nonzero(low & ~high, axis=(-2, -1))
    out = np.empty_like(view)
    out[..., 0, :] = low & high
    out[..., 1, :] = low | high
    return out.reshape(tables.shape), moved


def shift_up(f: BooleanFunction, i: int) -> BooleanFunction:
    shifted, _ = shift_tables(f.table, f.n, i)
    return BooleanFunction(f.n, shifted)


def potential(f: BooleanFunction) -> int:
    return int(popcounts(f.n)[f.table].sum())


def iter_shifts(f: BooleanFunction) -> Iterator[tuple[int, int, BooleanFunction]]:
    """Yield ``(coordinate, moved, function_after)`` for every shift step,
    including steps that move nothing, until a full sweep is idle."""
    current = f
    while True:
        sweep_moved = 0
        for i in range(1, f.n + 1):
            shifted, moved = shift_tables(current.table, f.n, i)
            moved = int(moved)
            if moved:
                current = BooleanFunction(f.n, shifted)
            sweep_moved += moved
            yield i, moved, current
        if not sweep_moved:
            return


def monotonize(f: BooleanFunction) -> tuple[BooleanFunction, ShiftTrace]:
    trace = ShiftTrace()
    result = f
    sweep_moved = False
    for i, moved, after in iter_shifts(f):
        if moved:
            trace.steps.append((i, moved))
            sweep_moved = True
        result = after
        if i == f.n:
            trace.passes += sweep_moved
            sweep_moved = False
    trace.final_potential = potential(result)
    return result, trace


def sweep_tables(tables: np.ndarray, n: int) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Stacked version of ``iter_shifts``: yield ``(coordinate, tables_after, moved)``
    for sweeps 1..n over all rows until one full sweep moves nothing in any row.

    Every row follows exactly the step sequence ``iter_shifts`` would give it;
    rows that are already monotone just stop changing.
    """
    current = np.asarray(tables, dtype=bool)
    while True:
        any_moved = False
        for i in range(1, n + 1):
            current, moved = shift_tables(current, n, i)
            any_moved |= bool(moved.any())
            yield i, current, moved
        if not any_moved:
            return
