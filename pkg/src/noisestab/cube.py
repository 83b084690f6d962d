"""Boolean and real-valued functions on the discrete cube {0,1}^n.

Points are indexed by ``idx(x) = sum_i x_i * 2**(i-1)``: coordinate 1 is the
least-significant bit of the index. Every module in the package uses this
convention. Strings such as ``"011"`` in docstrings list ``x_1 x_2 ... x_n``
left to right.

The array-level helpers (``walsh_hadamard``, ``popcounts``...) operate on the
last axis, so a stack of truth tables of shape ``(k, 2**n)`` is transformed in
one call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

MAX_DIM = 24


def _check_dim(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_DIM:
        raise ValueError(f"dimension n must be an integer in [1, {MAX_DIM}], got {n!r}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """Hamming weight of every index in ``range(2**n)`` (read-only)."""
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        out += (idx >> i) & 1
    return _frozen(out)


def butterfly(values: np.ndarray, n: int, fn) -> np.ndarray:
    """Apply ``fn(a, b) -> (a', b')`` to every co-line of every coordinate.

    ``a`` holds the entries with bit ``i`` clear and ``b`` the entries with it
    set. Coordinates are processed 1..n in order. Returns a new array.
    """
    out = np.array(values, dtype=np.result_type(values, np.float64), copy=True)
    lead = out.shape[:-1]
    for i in range(n):
        view = out.reshape(lead + (-1, 2, 1 << i))
        a = view[..., 0, :].copy()
        b = view[..., 1, :].copy()
        view[..., 0, :], view[..., 1, :] = fn(a, b)
    return out


def walsh_hadamard(values: np.ndarray, n: int) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis."""
    return butterfly(values, n, lambda a, b: (a + b, a - b))


@dataclass(frozen=True, eq=False)
class BooleanFunction:
    """Truth table of ``f: {0,1}^n -> {0,1}``.

    ``table[idx(x)]`` is ``f(x)``. The table is stored as a read-only boolean
    array; use the constructors below rather than building one by hand.
    """

    n: int
    table: np.ndarray

    def __post_init__(self):
        _check_dim(self.n)
        table = np.asarray(self.table)
        if table.shape != (1 << self.n,):
            raise ValueError(f"table must have length 2**n = {1 << self.n}, got shape {table.shape}")
        if table.dtype != np.bool_ and not np.isin(table, (0, 1)).all():
            raise ValueError("truth table entries must be 0 or 1")
        object.__setattr__(self, "table", _frozen(np.array(table, dtype=bool)))

    # constructors -------------------------------------------------------

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> "BooleanFunction":
        return from_support(n, support)

    @classmethod
    def from_int(cls, n: int, value: int) -> "BooleanFunction":
        """Table whose bit ``idx(x)`` (from the least-significant end) is ``f(x)``."""
        _check_dim(n)
        size = 1 << n
        if value < 0 or value >> size:
            raise ValueError(f"integer table does not fit in 2**{n} bits")
        raw = value.to_bytes((size + 7) // 8, "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
        return cls(n, bits.astype(bool))

    @classmethod
    def from_hex(cls, n: int, text: str) -> "BooleanFunction":
        """Parse the lowercase hex truth-table format (most-significant nibble first)."""
        text = text.strip().lower()
        if text.startswith("0x"):
            text = text[2:]
        if not text or any(c not in "0123456789abcdef" for c in text):
            raise ValueError(f"malformed hex truth table {text!r}")
        return cls.from_int(n, int(text, 16))

    @classmethod
    def constant(cls, n: int, value: int) -> "BooleanFunction":
        _check_dim(n)
        return cls(n, np.full(1 << n, bool(value)))

    # views ----------------------------------------------------------------

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.table)

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.table))

    @property
    def mean(self) -> float:
        return self.size / (1 << self.n)

    @property
    def is_balanced(self) -> bool:
        return 2 * self.size == 1 << self.n

    def to_int(self) -> int:
        packed = np.packbits(self.table, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def to_hex(self) -> str:
        digits = max(1, -(-(1 << self.n) // 4))
        return format(self.to_int(), f"0{digits}x")

    def values(self) -> "CubeFunction":
        return CubeFunction(self.n, self.table.astype(np.float64))

    def complement(self) -> "BooleanFunction":
        """``1 - f``."""
        return BooleanFunction(self.n, ~self.table)

    def reflect(self) -> "BooleanFunction":
        """``x -> f(1 - x)``: every coordinate flipped."""
        return BooleanFunction(self.n, self.table[::-1])

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.n, self.table.tobytes()))

    def __repr__(self):
        return f"BooleanFunction(n={self.n}, hex={self.to_hex()!r})"


@dataclass(frozen=True, eq=False)
class CubeFunction:
    """Real-valued function on {0,1}^n, same index convention as the tables."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        _check_dim(self.n)
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (1 << self.n,):
            raise ValueError(f"values must have length 2**n = {1 << self.n}, got shape {values.shape}")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Walsh-Fourier coefficients; ``coeffs[mask]`` is the coefficient of the
    character ``W_A(x) = (-1)^{sum_{i in A} x_i}`` where bit ``i-1`` of
    ``mask`` is set iff ``i`` is in ``A``."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_dim(self.n)
        coeffs = np.array(self.coeffs, dtype=np.float64)
        if coeffs.shape != (1 << self.n,):
            raise ValueError(f"coeffs must have length 2**n = {1 << self.n}, got shape {coeffs.shape}")
        object.__setattr__(self, "coeffs", _frozen(coeffs))


def from_support(n: int, support: Iterable[int]) -> BooleanFunction:
    """Indicator of a set of point indices."""
    _check_dim(n)
    idx = np.fromiter((int(i) for i in support), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= 1 << n):
        raise ValueError(f"support index out of range for n={n}")
    table = np.zeros(1 << n, dtype=bool)
    table[idx] = True
    return BooleanFunction(n, table)


def as_values(f) -> CubeFunction:
    if isinstance(f, BooleanFunction):
        return f.values()
    if isinstance(f, CubeFunction):
        return f
    raise TypeError(f"expected BooleanFunction or CubeFunction, got {type(f).__name__}")


def wht(f) -> Spectrum:
    """Forward transform: ``coeffs[A] = 2**-n * sum_x f(x) W_A(x)``."""
    f = as_values(f)
    return Spectrum(f.n, walsh_hadamard(f.values, f.n) / (1 << f.n))


def wht_inverse(s: Spectrum) -> CubeFunction:
    return CubeFunction(s.n, walsh_hadamard(s.coeffs, s.n))


def mean(f: BooleanFunction) -> float:
    return f.mean


def is_balanced(f: BooleanFunction) -> bool:
    return f.is_balanced


def degree_weight(s: Spectrum, d: int) -> float:
    """Fourier weight on level ``d``: sum of squared coefficients with ``|A| = d``."""
    if not 0 <= d <= s.n:
        raise ValueError(f"degree must lie in [0, {s.n}], got {d}")
    level = popcounts(s.n) == d
    return float(np.sum(s.coeffs[level] ** 2))


def tables_from_ints(n: int, values: Iterable[int]) -> np.ndarray:
    """Stack integer-encoded truth tables into a ``(k, 2**n)`` boolean array."""
    size = 1 << n
    nbytes = (size + 7) // 8
    raw = b"".join(int(v).to_bytes(nbytes, "little") for v in values)
    if not raw:
        return np.zeros((0, size), dtype=bool)
    packed = np.frombuffer(raw, dtype=np.uint8).reshape(-1, nbytes)
    return np.unpackbits(packed, axis=1, bitorder="little")[:, :size].astype(bool)


def ints_from_tables(tables: np.ndarray) -> list[int]:
    packed = np.packbits(np.asarray(tables, dtype=bool), axis=-1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed.reshape(-1, packed.shape[-1])]


def hex_from_int(n: int, value: int) -> str:
    digits = max(1, -(-(1 << n) // 4))
    return format(value, f"0{digits}x")
