"""Functions on the discrete torus (Z/pZ)^n.

Points are indexed by ``idx(x) = sum_i x_i * p**(i-1)``. Internally a value
array is reshaped to ``(p,) * n`` in C order, so coordinate ``i`` lives on
axis ``n - i``.

Characters are ``e_p(xi . x) = exp(2 pi i xi.x / p)``, with
``f(x) = sum_xi fhat(xi) e_p(xi . x)`` and ``fhat(xi) = E f(x) e_p(-xi . x)``.

Two noise models:

* ``uniform``: each coordinate stays put with probability ``1 - eps`` and
  otherwise moves to one of the other ``p - 1`` values uniformly;
  ``eps`` in ``[0, 1 - 1/p]``.
* ``nearest``: each coordinate moves by ``+1`` or ``-1`` with probability
  ``eps / 2`` each; ``eps`` in ``[0, 1]``. At ``p = 2`` both moves land on the
  same point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

from .influence import InfluenceReport

MODELS = ("uniform", "nearest")
FLAVORS = ("random_flip", "nearest")


@dataclass(frozen=True, eq=False)
class TorusFunction:
    p: int
    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.p < 2 or self.n < 1:
            raise ValueError(f"need p >= 2 and n >= 1, got p={self.p}, n={self.n}")
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size != self.p**self.n:
            raise ValueError(f"need p**n = {self.p ** self.n} values, got {values.size}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_support(cls, p: int, n: int, support) -> "TorusFunction":
        values = np.zeros(p**n)
        idx = np.asarray(list(support), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= p**n):
            raise ValueError("support index out of range")
        values[idx] = 1.0
        return cls(p, n, values)

    @classmethod
    def from_points(cls, p: int, n: int, points) -> "TorusFunction":
        """Support given as coordinate tuples ``(x_1, ..., x_n)``."""
        return cls.from_support(p, n, [point_index(p, x) for x in points])

    @classmethod
    def from_string(cls, p: int, n: int, text: str) -> "TorusFunction":
        """Parse a table string: character ``k`` is ``f`` at the point with index ``k``."""
        text = text.strip()
        if len(text) != p**n or any(c not in "01" for c in text):
            raise ValueError(f"torus table must be {p ** n} characters of 0/1")
        return cls(p, n, [float(c) for c in text])

    def to_string(self) -> str:
        if not self.is_boolean:
            raise ValueError("only Boolean torus functions have a table string")
        return "".join("1" if v else "0" for v in self.values)

    @property
    def is_boolean(self) -> bool:
        return bool(np.all((self.values == 0.0) | (self.values == 1.0)))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.values == 1.0)

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    def grid(self) -> np.ndarray:
        return self.values.reshape((self.p,) * self.n)


@dataclass(frozen=True, eq=False)
class TorusSpectrum:
    p: int
    n: int
    coeffs: np.ndarray

    def grid(self) -> np.ndarray:
        return self.coeffs.reshape((self.p,) * self.n)


def point_index(p: int, x) -> int:
    return sum(int(xi) * p**i for i, xi in enumerate(x))


def point_coords(p: int, n: int, idx: int) -> tuple[int, ...]:
    return tuple((idx // p**i) % p for i in range(n))


def _axis(n: int, j: int) -> int:
    return n - j


def torus_dft(f: TorusFunction) -> TorusSpectrum:
    coeffs = np.fft.fftn(f.grid()) / f.p**f.n
    return TorusSpectrum(f.p, f.n, coeffs.reshape(-1))


def torus_dft_inverse(s: TorusSpectrum) -> TorusFunction:
    values = np.fft.ifftn(s.grid()) * s.p**s.n
    return TorusFunction(s.p, s.n, values.real.reshape(-1))


def _check_eps(p: int, eps: float, model: str) -> None:
    if model == "uniform":
        if not 0.0 <= eps <= 1.0 - 1.0 / p:
            raise ValueError(f"uniform model needs eps in [0, 1 - 1/p], got {eps}")
    elif model == "nearest":
        if not 0.0 <= eps <= 1.0:
            raise ValueError(f"nearest model needs eps in [0, 1], got {eps}")
    else:
        raise ValueError(f"unknown noise model {model!r}; choose from {MODELS}")


def coordinate_multiplier(p: int, eps: float, model: str) -> np.ndarray:
    """Fourier multiplier of one coordinate's noise, indexed by ``xi_j``."""
    xi = np.arange(p)
    if model == "uniform":
        return np.where(xi == 0, 1.0, 1.0 - p * eps / (p - 1))
    return 1.0 - eps * (1.0 - np.cos(2.0 * np.pi * xi / p))


def coordinate_kernel(p: int, eps: float, model: str) -> np.ndarray:
    """Distribution of one coordinate's noise ``Z_j`` over ``Z/pZ``."""
    kernel = np.zeros(p)
    if model == "uniform":
        kernel[1:] = eps / (p - 1)
    else:
        kernel[1] += eps / 2
        kernel[-1] += eps / 2
    kernel[0] = 1.0 - eps
    return kernel


def _spectral_noise(f: TorusFunction, eps: float, model: str) -> np.ndarray:
    m = coordinate_multiplier(f.p, eps, model)
    coeffs = np.fft.fftn(f.grid())
    for axis in range(f.n):
        shape = [1] * f.n
        shape[axis] = f.p
        coeffs = coeffs * m.reshape(shape)
    return np.fft.ifftn(coeffs).real.reshape(-1)


def torus_apply_noise(f: TorusFunction, eps: float, model: str = "uniform") -> TorusFunction:
    """``T_eps f(x) = E f(x + Z)`` via the Fourier multipliers."""
    _check_eps(f.p, eps, model)
    return TorusFunction(f.p, f.n, _spectral_noise(f, eps, model))


def torus_apply_noise_direct(f: TorusFunction, eps: float, model: str = "uniform") -> TorusFunction:
    """Same operator, by convolving each coordinate with its noise kernel."""
    _check_eps(f.p, eps, model)
    kernel = coordinate_kernel(f.p, eps, model)
    g = f.grid()
    for axis in range(f.n):
        g = sum(kernel[z] * np.roll(g, -z, axis=axis) for z in range(f.p) if kernel[z])
    return TorusFunction(f.p, f.n, np.asarray(g).reshape(-1))


def torus_alpha_stability(f: TorusFunction, alpha: float, eps: float, model: str = "uniform") -> float:
    from .noise import power_moment_terms

    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    t = np.clip(torus_apply_noise_direct(f, eps, model).values, 0.0, 1.0)
    return float(np.mean(power_moment_terms(t, alpha)))


def torus_phi_stability(f: TorusFunction, phi, eps: float, model: str = "uniform") -> float:
    t = np.clip(torus_apply_noise_direct(f, eps, model).values, 0.0, 1.0)
    return float(np.mean(phi(t)))


def _shifts(p: int, flavor: str) -> list[int]:
    if flavor == "random_flip":
        return list(range(1, p))
    if flavor == "nearest":
        return [1, p - 1]
    raise ValueError(f"unknown influence flavor {flavor!r}; choose from {FLAVORS}")


def _direct_influences(f: TorusFunction, flavor: str) -> list[float]:
    g = f.grid()
    shifts = _shifts(f.p, flavor)
    out = []
    for j in range(1, f.n + 1):
        axis = _axis(f.n, j)
        changed = [np.mean(g != np.roll(g, -z, axis=axis)) for z in shifts]
        out.append(float(np.mean(changed)))
    return out


def _fourier_influences(f: TorusFunction, flavor: str) -> list[float]:
    sq = np.abs(torus_dft(f).grid()) ** 2
    p = f.p
    xi = np.arange(p)
    if flavor == "random_flip":
        weight = np.where(xi == 0, 0.0, 2.0 * p / (p - 1))
    elif flavor == "nearest":
        weight = 2.0 * (1.0 - np.cos(2.0 * np.pi * xi / p))
    else:
        raise ValueError(f"unknown influence flavor {flavor!r}; choose from {FLAVORS}")
    out = []
    for j in range(1, f.n + 1):
        axis = _axis(f.n, j)
        shape = [1] * f.n
        shape[axis] = p
        out.append(float(np.sum(sq * weight.reshape(shape))))
    return out


def torus_influence(f: TorusFunction, flavor: str = "random_flip", method: str = "direct") -> InfluenceReport:
    """Influences for Boolean torus functions.

    ``random_flip``: coordinate ``j`` moves by a uniform nonzero amount.
    ``nearest``: coordinate ``j`` moves by ``+-1`` with equal probability.
    """
    if not f.is_boolean:
        raise ValueError("influence is defined for Boolean torus functions")
    if method == "direct":
        per = _direct_influences(f, flavor)
    elif method == "fourier":
        per = _fourier_influences(f, flavor)
    else:
        raise ValueError(f"unknown method {method!r}; choose 'direct' or 'fourier'")
    return InfluenceReport(tuple(per), float(sum(per)), f"{flavor}/{method}")


def torus_edge_boundary(f: TorusFunction) -> tuple[tuple[int, ...], int]:
    """Unordered pairs ``{x, x + e_j}`` with exactly one end in the support.

    At ``p = 2`` the neighbours ``x + 1`` and ``x - 1`` coincide and each edge
    is counted once, matching the cube boundary.
    """
    g = f.grid() == 1.0
    counts = []
    for j in range(1, f.n + 1):
        axis = _axis(f.n, j)
        cut = int(np.count_nonzero(g != np.roll(g, -1, axis=axis)))
        counts.append(cut // 2 if f.p == 2 else cut)
    return tuple(counts), sum(counts)


def boundary_influence_factor(p: int) -> int:
    """``I_j(f) * p**n / |boundary_j|`` under the nearest flavor: 2 at p = 2, else 1."""
    return 2 if p == 2 else 1


# monotonization ----------------------------------------------------------------


def _pair_shift(g: np.ndarray, axis: int, j: int, k: int) -> tuple[np.ndarray, int]:
    lo = np.take(g, j, axis=axis)
    hi = np.take(g, k, axis=axis)
    moved = int(np.count_nonzero(lo & ~hi))
    if not moved:
        return g, 0
    out = g.copy()
    index = [slice(None)] * g.ndim
    index[axis] = j
    out[tuple(index)] = lo & hi
    index[axis] = k
    out[tuple(index)] = lo | hi
    return out, moved


def torus_pair_shift(f: TorusFunction, coordinate: int, j: int, k: int) -> TorusFunction:
    """Move support points from ``x_coordinate = j`` to ``= k`` where the partner is free."""
    if not (0 <= j < k < f.p and 1 <= coordinate <= f.n):
        raise ValueError("need 0 <= j < k < p and a valid coordinate")
    g, _ = _pair_shift(f.grid() == 1.0, _axis(f.n, coordinate), j, k)
    return TorusFunction(f.p, f.n, g.astype(float).reshape(-1))


def iter_torus_shifts(f: TorusFunction) -> Iterator[tuple[tuple[int, int, int], int, TorusFunction]]:
    """Yield ``((coordinate, j, k), moved, function_after)`` per step until a sweep is idle."""
    if not f.is_boolean:
        raise ValueError("monotonization needs a Boolean torus function")
    g = f.grid() == 1.0
    pairs = list(combinations(range(f.p), 2))
    while True:
        sweep_moved = 0
        for coord in range(1, f.n + 1):
            for j, k in pairs:
                g, moved = _pair_shift(g, _axis(f.n, coord), j, k)
                sweep_moved += moved
                yield (coord, j, k), moved, TorusFunction(f.p, f.n, g.astype(float).reshape(-1))
        if not sweep_moved:
            return


def torus_potential(f: TorusFunction) -> int:
    return int(sum(sum(point_coords(f.p, f.n, int(i))) for i in f.support))


def torus_monotonize(f: TorusFunction):
    """Pair-shift sweeps to a fixpoint; returns ``(g, trace)`` with the
    shift-trace fields of the cube version (steps record ``(coordinate, j, k, moved)``)."""
    from .shifting import ShiftTrace

    trace = ShiftTrace()
    result = f
    last = (f.n, f.p - 2, f.p - 1)
    sweep_moved = False
    for step, moved, after in iter_torus_shifts(f):
        if moved:
            trace.steps.append(step + (moved,))
            sweep_moved = True
        result = after
        if step == last:
            trace.passes += sweep_moved
            sweep_moved = False
    trace.final_potential = torus_potential(result)
    return result, trace


def torus_is_monotone(f: TorusFunction) -> bool:
    """Non-decreasing along every axis in the order ``0 < 1 < ... < p-1``."""
    g = f.grid()
    return all(np.all(np.diff(g, axis=axis) >= 0) for axis in range(f.n))


def torus_functions_of_size(p: int, n: int, s: int) -> Iterator[TorusFunction]:
    for support in combinations(range(p**n), s):
        yield TorusFunction.from_support(p, n, support)
