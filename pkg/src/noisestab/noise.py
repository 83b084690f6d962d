"""The noise operator on the cube and the functionals built on it.

``T_eps f(x) = E f(x + Z)`` with ``Z`` i.i.d. Bernoulli(eps). Two independent
routes are provided: ``apply_noise`` scales Walsh coefficients by
``(1 - 2 eps)**|A|``; ``apply_noise_direct`` convolves with the product kernel
one coordinate at a time. The spectral route extends analytically to any real
``eps``, which the finite-difference checks rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .cube import (
    BooleanFunction,
    CubeFunction,
    as_values,
    butterfly,
    popcounts,
    walsh_hadamard,
)


@dataclass(frozen=True)
class NoiseParam:
    epsilon: float
    rho: float = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 0.5:
            raise ValueError(f"epsilon must lie in [0, 1/2], got {self.epsilon}")
        object.__setattr__(self, "rho", (1.0 - 2.0 * self.epsilon) ** 2)

    @classmethod
    def from_rho(cls, rho: float) -> "NoiseParam":
        if not 0.0 <= rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {rho}")
        return cls((1.0 - math.sqrt(rho)) / 2.0)


def xlog2x(t: np.ndarray) -> np.ndarray:
    """``t * log2(t)`` with ``0 log 0 = 0``; entries at or beyond 0 and 1 give 0."""
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    inside = (t > 0.0) & (t < 1.0)
    out[inside] = t[inside] * np.log2(t[inside])
    return out


@dataclass(frozen=True)
class PhiSpec:
    """A convex function on [0, 1].

    ``kind`` is one of ``"power"`` (needs ``alpha >= 1``), ``"entropy-pair"``
    (``1 + x log2 x + (1-x) log2(1-x)``), ``"hellinger"``
    (``1 - 2 sqrt(x(1-x))``) or ``"custom"`` (``func`` applied elementwise;
    convexity is the caller's business).
    """

    kind: str
    alpha: Optional[float] = None
    func: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.kind == "power":
            if self.alpha is None or self.alpha < 1:
                raise ValueError("power Phi needs alpha >= 1")
        elif self.kind == "custom":
            if self.func is None:
                raise ValueError("custom Phi needs func")
        elif self.kind not in ("entropy-pair", "hellinger"):
            raise ValueError(f"unknown Phi kind {self.kind!r}")

    @classmethod
    def power(cls, alpha: float) -> "PhiSpec":
        return cls("power", alpha=alpha)

    @classmethod
    def entropy_pair(cls) -> "PhiSpec":
        return cls("entropy-pair")

    @classmethod
    def hellinger(cls) -> "PhiSpec":
        return cls("hellinger")

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "power":
            return power_moment_terms(t, self.alpha)
        if self.kind == "custom":
            return np.asarray(self.func(t), dtype=np.float64)
        t = _unit_interval(t)
        if self.kind == "entropy-pair":
            return 1.0 + xlog2x(t) + xlog2x(1.0 - t)
        return 1.0 - 2.0 * np.sqrt(t * (1.0 - t))

    @property
    def label(self) -> str:
        return f"power({self.alpha:g})" if self.kind == "power" else self.kind


def _unit_interval(t: np.ndarray, slack: float = 1e-12) -> np.ndarray:
    if t.size and (t.min() < -slack or t.max() > 1.0 + slack):
        raise ValueError("Phi evaluated outside [0, 1]")
    return np.clip(t, 0.0, 1.0)


def power_moment_terms(t: np.ndarray, alpha: float) -> np.ndarray:
    """``t**alpha`` with ``0**alpha = 0``.

    Integer exponents are evaluated as such so that slightly negative values
    from the analytic extension stay finite.
    """
    t = np.asarray(t, dtype=np.float64)
    if float(alpha).is_integer():
        return t ** int(alpha)
    out = np.abs(t) ** alpha
    out[t < 0.0] = np.nan
    return out


# array-level kernels (last axis) -------------------------------------------


def noise_multipliers(n: int, eps: float) -> np.ndarray:
    return (1.0 - 2.0 * eps) ** popcounts(n)


def noisy_spectral(values: np.ndarray, n: int, eps: float) -> np.ndarray:
    coeffs = walsh_hadamard(values, n) / (1 << n)
    return walsh_hadamard(coeffs * noise_multipliers(n, eps), n)


def noisy_direct(values: np.ndarray, n: int, eps: float) -> np.ndarray:
    keep = 1.0 - eps
    return butterfly(values, n, lambda a, b: (keep * a + eps * b, eps * a + keep * b))


def channel_values(f: BooleanFunction, eps: float) -> np.ndarray:
    """``T_eps f`` for a Boolean ``f`` at channel noise, clipped to [0, 1]."""
    _check_channel_eps(eps)
    return np.clip(noisy_direct(f.table, f.n, eps), 0.0, 1.0)


def _check_channel_eps(eps: float) -> None:
    if not 0.0 <= eps <= 0.5:
        raise ValueError(f"epsilon must lie in [0, 1/2], got {eps}")


# public operations -----------------------------------------------------------


def apply_noise(f, eps: float) -> CubeFunction:
    """Spectral route. Any real ``eps`` is accepted."""
    f = as_values(f)
    return CubeFunction(f.n, noisy_spectral(f.values, f.n, eps))


def apply_noise_direct(f, eps: float) -> CubeFunction:
    """Coordinatewise convolution with the Bernoulli(eps) kernel."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {eps}")
    f = as_values(f)
    return CubeFunction(f.n, noisy_direct(f.values, f.n, eps))


def alpha_stability(f: BooleanFunction, alpha: float, eps: float, *, analytic: bool = False) -> float:
    """``E (T_eps f)**alpha``.

    With ``analytic=True`` any real ``eps`` is allowed and the spectral route
    is used without clipping (for derivative checks around ``eps = 0``).
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if analytic:
        t = noisy_spectral(f.table, f.n, eps)
    else:
        t = channel_values(f, eps)
    return float(np.mean(power_moment_terms(t, alpha)))


def correlation_star(fs: Sequence[BooleanFunction], eps: float) -> float:
    """``E prod_i f_i(Y^i)`` for players seeing independent noisy copies of X."""
    if not fs:
        raise ValueError("need at least one function")
    n = fs[0].n
    if any(f.n != n for f in fs):
        raise ValueError("all functions must share the same dimension")
    prod = np.ones(1 << n)
    for f in fs:
        prod = prod * channel_values(f, eps)
    return float(prod.mean())


def agreement_probability(f: BooleanFunction, k: int, eps: float) -> float:
    """``P(f(Y^1) = ... = f(Y^k))``."""
    if int(k) != k or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k}")
    t = channel_values(f, eps)
    return float(np.mean(t ** int(k) + (1.0 - t) ** int(k)))


def laplacian(f) -> CubeFunction:
    """Spectral multiplier ``-|A|``."""
    f = as_values(f)
    coeffs = walsh_hadamard(f.values, f.n) / (1 << f.n)
    return CubeFunction(f.n, walsh_hadamard(-popcounts(f.n) * coeffs, f.n))


def stability_slope_zero(f: BooleanFunction, alpha: float) -> float:
    """Derivative of ``E (T_eps f)**alpha`` in eps at 0: ``-alpha I(f) / 2``."""
    from .influence import influence

    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    return -alpha * influence(f).total / 2.0


def phi_stability(f: BooleanFunction, phi: PhiSpec, eps: float) -> float:
    return float(np.mean(phi(channel_values(f, eps))))
