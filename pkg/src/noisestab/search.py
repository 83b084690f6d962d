"""Exhaustive argmax search over Boolean functions with a fixed support size.

The search space is enumerated in colex order of the support index sets, which
for sets of equal size is the same as ascending order of the integer-encoded
truth table. Enumeration is split into contiguous chunks; each chunk is scored
as one ``(k, 2**n)`` array and the chunk maxima are merged in order, so the
result does not depend on how many workers score the chunks.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .cube import BooleanFunction, hex_from_int, tables_from_ints, walsh_hadamard
from .influence import boundary_counts
from .noise import PhiSpec, noisy_direct, power_moment_terms, xlog2x

DEFAULT_BUDGET = 10**8
ARGMAX_CAP = 64
OBJECTIVES = ("alpha_stability", "agreement", "mutual_info", "degree1_weight", "total_influence_min", "phi")

# Dedekind numbers: monotone Boolean functions of n variables.
DEDEKIND = (2, 3, 6, 20, 168, 7581, 7828354, 2414682040998)
MAX_MONOTONE_DIM = 6


class BudgetExceeded(Exception):
    def __init__(self, count: int, budget: int):
        super().__init__(f"search space has {count} functions, budget is {budget}")
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class Objective:
    name: str
    alpha: Optional[float] = None
    eps: Optional[float] = None
    k: Optional[int] = None
    phi: Optional[PhiSpec] = None

    def __post_init__(self):
        if self.name not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.name!r}; choose from {OBJECTIVES}")
        if self.name in ("alpha_stability", "agreement", "mutual_info", "phi"):
            if self.eps is None or not 0.0 <= self.eps <= 0.5:
                raise ValueError(f"{self.name} needs eps in [0, 1/2]")
        if self.name == "alpha_stability" and (self.alpha is None or self.alpha < 1):
            raise ValueError("alpha_stability needs alpha >= 1")
        if self.name == "agreement" and (self.k is None or int(self.k) != self.k or self.k < 2):
            raise ValueError("agreement needs an integer k >= 2")
        if self.name == "phi" and self.phi is None:
            raise ValueError("phi objective needs a PhiSpec")

    @classmethod
    def stability(cls, alpha: float, eps: float) -> "Objective":
        return cls("alpha_stability", alpha=alpha, eps=eps)

    @property
    def minimize(self) -> bool:
        return self.name == "total_influence_min"

    def describe(self) -> dict:
        out = {"name": self.name}
        for key in ("alpha", "eps", "k"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.phi is not None:
            out["phi"] = self.phi.label
        return out


@dataclass(frozen=True)
class SearchSpec:
    n: int
    objective: Objective
    support_size: Optional[int] = None
    balanced: bool = False
    restrict: str = "all"
    tie_tolerance: float = 1e-12
    budget: int = DEFAULT_BUDGET
    keep_all: bool = False

    def __post_init__(self):
        if not 1 <= self.n <= 24:
            raise ValueError(f"n must lie in [1, 24], got {self.n}")
        if self.balanced:
            if self.support_size not in (None, 1 << (self.n - 1)):
                raise ValueError("balanced search fixes the support size to 2**(n-1)")
        elif self.support_size is None or not 0 <= self.support_size <= 1 << self.n:
            raise ValueError("need a support size in [0, 2**n] or balanced=True")
        if self.restrict not in ("all", "monotone_only"):
            raise ValueError(f"restrict must be 'all' or 'monotone_only', got {self.restrict!r}")

    @property
    def size(self) -> int:
        return 1 << (self.n - 1) if self.balanced else self.support_size

    def describe(self) -> dict:
        return {
            "n": self.n,
            "support_size": self.size,
            "balanced": self.balanced,
            "restrict": self.restrict,
            "objective": self.objective.describe(),
            "tie_tolerance": self.tie_tolerance,
        }


@dataclass
class SearchResult:
    best_value: float
    argmax: list[str]
    evaluated_count: int
    runtime: float
    argmax_count: int = 0
    truncated: bool = False
    spec: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["argmax_hex"] = out.pop("argmax")
        return out


# enumeration -------------------------------------------------------------------


def _gosper(size: int, s: int) -> Iterator[int]:
    if s == 0:
        yield 0
        return
    v = (1 << s) - 1
    limit = 1 << size
    while v < limit:
        yield v
        c = v & -v
        r = v + c
        v = (((r ^ v) >> 2) // c) | r


def support_ints(n: int, s: int, chunk: int = 1 << 14) -> Iterator[list[int]]:
    """Integer tables with exactly ``s`` ones among ``2**n`` bits, ascending, chunked."""
    size = 1 << n
    if size <= 20:
        v = np.arange(1 << size, dtype=np.int64)
        weight = np.zeros_like(v)
        for i in range(size):
            weight += (v >> i) & 1
        picked = v[weight == s]
        for start in range(0, picked.size, chunk):
            yield picked[start : start + chunk].tolist()
        return
    buf = []
    for v in _gosper(size, s):
        buf.append(v)
        if len(buf) == chunk:
            yield buf
            buf = []
    if buf:
        yield buf


@lru_cache(maxsize=None)
def monotone_ints(n: int) -> tuple[int, ...]:
    """All monotone functions of ``n`` variables as integer tables, ascending."""
    if not 0 <= n <= MAX_MONOTONE_DIM:
        raise BudgetExceeded(DEDEKIND[min(n, len(DEDEKIND) - 1)], DEDEKIND[MAX_MONOTONE_DIM])
    level = np.array([0, 1], dtype=np.uint64)
    for k in range(1, n + 1):
        half = np.uint64(1 << (k - 1))
        lo, hi = level[:, None], level[None, :]
        ok = (lo & ~hi) == 0
        a, b = np.nonzero(ok)
        level = np.sort(level[a] | (level[b] << half))
    return tuple(int(v) for v in level)


def count_candidates(spec: SearchSpec) -> int:
    if spec.restrict == "monotone_only":
        if spec.n > MAX_MONOTONE_DIM:
            return DEDEKIND[min(spec.n, len(DEDEKIND) - 1)]
        return sum(1 for v in monotone_ints(spec.n) if v.bit_count() == spec.size)
    return math.comb(1 << spec.n, spec.size)


def _int_chunks(spec: SearchSpec, chunk: int) -> Iterator[list[int]]:
    count = count_candidates(spec)
    if count > spec.budget:
        raise BudgetExceeded(count, spec.budget)
    if spec.restrict == "monotone_only":
        picked = [v for v in monotone_ints(spec.n) if v.bit_count() == spec.size]
        for start in range(0, len(picked), chunk):
            yield picked[start : start + chunk]
    else:
        yield from support_ints(spec.n, spec.size, chunk)


def enumerate_functions(spec: SearchSpec) -> Iterator[BooleanFunction]:
    """Every function in the search space once, in colex order of supports."""
    for ints in _int_chunks(spec, 4096):
        for v in ints:
            yield BooleanFunction.from_int(spec.n, v)


# scoring -------------------------------------------------------------------------


def score_tables(tables: np.ndarray, n: int, objective: Objective) -> np.ndarray:
    """Objective value per row (the quantity itself, not negated)."""
    tables = np.asarray(tables, dtype=bool)
    name = objective.name
    if name == "degree1_weight":
        coeffs = walsh_hadamard(tables.astype(np.float64), n) / (1 << n)
        return np.sum(coeffs[..., [1 << i for i in range(n)]] ** 2, axis=-1)
    if name == "total_influence_min":
        return boundary_counts(tables, n).sum(axis=-1) / (1 << (n - 1))
    t = np.clip(noisy_direct(tables, n, objective.eps), 0.0, 1.0)
    if name == "alpha_stability":
        return np.mean(power_moment_terms(t, objective.alpha), axis=-1)
    if name == "agreement":
        k = int(objective.k)
        return np.mean(t**k + (1.0 - t) ** k, axis=-1)
    if name == "mutual_info":
        p = tables.mean(axis=-1)
        h = -(xlog2x(p) + xlog2x(1.0 - p))
        return h + np.mean(xlog2x(t) + xlog2x(1.0 - t), axis=-1)
    return np.mean(objective.phi(t), axis=-1)


def _score_chunk(args) -> tuple[float, list[tuple[float, int]], int]:
    ints, n, objective, tol = args
    tables = tables_from_ints(n, ints)
    values = score_tables(tables, n, objective)
    scores = -values if objective.minimize else values
    best = float(scores.max())
    keep = np.flatnonzero(scores >= best - tol)
    return best, [(float(scores[j]), ints[j]) for j in keep], len(ints)


def maximize(spec: SearchSpec, jobs: int = 1, chunk: int = 1 << 14) -> SearchResult:
    """Exact argmax (argmin for ``total_influence_min``) over the search space."""
    start = time.perf_counter()
    tol = spec.tie_tolerance
    tasks = ((ints, spec.n, spec.objective, tol) for ints in _int_chunks(spec, chunk))
    best = -math.inf
    ties: list[tuple[float, int]] = []
    evaluated = 0

    def merge(part):
        nonlocal best, ties, evaluated
        part_best, part_ties, part_count = part
        evaluated += part_count
        if part_best > best:
            best = part_best
        ties = [t for t in ties + part_ties if t[0] >= best - tol]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_score_chunk, tasks):
                merge(part)
    else:
        for task in tasks:
            merge(_score_chunk(task))

    if not evaluated:
        raise ValueError("empty search space")
    ties.sort(key=lambda t: t[1])
    shown = ties if spec.keep_all else ties[:ARGMAX_CAP]
    value = -best if spec.objective.minimize else best
    return SearchResult(
        best_value=value,
        argmax=[hex_from_int(spec.n, v) for _, v in shown],
        evaluated_count=evaluated,
        runtime=time.perf_counter() - start,
        argmax_count=len(ties),
        truncated=len(shown) < len(ties),
        spec=spec.describe(),
    )


def argmax_functions(result: SearchResult, n: int) -> list[BooleanFunction]:
    return [BooleanFunction.from_hex(n, h) for h in result.argmax]


def evaluate(f: BooleanFunction, objective: Objective) -> float:
    return float(score_tables(f.table[None, :], f.n, objective)[0])


def compare_named(
    n: int,
    candidates: Sequence[BooleanFunction] | dict[str, BooleanFunction],
    objective: Objective,
) -> list[tuple[str, float]]:
    """Objective value per candidate, best first."""
    if isinstance(candidates, dict):
        items = list(candidates.items())
    else:
        items = [(f.to_hex(), f) for f in candidates]
    if any(f.n != n for _, f in items):
        raise ValueError("all candidates must have dimension n")
    rows = [(label, evaluate(f, objective)) for label, f in items]
    rows.sort(key=lambda r: r[1], reverse=not objective.minimize)
    return rows


def dictator_class(n: int) -> list[BooleanFunction]:
    """``x_i`` and ``1 - x_i`` for every coordinate."""
    from .canonical import dictator

    out = []
    for i in range(1, n + 1):
        d = dictator(n, i)
        out += [d, d.complement()]
    return out


def conjecture_grid(
    ns: Iterable[int] = (1, 2, 3, 4),
    alphas: Iterable[float] = (1.1, 1.3, 1.5, 1.7, 1.9),
    epss: Iterable[float] = tuple(round(0.05 * j, 10) for j in range(1, 10)),
    tol: float = 1e-12,
) -> list[dict]:
    """For each (n, alpha, eps): do dictators maximize ``E (T_eps f)**alpha``
    among balanced functions? Violators are listed as hex tables."""
    cells = []
    alphas, epss = list(alphas), list(epss)
    for n in ns:
        ints = [v for chunk in support_ints(n, 1 << (n - 1)) for v in chunk]
        tables = tables_from_ints(n, ints)
        dict_ints = {f.to_int() for f in dictator_class(n)}
        is_dict = np.array([v in dict_ints for v in ints])
        for eps in epss:
            t = np.clip(noisy_direct(tables, n, eps), 0.0, 1.0)
            for alpha in alphas:
                values = np.mean(power_moment_terms(t, alpha), axis=-1)
                dict_value = float(values[is_dict].max())
                best = float(values.max())
                violators = np.flatnonzero(values > dict_value + tol)
                cells.append({
                    "n": n,
                    "alpha": alpha,
                    "eps": eps,
                    "best_value": best,
                    "dictator_value": dict_value,
                    "dictator_is_argmax": dict_value >= best - tol,
                    "violators": [hex_from_int(n, ints[j]) for j in violators],
                })
    return cells
