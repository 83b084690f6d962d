"""Reproducible verification scenarios.

Each scenario returns a ``Check`` with a pass flag and the numbers behind it.
``SCENARIOS`` maps the names accepted by ``noisestab verify`` to the functions.
Random inputs come from fixed seeds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import oracles
from .canonical import dictator, lexicographic, majority, monotone_mask
from .cube import BooleanFunction, tables_from_ints
from .influence import boundary_counts, flip_counts, fourier_influences
from .information import binary_entropy, mutual_information, neg_cond_entropy
from .noise import (
    PhiSpec,
    alpha_stability,
    correlation_star,
    noisy_direct,
    noisy_spectral,
    stability_slope_zero,
)
from .search import (
    Objective,
    SearchSpec,
    conjecture_grid,
    dictator_class,
    maximize,
    support_ints,
)
from .shifting import sweep_tables
from .torus import (
    TorusFunction,
    boundary_influence_factor,
    iter_torus_shifts,
    torus_apply_noise,
    torus_apply_noise_direct,
    torus_edge_boundary,
    torus_influence,
    torus_is_monotone,
    torus_phi_stability,
)
from .tree import (
    BroadcastTree,
    path_dictator_bound,
    tree_correlation,
    tree_mc_estimate,
)

SEED = 20180617
PHIS = (PhiSpec.power(2), PhiSpec.power(3), PhiSpec.power(1.5), PhiSpec.entropy_pair(), PhiSpec.hellinger())
SHIFT_EPS = (0.1, 0.26, 0.4)


@dataclass
class Check:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    runtime: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name} ({self.runtime:.2f}s)"


def _timed(name):
    def wrap(fn):
        def run() -> Check:
            start = time.perf_counter()
            passed, details = fn()
            return Check(name, bool(passed), details, time.perf_counter() - start)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


def _all_tables(n: int) -> np.ndarray:
    return tables_from_ints(n, range(1 << (1 << n)))


def _random_tables(rng: np.random.Generator, k: int, n: int) -> np.ndarray:
    return rng.random((k, 1 << n)) < 0.5


def _ints_of(fs) -> set[int]:
    return {f.to_int() for f in fs}


# 1 -----------------------------------------------------------------------------


@_timed("1 majority comparison at n=5, k=10, eps=0.26")
def maj_compare():
    start = time.perf_counter()
    vals = {r: alpha_stability(majority(5, r), 10, 0.26) for r in (1, 3, 5)}
    elapsed = time.perf_counter() - start
    ok = (
        vals[1] <= 0.0247
        and vals[5] <= 0.0244
        and vals[3] >= 0.0248
        and vals[3] > vals[1] > vals[5]
        and elapsed < 1.0
    )
    return ok, {"maj1": vals[1], "maj3": vals[3], "maj5": vals[5], "seconds": elapsed}


# 2 -----------------------------------------------------------------------------


@_timed("2 spectral vs direct noise operator (cube and torus)")
def noise_oracle():
    rng = np.random.default_rng(SEED)
    worst_cube = 0.0
    for n in range(1, 13):
        tables = _random_tables(rng, 100, n).astype(float)
        for eps in (0.0, 0.1, 0.26, 0.5):
            diff = np.abs(noisy_spectral(tables, n, eps) - noisy_direct(tables, n, eps)).max()
            worst_cube = max(worst_cube, float(diff))
    worst_torus = 0.0
    for p, n in product((3, 5), (1, 2, 3)):
        for _ in range(100):
            f = TorusFunction(p, n, (rng.random(p**n) < 0.5).astype(float))
            for model, top in (("uniform", 1.0 - 1.0 / p), ("nearest", 1.0)):
                for eps in (0.0, 0.1, 0.26, 0.5, top):
                    a = torus_apply_noise(f, eps, model).values
                    b = torus_apply_noise_direct(f, eps, model).values
                    worst_torus = max(worst_torus, float(np.abs(a - b).max()))
    ok = worst_cube <= 1e-12 and worst_torus <= 1e-12
    return ok, {"max_abs_cube": worst_cube, "max_abs_torus": worst_torus}


# 3 -----------------------------------------------------------------------------


def _influence_batch(tables: np.ndarray, n: int) -> tuple[bool, float]:
    flips = flip_counts(tables, n)
    cuts = boundary_counts(tables, n)
    exact = bool(np.array_equal(flips, 2 * cuts))
    fourier = fourier_influences(tables, n)
    return exact, float(np.abs(fourier - flips / (1 << n)).max())


@_timed("3 influence: flip = Fourier = boundary (cube and torus)")
def influence_identities():
    rng = np.random.default_rng(SEED + 3)
    exact_ok, worst = True, 0.0
    batches = [(_all_tables(n), n) for n in (1, 2, 3)]
    for s in range(17):
        batches.append((tables_from_ints(4, [v for c in support_ints(4, s) for v in c]), 4))
    batches.append((_random_tables(rng, 100, 10), 10))
    for tables, n in batches:
        ok, diff = _influence_batch(tables, n)
        exact_ok &= ok
        worst = max(worst, diff)

    torus_worst = 0.0
    torus_boundary_ok = True
    for bits in range(1 << 9):
        f = TorusFunction(3, 2, [(bits >> k) & 1 for k in range(9)])
        for flavor in ("random_flip", "nearest"):
            d = torus_influence(f, flavor, "direct")
            fr = torus_influence(f, flavor, "fourier")
            torus_worst = max(torus_worst, max(abs(a - b) for a, b in zip(d.per_coordinate, fr.per_coordinate)))
        per, _ = torus_edge_boundary(f)
        near = torus_influence(f, "nearest", "direct").per_coordinate
        scale = boundary_influence_factor(3) / 9
        torus_boundary_ok &= all(abs(a - c * scale) <= 1e-12 for a, c in zip(near, per))
    ok = exact_ok and worst <= 1e-12 and torus_worst <= 1e-12 and torus_boundary_ok
    return ok, {
        "cube_flip_equals_boundary": exact_ok,
        "cube_fourier_max_abs": worst,
        "torus_fourier_max_abs": torus_worst,
        "torus_boundary_identity": torus_boundary_ok,
    }


# 4 -----------------------------------------------------------------------------


@_timed("4 derivative at eps=0 equals -alpha I(f)/2")
def derivative_identity():
    rng = np.random.default_rng(SEED + 4)
    h = 1e-5
    worst = 0.0
    for trial in range(50):
        n = 1 + trial % 8
        f = BooleanFunction(n, rng.random(1 << n) < 0.5)
        for alpha in (2, 3):
            fd = (alpha_stability(f, alpha, h, analytic=True) - alpha_stability(f, alpha, -h, analytic=True)) / (2 * h)
            exact = stability_slope_zero(f, alpha)
            err = abs(fd - exact) / abs(exact) if exact else abs(fd)
            worst = max(worst, err)
    return worst <= 1e-6, {"max_relative_error": worst}


# 5 -----------------------------------------------------------------------------


def _argmax_ints(spec: SearchSpec) -> set[int]:
    res = maximize(spec)
    return {int(h, 16) for h in res.argmax}


def extremal_a():
    """Balanced, alpha = 2: argmax is the dictator class at every eps."""
    bad = []
    for n in (3, 4):
        target = _ints_of(dictator_class(n))
        for eps in np.round(np.arange(0.1, 0.4001, 0.05), 10):
            spec = SearchSpec(n, Objective.stability(2, float(eps)), balanced=True, keep_all=True)
            if _argmax_ints(spec) != target:
                bad.append((n, float(eps)))
    return not bad, {"failures": bad}


def extremal_b():
    """eps = 0.01: the lexicographic function attains the max at every support size."""
    bad = []
    for n, alpha in product((3, 4), (2, 3)):
        for s in range(0, (1 << n) + 1):
            spec = SearchSpec(n, Objective.stability(alpha, 0.01), support_size=s)
            best = maximize(spec).best_value
            lex = alpha_stability(lexicographic(n, s), alpha, 0.01)
            if lex < best - 1e-12:
                bad.append((n, alpha, s, best - lex))
    return not bad, {"failures": bad}


def extremal_c():
    """eps = 0.49: stability argmax set equals the degree-1 weight argmax set.

    Containment of the first in the second is reported separately.
    """
    mismatches, not_contained = [], []
    for n, alpha in product((3, 4), (2, 3)):
        for s in range(1, 1 << n):
            stab = _argmax_ints(SearchSpec(n, Objective.stability(alpha, 0.49), support_size=s, keep_all=True))
            w1 = _argmax_ints(SearchSpec(n, Objective("degree1_weight"), support_size=s, keep_all=True))
            if stab != w1:
                mismatches.append({"n": n, "alpha": alpha, "s": s, "stability_argmax": len(stab), "degree1_argmax": len(w1)})
            if not stab <= w1:
                not_contained.append((n, alpha, s))
    return not mismatches, {"set_mismatches": mismatches, "containment_failures": not_contained}


def extremal_d():
    """n = 3, balanced, alpha = 50, eps = 0.1: Maj_3 is the unique monotone argmax.

    The unrestricted argmax is exactly its orbit under translations x -> x + a.
    """
    obj = Objective.stability(50, 0.1)
    maj = majority(3, 3)
    orbit = {BooleanFunction(3, maj.table[np.arange(8) ^ a]).to_int() for a in range(8)}
    full = _argmax_ints(SearchSpec(3, obj, balanced=True, keep_all=True))
    mono = _argmax_ints(SearchSpec(3, obj, balanced=True, restrict="monotone_only", keep_all=True))
    ok = mono == {maj.to_int()} and full == orbit
    return ok, {"monotone_argmax": sorted(mono), "full_argmax_size": len(full), "orbit_size": len(orbit)}


def extremal_e():
    """The lexicographic function minimizes total influence at every support size."""
    bad = []
    for n in (1, 2, 3, 4):
        for s in range(0, (1 << n) + 1):
            res = maximize(SearchSpec(n, Objective("total_influence_min"), support_size=s))
            lex = boundary_counts(lexicographic(n, s).table, n).sum() / (1 << (n - 1))
            if lex > res.best_value + 1e-12:
                bad.append((n, s))
    return not bad, {"failures": bad}


EXTREMAL_PARTS = {"a": extremal_a, "b": extremal_b, "c": extremal_c, "d": extremal_d, "e": extremal_e}


@_timed("5 exhaustive extremal suite n in {3,4}")
def extremal_suite():
    start = time.perf_counter()
    parts = {}
    for key, fn in EXTREMAL_PARTS.items():
        ok, details = fn()
        parts[key] = {"passed": bool(ok), **details}
    elapsed = time.perf_counter() - start
    ok = all(p["passed"] for p in parts.values()) and elapsed < 300
    return ok, {"parts": parts, "seconds": elapsed}


# 6 -----------------------------------------------------------------------------


def _phi_rows(tables: np.ndarray, n: int) -> np.ndarray:
    """``E Phi(T_eps f)`` per row for every (Phi, eps) pair, shape (rows, pairs)."""
    cols = []
    for eps in SHIFT_EPS:
        t = np.clip(noisy_direct(tables, n, eps), 0.0, 1.0)
        cols += [np.mean(phi(t), axis=-1) for phi in PHIS]
    return np.stack(cols, axis=-1)


def _check_monotonize_batch(tables: np.ndarray, n: int) -> dict:
    sizes = tables.sum(axis=-1)
    before = _phi_rows(tables, n)
    worst_drop = 0.0
    current = tables
    steps = 0
    for _, current, moved in sweep_tables(tables, n):
        steps += 1
        after = _phi_rows(current, n)
        worst_drop = min(worst_drop, float((after - before).min()))
        before = after
    return {
        "monotone": bool(monotone_mask(current, n).all()),
        "mean_preserved": bool(np.array_equal(current.sum(axis=-1), sizes)),
        "worst_step_change": worst_drop,
        "steps": steps,
    }


def _check_torus_monotonize() -> dict:
    worst = 0.0
    monotone_ok = mean_ok = True
    phis = PHIS
    for s in range(5):
        for f in _torus_supports(3, 2, s):
            prev = [torus_phi_stability(f, phi, eps) for eps in SHIFT_EPS for phi in phis]
            g = f
            for _, moved, g in iter_torus_shifts(f):
                if moved:
                    cur = [torus_phi_stability(g, phi, eps) for eps in SHIFT_EPS for phi in phis]
                    worst = min(worst, min(c - p for c, p in zip(cur, prev)))
                    prev = cur
            monotone_ok &= torus_is_monotone(g)
            mean_ok &= len(g.support) == s
    return {"monotone": monotone_ok, "mean_preserved": mean_ok, "worst_step_change": worst}


def _torus_supports(p, n, s):
    from itertools import combinations

    for support in combinations(range(p**n), s):
        yield TorusFunction.from_support(p, n, support)


@_timed("6 monotonization: monotone output, mean kept, Phi never decreases")
def monotonization():
    rng = np.random.default_rng(SEED + 6)
    cube = {n: _check_monotonize_batch(_all_tables(n), n) for n in (1, 2, 3, 4)}
    cube[10] = _check_monotonize_batch(_random_tables(rng, 1000, 10), 10)
    torus = _check_torus_monotonize()
    ok = all(r["monotone"] and r["mean_preserved"] and r["worst_step_change"] >= -1e-12 for r in cube.values())
    ok &= torus["monotone"] and torus["mean_preserved"] and torus["worst_step_change"] >= -1e-12
    return ok, {"cube": cube, "torus_p3_n2": torus}


# 7 -----------------------------------------------------------------------------


@_timed("7 mutual information identities and balanced n=3 maximizer")
def mutual_info():
    rng = np.random.default_rng(SEED + 7)
    dict_err = 0.0
    for n in range(1, 7):
        for eps in (0.0, 0.05, 0.1, 0.25, 0.4, 0.49, 0.5):
            dict_err = max(dict_err, abs(mutual_information(dictator(n), eps) - (1 - binary_entropy(eps))))
    oracle_err = 0.0
    for n in range(1, 7):
        for _ in range(10):
            f = BooleanFunction(n, rng.random(1 << n) < 0.5)
            eps = float(rng.uniform(0, 0.5))
            oracle_err = max(oracle_err, abs(mutual_information(f, eps) - oracles.mutual_information_joint(f, eps)))
    h = 1e-6
    deriv_err = 0.0
    for n in range(1, 7):
        for _ in range(5):
            f = BooleanFunction(n, rng.random(1 << n) < 0.5)
            eps = float(rng.uniform(0.01, 0.49))
            t = noisy_spectral(f.table, n, eps)
            t = np.clip(t, 0.0, 1.0)

            def moment(a):
                return float(np.mean(t**a + (1.0 - t) ** a))

            fd_nats = (moment(1 + h) - moment(1 - h)) / (2 * h)
            exact = neg_cond_entropy(f, eps)
            err = abs(fd_nats / math.log(2) - exact) / abs(exact) if exact else abs(fd_nats)
            deriv_err = max(deriv_err, err)
    res = maximize(SearchSpec(3, Objective("mutual_info", eps=0.49), balanced=True, keep_all=True))
    dict_val = mutual_information(dictator(3), 0.49)
    argmax_ok = dict_val >= res.best_value - 1e-12
    ok = dict_err <= 1e-12 and oracle_err <= 1e-10 and deriv_err <= 1e-5 and argmax_ok
    return ok, {
        "dictator_max_abs": dict_err,
        "oracle_max_abs": oracle_err,
        "alpha_derivative_max_rel": deriv_err,
        "n3_best": res.best_value,
        "n3_dictator": dict_val,
        "n3_argmax_is_dictator_class": {int(x, 16) for x in res.argmax} == _ints_of(dictator_class(3)),
    }


# 8 -----------------------------------------------------------------------------


def random_tree(rng: np.random.Generator, vertices: int, n: int) -> BroadcastTree:
    edges = [(int(rng.integers(0, v)), v, float(rng.uniform(0.0, 0.5))) for v in range(1, vertices)]
    return BroadcastTree(vertices, tuple(edges), n)


@_timed("8 tree: star reduction, path bound, balanced triples, Monte Carlo")
def tree_checks():
    rng = np.random.default_rng(SEED + 8)
    star_err = 0.0
    for k in (1, 2, 3, 4):
        for n in (1, 2, 3, 4):
            for eps in (0.05, 0.26, 0.45):
                f = BooleanFunction(n, rng.random(1 << n) < 0.5)
                star = BroadcastTree.star(k, eps, n)
                val = tree_correlation(star, {i: f for i in range(1, k + 1)})
                star_err = max(star_err, abs(val - alpha_stability(f, k, eps)))

    path_err = 0.0
    for gaps in ([1], [2], [1, 1]):
        positions = np.concatenate([[0], np.cumsum(gaps)]).tolist()
        for eps in (0.1, 0.25):
            path = BroadcastTree.path(positions[-1], eps, 2)
            val = tree_correlation(path, {v: dictator(2) for v in positions})
            path_err = max(path_err, abs(val - path_dictator_bound(gaps, eps)))

    balanced = [BooleanFunction.from_int(2, v) for c in support_ints(2, 2) for v in c]
    dict_like = _ints_of(dictator_class(2))
    triple_excess = -math.inf
    equality_ok = monotone_ok = True
    for eps in (0.1, 0.25):
        path = BroadcastTree.path(2, eps, 2)
        bound = path_dictator_bound([1, 1], eps)
        best_all = best_mono = -math.inf
        for fs in product(balanced, repeat=3):
            val = tree_correlation(path, dict(enumerate(fs)))
            triple_excess = max(triple_excess, val - bound)
            at_bound = abs(val - bound) <= 1e-12
            identical_dictators = fs[0] == fs[1] == fs[2] and fs[0].to_int() in dict_like
            equality_ok &= at_bound == identical_dictators
            best_all = max(best_all, val)
            if all(monotone_mask(f.table, 2) for f in fs):
                best_mono = max(best_mono, val)
        monotone_ok &= abs(best_all - best_mono) <= 1e-12

    mc_worst = 0.0
    for trial in range(20):
        n = int(rng.integers(1, 4))
        tree = random_tree(rng, int(rng.integers(2, 7)), n)
        who = rng.choice(tree.num_vertices, size=int(rng.integers(1, tree.num_vertices + 1)), replace=False)
        players = {int(v): BooleanFunction(n, rng.random(1 << n) < 0.5) for v in who}
        exact = tree_correlation(tree, players)
        est, se = tree_mc_estimate(tree, players, 20000, seed=SEED + trial)
        z = abs(est - exact) / se if se > 0 else (0.0 if est == exact else math.inf)
        mc_worst = max(mc_worst, z)

    ok = star_err <= 1e-12 and path_err <= 1e-12 and triple_excess <= 1e-12 and equality_ok and monotone_ok and mc_worst <= 4
    return ok, {
        "star_max_abs": star_err,
        "path_bound_max_abs": path_err,
        "triples_max_excess": triple_excess,
        "equality_only_identical_dictators": equality_ok,
        "monotone_max_equals_global": monotone_ok,
        "mc_max_z": mc_worst,
    }


# 9 -----------------------------------------------------------------------------


@_timed("9 same-strategy inequality on 500 random pairs")
def same_strategy():
    rng = np.random.default_rng(SEED + 9)
    worst = -math.inf
    for _ in range(500):
        n = int(rng.integers(1, 9))
        eps = float(rng.uniform(0.0, 0.5))
        f = BooleanFunction(n, rng.random(1 << n) < rng.uniform(0.1, 0.9))
        g = BooleanFunction(n, rng.random(1 << n) < rng.uniform(0.1, 0.9))
        lhs = correlation_star([f, g], eps)
        rhs = max(correlation_star([f, f], eps), correlation_star([g, g], eps))
        worst = max(worst, lhs - rhs)
    return worst <= 1e-12, {"max_excess": worst}


# 10 ----------------------------------------------------------------------------


@_timed("10 balanced dictator conjecture grid for 1 <= alpha <= 2 (informational)")
def conjecture():
    alphas = (1.1, 1.3, 1.5, 1.7, 1.9)
    epss = tuple(round(0.05 * j, 10) for j in range(1, 10))
    cells = conjecture_grid((1, 2, 3, 4), alphas, epss)
    complete = len(cells) == 4 * len(alphas) * len(epss)
    counterexamples = [c for c in cells if not c["dictator_is_argmax"]]
    return complete, {"cells": len(cells), "counterexamples": counterexamples}


SCENARIOS = {
    "maj-compare": maj_compare,
    "noise-oracle": noise_oracle,
    "influence": influence_identities,
    "derivative": derivative_identity,
    "extremal": extremal_suite,
    "monotonize": monotonization,
    "mutual-info": mutual_info,
    "tree": tree_checks,
    "same-strategy": same_strategy,
    "conjecture": conjecture,
}
for _key, _fn in EXTREMAL_PARTS.items():
    SCENARIOS[f"extremal-{_key}"] = _timed(f"5{_key} {_fn.__doc__.splitlines()[0].rstrip('.')}")(_fn)


def run_all(names=None) -> list[Check]:
    """Run the named scenarios; by default the ten criteria (parts of 5 run inside ``extremal``)."""
    names = names or [k for k in SCENARIOS if not k.startswith("extremal-")]
    return [SCENARIOS[name]() for name in names]
