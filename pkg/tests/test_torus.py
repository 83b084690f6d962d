import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisestab import (
    BooleanFunction,
    PhiSpec,
    TorusFunction,
    alpha_stability,
    edge_boundary,
    influence,
    torus_alpha_stability,
    torus_apply_noise,
    torus_apply_noise_direct,
    torus_dft,
    torus_edge_boundary,
    torus_influence,
    torus_monotonize,
    torus_phi_stability,
)
from noisestab.torus import (
    boundary_influence_factor,
    coordinate_kernel,
    iter_torus_shifts,
    point_coords,
    point_index,
    torus_dft_inverse,
    torus_is_monotone,
    torus_pair_shift,
    torus_potential,
)


@st.composite
def torus_functions(draw, ps=(2, 3, 4, 5), max_n=3, boolean=True):
    p = draw(st.sampled_from(ps))
    n = draw(st.integers(1, max_n))
    if boolean:
        vals = draw(st.lists(st.booleans(), min_size=p**n, max_size=p**n))
    else:
        vals = draw(st.lists(st.floats(-2, 2), min_size=p**n, max_size=p**n))
    return TorusFunction(p, n, np.array(vals, dtype=float))


def _points(p, n):
    return [point_coords(p, n, i) for i in range(p**n)]


def _transition(p, n, eps, model):
    """P(x -> y) built from coordinate moves, one pair at a time."""
    k = coordinate_kernel(p, eps, model)
    pts = _points(p, n)
    return np.array([[np.prod([k[(b - a) % p] for a, b in zip(x, y)]) for y in pts] for x in pts])


# oracles first ---------------------------------------------------------------


@given(torus_functions(max_n=2), st.sampled_from(["uniform", "nearest"]), st.floats(0, 1))
@settings(max_examples=60)
def test_noise_routes_match_transition_matrix(f, model, u):
    eps = u * (1 - 1 / f.p) if model == "uniform" else u
    ref = _transition(f.p, f.n, eps, model) @ f.values
    assert np.abs(torus_apply_noise(f, eps, model).values - ref).max() <= 1e-12
    assert np.abs(torus_apply_noise_direct(f, eps, model).values - ref).max() <= 1e-12


@given(torus_functions(max_n=2, boolean=False))
@settings(max_examples=40)
def test_dft_against_explicit_characters(f):
    pts = _points(f.p, f.n)
    coeffs = torus_dft(f).coeffs
    for xi_idx, xi in enumerate(pts):
        chars = np.array([np.exp(-2j * np.pi * np.dot(xi, x) / f.p) for x in pts])
        assert abs(coeffs[xi_idx] - np.mean(f.values * chars)) <= 1e-12
    assert np.allclose(torus_dft_inverse(torus_dft(f)).values, f.values)


@given(torus_functions(max_n=2))
@settings(max_examples=60)
def test_influences_against_point_loop(f):
    pts = _points(f.p, f.n)
    table = {x: f.values[i] for i, x in enumerate(pts)}
    for flavor, moves in (("random_flip", range(1, f.p)), ("nearest", (1, f.p - 1))):
        moves = list(moves)
        want = []
        for j in range(f.n):
            changed = 0.0
            for x in pts:
                for z in moves:
                    y = list(x)
                    y[j] = (y[j] + z) % f.p
                    changed += table[x] != table[tuple(y)]
            want.append(changed / (len(pts) * len(moves)))
        for method in ("direct", "fourier"):
            got = torus_influence(f, flavor, method).per_coordinate
            assert np.abs(np.array(got) - want).max() <= 1e-12


# p = 2 is the cube ---------------------------------------------------------


@given(st.integers(1, 5), st.data())
@settings(max_examples=40)
def test_p2_reduces_to_cube(n, data):
    bits = data.draw(st.lists(st.booleans(), min_size=1 << n, max_size=1 << n))
    cube = BooleanFunction(n, np.array(bits))
    tor = TorusFunction(2, n, np.array(bits, dtype=float))
    eps = data.draw(st.floats(0, 0.5))
    for model in ("uniform", "nearest"):
        assert torus_alpha_stability(tor, 2, eps, model) == pytest.approx(alpha_stability(cube, 2, eps), abs=1e-12)
    assert torus_edge_boundary(tor) == edge_boundary(cube)
    assert torus_influence(tor).per_coordinate == pytest.approx(influence(cube).per_coordinate, abs=1e-12)


# identities ----------------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_nearest_influence_counts_boundary(p):
    rng = np.random.default_rng(p)
    for _ in range(30):
        n = int(rng.integers(1, 4))
        f = TorusFunction(p, n, (rng.random(p**n) < 0.4).astype(float))
        per, _ = torus_edge_boundary(f)
        near = torus_influence(f, "nearest").per_coordinate
        for i_j, cut in zip(near, per):
            assert i_j * p**n == pytest.approx(boundary_influence_factor(p) * cut, abs=1e-9)


def test_indexing():
    assert point_index(3, (2, 1)) == 5
    assert point_coords(3, 2, 5) == (2, 1)
    f = TorusFunction.from_points(3, 2, [(2, 1)])
    # coordinate 1 is the last grid axis
    assert f.grid()[1, 2] == 1.0
    for i in range(27):
        assert point_index(3, point_coords(3, 3, i)) == i


def test_string_round_trip():
    f = TorusFunction.from_string(3, 2, "110001000")
    assert f.support.tolist() == [0, 1, 5]
    assert f.to_string() == "110001000"
    with pytest.raises(ValueError):
        TorusFunction.from_string(3, 2, "1100")
    with pytest.raises(ValueError):
        TorusFunction.from_string(3, 2, "11000100x")
    with pytest.raises(ValueError):
        TorusFunction(3, 2, np.full(9, 0.5)).to_string()


# monotonization -------------------------------------------------------------------


@given(torus_functions(ps=(3, 4), max_n=2))
@settings(max_examples=50)
def test_monotonize_properties(f):
    g, trace = torus_monotonize(f)
    assert torus_is_monotone(g)
    assert len(g.support) == len(f.support)
    assert trace.final_potential == torus_potential(g)
    moved = sum(step[-1] for step in trace.steps)
    assert moved <= torus_potential(g) - torus_potential(f)


@given(torus_functions(ps=(3, 5), max_n=2), st.sampled_from([0.1, 0.26, 0.4]))
@settings(max_examples=30)
def test_uniform_model_functionals_never_drop(f, eps):
    phis = [PhiSpec.power(2), PhiSpec.power(1.5), PhiSpec.entropy_pair(), PhiSpec.hellinger()]
    prev = [torus_phi_stability(f, phi, eps) for phi in phis]
    for _, moved, g in iter_torus_shifts(f):
        if moved:
            cur = [torus_phi_stability(g, phi, eps) for phi in phis]
            assert all(c >= p - 1e-12 for c, p in zip(cur, prev))
            prev = cur


def test_pair_shift_example():
    f = TorusFunction.from_points(3, 1, [(0,)])
    assert torus_pair_shift(f, 1, 0, 2).support.tolist() == [2]
    assert torus_pair_shift(f, 1, 0, 1).support.tolist() == [1]
    with pytest.raises(ValueError):
        torus_pair_shift(f, 1, 2, 1)


@pytest.mark.parametrize(
    "call",
    [
        lambda f: torus_apply_noise(f, 0.9, "uniform"),
        lambda f: torus_apply_noise(f, 1.1, "nearest"),
        lambda f: torus_apply_noise(f, 0.1, "gauss"),
        lambda f: torus_influence(f, "diagonal"),
        lambda f: torus_influence(f, "random_flip", "magic"),
        lambda f: torus_influence(TorusFunction(3, 1, [0.5, 0, 1])),
        lambda f: torus_alpha_stability(f, 0.5, 0.1),
        lambda f: TorusFunction(1, 2, [1.0]),
        lambda f: TorusFunction(3, 2, np.zeros(8)),
        lambda f: TorusFunction.from_support(3, 1, [3]),
    ],
)
def test_invalid(call):
    with pytest.raises(ValueError):
        call(TorusFunction.from_points(3, 2, [(1, 1)]))
