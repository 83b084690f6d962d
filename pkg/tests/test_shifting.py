import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisestab import BooleanFunction, PhiSpec, is_monotone, majority, monotonize, phi_stability, shift_up
from noisestab.shifting import iter_shifts, potential, shift_tables, sweep_tables

from conftest import boolean_functions

PHIS = [PhiSpec.power(2), PhiSpec.power(3), PhiSpec.power(1.5), PhiSpec.entropy_pair(), PhiSpec.hellinger()]


def _shift_by_definition(f, i):
    """Move x to x + e_i whenever x_i = 0, x in S and x + e_i not in S."""
    s = set(f.support.tolist())
    bit = 1 << (i - 1)
    out = set(s)
    for x in s:
        if not x & bit and (x | bit) not in s:
            out.remove(x)
            out.add(x | bit)
    return BooleanFunction.from_support(f.n, out)


@given(boolean_functions(1, 6), st.data())
@settings(max_examples=80)
def test_shift_matches_definition(f, data):
    i = data.draw(st.integers(1, f.n))
    assert shift_up(f, i) == _shift_by_definition(f, i)


@given(boolean_functions(1, 6), st.data())
@settings(max_examples=80)
def test_shift_keeps_size_and_raises_potential_by_moved(f, data):
    i = data.draw(st.integers(1, f.n))
    shifted, moved = shift_tables(f.table, f.n, i)
    g = BooleanFunction(f.n, shifted)
    assert g.size == f.size
    assert potential(g) - potential(f) == int(moved)


@given(boolean_functions(1, 5), st.sampled_from([0.1, 0.26, 0.4]))
@settings(max_examples=40)
def test_convex_functionals_never_drop(f, eps):
    prev = [phi_stability(f, phi, eps) for phi in PHIS]
    for _, moved, g in iter_shifts(f):
        cur = [phi_stability(g, phi, eps) for phi in PHIS]
        assert all(c >= p - 1e-12 for c, p in zip(cur, prev))
        prev = cur


@given(boolean_functions(1, 7))
@settings(max_examples=60)
def test_monotonize_output(f):
    g, trace = monotonize(f)
    assert is_monotone(g)
    assert g.size == f.size
    assert trace.final_potential == potential(g)
    assert sum(m for _, m in trace.steps) == potential(g) - potential(f)
    assert sum(m for _, m in trace.steps) <= f.n * f.size
    assert all(m > 0 for _, m in trace.steps)


def test_monotone_input_is_fixed():
    f = majority(5, 3)
    g, trace = monotonize(f)
    assert g == f and trace.steps == [] and trace.passes == 0


def test_small_example():
    # support {x1=0,x2=0} and {x1=1,x2=0}: shifting in x2 lifts both
    f = BooleanFunction.from_support(2, [0, 1])
    g, trace = monotonize(f)
    assert sorted(g.support.tolist()) == [2, 3]
    assert trace.steps == [(2, 2)]
    assert trace.passes == 1


def test_batched_sweeps_match_single_function_runs():
    rng = np.random.default_rng(7)
    n = 6
    tables = rng.random((40, 1 << n)) < 0.4
    final = None
    for _, final, _ in sweep_tables(tables, n):
        pass
    for row, out in zip(tables, final):
        g, _ = monotonize(BooleanFunction(n, row))
        assert np.array_equal(g.table, out)


def test_bad_coordinate():
    with pytest.raises(ValueError):
        shift_up(majority(3, 3), 4)
