import numpy as np
import pytest
from hypothesis import given, settings

from noisestab import dictator, edge_boundary, influence, lexicographic, majority, parity, total_influence
from noisestab import oracles
from noisestab.influence import boundary_counts, flip_counts, fourier_influences

from conftest import boolean_functions


@given(boolean_functions(1, 7))
@settings(max_examples=60)
def test_methods_match_point_loop_oracle(f):
    ref = [oracles.flip_influence(f, i) for i in range(1, f.n + 1)]
    for method in ("flip", "boundary", "fourier"):
        got = influence(f, method).per_coordinate
        assert np.abs(np.array(got) - ref).max() <= 1e-12


@given(boolean_functions(1, 8))
@settings(max_examples=60)
def test_flip_count_is_twice_boundary_exactly(f):
    assert np.array_equal(flip_counts(f.table, f.n), 2 * boundary_counts(f.table, f.n))


def test_all_three_variable_functions_batched():
    from noisestab.cube import tables_from_ints

    tables = tables_from_ints(3, range(256))
    flips = flip_counts(tables, 3)
    assert np.array_equal(flips, 2 * boundary_counts(tables, 3))
    assert np.abs(fourier_influences(tables, 3) - flips / 8).max() <= 1e-12


def test_known_values():
    assert influence(dictator(4, 2)).per_coordinate == (0.0, 1.0, 0.0, 0.0)
    assert total_influence(parity(5)) == 5.0
    # Maj_3: a coordinate is pivotal when the other two disagree
    assert influence(majority(3, 3)).per_coordinate == (0.5, 0.5, 0.5)
    per, total = edge_boundary(dictator(3))
    assert per == (4, 0, 0) and total == 4


def test_edge_boundary_relation_to_total_influence():
    f = lexicographic(5, 11)
    per, total = edge_boundary(f)
    assert total_influence(f) == pytest.approx(total / 2 ** (5 - 1))
    assert len(per) == 5


def test_unknown_method():
    with pytest.raises(ValueError):
        influence(dictator(2), "spectral")
