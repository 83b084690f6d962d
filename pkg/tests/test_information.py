import math

import numpy as np
import pytest
from hypothesis import given, settings

from noisestab import PhiSpec, binary_entropy, dictator, majority, mutual_information, neg_cond_entropy, parity
from noisestab import oracles
from noisestab.information import phi_entropy
from noisestab.noise import channel_values

from conftest import boolean_functions, eps_values


@given(boolean_functions(1, 5), eps_values)
@settings(max_examples=60)
def test_matches_joint_distribution(f, eps):
    assert mutual_information(f, eps) == pytest.approx(oracles.mutual_information_joint(f, eps), abs=1e-10)


@pytest.mark.parametrize("eps", [0.0, 0.01, 0.11, 0.25, 0.5])
def test_dictator_is_one_minus_entropy(eps):
    assert mutual_information(dictator(4, 3), eps) == pytest.approx(1 - binary_entropy(eps), abs=1e-12)


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0 == binary_entropy(1.0)
    assert binary_entropy(0.11) == pytest.approx(-0.11 * math.log2(0.11) - 0.89 * math.log2(0.89))
    with pytest.raises(ValueError):
        binary_entropy(1.2)


@given(boolean_functions(1, 6), eps_values)
@settings(max_examples=40)
def test_bounds(f, eps):
    mi = mutual_information(f, eps)
    assert -1e-12 <= mi <= binary_entropy(f.mean) + 1e-12
    assert neg_cond_entropy(f, eps) <= 1e-15


@given(boolean_functions(1, 6), eps_values)
@settings(max_examples=40)
def test_is_an_entropy_pair_phi_entropy(f, eps):
    # I = E Phi(T f) - Phi(E f) with Phi(t) = 1 - h(t)
    assert phi_entropy(channel_values(f, eps), PhiSpec.entropy_pair()) == pytest.approx(mutual_information(f, eps), abs=1e-12)


@given(boolean_functions(1, 6), eps_values)
@settings(max_examples=30)
def test_alpha_derivative_of_moments(f, eps):
    # d/dalpha E[t^a + (1-t)^a] at a = 1, converted to bits, is -H(f(Y)|X)
    t = channel_values(f, eps)
    h = 1e-6

    def moment(a):
        return float(np.mean(t**a + (1 - t) ** a))

    fd = (moment(1 + h) - moment(1 - h)) / (2 * h) / math.log(2)
    assert fd == pytest.approx(neg_cond_entropy(f, eps), rel=1e-5, abs=1e-9)


def test_ordering_at_moderate_noise():
    eps = 0.2
    assert mutual_information(dictator(3), eps) > mutual_information(majority(3, 3), eps)
    assert mutual_information(parity(3), 0.5) == pytest.approx(0.0, abs=1e-15)
