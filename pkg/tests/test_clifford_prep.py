from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from bellhide import clifford, prep
from bellhide.bellcode import singlet_count
from bellhide.states import hiding_state


def test_single_qubit_group_order_and_orbit():
    elements = list(clifford.enumerate_cliffords(1))
    assert len(elements) == 24
    assert len({u.key() for u in elements}) == 24
    orbit = prep.stabilizer_orbit(1)
    assert len(orbit) == 6
    assert {count for _, count in orbit.values()} == {4}


def test_two_qubit_orbit_is_uniform():
    orbit = prep.stabilizer_orbit(2)
    assert len(orbit) == 60
    assert {count for _, count in orbit.values()} == {11520 // 60}


def test_hadamard_maps_zero_to_plus():
    h = clifford.Clifford(1, np.array([[0, 1], [1, 0]]), np.zeros(2))
    psi = clifford.image_of_zero(h)
    assert psi.to_json() == ["+X"]
    np.testing.assert_allclose(psi.projector(), np.full((2, 2), 0.5), atol=1e-12)


def test_identity_for_missing_seed():
    u = clifford.random_clifford(3, None)
    assert u.key() == clifford.Clifford.identity(3).key()
    assert clifford.image_of_zero(u).to_json() == ["+ZII", "+IZI", "+IIZ"]


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_random_tableaux_are_symplectic(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        u = clifford.random_clifford(n, rng)
        assert clifford.is_symplectic(u.symplectic)


def test_random_states_are_pure_stabilizer_states():
    rng = np.random.default_rng(1)
    for _ in range(20):
        psi = clifford.image_of_zero(clifford.random_clifford(3, rng))
        p = psi.projector()
        assert abs(np.trace(p) - 1) < 1e-12
        np.testing.assert_allclose(p @ p, p, atol=1e-12)


def test_sampler_is_uniform_on_single_qubit():
    rng = np.random.default_rng(2024)
    draws = 600
    counts = Counter(clifford.random_clifford(1, rng).key() for _ in range(draws))
    assert len(counts) == 24
    mean, sd = draws / 24, np.sqrt(draws / 24 * 23 / 24)
    assert all(abs(c - mean) <= 4 * sd for c in counts.values())


def test_invalid_tableaux_rejected():
    with pytest.raises(ValueError):
        clifford.Clifford(1, np.array([[1, 1], [1, 1]]), np.zeros(2))
    with pytest.raises(ValueError):
        clifford.StabilizerState(2, ((0, (1, 0), (0, 0)), (0, (0, 0), (1, 0))))


@pytest.mark.parametrize("n", [1, 2])
def test_exact_clifford_average(n):
    rep = prep.verify_clifford_average(n, "exact")
    assert rep.trace_distance <= 1e-10


def test_sampled_clifford_average_small():
    rep = prep.verify_clifford_average(1, "sampled", samples=2000, seed=3)
    assert rep.distinct_states == 6
    assert rep.trace_distance < 0.1


def test_clifford_average_arguments():
    with pytest.raises(ValueError):
        prep.verify_clifford_average(3, "exact")
    with pytest.raises(ValueError):
        prep.verify_clifford_average(2, "sampled", samples=10)
    with pytest.raises(ValueError):
        prep.verify_clifford_average(1, "other")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coin_tree_reproduces_odd_state(n):
    state, ebits = prep.recursive_distribution(n, 1)
    assert state == hiding_state(n, 1)
    assert ebits == {1: Fraction(1)}


def test_even_distribution_is_classical():
    state, ebits = prep.recursive_distribution(3, 0)
    assert state == hiding_state(3, 0) and ebits == {0: 1}


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_samples_have_right_parity_and_cost(n):
    for i in range(200):
        for b in (0, 1):
            s = prep.sample_recursive(n, b, prep.sample_rng(11, i))
            assert singlet_count(s.string) % 2 == b
            assert s.ebits_consumed == b
            assert len(s.string) == n


def test_sample_frequencies_follow_target():
    n, draws = 2, 6000
    counts = Counter(prep.sample_recursive(n, 1, prep.sample_rng(5, i)).string for i in range(draws))
    target = hiding_state(n, 1)
    assert set(counts) == set(target.support)
    for s, w in target.weights.items():
        p = float(w)
        assert abs(counts[s] / draws - p) <= 4 * np.sqrt(p * (1 - p) / draws)


def test_sample_streams_are_reproducible_and_distinct():
    a = [prep.sample_recursive(5, 1, prep.sample_rng(9, i)).string for i in range(20)]
    b = [prep.sample_recursive(5, 1, prep.sample_rng(9, i)).string for i in range(20)]
    assert a == b
    assert len(set(a)) > 1


def test_sample_json():
    rec = prep.sample_recursive(3, 1, prep.sample_rng(0, 0)).to_json(0, 0)
    assert rec["ebits"] == 1 and rec["path"] == prep.RECURSIVE and rec["coins"]
    cl = prep.sample_clifford(2, 4).to_json(4, 0)
    assert cl["ebits"] == 0 and len(cl["stabilizers"]["alice"]) == 2
    assert cl["stabilizers"]["alice"] == cl["stabilizers"]["bob"]
