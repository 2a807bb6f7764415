import itertools
import json
from fractions import Fraction

import pytest

from bellhide.bellcode import BellString, enumerate_strings, singlet_count
from bellhide.states import (
    BellDiagonalState,
    hiding_state,
    mixing_coefficients,
    recurrence_state,
    state_overlap,
    werner_form,
)


def test_hiding_state_examples():
    assert dict(hiding_state(1, 1).weights) == {BellString.parse("11"): 1}
    assert dict(hiding_state(1, 0).weights) == {BellString([x]): Fraction(1, 3) for x in (0, 1, 2)}
    even2 = hiding_state(2, 0)
    assert len(even2.weights) == 10
    assert set(even2.weights.values()) == {Fraction(1, 10)}


def test_invalid_states():
    with pytest.raises(ValueError):
        BellDiagonalState(1, {BellString.parse("11"): Fraction(1, 2)})
    with pytest.raises(ValueError):
        BellDiagonalState(1, {BellString.parse("11"): 2, BellString.parse("00"): -1})
    with pytest.raises(ValueError):
        BellDiagonalState(2, {BellString.parse("11"): 1})
    with pytest.raises(ValueError):
        hiding_state(2, 2)


def test_mixing_coefficients():
    q2, _ = mixing_coefficients(2)
    assert q2 == Fraction(1, 10)
    q1, p1 = mixing_coefficients(1)
    assert q1 == 0 and p1 == 1
    assert mixing_coefficients(2)[1] == Fraction(1, 2)


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("b", [0, 1])
def test_recurrence_equals_uniform_parity_mixture(n, b):
    assert recurrence_state(n, b) == hiding_state(n, b)


def test_werner_form_values():
    f = werner_form(1, 1)
    assert (f.identity_coeff, f.h_coeff) == (Fraction(1, 2), Fraction(-1))
    f = werner_form(1, 0)
    assert (f.identity_coeff, f.h_coeff) == (Fraction(1, 6), Fraction(1, 3))
    for n in range(1, 4):
        for b in (0, 1):
            assert werner_form(n, b).trace == 1


def test_overlap():
    for n in (1, 2, 3):
        assert state_overlap(hiding_state(n, 0), hiding_state(n, 1)) == 0
    assert state_overlap(hiding_state(1, 1), hiding_state(1, 1)) == 1
    assert state_overlap(hiding_state(2, 0), hiding_state(2, 0)) == Fraction(1, 10)
    with pytest.raises(ValueError):
        state_overlap(hiding_state(1, 0), hiding_state(2, 0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_supports_partition_all_strings(n):
    s0, s1 = set(hiding_state(n, 0).support), set(hiding_state(n, 1).support)
    assert not s0 & s1
    assert s0 | s1 == set(enumerate_strings(n))


@pytest.mark.parametrize("b", [0, 1])
def test_hiding_state_symmetries(b):
    n = 3
    state = hiding_state(n, b)
    relabel = list(itertools.permutations((0, 1, 2)))
    for s in enumerate_strings(n):
        w = state.weight(s)
        for order in itertools.permutations(range(n)):
            assert state.weight(BellString(s[i] for i in order)) == w
        for perm in relabel:
            image = BellString(perm[x] if x != 3 else 3 for x in s)
            assert state.weight(image) == w
            assert singlet_count(image) == singlet_count(s)


def test_json_round_trip():
    state = hiding_state(2, 1)
    doc = json.loads(json.dumps(state.to_json(bit=1)))
    assert doc["n"] == 2 and doc["bit"] == 1
    assert doc["weights"][0] == {"string": "00.11", "num": 1, "den": 6}
    assert BellDiagonalState.from_json(doc) == state


def test_tensor_appends_on_the_right():
    t = hiding_state(1, 1).tensor(BellDiagonalState(1, {BellString.parse("01"): 1}))
    assert dict(t.weights) == {BellString.parse("11.01"): 1}
