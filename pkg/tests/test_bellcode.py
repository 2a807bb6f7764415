import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bellhide.bellcode import (
    BellString,
    CapExceeded,
    PauliString,
    alternating_sum,
    enumerate_strings,
    parity_class_size,
    pauli_act,
    singlet_count,
)


def words(n):
    return st.lists(st.integers(0, 3), min_size=n, max_size=n)


@pytest.mark.parametrize(
    "text, expected",
    [("11", 1), ("00.00.00", 0), ("11.01.11", 2)],
)
def test_singlet_count(text, expected):
    assert singlet_count(BellString.parse(text)) == expected


def test_pauli_act_examples():
    # sigma_z on Alice maps Phi+ to Phi-
    assert pauli_act(BellString.parse("00"), PauliString.from_letters("Z")) == BellString.parse("01")
    s = BellString.parse("10.11.01")
    assert pauli_act(s, PauliString.parse("00.00.00")) == s
    assert pauli_act(BellString.parse("11"), PauliString.parse("11")) == BellString.parse("00")


def test_pauli_act_length_mismatch():
    with pytest.raises(ValueError):
        pauli_act(BellString.parse("00.11"), PauliString.parse("01"))


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(words(n), words(n), words(n))))
def test_pauli_action_is_a_group_action(triple):
    s, m1, m2 = (BellString(w) if i == 0 else PauliString(w) for i, w in enumerate(triple))
    assert pauli_act(pauli_act(s, m1), m1) == s
    combined = PauliString(a ^ b for a, b in zip(m1, m2))
    assert pauli_act(pauli_act(s, m1), m2) == pauli_act(s, combined)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pauli_shift_permutes_strings(n):
    strings = enumerate_strings(n)
    for m in itertools.product(range(4), repeat=n):
        image = [pauli_act(s, PauliString(m)) for s in strings]
        assert sorted(image) == sorted(strings)


def test_enumeration():
    assert [str(s) for s in enumerate_strings(1)] == ["00", "01", "10", "11"]
    two = enumerate_strings(2)
    assert len(two) == 16 and len(set(two)) == 16
    assert two == sorted(two)
    assert [s.index for s in two] == list(range(16))
    assert sum(1 for s in two if singlet_count(s) % 2 == 0) == 10


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_strings(11)
    assert len(enumerate_strings(3, cap=3)) == 64


def test_parity_class_size_matches_enumeration():
    assert parity_class_size(1, 0) == 3
    assert parity_class_size(2, 0) == 10
    assert parity_class_size(3, 1) == 28
    for n in range(1, 6):
        counts = [0, 0]
        for s in enumerate_strings(n):
            counts[singlet_count(s) % 2] += 1
        assert counts == [parity_class_size(n, 0), parity_class_size(n, 1)]
        assert sum(counts) == 4**n
        assert counts[0] - counts[1] == alternating_sum(n)


def test_alternating_sum():
    assert alternating_sum(1) == 2
    assert alternating_sum(2) == 4
    assert alternating_sum(5) == 32
    # enumeration and closed form agree on the overlap
    for n in range(1, 8):
        assert alternating_sum(n) == alternating_sum(n, cap=0) == 2**n


def test_text_form_round_trip():
    for s in enumerate_strings(3):
        assert BellString.parse(str(s)) == s
        assert BellString.from_index(s.index, 3) == s
    with pytest.raises(ValueError):
        BellString.parse("12.00")
    with pytest.raises(ValueError):
        BellString.parse("")
