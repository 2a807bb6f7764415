import math

import pytest

from bellhide import multibit
from bellhide.states import hiding_state


def test_block_size_examples():
    assert multibit.required_block_size(1, 0.5) == 4
    assert multibit.required_block_size(4, 0.01) == 18
    # independent evaluation of the formula
    for k in (1, 2, 5, 10, 40):
        for eps in (0.5, 0.1, 1e-3, 1e-9):
            value = 2 * k + math.log(k, 2) + math.log(math.log(math.e, 2), 2) + math.log(1 / eps, 2)
            assert multibit.required_block_size(k, eps) == math.ceil(value)


def test_block_size_monotone():
    sizes = [multibit.required_block_size(k, 0.01) for k in range(1, 30)]
    assert sizes == sorted(sizes)
    sizes = [multibit.required_block_size(3, 10.0**-j) for j in range(1, 12)]
    assert sizes == sorted(sizes)


@pytest.mark.parametrize("eps", [0, 1, -0.1, 2])
def test_epsilon_range(eps):
    with pytest.raises(ValueError):
        multibit.required_block_size(2, eps)


def test_k_range():
    with pytest.raises(ValueError):
        multibit.required_block_size(0, 0.1)


def test_round_trips():
    for k in (1, 2, 3):
        for n in (1, 2, 3):
            for trial in range(500):
                bits = multibit.random_bits(k, 1000 * k + 10 * n + trial)
                enc = multibit.sample(multibit.encode(bits, n), trial)
                assert multibit.unlock_all(enc) == bits


def test_encoding_json_and_blocks():
    enc = multibit.sample(multibit.encode((1, 0, 1), 2), 3)
    again = multibit.MultibitEncoding.from_json(enc.to_json())
    assert again == enc
    assert enc.block_state(0) == hiding_state(2, 1)
    assert enc.qubits_per_share == 6
    big = multibit.encode((0, 1, 1, 0), 18)
    assert big.to_json()["blocks"][1]["parity"] == "odd"
    with pytest.raises(ValueError):
        multibit.unlock_all(big)


def test_encode_validation():
    with pytest.raises(ValueError):
        multibit.encode((), 2)
    with pytest.raises(ValueError):
        multibit.encode((2,), 2)
    with pytest.raises(ValueError):
        multibit.encode((1,), 0)
