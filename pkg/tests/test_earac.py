import itertools

import numpy as np
import pytest

from qicausality.games import ConcatenatedEARAC, EARAC, UnsupportedParameter, guess_distribution, ic1_earac_success, make_earac


def q_formula(n):
    return (1 + n**-0.5) / 2


@pytest.mark.parametrize(
    "n, expected",
    [(1, 1.0), (2, 0.8535534), (3, 0.7886751), (4, 0.75)],
)
def test_success_values(n, expected):
    assert ic1_earac_success(n) == pytest.approx(expected, abs=1e-7)
    assert ic1_earac_success(n) == pytest.approx(q_formula(n), abs=1e-9)


@pytest.mark.parametrize("n", [0, 5, 6])
def test_unsupported(n):
    with pytest.raises(UnsupportedParameter):
        make_earac(n) if n != 5 else EARAC(n)
    with pytest.raises(UnsupportedParameter):
        ic1_earac_success(n)


def test_make_earac_kinds():
    assert isinstance(make_earac(4), ConcatenatedEARAC)
    assert isinstance(make_earac(3), EARAC)


@pytest.mark.parametrize("n", [2, 3])
def test_alice_axis_unit(n):
    code = EARAC(n)
    for bits in itertools.product((0, 1), repeat=n):
        assert np.linalg.norm(code.alice_axis(bits)) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_every_input_hits_q(n):
    # success is the same for every input and every k, not just on average
    code = make_earac(n)
    for bits in itertools.product((0, 1), repeat=n):
        for k in range(n):
            dist = guess_distribution(code, bits, k)
            assert dist.sum() == pytest.approx(1.0)
            assert dist[bits[k]] == pytest.approx(q_formula(n), abs=1e-9)


def test_singlet_anticorrelation_by_brute_force():
    # cos^2 of half the angle between Alice's and Bob's axes
    code = EARAC(2)
    for bits in itertools.product((0, 1), repeat=2):
        for k in range(2):
            a, b = code.alice_axis(bits), code.bob_axis(k)
            angle = np.arccos(np.clip(a @ b * (-1) ** bits[k], -1, 1))
            joint = code.joint(bits, k)
            right = sum(p for (msg, local), p in joint.items() if code.guess(msg, local, k) == bits[k])
            assert right == pytest.approx(np.cos(angle / 2) ** 2, abs=1e-12)


def test_message_is_unbiased():
    code = EARAC(3)
    for bits in itertools.product((0, 1), repeat=3):
        np.testing.assert_allclose(code.alice_marginal(bits), [0.5, 0.5], atol=1e-12)
