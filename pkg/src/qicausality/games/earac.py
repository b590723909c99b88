"""Entanglement-assisted random access codes over shared singlets.

Alice holds bits ``b_0..b_{n-1}`` and measures her half of a singlet along
``sum_i (-1)^b_i e_i / sqrt(n)``; her outcome is the one-bit message. Bob,
asked for bit ``k``, measures his half along ``e_k`` and guesses
``message ^ outcome ^ 1``. Singlet outcomes anti-correlate, so the guess is
right with probability cos^2 of half the angle between the two axes, which
is ``(1 + n^{-1/2}) / 2``.

Axes: ``e_0, e_1, e_2`` are +x, +y, +z. Four bits use two inner 2-bit codes
whose messages feed one outer 2-bit code.
"""

from __future__ import annotations

import itertools
from collections import defaultdict

import numpy as np

from ..protocols import ZERO_PROB, basis_outcomes
from ..qcore import SINGLET
from .common import UnsupportedParameter

AXES = np.eye(3)


class EARAC:
    """Direct code for n in {1, 2, 3}."""

    def __init__(self, n: int):
        if n not in (1, 2, 3):
            raise UnsupportedParameter(f"direct EARAC needs n in {{1, 2, 3}}, got {n}")
        self.n = n
        self._cache: dict = {}

    def alice_axis(self, bits) -> np.ndarray:
        signs = np.array([(-1) ** b for b in bits], dtype=float)
        return signs @ AXES[: self.n] / np.sqrt(self.n)

    def bob_axis(self, k: int) -> np.ndarray:
        return AXES[k]

    def alice_marginal(self, bits) -> np.ndarray:
        return np.array([r.probability for r in basis_outcomes(SINGLET, 0, self.alice_axis(bits))])

    def joint(self, bits, k: int) -> dict:
        """Probability of each (message, Bob's local outcome)."""
        key = (tuple(bits), k)
        if key not in self._cache:
            out = defaultdict(float)
            for a in basis_outcomes(SINGLET, 0, self.alice_axis(bits)):
                if a.probability <= ZERO_PROB:
                    continue
                for b in basis_outcomes(a.post_state, 1, self.bob_axis(k)):
                    out[(a.outcome, b.outcome)] += a.probability * b.probability
            self._cache[key] = dict(out)
        return self._cache[key]

    def guess(self, message: int, local, k: int) -> int:
        return message ^ local ^ 1


class ConcatenatedEARAC:
    """Four-bit code: inner codes on (b0, b1) and (b2, b3), outer code on their messages."""

    n = 4

    def __init__(self):
        self.inner = EARAC(2)
        self.outer = EARAC(2)
        self._cache: dict = {}

    def joint(self, bits, k: int) -> dict:
        key = (tuple(bits), k)
        if key in self._cache:
            return self._cache[key]
        g, i = divmod(k, 2)
        groups = (tuple(bits[0:2]), tuple(bits[2:4]))
        other = groups[1 - g]
        other_marginal = self.inner.alice_marginal(other)
        out = defaultdict(float)
        for (a_g, b_g), p_in in self.inner.joint(groups[g], i).items():
            for a_o in (0, 1):
                p_o = other_marginal[a_o]
                if p_o <= ZERO_PROB:
                    continue
                inner_msgs = (a_g, a_o) if g == 0 else (a_o, a_g)
                for (a_out, b_out), p_out in self.outer.joint(inner_msgs, g).items():
                    out[(a_out, (b_g, b_out))] += p_in * p_o * p_out
        self._cache[key] = dict(out)
        return self._cache[key]

    def guess(self, message: int, local, k: int) -> int:
        g, i = divmod(k, 2)
        b_g, b_out = local
        inner_msg = self.outer.guess(message, b_out, g)
        return self.inner.guess(inner_msg, b_g, i)


def make_earac(n: int):
    if n == 4:
        return ConcatenatedEARAC()
    return EARAC(n)


def guess_distribution(code, bits, k: int) -> np.ndarray:
    """Distribution of Bob's guess when the message arrives intact."""
    dist = np.zeros(2)
    for (msg, local), p in code.joint(bits, k).items():
        dist[code.guess(msg, local, k)] += p
    return dist


def ic1_earac_success(n: int) -> float:
    """Exact per-bit success probability, averaged over all inputs and k."""
    code = make_earac(n)
    total = 0.0
    inputs = list(itertools.product((0, 1), repeat=n))
    for bits in inputs:
        for k in range(n):
            total += guess_distribution(code, bits, k)[bits[k]]
    return total / (len(inputs) * n)
