"""The IC-2 game: Alice holds n two-bit values, Bob must output the k-th.

Inputs are packed into one integer ``x`` with ``x_j`` at bits ``2j, 2j+1``;
each two-bit value is ``2 * x_j^0 + x_j^1`` (the PauliIndex value). Alice's
two-bit message always travels by superdense coding, which is what lets a
teleportation strategy spend a single qubit on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from ..channels import PauliIndex
from ..protocols import superdense_decode, superdense_encode
from ..qcore import (
    SINGLET,
    PureState,
    bloch_states,
    haar_random_unitaries,
    permute_subsystems,
    random_pure_state,
    tensor,
)
from .common import GameConfig, GameResult, UnsupportedParameter, pair_values, run_monte_carlo
from .earac import AXES, make_earac


@lru_cache(maxsize=None)
def superdense_roundtrip(message: int) -> int:
    """Send a two-bit value through superdense coding and read it back."""
    bits = PauliIndex.from_value(message)
    return superdense_decode(superdense_encode(bits)).value


class PairedIC1:
    """Two independent EARACs, one per bit of every pair; both messages share one qubit."""

    def __init__(self, n: int):
        self.n = n
        self.code = make_earac(n)
        self._responses: dict = {}
        self._tables: dict = {}

    def response_distribution(self, x: int, k: int) -> np.ndarray:
        key = (x, k)
        if key in self._responses:
            return self._responses[key]
        vals = pair_values(x, self.n)
        joint0 = self.code.joint(tuple(v >> 1 for v in vals), k)
        joint1 = self.code.joint(tuple(v & 1 for v in vals), k)
        dist = np.zeros(4)
        for (m0, l0), p0 in joint0.items():
            for (m1, l1), p1 in joint1.items():
                received = superdense_roundtrip(2 * m0 + m1)
                y0 = self.code.guess(received >> 1, l0, k)
                y1 = self.code.guess(received & 1, l1, k)
                dist[2 * y0 + y1] += p0 * p1
        self._responses[key] = dist
        return dist

    def conditional_table(self, k: int) -> np.ndarray:
        return _conditional_table(self, k)


class RandomGuess:
    """Bob ignores everything and outputs a uniformly random pair."""

    def __init__(self, n: int):
        self.n = n
        self._tables: dict = {}

    def response_distribution(self, x: int, k: int) -> np.ndarray:
        return np.full(4, 0.25)

    def conditional_table(self, k: int) -> np.ndarray:
        return np.full((4, 4), 0.25)


def _conditional_table(strategy, k: int) -> np.ndarray:
    # table[v, y] = P(y | x_k = v), averaged over the other inputs
    if k not in strategy._tables:
        n = strategy.n
        table = np.zeros((4, 4))
        for x in range(4**n):
            table[(x >> (2 * k)) & 3] += strategy.response_distribution(x, k)
        strategy._tables[k] = table / 4 ** (n - 1)
    return strategy._tables[k]


def _check_unitaries(mats: np.ndarray, what: str) -> None:
    eye = np.eye(mats.shape[-1])
    err = np.abs(np.einsum("kji,kjl->kil", mats.conj(), mats) - eye).max()
    if err > 1e-9:
        raise ValueError(f"{what} are not orthonormal (error {err:.2e})")


@dataclass(eq=False)
class NonlocalStrategy:
    """Both parties measure a shared state; Alice sends her two-bit outcome.

    ``alice_bases[p]`` and ``bob_bases[k]`` hold measurement bases as columns
    (column ``2r + s`` is the outcome ``(r, s)``). Input ``x`` selects Alice's
    basis ``alice_bases[alice_choice[x]]``; without ``alice_choice`` each
    ``x`` has its own basis. Bob outputs ``a XOR b``.
    """

    state: PureState
    alice_bases: np.ndarray
    bob_bases: np.ndarray
    alice_choice: Optional[np.ndarray] = None
    _probs: np.ndarray = field(init=False, repr=False)
    _tables: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        self.alice_bases = np.asarray(self.alice_bases, dtype=complex)
        self.bob_bases = np.asarray(self.bob_bases, dtype=complex)
        d_a, d_b = self.state.dims
        if self.alice_bases.shape[1:] != (d_a, 4) or self.bob_bases.shape[1:] != (d_b, 4) or d_a != 4 or d_b != 4:
            raise ValueError("bases must be 4x4 and match the shared state's dims")
        _check_unitaries(self.alice_bases, "Alice's bases")
        _check_unitaries(self.bob_bases, "Bob's bases")
        n_inputs = 4**self.n
        if self.alice_choice is None:
            if len(self.alice_bases) != n_inputs:
                raise ValueError("one Alice basis per input needed when alice_choice is omitted")
            self.alice_choice = np.arange(n_inputs)
        self.alice_choice = np.asarray(self.alice_choice, dtype=np.int64)
        if self.alice_choice.shape != (n_inputs,) or self.alice_choice.min() < 0 or self.alice_choice.max() >= len(self.alice_bases):
            raise ValueError("alice_choice must map every input to a basis index")
        psi = self.state.amplitudes.reshape(4, 4)
        amps = np.einsum("pia,ij,kjb->pkab", self.alice_bases.conj(), psi, self.bob_bases.conj())
        self._probs = np.abs(amps) ** 2

    @property
    def n(self) -> int:
        return len(self.bob_bases)

    @property
    def outcome_probs(self) -> np.ndarray:
        """P(a, b) indexed ``[basis p, k, a, b]``."""
        return self._probs

    def response_distribution(self, x: int, k: int) -> np.ndarray:
        probs = self._probs[self.alice_choice[x], k]
        dist = np.zeros(4)
        for a in range(4):
            received = superdense_roundtrip(a)
            for b in range(4):
                dist[received ^ b] += probs[a, b]
        return dist

    def conditional_table(self, k: int) -> np.ndarray:
        return _conditional_table(self, k)


IC2Strategy = Union[PairedIC1, RandomGuess, NonlocalStrategy]

_XOR = np.bitwise_xor.outer(np.arange(4), np.arange(4))
_PARITY = np.array([0, 1, 1, 0])
_SIGN_PARITY = (-1.0) ** _PARITY
_SIGN_FIRST = (-1.0) ** (np.arange(4) >> 1)
_SIGN_SECOND = (-1.0) ** (np.arange(4) & 1)


@dataclass(frozen=True)
class NonlocalEvaluation:
    """Exact success data of a nonlocal strategy.

    ``both_or_neither``, ``first_right`` and ``second_right`` are the three
    averaged probability combinations each bounded by ``(1 + n^{-1/2}) / 2``.
    """

    q: float
    correlators: np.ndarray
    correlators_first: np.ndarray
    correlators_second: np.ndarray
    both_or_neither: float
    first_right: float
    second_right: float

    @property
    def pair_bound(self) -> float:
        n = self.correlators.shape[1]
        return 0.5 * (1 + n**-0.5)


def evaluate_nonlocal_ic2(s: NonlocalStrategy, n: Optional[int] = None) -> NonlocalEvaluation:
    n = s.n if n is None else n
    if n != s.n:
        raise ValueError(f"strategy has {s.n} Bob bases, not {n}")
    probs = s.outcome_probs
    # error pattern d = a ^ b ^ v: 0 both right, 1 only the second bit wrong, ...
    pattern = np.zeros(probs.shape[:2] + (4, 4))
    for v in range(4):
        for d in range(4):
            pattern[:, :, v, d] = (probs * (_XOR ^ v == d)).sum(axis=(2, 3))

    def correlator(bits):
        signs = (-1.0) ** (bits[:, None] + bits[None, :])
        return (probs * signs).sum(axis=(2, 3))

    corr = correlator(_PARITY)
    corr0 = correlator(np.arange(4) >> 1)
    corr1 = correlator(np.arange(4) & 1)

    n_inputs = 4**n
    xs = np.arange(n_inputs)
    choice = s.alice_choice
    n_bases = probs.shape[0]
    E = np.empty((n_inputs, n))
    E0 = np.empty_like(E)
    E1 = np.empty_like(E)
    totals = np.zeros(4)
    for k in range(n):
        v = (xs >> (2 * k)) & 3
        # fraction of inputs with each (basis, x_k) pair
        weights = np.bincount(choice * 4 + v, minlength=n_bases * 4).reshape(n_bases, 4) / n_inputs
        totals += np.einsum("pv,pvd->d", weights, pattern[:, k])
        E[:, k] = _SIGN_PARITY[v] * corr[choice, k]
        E0[:, k] = _SIGN_FIRST[v] * corr0[choice, k]
        E1[:, k] = _SIGN_SECOND[v] * corr1[choice, k]
    totals /= n
    return NonlocalEvaluation(
        q=float(totals[0]),
        correlators=E,
        correlators_first=E0,
        correlators_second=E1,
        both_or_neither=float(totals[0] + totals[3]),
        first_right=float(totals[0] + totals[1]),
        second_right=float(totals[0] + totals[2]),
    )


def random_nonlocal_strategy(n: int, rng: np.random.Generator, pool: int = 64) -> NonlocalStrategy:
    """Haar-random shared state and bases; Alice's bases drawn from a pool of at most ``pool``."""
    n_inputs = 4**n
    size = min(pool, n_inputs)
    state = random_pure_state((4, 4), rng)
    alice = haar_random_unitaries(4, size, rng)
    choice = np.arange(n_inputs) if size == n_inputs else rng.integers(size, size=n_inputs)
    return NonlocalStrategy(state, alice, haar_random_unitaries(4, n, rng), choice)


def _axis_basis(axis: np.ndarray) -> np.ndarray:
    up, down = bloch_states(np.array([axis, -axis]))
    return np.column_stack([up, down])


def earac_nonlocal_strategy(n: int) -> NonlocalStrategy:
    """The paired singlet EARAC written as a nonlocal strategy (n <= 3).

    Bob's outcome labels are swapped so that ``a XOR b`` reproduces the
    EARAC decoding ``a XOR b XOR 1``.
    """
    if n not in (1, 2, 3):
        raise UnsupportedParameter("nonlocal EARAC form needs n in {1, 2, 3}")
    code = make_earac(n)
    # qubits (a0, b0, a1, b1) -> (a0, a1, b0, b1)
    state = permute_subsystems(tensor(SINGLET, SINGLET), [0, 2, 1, 3])
    state = PureState(state.amplitudes, (4, 4))
    alice = []
    for x in range(4**n):
        vals = pair_values(x, n)
        v0 = _axis_basis(code.alice_axis([v >> 1 for v in vals]))
        v1 = _axis_basis(code.alice_axis([v & 1 for v in vals]))
        alice.append(np.kron(v0, v1))
    bob = []
    for k in range(n):
        w = _axis_basis(AXES[k])[:, ::-1]
        bob.append(np.kron(w, w))
    return NonlocalStrategy(state, np.array(alice), np.array(bob))


def run_ic2(strategy: IC2Strategy, cfg: GameConfig, workers: int = 1) -> GameResult:
    """Success probability Q: the chance Bob outputs x_k, averaged over k and x."""
    n = cfg.n
    if strategy.n != n:
        raise ValueError(f"strategy is for n={strategy.n}, config has n={n}")
    if cfg.mode == "exact":
        if isinstance(strategy, NonlocalStrategy):
            return GameResult.exact(evaluate_nonlocal_ic2(strategy).q)
        q = np.mean([np.trace(strategy.conditional_table(k)) / 4 for k in range(n)])
        return GameResult.exact(float(q))

    def chunk(rng: np.random.Generator, size: int) -> int:
        xs = rng.integers(4**n, size=size)
        ks = rng.integers(n, size=size)
        us = rng.random(size)
        wins = 0
        for x, k, u in zip(xs.tolist(), ks.tolist(), us.tolist()):
            y = min(int(np.searchsorted(np.cumsum(strategy.response_distribution(x, k)), u, side="right")), 3)
            wins += y == ((x >> (2 * k)) & 3)
        return wins

    return run_monte_carlo(chunk, cfg.trials, cfg.seed, workers)
