"""The QIC game and its strategies.

Version I: Charlie hands Alice halves of n singlets and asks Bob for the qubit
completing singlet k; P is the average singlet fidelity of Bob's output.
Version II: Charlie hands Alice Haar-random pure qubits and measures Bob's
output k in the basis of the state he sent; p is the chance of a match.

Exact evaluators work per k on at most four qubits. Monte-Carlo evaluators
sample Charlie's choices and every measurement outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from ..bounds import version_convert
from ..channels import PauliIndex, apply_channel, depolarizing, pauli, singlet_output
from ..protocols import apply_pauli, bell_probabilities, teleport_branches
from ..qcore import (
    SINGLET,
    BellIndex,
    DensityOperator,
    PureState,
    bloch_states,
    ket,
    partial_trace,
    pure_fidelity,
    random_unit_vectors,
    tensor,
)
from .common import GameConfig, GameResult, UnsupportedParameter, run_monte_carlo
from .ic2 import IC2Strategy

OCTAHEDRON = np.vstack([np.eye(3), -np.eye(3)])


def _sample_categorical(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Row-wise inverse-CDF sampling: ``probs`` is (trials, outcomes)."""
    cdf = np.cumsum(probs, axis=1)
    return np.minimum((u[:, None] >= cdf).sum(axis=1), probs.shape[1] - 1)


@dataclass(frozen=True)
class ChannelStrategy:
    """Covariant strategy: output k is input k sent through depolarizing(lambdas[k])."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        lams = tuple(float(v) for v in self.lambdas)
        for v in lams:
            depolarizing(v)
        object.__setattr__(self, "lambdas", lams)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def omega(self, k: int) -> DensityOperator:
        return singlet_output(depolarizing(self.lambdas[k]))

    def output_state(self, k: int, psi: PureState) -> DensityOperator:
        return apply_channel(depolarizing(self.lambdas[k]), psi, 0)

    def v2_fidelities(self, ks, psis, rng) -> np.ndarray:
        fid = np.empty(len(ks))
        for k in np.unique(ks):
            sel = ks == k
            p = psis[sel]
            fid[sel] = sum(
                np.abs(np.einsum("si,ij,sj->s", p.conj(), op, p)) ** 2 for op in depolarizing(self.lambdas[k]).kraus
            )
        return fid


@dataclass(frozen=True)
class NaiveStrategy:
    """Alice forwards qubits 0..m-1 untouched; Bob returns them or a fixed |0>."""

    n: int
    m: int

    def __post_init__(self):
        if not 0 <= self.m <= self.n:
            raise ValueError("naive strategy needs 0 <= m <= n")

    def omega(self, k: int) -> DensityOperator:
        if k < self.m:
            return SINGLET.density()
        return tensor(partial_trace(SINGLET, [0]), ket(0).density())

    def output_state(self, k: int, psi: PureState) -> DensityOperator:
        return psi.density() if k < self.m else ket(0).density()

    def v2_fidelities(self, ks, psis, rng) -> np.ndarray:
        return np.where(ks < self.m, 1.0, np.abs(psis[:, 0]) ** 2)


@dataclass(eq=False)
class TeleportationStrategy:
    """Teleport every input to Bob, play IC-2 on the Bell outcomes, correct output k.

    Alice's two-bit IC-2 message rides one qubit via superdense coding, so the
    message budget is m = 1.
    """

    ic2: IC2Strategy
    m: int = 1

    def __post_init__(self):
        if self.m != 1:
            raise UnsupportedParameter("teleportation strategies are built for m = 1")

    @property
    def n(self) -> int:
        return self.ic2.n

    @cached_property
    def _teleported_pairs(self) -> tuple[np.ndarray, list[DensityOperator]]:
        # C_j A_j singlet, A'_j B_j singlet; Alice Bell-measures A_j A'_j
        branches = teleport_branches(tensor(SINGLET, SINGLET), 1, (2, 3))
        probs = np.zeros(4)
        states: list = [None] * 4
        for x, p, post in branches:
            probs[x.value] = p
            states[x.value] = partial_trace(post, [0, 3])
        return probs, states

    @cached_property
    def _charlie_probs(self) -> np.ndarray:
        # [x_k, y] -> Bell outcome probabilities after Bob applies sigma_y
        _, states = self._teleported_pairs
        out = np.zeros((4, 4, 4))
        for v in range(4):
            for y in range(4):
                out[v, y] = bell_probabilities(apply_pauli(states[v], 1, PauliIndex.from_value(y)))
        return out

    def omega(self, k: int) -> DensityOperator:
        probs, states = self._teleported_pairs
        table = self.ic2.conditional_table(k)
        mat = np.zeros((4, 4), dtype=complex)
        for v in range(4):
            for y in range(4):
                w = probs[v] * table[v, y]
                if w > 0:
                    mat += w * apply_pauli(states[v], 1, PauliIndex.from_value(y)).matrix
        return DensityOperator._trusted(mat, (2, 2))

    def output_state(self, k: int, psi: PureState) -> DensityOperator:
        table = self.ic2.conditional_table(k)
        mat = np.zeros((2, 2), dtype=complex)
        for x, p, post in teleport_branches(tensor(psi, SINGLET), 0, (1, 2)):
            received = partial_trace(post, [2])
            for y in range(4):
                w = p * table[x.value, y]
                if w > 0:
                    mat += w * apply_pauli(received, 0, PauliIndex.from_value(y)).matrix
        return DensityOperator._trusted(mat, (2,))

    def _sample_inputs(self, ks: np.ndarray, rng: np.random.Generator):
        """Sample teleport outcomes x for all pairs and Bob's IC-2 output y, given k."""
        probs, _ = self._teleported_pairs
        size = len(ks)
        pairs = rng.choice(4, size=(size, self.n), p=probs / probs.sum())
        xs = (pairs << (2 * np.arange(self.n))).sum(axis=1)
        dists = np.array([self.ic2.response_distribution(x, k) for x, k in zip(xs.tolist(), ks.tolist())])
        ys = _sample_categorical(dists, rng.random(size))
        return pairs[np.arange(size), ks], ys

    def v2_fidelities(self, ks, psis, rng) -> np.ndarray:
        xk, ys = self._sample_inputs(ks, rng)
        # Bob holds sigma_x psi sigma_x (teleport table), then applies sigma_y
        ops = _PAULI_PRODUCTS[xk, ys]
        return np.abs(np.einsum("si,sij,sj->s", psis.conj(), ops, psis)) ** 2


_PAULI_PRODUCTS = np.array(
    [[pauli(PauliIndex.from_value(y)) @ pauli(PauliIndex.from_value(x)) for y in range(4)] for x in range(4)]
)


Strategy = Union[ChannelStrategy, NaiveStrategy, TeleportationStrategy]


def naive_strategy(n: int, m: int) -> NaiveStrategy:
    return NaiveStrategy(n, m)


def teleportation_strategy(ic2: IC2Strategy) -> TeleportationStrategy:
    return TeleportationStrategy(ic2)


def channel_strategy(lambdas: Sequence[float]) -> ChannelStrategy:
    return ChannelStrategy(tuple(lambdas))


def _check(strategy: Strategy, cfg: GameConfig) -> None:
    if strategy.n != cfg.n:
        raise ValueError(f"strategy is for n={strategy.n}, config has n={cfg.n}")
    if isinstance(strategy, (NaiveStrategy, TeleportationStrategy)) and strategy.m != cfg.m:
        raise ValueError(f"strategy sends m={strategy.m} qubits, config has m={cfg.m}")


def singlet_fidelities(strategy: Strategy) -> np.ndarray:
    """<Psi-|omega_k|Psi-> for every k."""
    return np.array([pure_fidelity(strategy.omega(k), SINGLET) for k in range(strategy.n)])


def run_qic_v1(strategy: Strategy, cfg: GameConfig, workers: int = 1) -> GameResult:
    _check(strategy, cfg)
    n = cfg.n
    if cfg.mode == "exact":
        return GameResult.exact(float(singlet_fidelities(strategy).mean()))

    if isinstance(strategy, TeleportationStrategy):
        charlie = strategy._charlie_probs

        def outcome_probs(ks, rng):
            xk, ys = strategy._sample_inputs(ks, rng)
            return charlie[xk, ys]

    else:
        per_k = np.array([bell_probabilities(strategy.omega(k)) for k in range(n)])

        def outcome_probs(ks, rng):
            return per_k[ks]

    def chunk(rng, size):
        ks = rng.integers(n, size=size)
        outcome = _sample_categorical(outcome_probs(ks, rng), rng.random(size))
        return int(np.sum(outcome == BellIndex.PSI_MINUS))

    return run_monte_carlo(chunk, cfg.trials, cfg.seed, workers)


def _exact_v2(strategy: Strategy) -> float:
    # fidelity is quadratic in the Bloch vector; the octahedron integrates it exactly
    total = 0.0
    for k in range(strategy.n):
        for r in OCTAHEDRON:
            psi = PureState(bloch_states(r)[0], (2,))
            total += pure_fidelity(strategy.output_state(k, psi), psi)
    return total / (strategy.n * len(OCTAHEDRON))


def run_qic_v2(strategy: Strategy, cfg: GameConfig, workers: int = 1) -> GameResult:
    _check(strategy, cfg)
    n = cfg.n
    if cfg.mode == "exact":
        return GameResult.exact(_exact_v2(strategy))

    def chunk(rng, size):
        bloch = random_unit_vectors(size * n, rng).reshape(size, n, 3)
        ks = rng.integers(n, size=size)
        psis = bloch_states(bloch[np.arange(size), ks])
        fid = strategy.v2_fidelities(ks, psis, rng)
        return int(np.sum(rng.random(size) < fid))

    return run_monte_carlo(chunk, cfg.trials, cfg.seed, workers)


@dataclass(frozen=True)
class VersionRelation:
    p_hat: float
    std_err: float
    p_version1: float
    p_expected: float

    @property
    def deviation(self) -> float:
        return abs(self.p_hat - self.p_expected)

    def holds(self, sigmas: float = 3.0) -> bool:
        return self.deviation <= sigmas * self.std_err + 1e-12


def version_relation_check(strategy: Strategy, cfg: GameConfig, workers: int = 1) -> VersionRelation:
    """Compare the version II Monte-Carlo estimate with (1 + 2P) / 3 from exact version I."""
    big_p = run_qic_v1(strategy, GameConfig(cfg.n, cfg.m, cfg.trials, cfg.seed, 1, "exact")).p_hat
    res = run_qic_v2(strategy, GameConfig(cfg.n, cfg.m, cfg.trials, cfg.seed, 2, "monte_carlo"), workers)
    return VersionRelation(res.p_hat, res.std_err, big_p, version_convert(big_p))

