"""Bell measurement, teleportation and superdense coding, simulated exactly.

Every sampling function has a deterministic sibling returning the full
outcome distribution together with the post-measurement states.

Teleportation here runs over a shared singlet. Brute force over the four
Bell outcomes on (source, Alice's half) gives the Pauli that Bob must apply
to recover the source state::

    Psi-  -> (0,0) I
    Phi-  -> (0,1) X
    Phi+  -> (1,0) Y
    Psi+  -> (1,1) Z

Equivalently, outcome ``b`` is the Bell state ``(I x sigma_x)|Psi->``, so
teleporting half of a singlet leaves the pair in exactly that Bell state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channels import PauliIndex, pauli
from .qcore import (
    BELL_BASIS,
    DensityOperator,
    BellIndex,
    BlochVector,
    _as_density,
    apply_unitary,
    bell_state,
    bloch_to_state,
    embed_operator,
    partial_trace,
    pure_fidelity,
)

ZERO_PROB = 1e-12

TELEPORT_CORRECTION = {
    BellIndex.PSI_MINUS: PauliIndex(0, 0),
    BellIndex.PHI_MINUS: PauliIndex(0, 1),
    BellIndex.PHI_PLUS: PauliIndex(1, 0),
    BellIndex.PSI_PLUS: PauliIndex(1, 1),
}

# (sigma_bits x I)|Phi+> for each message, read back by a Bell measurement
SUPERDENSE_CODEWORDS = {
    PauliIndex(0, 0): BellIndex.PHI_PLUS,
    PauliIndex(0, 1): BellIndex.PSI_PLUS,
    PauliIndex(1, 0): BellIndex.PSI_MINUS,
    PauliIndex(1, 1): BellIndex.PHI_MINUS,
}
_SUPERDENSE_DECODE = {b: bits for bits, b in SUPERDENSE_CODEWORDS.items()}


class DecodeError(ValueError):
    """Input to the superdense decoder is not one of the four codewords."""


@dataclass(frozen=True)
class MeasurementRecord:
    outcome: int
    probability: float
    post_state: Optional[DensityOperator]


def _projective(rho: DensityOperator, projectors: Sequence[np.ndarray], targets) -> list[MeasurementRecord]:
    records = []
    for i, proj in enumerate(projectors):
        full = embed_operator(proj, targets, rho.dims)
        unnorm = full @ rho.matrix @ full.conj().T
        p = float(np.clip(np.real(np.trace(unnorm)), 0.0, 1.0))
        post = DensityOperator._trusted(unnorm / p, rho.dims) if p > ZERO_PROB else None
        records.append(MeasurementRecord(i, p, post))
    return records


def _sample(records: list[MeasurementRecord], rng: np.random.Generator) -> MeasurementRecord:
    probs = np.array([r.probability for r in records])
    return records[int(rng.choice(len(records), p=probs / probs.sum()))]


def _check_qubits(rho: DensityOperator, targets) -> None:
    for t in targets:
        if rho.dims[t] != 2:
            raise ValueError(f"subsystem {t} is not a qubit")


def bell_outcomes(rho, pair: Sequence[int]) -> list[MeasurementRecord]:
    """All four Bell-measurement branches on ``pair`` (outcomes are BellIndex values)."""
    rho = _as_density(rho)
    _check_qubits(rho, pair)
    projectors = [np.outer(row.conj(), row) for row in BELL_BASIS]
    return [
        MeasurementRecord(BellIndex(r.outcome), r.probability, r.post_state)
        for r in _projective(rho, projectors, list(pair))
    ]


def bell_probabilities(rho, pair: Sequence[int] = (0, 1)) -> np.ndarray:
    return np.array([r.probability for r in bell_outcomes(rho, pair)])


def bell_measure(rho, pair: Sequence[int], rng: np.random.Generator) -> MeasurementRecord:
    return _sample(bell_outcomes(rho, pair), rng)


def basis_outcomes(rho, target: int, r: BlochVector | Sequence[float]) -> list[MeasurementRecord]:
    """Branches of a measurement in the {|up_r>, |down_r>} basis; outcome 0 is up."""
    rho = _as_density(rho)
    _check_qubits(rho, [target])
    r = r if isinstance(r, BlochVector) else BlochVector(*map(float, r))
    up = bloch_to_state(r).amplitudes
    down = bloch_to_state(-r).amplitudes
    return _projective(rho, [np.outer(up, up.conj()), np.outer(down, down.conj())], [target])


def basis_measure(rho, target: int, r, rng: np.random.Generator) -> MeasurementRecord:
    return _sample(basis_outcomes(rho, target, r), rng)


def apply_pauli(rho, target: int, idx: PauliIndex) -> DensityOperator:
    return apply_unitary(rho, pauli(idx), [target])


def _check_singlet(rho: DensityOperator, pair: Sequence[int]) -> None:
    reduced = partial_trace(rho, pair)
    if list(pair) != sorted(pair):
        raise ValueError("shared pair must be listed in subsystem order")
    if pure_fidelity(reduced, bell_state(BellIndex.PSI_MINUS)) < 1 - 1e-9:
        raise ValueError("shared pair is not in the singlet state")


def teleport_branches(state, source: int, shared_pair: Sequence[int]) -> list[tuple[PauliIndex, float, DensityOperator]]:
    """Exact teleportation of ``source`` over the singlet ``shared_pair``.

    Alice Bell-measures (source, shared_pair[0]); each branch reports the
    Pauli correction for ``shared_pair[1]``, its probability and the
    uncorrected global post-measurement state.
    """
    rho = _as_density(state)
    _check_qubits(rho, [source, *shared_pair])
    _check_singlet(rho, shared_pair)
    branches = []
    for rec in bell_outcomes(rho, [source, shared_pair[0]]):
        branches.append((TELEPORT_CORRECTION[BellIndex(rec.outcome)], rec.probability, rec.post_state))
    return branches


def teleport(state, source: int, shared_pair: Sequence[int], rng: np.random.Generator) -> tuple[PauliIndex, DensityOperator]:
    branches = teleport_branches(state, source, shared_pair)
    probs = np.array([b[1] for b in branches])
    x, _, post = branches[int(rng.choice(4, p=probs / probs.sum()))]
    return x, post


def superdense_encode(bits, pair_state=None) -> DensityOperator:
    """Apply sigma_bits to the first qubit of a shared |Phi+> pair."""
    rho = _as_density(pair_state if pair_state is not None else bell_state(BellIndex.PHI_PLUS))
    if rho.dims != (2, 2) or pure_fidelity(rho, bell_state(BellIndex.PHI_PLUS)) < 1 - 1e-9:
        raise ValueError("superdense coding needs a |Phi+> pair")
    return apply_unitary(rho, pauli(PauliIndex(*bits)), [0])


def superdense_decode(rho) -> PauliIndex:
    probs = bell_probabilities(rho, (0, 1))
    best = int(np.argmax(probs))
    if probs[best] < 1 - 1e-9:
        raise DecodeError("state is not a superdense codeword")
    return _SUPERDENSE_DECODE[BellIndex(best)]
