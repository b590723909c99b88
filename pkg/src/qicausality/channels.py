"""Qubit channels: Paulis, the depolarizing map and covariant twirling."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence, Union

import numpy as np

from .qcore import (
    SINGLET,
    DensityOperator,
    _as_density,
    bell_diagonal,
    bloch_states,
    haar_random_unitaries,
    haar_random_unitary,
    permute_subsystems,
    random_unit_vectors,
)

CPTP_TOL = 1e-9


class PauliIndex(NamedTuple):
    """Two-bit Pauli label: (0,0)=I, (0,1)=X, (1,0)=Y, (1,1)=Z."""

    x0: int
    x1: int

    @property
    def value(self) -> int:
        return 2 * self.x0 + self.x1

    @classmethod
    def from_value(cls, v: int) -> PauliIndex:
        return cls((v >> 1) & 1, v & 1)


_PAULIS = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def pauli(idx: Union[PauliIndex, tuple[int, int]]) -> np.ndarray:
    x0, x1 = idx
    if x0 not in (0, 1) or x1 not in (0, 1):
        raise ValueError(f"invalid Pauli index {idx!r}")
    return _PAULIS[2 * x0 + x1].copy()


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape or k.ndim != 2 for k in ops):
            raise ValueError("Kraus operators must share one 2-d shape")
        total = sum(k.conj().T @ k for k in ops)
        if np.max(np.abs(total - np.eye(shape[1]))) > CPTP_TOL:
            raise ValueError("Kraus operators are not trace preserving")
        for k in ops:
            k.flags.writeable = False
        object.__setattr__(self, "kraus", ops)

    @property
    def d_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, mat: np.ndarray) -> np.ndarray:
        """Apply to a bare matrix on the input space."""
        return sum(k @ mat @ k.conj().T for k in self.kraus)


def identity_channel(d: int = 2) -> KrausChannel:
    return KrausChannel((np.eye(d),))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return KrausChannel((u,))


def compose(first: KrausChannel, second: KrausChannel) -> KrausChannel:
    """Channel applying ``first`` then ``second``."""
    if first.d_out != second.d_in:
        raise ValueError("channel dimensions do not chain")
    return KrausChannel(tuple(b @ a for a in first.kraus for b in second.kraus))


def depolarizing(lam: float) -> KrausChannel:
    """Depolarizing qubit channel whose singlet fidelity is ``lam``."""
    if not 0.25 <= lam <= 1.0:
        raise ValueError(f"depolarizing parameter {lam!r} outside [1/4, 1]")
    rest = np.sqrt((1.0 - lam) / 3.0)
    return KrausChannel((np.sqrt(lam) * _PAULIS[0],) + tuple(rest * p for p in _PAULIS[1:]))


def apply_channel(ch: KrausChannel, rho, target: Union[int, Sequence[int]]) -> DensityOperator:
    """Apply ``ch`` to the listed subsystems.

    Several targets are treated as one joint input, in the order listed. The
    output replaces them as a single subsystem at the position of the first
    target.
    """
    rho = _as_density(rho)
    targets = [target] if isinstance(target, (int, np.integer)) else list(target)
    d_target = int(np.prod([rho.dims[t] for t in targets]))
    if d_target != ch.d_in:
        raise ValueError(f"channel input dim {ch.d_in} does not match target dim {d_target}")
    n = len(rho.dims)
    rest = [i for i in range(n) if i not in targets]
    moved = permute_subsystems(rho, targets + rest)
    d_rest = rho.dim // d_target
    eye = np.eye(d_rest)
    out = sum(
        np.kron(k, eye) @ moved.matrix @ np.kron(k, eye).conj().T for k in ch.kraus
    )
    first = min(targets)
    rest_dims = [rho.dims[i] for i in rest]
    pos = sum(1 for i in rest if i < first)
    new_dims = tuple([ch.d_out] + rest_dims)
    result = DensityOperator._trusted(out, new_dims)
    order = list(range(1, pos + 1)) + [0] + list(range(pos + 1, len(new_dims)))
    return permute_subsystems(result, order)


def singlet_output(ch: KrausChannel) -> DensityOperator:
    """Joint state when ``ch`` acts on the second half of the singlet."""
    return apply_channel(ch, SINGLET, 1)


def singlet_fidelity(ch: KrausChannel) -> float:
    out = singlet_output(ch)
    s = SINGLET.amplitudes
    return float(np.real(np.vdot(s, out.matrix @ s)))


def omega_state(lam: float) -> DensityOperator:
    """lam on the singlet, (1-lam)/3 on each other Bell state."""
    rest = (1.0 - lam) / 3.0
    return bell_diagonal([lam, rest, rest, rest])


def _canonical_phase(u: np.ndarray) -> np.ndarray:
    flat = u.reshape(-1)
    pivot = flat[np.argmax(np.abs(flat) > 1e-9)]
    return u * (abs(pivot) / pivot)


@lru_cache(maxsize=None)
def clifford_group() -> tuple[np.ndarray, ...]:
    """The 24 single-qubit Clifford unitaries, modulo global phase."""
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    s = np.diag([1, 1j])
    found = {}
    frontier = [np.eye(2, dtype=complex)]
    while frontier:
        nxt = []
        for u in frontier:
            key = tuple(np.round(_canonical_phase(u), 8).reshape(-1))
            if key in found:
                continue
            found[key] = _canonical_phase(u)
            nxt.extend([h @ u, s @ u])
        frontier = nxt
    group = tuple(found.values())
    assert len(group) == 24
    return group


def twirled_channel(ch: KrausChannel, unitaries: Sequence[np.ndarray] | None = None) -> KrausChannel:
    """Average of U^dag ch(U . U^dag) U over a finite set of unitaries.

    Defaults to the single-qubit Clifford group, a unitary 2-design, so the
    result equals the Haar average exactly.
    """
    if ch.d_in != 2 or ch.d_out != 2:
        raise ValueError("twirl is defined for qubit-to-qubit channels")
    us = clifford_group() if unitaries is None else tuple(unitaries)
    w = 1.0 / np.sqrt(len(us))
    return KrausChannel(tuple(w * u.conj().T @ k @ u for u in us for k in ch.kraus))


def twirl(ch: KrausChannel) -> float:
    """Parameter of the depolarizing channel equivalent to ``ch`` after twirling.

    Values below 1/4 are raised to 1/4: outputting the maximally mixed state
    does at least as well.
    """
    lam = singlet_fidelity(twirled_channel(ch))
    return float(min(max(lam, 0.25), 1.0))


def twirl_monte_carlo(ch: KrausChannel, samples: int, rng: np.random.Generator) -> float:
    """Haar Monte-Carlo estimate of the twirl parameter from random input states.

    Uses the average fidelity f of ch on Haar-random pure inputs; the
    equivalent depolarizing channel shrinks the Bloch sphere by 2f - 1 and
    has singlet weight (1 + 3(2f - 1)) / 4. Not clipped.
    """
    if ch.d_in != 2 or ch.d_out != 2:
        raise ValueError("twirl is defined for qubit-to-qubit channels")
    us = haar_random_unitaries(2, samples, rng)
    psi = us[:, :, 0]
    rho = np.einsum("si,sj->sij", psi, psi.conj())
    out = sum(np.einsum("ij,sjk,lk->sil", k, rho, k.conj()) for k in ch.kraus)
    fid = np.real(np.einsum("si,sij,sj->s", psi.conj(), out, psi))
    eta = 2.0 * fid.mean() - 1.0
    return float((1.0 + 3.0 * eta) / 4.0)


def random_channel(d_in: int, d_out: int, rng: np.random.Generator, env_dim: int | None = None) -> KrausChannel:
    """Random CPTP map: Haar unitary on output (x) environment, traced environment.

    The input is embedded as the first ``d_in`` basis vectors of the joint
    output-environment space, so ``d_out * env_dim >= d_in`` is required.
    """
    if env_dim is None:
        env_dim = max(4, -(-d_in // d_out))
    if d_out * env_dim < d_in:
        raise ValueError("environment too small for an isometry")
    u = haar_random_unitary(d_out * env_dim, rng)
    iso = u[:, :d_in].reshape(d_out, env_dim, d_in)
    return KrausChannel(tuple(iso[:, e, :] for e in range(env_dim)))


def embed_into_register(n: int, k: int) -> KrausChannel:
    """Qubit -> n qubits: the input lands on qubit ``k``, the rest maximally mixed."""
    d_rest = 2 ** (n - 1)
    ops = []
    for j in range(d_rest):
        basis = np.zeros((d_rest, 1))
        basis[j, 0] = 1.0
        iso = np.kron(np.eye(2), basis) / np.sqrt(d_rest)
        ops.append(embed_operator_iso(iso, n, k))
    return KrausChannel(tuple(ops))


def embed_operator_iso(iso: np.ndarray, n: int, k: int) -> np.ndarray:
    # iso maps qubit -> (qubit k first, others after); reorder output to natural order
    order = [k] + [i for i in range(n) if i != k]
    inv = [order.index(i) for i in range(n)]
    t = iso.reshape((2,) * n + (2,)).transpose(inv + [n])
    return t.reshape(2**n, 2)


def haar_average_psi_plus() -> DensityOperator:
    """Sphere average of |Psi+_r><Psi+_r|, exact via the octahedron (±x, ±y, ±z)."""
    pts = np.vstack([np.eye(3), -np.eye(3)])
    return DensityOperator._trusted(_psi_plus_projectors(pts).mean(axis=0), (2, 2))


def haar_average_psi_plus_monte_carlo(samples: int, rng: np.random.Generator) -> np.ndarray:
    return _psi_plus_projectors(random_unit_vectors(samples, rng)).mean(axis=0)


def _psi_plus_projectors(points: np.ndarray) -> np.ndarray:
    up = bloch_states(points)
    down = bloch_states(-points)
    v = (
        np.einsum("si,sj->sij", up, down) + np.einsum("si,sj->sij", down, up)
    ).reshape(len(points), 4) / np.sqrt(2)
    return np.einsum("si,sj->sij", v, v.conj())


def pauli_product_channel(probs: Sequence[float]) -> KrausChannel:
    """Random Pauli channel with probabilities in PauliIndex value order."""
    return KrausChannel(tuple(np.sqrt(p) * _PAULIS[i] for i, p in enumerate(probs) if p > 0))
