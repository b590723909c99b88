"""Dense linear algebra for few-qubit systems.

States carry an explicit list of subsystem dimensions. Subsystem 0 is the
leftmost tensor factor everywhere in the package.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-10
PSD_TOL = 1e-9


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent random stream identified by ``(seed, stream)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(stream)])))


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector on a tensor product of subsystems."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if int(np.prod(dims)) != amps.size:
            raise ValueError(f"dims {dims} do not match vector length {amps.size}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("non-finite amplitudes")
        if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized (norm {np.linalg.norm(amps)!r})")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityOperator:
        return DensityOperator._trusted(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite matrix with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        mat = _frozen(self.matrix)
        dims = tuple(int(d) for d in self.dims)
        d = int(np.prod(dims))
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("non-finite entries")
        if np.max(np.abs(mat - mat.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(mat) - 1.0) > HERMITIAN_TOL:
            raise ValueError(f"trace is {np.trace(mat).real!r}, expected 1")
        if np.linalg.eigvalsh(mat)[0] < -PSD_TOL:
            raise ValueError("matrix is not positive semidefinite")
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @classmethod
    def _trusted(cls, matrix, dims) -> DensityOperator:
        # Skips validation; for matrices produced by validated operations.
        obj = object.__new__(cls)
        mat = np.array(matrix, dtype=complex)
        mat = 0.5 * (mat + mat.conj().T)
        mat.flags.writeable = False
        object.__setattr__(obj, "matrix", mat)
        object.__setattr__(obj, "dims", tuple(int(d) for d in dims))
        return obj

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


State = Union[PureState, DensityOperator]


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if abs(np.sqrt(self.x**2 + self.y**2 + self.z**2) - 1.0) > NORM_TOL:
            raise ValueError("Bloch vector must have unit norm")

    def __neg__(self) -> BlochVector:
        return BlochVector(-self.x, -self.y, -self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)


class BellIndex(enum.IntEnum):
    PSI_MINUS = 0
    PSI_PLUS = 1
    PHI_PLUS = 2
    PHI_MINUS = 3


_S = 1 / np.sqrt(2)
_BELL_VECTORS = {
    BellIndex.PSI_MINUS: np.array([0, _S, -_S, 0], dtype=complex),
    BellIndex.PSI_PLUS: np.array([0, _S, _S, 0], dtype=complex),
    BellIndex.PHI_PLUS: np.array([_S, 0, 0, _S], dtype=complex),
    BellIndex.PHI_MINUS: np.array([_S, 0, 0, -_S], dtype=complex),
}
# rows are <bell_i| in BellIndex order
BELL_BASIS = np.array([_BELL_VECTORS[b] for b in BellIndex]).conj()


def bell_state(index: BellIndex | int) -> PureState:
    return PureState(_BELL_VECTORS[BellIndex(index)], (2, 2))


SINGLET = bell_state(BellIndex.PSI_MINUS)


def ket(*bits: int) -> PureState:
    """Computational basis state of qubits, e.g. ``ket(0, 1)`` is |01>."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(str(b) for b in bits), 2) if bits else 0] = 1.0
    return PureState(v, (2,) * len(bits))


def maximally_mixed(dims: Sequence[int]) -> DensityOperator:
    d = int(np.prod(dims))
    return DensityOperator._trusted(np.eye(d) / d, dims)


def _as_density(state: State) -> DensityOperator:
    if isinstance(state, PureState):
        return state.density()
    return state


def tensor(a: State, b: State) -> State:
    """Kronecker product; the result has the concatenated dims."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)
    if isinstance(a, DensityOperator) and isinstance(b, DensityOperator):
        return DensityOperator._trusted(np.kron(a.matrix, b.matrix), a.dims + b.dims)
    raise TypeError("tensor operands must be of the same kind")


def tensor_all(states: Iterable[State]) -> State:
    states = list(states)
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def _check_indices(indices: Iterable[int], n: int) -> list[int]:
    idx = [int(i) for i in indices]
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"subsystem index {i} out of range for {n} subsystems")
    if len(set(idx)) != len(idx):
        raise ValueError(f"repeated subsystem index in {idx}")
    return idx


def partial_trace(rho: State, keep: Iterable[int]) -> DensityOperator:
    """Trace out every subsystem not listed in ``keep``.

    Kept subsystems stay in their original order. An empty ``keep`` gives
    the 1x1 matrix holding the trace.
    """
    if isinstance(rho, PureState):
        return _pure_partial_trace(rho, keep)
    dims = rho.dims
    n = len(dims)
    keep = sorted(_check_indices(keep, n))
    t = rho.matrix.reshape(dims + dims)
    rows = list(range(n))
    cols = [i + n if i in keep else i for i in range(n)]
    out = keep + [i + n for i in keep]
    reduced = np.einsum(t, rows + cols, out)
    kept_dims = tuple(dims[i] for i in keep)
    d = int(np.prod(kept_dims)) if kept_dims else 1
    return DensityOperator._trusted(reduced.reshape(d, d), kept_dims)


def _pure_partial_trace(psi: PureState, keep: Iterable[int]) -> DensityOperator:
    # M M^dagger with M the amplitudes reshaped to (kept, traced)
    dims = psi.dims
    n = len(dims)
    keep = sorted(_check_indices(keep, n))
    rest = [i for i in range(n) if i not in keep]
    kept_dims = tuple(dims[i] for i in keep)
    d = int(np.prod(kept_dims)) if kept_dims else 1
    m = psi.amplitudes.reshape(dims).transpose(keep + rest).reshape(d, -1)
    return DensityOperator._trusted(m @ m.conj().T, kept_dims)


def permute_subsystems(rho: State, order: Sequence[int]) -> State:
    """Reorder subsystems so that new subsystem ``i`` is old ``order[i]``."""
    n = len(rho.dims)
    order = _check_indices(order, n)
    if len(order) != n:
        raise ValueError("order must list every subsystem once")
    dims = tuple(rho.dims[i] for i in order)
    if isinstance(rho, PureState):
        t = rho.amplitudes.reshape(rho.dims).transpose(order)
        return PureState(t.reshape(-1), dims)
    t = rho.matrix.reshape(rho.dims + rho.dims).transpose(order + [i + n for i in order])
    d = rho.dim
    return DensityOperator._trusted(t.reshape(d, d), dims)


def embed_operator(op: np.ndarray, targets: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Full-space matrix of ``op`` acting on ``targets`` (identity elsewhere).

    ``op`` acts on the targets taken in the listed order; it must be square.
    """
    dims = tuple(dims)
    n = len(dims)
    targets = _check_indices(targets, n)
    rest = [i for i in range(n) if i not in targets]
    d_rest = int(np.prod([dims[i] for i in rest])) if rest else 1
    full = np.kron(np.asarray(op, dtype=complex), np.eye(d_rest))
    order = targets + rest
    inv = [order.index(i) for i in range(n)]
    shape = tuple(dims[i] for i in order)
    t = full.reshape(shape + shape).transpose(inv + [i + n for i in inv])
    d = int(np.prod(dims))
    return t.reshape(d, d)


def apply_unitary(rho: State, u: np.ndarray, targets: Sequence[int]) -> DensityOperator:
    rho = _as_density(rho)
    full = embed_operator(u, targets, rho.dims)
    return DensityOperator._trusted(full @ rho.matrix @ full.conj().T, rho.dims)


def hermitian_eigenvalues(m) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix in descending order."""
    if isinstance(m, DensityOperator):
        m = m.matrix
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigvalsh(m)[::-1]


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return haar_random_unitaries(dim, 1, rng)[0]


def haar_random_unitaries(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Batch of ``count`` Haar unitaries, shape ``(count, dim, dim)``."""
    z = (rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=1, axis2=2)
    phases = diag / np.abs(diag)
    return q * phases[:, None, :]


def random_unit_vectors(count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on the unit sphere, shape ``(count, 3)``."""
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    d = int(np.prod(dims))
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v), tuple(dims))


def random_density(dims: Sequence[int], rng: np.random.Generator) -> DensityOperator:
    """Mixed state obtained by tracing out a copy of the system from a Haar pure state."""
    dims = tuple(dims)
    psi = random_pure_state(dims + dims, rng)
    return partial_trace(psi, range(len(dims)))


def bloch_states(r: np.ndarray) -> np.ndarray:
    """Vectorized ``bloch_to_state``: rows of unit vectors to rows of amplitudes."""
    r = np.atleast_2d(np.asarray(r, dtype=float))
    theta = np.arccos(np.clip(r[:, 2], -1.0, 1.0))
    phi = np.arctan2(r[:, 1], r[:, 0])
    return np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=1)


def bloch_to_state(r: BlochVector | Sequence[float]) -> PureState:
    """Qubit state whose Bloch vector is ``r``; +z maps to |0>."""
    if not isinstance(r, BlochVector):
        r = BlochVector(*map(float, r))
    return PureState(bloch_states(r.as_array())[0], (2,))


def pure_fidelity(rho: State, psi: PureState) -> float:
    """<psi|rho|psi>."""
    rho = _as_density(rho)
    if rho.dims != psi.dims:
        raise ValueError(f"dimension mismatch: {rho.dims} vs {psi.dims}")
    val = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)
    return float(np.clip(val.real, 0.0, 1.0))


def bell_diagonal(weights: Sequence[float]) -> DensityOperator:
    """Two-qubit mixture of Bell projectors, weights in BellIndex order."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (4,) or np.any(w < -PSD_TOL) or abs(w.sum() - 1) > NORM_TOL:
        raise ValueError("weights must be a probability vector of length 4")
    mat = sum(w[b] * np.outer(_BELL_VECTORS[b], _BELL_VECTORS[b].conj()) for b in BellIndex)
    return DensityOperator._trusted(mat, (2, 2))


def bell_weights(rho: State) -> np.ndarray:
    """Overlaps of a two-qubit state with the Bell states, BellIndex order."""
    rho = _as_density(rho)
    if rho.dims != (2, 2):
        raise ValueError("expected a two-qubit state")
    return np.real(np.einsum("ij,jk,ik->i", BELL_BASIS, rho.matrix, BELL_BASIS.conj()))
