"""Entropic quantities, all in bits."""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from .qcore import PSD_TOL, DensityOperator, PureState, _as_density, hermitian_eigenvalues, partial_trace

LOG2_3 = float(np.log2(3.0))

Cut = Union[int, tuple[Sequence[int], Sequence[int]]]


def shannon_entropy(probs) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p))) + 0.0


def von_neumann_entropy(rho) -> float:
    """-sum(l log2 l) over the spectrum, with eigenvalues in [-1e-9, 0) clamped to 0."""
    if isinstance(rho, PureState):
        return 0.0
    mat = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    evals = hermitian_eigenvalues(mat)
    if evals[-1] < -PSD_TOL:
        raise ValueError("matrix has a significantly negative eigenvalue")
    return max(shannon_entropy(np.clip(evals, 0.0, None)), 0.0)


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary entropy argument {x!r} outside [0, 1]")
    return shannon_entropy([x, 1.0 - x])


def _resolve_cut(cut: Cut, n: int) -> tuple[list[int], list[int]]:
    if isinstance(cut, (int, np.integer)):
        if not 0 < cut < n:
            raise ValueError(f"split point {cut} does not separate {n} subsystems")
        return list(range(cut)), list(range(cut, n))
    left, right = (list(map(int, side)) for side in cut)
    if not left or not right:
        raise ValueError("both sides of the cut must be non-empty")
    if set(left) & set(right):
        raise ValueError("cut sides overlap")
    if any(not 0 <= i < n for i in left + right):
        raise ValueError("cut refers to a missing subsystem")
    return left, right


def mutual_information(rho, cut: Cut, entropy=von_neumann_entropy) -> float:
    """I(L:R) = S(L) + S(R) - S(LR).

    ``cut`` is either a split point (subsystems ``< cut`` versus the rest) or
    a pair of disjoint index groups; subsystems in neither group are traced out.
    """
    rho = _as_density(rho)
    left, right = _resolve_cut(cut, len(rho.dims))
    s_l = entropy(partial_trace(rho, left))
    s_r = entropy(partial_trace(rho, right))
    s_lr = entropy(partial_trace(rho, left + right))
    return s_l + s_r - s_lr


def omega_entropy(p: float) -> float:
    """Entropy of the Bell-diagonal state with singlet weight ``p`` and the rest split evenly."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"weight {p!r} outside [0, 1]")
    return binary_entropy(p) + (1.0 - p) * LOG2_3
