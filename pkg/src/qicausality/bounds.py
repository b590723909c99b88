"""Closed-form success probabilities and the entropic upper bound on P."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .entropy import omega_entropy

SOLVER_TOL = 1e-12
SOLVER_MAX_ITER = 200


def _check_mn(m: int, n: int) -> None:
    if n < 1 or not 0 <= m <= n:
        raise ValueError(f"need n >= 1 and 0 <= m <= n, got m={m}, n={n}")


def naive_p(m: int, n: int) -> float:
    """Forward m of the n qubits, return |0> otherwise: (1 + 3m/n) / 4."""
    _check_mn(m, n)
    return float((1 + 3 * Fraction(m, n)) / 4)


def teleport_p(n: int) -> float:
    """Teleportation strategy with paired EARACs: (1 + n^{-1/2})^2 / 4."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (1 + n**-0.5) ** 2 / 4


def q_prime(n: int) -> float:
    """Upper bound on IC-2 success for nonlocal strategies: (1 + 3 n^{-1/2}) / 4."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (1 + 3 * n**-0.5) / 4


def version_convert(p: float) -> float:
    """Version II success probability from version I: (1 + 2P) / 3."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    return (1 + 2 * p) / 3


def max_root(target: float, tol: float = SOLVER_TOL, max_iter: int = SOLVER_MAX_ITER) -> float:
    """Largest P with omega_entropy(P) == target, for target in [0, 2].

    omega_entropy is strictly decreasing on [1/4, 1] from 2 to 0 and the
    largest root always lies there, so plain bisection on that interval.
    """
    if not 0.0 <= target <= 2.0:
        raise ValueError(f"target entropy {target!r} outside [0, 2]")
    lo, hi = 0.25, 1.0
    if omega_entropy(lo) - target <= 0.0:
        return lo
    if omega_entropy(hi) - target >= 0.0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        g = omega_entropy(mid) - target
        if g == 0.0:
            return mid
        if g > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def entropy_target(m: int, n: int) -> float:
    """2 (1 - m/n), with the ratio reduced exactly first."""
    _check_mn(m, n)
    return float(2 * (1 - Fraction(m, n)))


def solve_p_prime(m: int, n: int) -> float:
    """Upper bound P' on the QIC success probability for an m-qubit message."""
    return max_root(entropy_target(m, n))


@dataclass(frozen=True)
class BoundResult:
    n: int
    m: int
    p_naive: float
    p_teleport: float
    p_prime: float
    q_prime: float


def bounds(m: int, n: int) -> BoundResult:
    return BoundResult(n, m, naive_p(m, n), teleport_p(n), solve_p_prime(m, n), q_prime(n))


def pprime_vs_qprime_scan(n_range: Iterable[int], m: int = 1) -> list[tuple[int, float, float, bool]]:
    """(n, P', Q', P' < Q') for each n."""
    ns = list(n_range)
    if ns != sorted(ns):
        raise ValueError("n_range must be ascending")
    rows = []
    for n in ns:
        pp, qp = solve_p_prime(m, n), q_prime(n)
        rows.append((n, pp, qp, pp < qp))
    return rows
