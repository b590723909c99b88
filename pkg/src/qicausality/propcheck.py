"""Randomized checks of the entropic inequalities behind the 2m bound.

Every suite draws trial ``t`` from the stream ``make_rng(seed, t)``, so any
reported violation can be rebuilt from ``(seed, trial)`` alone with
:func:`replay`. Each trial yields labelled pairs ``(left, right)`` that must
satisfy ``left <= right``; a pair with ``left > right + tolerance`` becomes a
:class:`ViolationReport`.

All entropy evaluations go through one ``entropy`` callable so the harness can
be fed a deliberately broken entropy to prove it notices.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .channels import apply_channel, random_channel
from .entropy import von_neumann_entropy
from .qcore import (
    SINGLET,
    DensityOperator,
    _as_density,
    bell_diagonal,
    make_rng,
    maximally_mixed,
    partial_trace,
    permute_subsystems,
    pure_fidelity,
    random_density,
    random_pure_state,
    tensor,
    tensor_all,
)

Entropy = Callable[[DensityOperator], float]
Check = tuple[str, float, float]


@dataclass(frozen=True)
class FuzzConfig:
    trials: int = 1000
    seed: int = 0
    max_subsystem_dim: int = 4
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 2 <= self.max_subsystem_dim <= 4:
            raise ValueError("max_subsystem_dim must be in [2, 4]")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")


@dataclass(frozen=True)
class ViolationReport:
    suite: str
    trial: int
    label: str
    left: float
    right: float
    seed: int

    @property
    def fingerprint(self) -> tuple[int, int]:
        return (self.seed, self.trial)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fingerprint"] = list(self.fingerprint)
        return d


def _S(rho, keep: Sequence[int], entropy: Entropy) -> float:
    return entropy(partial_trace(rho, keep))


def _mi(rho, left: Sequence[int], right: Sequence[int], entropy: Entropy) -> float:
    left, right = list(left), list(right)
    return _S(rho, left, entropy) + _S(rho, right, entropy) - _S(rho, left + right, entropy)


def delta_i(rho_cbt, entropy: Entropy = von_neumann_entropy) -> float:
    """I(C:BT) - I(C:B) for a state ordered (C, B, T)."""
    return _mi(rho_cbt, [0], [1, 2], entropy) - _mi(rho_cbt, [0], [1], entropy)


def _dims(rng: np.random.Generator, cfg: FuzzConfig, count: int) -> tuple[int, ...]:
    return tuple(int(d) for d in rng.integers(2, cfg.max_subsystem_dim + 1, size=count))


# qicchain


def _qic_chain_trial(rng: np.random.Generator, cfg: FuzzConfig, entropy: Entropy) -> list[Check]:
    dims = _dims(rng, cfg, 4)
    rho = random_density(dims[:3], rng)
    d_t = dims[2]
    ch = random_channel(dims[1] * d_t, dims[3], rng)
    after = apply_channel(ch, rho, [1, 2])
    s_b, s_t = _S(rho, [1], entropy), _S(rho, [2], entropy)
    i_cb = _mi(rho, [0], [1], entropy)
    i_cbt = _mi(rho, [0], [1, 2], entropy)
    i_cb_after = _mi(after, [0], [1], entropy)
    return [
        ("subadditivity S(BT) <= S(B)+S(T)", _S(rho, [1, 2], entropy), s_b + s_t),
        ("triangle -S(CBT) <= S(T)-S(CB)", -_S(rho, [0, 1, 2], entropy), s_t - _S(rho, [0, 1], entropy)),
        ("data processing I(C:B') <= I(C:BT)", i_cb_after, i_cbt),
        ("chain I(C:BT) <= I(C:B)+2S(T)", i_cbt, i_cb + 2 * s_t),
        ("delta I(C:B) <= 2 log2 dim T", i_cb_after - i_cb, 2 * np.log2(d_t)),
    ]


def check_qic_chain(cfg: FuzzConfig, entropy: Entropy = von_neumann_entropy, workers: int = 1) -> list[ViolationReport]:
    """Random C (x) B (x) T states and random channels BT -> B'."""
    return _run("qicchain", _qic_chain_trial, cfg, entropy, workers)


# classical


def classical_state(probs: Sequence[float], blocks: Sequence[DensityOperator]) -> DensityOperator:
    """sum_x p_x (CB)_x (x) |x><x|_T, ordered (C, B, T)."""
    probs = np.asarray(probs, dtype=float)
    d_t = len(probs)
    dims = blocks[0].dims + (d_t,)
    mat = np.zeros((blocks[0].dim * d_t,) * 2, dtype=complex)
    for x, (p, block) in enumerate(zip(probs, blocks)):
        proj = np.zeros((d_t, d_t))
        proj[x, x] = 1.0
        mat += p * np.kron(block.matrix, proj)
    return DensityOperator(mat, dims)


def classical_copy_state() -> DensityOperator:
    """Uniform bit x held by both C and T, B an unrelated maximally mixed qubit."""
    blocks = []
    for x in (0, 1):
        c = np.zeros((2, 2))
        c[x, x] = 1.0
        blocks.append(tensor(DensityOperator(c, (2,)), maximally_mixed((2,))))
    return classical_state([0.5, 0.5], blocks)


def _classical_trial(rng: np.random.Generator, cfg: FuzzConfig, entropy: Entropy) -> list[Check]:
    max_bits = int(np.log2(cfg.max_subsystem_dim))
    m = int(rng.integers(1, max_bits + 1))
    d_c, d_b, d_out = _dims(rng, cfg, 3)
    probs = rng.dirichlet(np.ones(2**m))
    blocks = [random_density((d_c, d_b), rng) for _ in range(2**m)]
    rho = classical_state(probs, blocks)
    ch = random_channel(d_b * 2**m, d_out, rng)
    after = apply_channel(ch, rho, [1, 2])
    i_cb = _mi(rho, [0], [1], entropy)
    return [
        ("classical T: S(CB) <= S(CBT)", _S(rho, [0, 1], entropy), _S(rho, [0, 1, 2], entropy)),
        ("classical T: delta I(C:BT) <= m", _mi(rho, [0], [1, 2], entropy) - i_cb, float(m)),
        ("classical T: delta I(C:B') <= m", _mi(after, [0], [1], entropy) - i_cb, float(m)),
    ]


def check_classical_bound(cfg: FuzzConfig, entropy: Entropy = von_neumann_entropy, workers: int = 1) -> list[ViolationReport]:
    """States whose message register T holds m classical bits."""
    return _run("classical", _classical_trial, cfg, entropy, workers)


# sumbound


@dataclass(frozen=True)
class SumBoundReport:
    terms: tuple[float, ...]
    total: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.total <= self.bound + 1e-9


def _omega_entropy_any(lam: float, entropy: Entropy) -> float:
    rest = (1.0 - lam) / 3.0
    return entropy(bell_diagonal([lam, rest, rest, rest]))


def check_sum_bound(strategy, n: int, m: int, entropy: Entropy = von_neumann_entropy) -> SumBoundReport:
    """Sum over k of I(C_k:B_k) = 2 - S(omega_k) against 2m for a channel-form strategy."""
    lambdas = tuple(strategy.lambdas)
    if len(lambdas) != n:
        raise ValueError(f"strategy has {len(lambdas)} channels, expected n={n}")
    terms = tuple(2.0 - _omega_entropy_any(lam, entropy) for lam in lambdas)
    return SumBoundReport(terms, float(sum(terms)), 2.0 * m)


def _sum_bound_trial(rng: np.random.Generator, cfg: FuzzConfig, entropy: Entropy) -> list[Check]:
    # C: n qubits, each a singlet with Alice's A_k; Alice and Bob share a pure E_A E_B
    n = int(rng.integers(2, 4))
    d_e = int(rng.integers(1, 3))
    state = tensor_all([SINGLET] * n)
    # qubits (C_0, A_0, C_1, A_1, ...) -> (C_0..C_{n-1}, A_0..A_{n-1})
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    rho = permute_subsystems(state.density(), order)
    rho = DensityOperator._trusted(rho.matrix, (2**n, 2**n))
    if d_e > 1:
        rho = tensor(rho, random_pure_state((d_e, d_e), rng).density())
    else:
        rho = tensor(rho, DensityOperator(np.ones((1, 1)), (1, 1)))
    # (C, A, E_A, E_B) -> encoder on A E_A gives (C, T, E_B)
    enc = random_channel(2**n * d_e, 2, rng)
    after = apply_channel(enc, rho, [1, 2])
    i_ct = _mi(after, [0], [1, 2], entropy)
    checks: list[Check] = [("holevo-type I(C:T E_B) <= 2m", i_ct, 2.0)]
    direct = []
    twirled = []
    for k in range(n):
        dec = random_channel(2 * d_e, 2, rng)
        out = apply_channel(dec, after, [1, 2])
        c_k = _split_qubit(out, n, k)
        direct.append(_mi(c_k, [0], [1], entropy))
        lam = pure_fidelity(c_k, SINGLET)
        twirled.append(2.0 - _omega_entropy_any(lam, entropy))
        checks.append((f"twirl I(omega_{k}) <= I(C_{k}:B_{k})", twirled[-1], direct[-1]))
    checks.append(("sum_k I(C_k:B_k) <= I(C:T E_B)", float(sum(direct)), i_ct))
    checks.append(("sum_k I(C_k:B_k) <= 2m", float(sum(direct)), 2.0))
    checks.append(("sum_k 2-S(omega_k) <= 2m", float(sum(twirled)), 2.0))
    return checks


def _split_qubit(rho: DensityOperator, n: int, k: int) -> DensityOperator:
    # (C as 2^n, B_k) -> (C_k, B_k)
    full = DensityOperator._trusted(rho.matrix, (2,) * n + (rho.dims[1],))
    return partial_trace(full, [k, n])


def check_sum_bound_fuzz(cfg: FuzzConfig, entropy: Entropy = von_neumann_entropy, workers: int = 1) -> list[ViolationReport]:
    """Random one-qubit encoders with shared entanglement and random per-k decoders."""
    return _run("sumbound", _sum_bound_trial, cfg, entropy, workers)


# achievability


@dataclass(frozen=True)
class AchievabilityReport:
    """Slack in each inequality that must be tight for delta I = 2 log2 dim T.

    ``subadditivity`` is S(B)+S(T)-S(BT), ``triangle`` is S(CBT)+S(T)-S(CB) and
    ``mixedness`` is log2 dim T - S(T); all are non-negative.
    """

    subadditivity: float
    triangle: float
    mixedness: float
    tolerance: float

    @property
    def residuals(self) -> tuple[float, float, float]:
        return (self.subadditivity, self.triangle, self.mixedness)

    @property
    def equality(self) -> bool:
        return all(abs(r) <= self.tolerance for r in self.residuals)


def check_achievability(rho_cbt, tolerance: float = 1e-8, entropy: Entropy = von_neumann_entropy) -> AchievabilityReport:
    rho = _as_density(rho_cbt)
    if len(rho.dims) != 3:
        raise ValueError("need a state on exactly three subsystems (C, B, T)")
    s_t = _S(rho, [2], entropy)
    return AchievabilityReport(
        subadditivity=_S(rho, [1], entropy) + s_t - _S(rho, [1, 2], entropy),
        triangle=_S(rho, [0, 1, 2], entropy) + s_t - _S(rho, [0, 1], entropy),
        mixedness=float(np.log2(rho.dims[2])) - s_t,
        tolerance=tolerance,
    )


def naive_state(m: int, b_dim: int = 2) -> DensityOperator:
    """T is m singlet halves whose partners sit in C; B is maximally mixed and uncorrelated."""
    if m < 1:
        raise ValueError("m must be >= 1")
    pairs = tensor_all([SINGLET] * m).density()
    order = [2 * k for k in range(m)] + [2 * k + 1 for k in range(m)]
    ct = permute_subsystems(pairs, order)
    ct = DensityOperator._trusted(ct.matrix, (2**m, 2**m))
    # (C, T, B) -> (C, B, T)
    return permute_subsystems(tensor(ct, maximally_mixed((b_dim,))), [0, 2, 1])


def _achievability_trial(rng: np.random.Generator, cfg: FuzzConfig, entropy: Entropy) -> list[Check]:
    dims = _dims(rng, cfg, 3)
    rho = random_pure_state(dims, rng) if rng.random() < 0.5 else random_density(dims, rng)
    rep = check_achievability(rho, cfg.tolerance, entropy)
    names = ("subadditivity", "triangle", "mixedness")
    return [(f"{name} residual >= 0", -r, 0.0) for name, r in zip(names, rep.residuals)]


def check_achievability_fuzz(cfg: FuzzConfig, entropy: Entropy = von_neumann_entropy, workers: int = 1) -> list[ViolationReport]:
    """Residuals of random tripartite states must be non-negative."""
    return _run("achievability", _achievability_trial, cfg, entropy, workers)


# harness

SUITES: dict[str, Callable] = {
    "qicchain": _qic_chain_trial,
    "classical": _classical_trial,
    "sumbound": _sum_bound_trial,
    "achievability": _achievability_trial,
}


def _run(suite: str, trial_fn, cfg: FuzzConfig, entropy: Entropy, workers: int) -> list[ViolationReport]:
    def job(t: int) -> list[ViolationReport]:
        checks = trial_fn(make_rng(cfg.seed, t), cfg, entropy)
        return [
            ViolationReport(suite, t, label, float(left), float(right), cfg.seed)
            for label, left, right in checks
            if not left <= right + cfg.tolerance
        ]

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            per_trial = list(pool.map(job, range(cfg.trials)))
    else:
        per_trial = [job(t) for t in range(cfg.trials)]
    return [v for batch in per_trial for v in batch]


def run_suite(name: str, cfg: FuzzConfig, entropy: Entropy = von_neumann_entropy, workers: int = 1) -> list[ViolationReport]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return _run(name, SUITES[name], cfg, entropy, workers)


def replay(suite: str, cfg: FuzzConfig, trial: int, entropy: Entropy = von_neumann_entropy) -> list[Check]:
    """Rebuild trial ``trial`` and return every (label, left, right) it checks."""
    return SUITES[suite](make_rng(cfg.seed, trial), cfg, entropy)


def corrupted_entropy(rho) -> float:
    """Sign-flipped entropy; only for proving the harness reports violations."""
    return -von_neumann_entropy(rho)


__all__ = [
    "FuzzConfig",
    "ViolationReport",
    "SumBoundReport",
    "AchievabilityReport",
    "check_qic_chain",
    "check_classical_bound",
    "check_sum_bound",
    "check_sum_bound_fuzz",
    "check_achievability",
    "check_achievability_fuzz",
    "classical_state",
    "classical_copy_state",
    "naive_state",
    "delta_i",
    "run_suite",
    "replay",
    "corrupted_entropy",
    "SUITES",
]
