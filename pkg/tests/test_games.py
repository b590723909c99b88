import warnings

import numpy as np
import pytest

from qicausality.bounds import naive_p, solve_p_prime, teleport_p, version_convert
from qicausality.games import (
    GameConfig,
    GameResult,
    PairedIC1,
    RandomGuess,
    UnsupportedParameter,
    channel_strategy,
    naive_strategy,
    run_ic2,
    run_qic_v1,
    run_qic_v2,
    singlet_fidelities,
    teleportation_strategy,
    version_relation_check,
)
from qicausality.games.qic import TeleportationStrategy
from qicausality.qcore import BellIndex, bell_state, bell_weights


def cfg(n, m, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return GameConfig(n, m, **kw)


def mc(n, m, version=1, trials=100_000, seed=0):
    return cfg(n, m, trials=trials, seed=seed, version=version, mode="monte_carlo")


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(n=0, m=0), dict(n=3, m=4), dict(n=3, m=1, trials=0), dict(n=3, m=1, version=3), dict(n=3, m=1, mode="mc")],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GameConfig(**kwargs)

    def test_flags_reference_runs(self):
        with pytest.warns(UserWarning):
            GameConfig(3, 3)

    def test_result_constructors(self):
        assert GameResult.exact(0.4) == GameResult(0.4, 0.0, 0, "exact")
        res = GameResult.from_counts(25, 100)
        assert res.p_hat == 0.25 and res.std_err == pytest.approx(np.sqrt(0.25 * 0.75 / 100))


class TestVersionOneExact:
    def test_naive_example(self):
        assert run_qic_v1(naive_strategy(4, 1), cfg(4, 1)).p_hat == pytest.approx(0.4375, abs=1e-12)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_naive_formula(self, n):
        for m in range(0, n + 1):
            assert run_qic_v1(naive_strategy(n, m), cfg(n, m)).p_hat == pytest.approx(naive_p(m, n), abs=1e-9)

    def test_full_depolarizing(self):
        assert run_qic_v1(channel_strategy([0.25] * 5), cfg(5, 1)).p_hat == pytest.approx(0.25)

    def test_channel_mean(self):
        lams = [0.3, 0.9, 0.5]
        assert run_qic_v1(channel_strategy(lams), cfg(3, 1)).p_hat == pytest.approx(np.mean(lams))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_teleportation_equals_formula_and_ic2(self, n):
        strat = teleportation_strategy(PairedIC1(n))
        p = run_qic_v1(strat, cfg(n, 1)).p_hat
        assert p == pytest.approx(teleport_p(n), abs=1e-9)
        assert p == pytest.approx(run_ic2(PairedIC1(n), cfg(n, 1)).p_hat, abs=1e-9)

    def test_teleportation_n2_value(self):
        assert run_qic_v1(teleportation_strategy(PairedIC1(2)), cfg(2, 1)).p_hat == pytest.approx(0.7285533906, abs=1e-9)

    def test_teleportation_failures_leave_other_bell_states(self):
        # each omega_k is Bell diagonal with singlet weight Q; failures land on the other Bell states
        strat = teleportation_strategy(PairedIC1(2))
        q = run_ic2(PairedIC1(2), cfg(2, 1)).p_hat
        for k in range(2):
            omega = strat.omega(k)
            w = bell_weights(omega)
            assert w[0] == pytest.approx(q, abs=1e-9)
            assert w.sum() == pytest.approx(1.0, abs=1e-9)
            offdiag = omega.matrix - sum(w[b] * np.outer(v, v.conj()) for b, v in enumerate(_bell_vectors()))
            assert np.abs(offdiag).max() < 1e-9

    def test_random_guess_teleportation(self):
        assert run_qic_v1(teleportation_strategy(RandomGuess(3)), cfg(3, 1)).p_hat == pytest.approx(0.25)

    def test_teleportation_needs_m1(self):
        with pytest.raises(UnsupportedParameter):
            TeleportationStrategy(PairedIC1(2), m=2)

    @pytest.mark.parametrize(
        "strategy, n, m",
        [(naive_strategy(4, 1), 4, 2), (naive_strategy(4, 1), 5, 1), (channel_strategy([0.5] * 3), 4, 1)],
    )
    def test_config_mismatch(self, strategy, n, m):
        with pytest.raises(ValueError):
            run_qic_v1(strategy, cfg(n, m))

    def test_singlet_fidelities(self):
        np.testing.assert_allclose(singlet_fidelities(naive_strategy(3, 1)), [1, 0.25, 0.25], atol=1e-12)


def _bell_vectors():
    return [bell_state(b).amplitudes for b in BellIndex]


class TestBoundRespected:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_achievable_below_p_prime(self, n):
        for m in range(1, n):
            assert run_qic_v1(naive_strategy(n, m), cfg(n, m)).p_hat <= solve_p_prime(m, n) + 1e-9
        assert run_qic_v1(teleportation_strategy(PairedIC1(n)), cfg(n, 1)).p_hat <= solve_p_prime(1, n) + 1e-9


BUILT_INS = [
    ("naive-4-1", lambda: naive_strategy(4, 1), 4, 1),
    ("naive-6-2", lambda: naive_strategy(6, 2), 6, 2),
    ("channel-5", lambda: channel_strategy([0.25, 0.4, 0.7, 1.0, 0.55]), 5, 1),
    ("channel-6", lambda: channel_strategy([0.9] * 6), 6, 1),
    ("teleport-2", lambda: teleportation_strategy(PairedIC1(2)), 2, 1),
    ("teleport-3", lambda: teleportation_strategy(PairedIC1(3)), 3, 1),
    ("teleport-4", lambda: teleportation_strategy(PairedIC1(4)), 4, 1),
]


class TestMonteCarlo:
    @pytest.mark.parametrize("name, make, n, m", BUILT_INS, ids=[b[0] for b in BUILT_INS])
    @pytest.mark.parametrize("version", [1, 2])
    def test_agrees_with_exact(self, name, make, n, m, version):
        strat = make()
        run = run_qic_v1 if version == 1 else run_qic_v2
        exact = run(strat, cfg(n, m, version=version)).p_hat
        res = run(strat, mc(n, m, version=version, seed=17))
        assert res.trials == 100_000
        assert abs(res.p_hat - exact) <= 4 * res.std_err

    def test_reproducible(self):
        strat = teleportation_strategy(PairedIC1(3))
        a = run_qic_v2(strat, mc(3, 1, version=2, trials=20_000, seed=5))
        b = run_qic_v2(strat, mc(3, 1, version=2, trials=20_000, seed=5))
        assert a == b

    def test_worker_count_does_not_matter(self):
        strat = naive_strategy(4, 1)
        one = run_qic_v1(strat, mc(4, 1, trials=50_000, seed=8))
        four = run_qic_v1(strat, mc(4, 1, trials=50_000, seed=8), workers=4)
        assert one == four

    def test_seed_changes_result(self):
        strat = naive_strategy(4, 1)
        assert run_qic_v1(strat, mc(4, 1, trials=20_000, seed=1)) != run_qic_v1(strat, mc(4, 1, trials=20_000, seed=2))


class TestVersionTwo:
    def test_perfect(self):
        res = run_qic_v2(naive_strategy(3, 3), mc(3, 3, version=2, trials=10_000))
        assert res.p_hat == 1.0

    def test_naive(self):
        res = run_qic_v2(naive_strategy(4, 1), mc(4, 1, version=2))
        assert abs(res.p_hat - 0.625) <= 3 * res.std_err

    def test_fully_depolarizing(self):
        res = run_qic_v2(channel_strategy([0.25] * 3), mc(3, 1, version=2))
        assert abs(res.p_hat - 0.5) <= 3 * res.std_err

    @pytest.mark.parametrize("name, make, n, m", BUILT_INS, ids=[b[0] for b in BUILT_INS])
    def test_exact_relation(self, name, make, n, m):
        strat = make()
        p1 = run_qic_v1(strat, cfg(n, m)).p_hat
        assert run_qic_v2(strat, cfg(n, m, version=2)).p_hat == pytest.approx(version_convert(p1), abs=1e-9)


class TestVersionRelation:
    def test_naive_3_1(self):
        rep = version_relation_check(naive_strategy(3, 1), mc(3, 1, version=2, seed=3))
        assert rep.p_version1 == pytest.approx(0.5)
        assert rep.p_expected == pytest.approx(2 / 3)
        assert rep.holds(3.0)

    def test_identity_channel(self):
        rep = version_relation_check(channel_strategy([1.0] * 2), mc(2, 1, version=2))
        assert rep.p_hat == 1.0 and rep.holds()

    def test_full_depolarizing(self):
        rep = version_relation_check(channel_strategy([0.25] * 2), mc(2, 1, version=2, seed=1))
        assert rep.p_expected == pytest.approx(0.5)
        assert rep.holds(3.0)
