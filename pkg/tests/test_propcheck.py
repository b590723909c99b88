import numpy as np
import pytest

from qicausality.channels import compose, embed_into_register, random_channel, twirl
from qicausality.entropy import omega_entropy, von_neumann_entropy
from qicausality.games import GameConfig, PairedIC1, channel_strategy, run_ic2
from qicausality.propcheck import (
    SUITES,
    FuzzConfig,
    check_achievability,
    check_achievability_fuzz,
    check_classical_bound,
    check_qic_chain,
    check_sum_bound,
    check_sum_bound_fuzz,
    classical_copy_state,
    classical_state,
    corrupted_entropy,
    delta_i,
    naive_state,
    replay,
    run_suite,
)
from qicausality.qcore import (
    SINGLET,
    maximally_mixed,
    permute_subsystems,
    random_density,
    random_pure_state,
    tensor,
)

class TestConfig:
    @pytest.mark.parametrize("kwargs", [dict(trials=0), dict(max_subsystem_dim=5), dict(max_subsystem_dim=1), dict(tolerance=-1)])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            FuzzConfig(**kwargs)

    def test_defaults(self):
        cfg = FuzzConfig()
        assert (cfg.trials, cfg.max_subsystem_dim, cfg.tolerance) == (1000, 4, 1e-8)


class TestQicChain:
    def test_singlet_half_equality(self):
        # C and B trivial, then C holds the partner of T
        rho = permute_subsystems(tensor(SINGLET.density(), maximally_mixed((1,))), [0, 2, 1])
        assert delta_i(rho) == pytest.approx(2.0, abs=1e-12)

    def test_product_is_zero(self, rng):
        rho = tensor(tensor(random_density((2,), rng), random_density((3,), rng)), random_density((2,), rng))
        assert delta_i(rho) == pytest.approx(0.0, abs=1e-10)

    def test_random_trials_clean(self):
        assert check_qic_chain(FuzzConfig(300, seed=1)) == []

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_every_max_dim(self, dim):
        assert check_qic_chain(FuzzConfig(50, seed=dim, max_subsystem_dim=dim)) == []

    def test_corrupted_entropy_is_caught(self):
        found = check_qic_chain(FuzzConfig(10), entropy=corrupted_entropy)
        assert found
        assert found[0].suite == "qicchain"


class TestClassical:
    def test_copy_saturates(self):
        assert delta_i(classical_copy_state()) == pytest.approx(1.0, abs=1e-12)

    def test_independent_register(self, rng):
        cb = random_density((2, 2), rng)
        rho = classical_state([0.3, 0.7], [cb, cb])
        assert delta_i(rho) == pytest.approx(0.0, abs=1e-10)

    def test_random_trials_clean(self):
        assert check_classical_bound(FuzzConfig(300, seed=2)) == []

    def test_block_validation(self, rng):
        with pytest.raises(ValueError):
            classical_state([0.5, 0.6], [random_density((2, 2), rng)] * 2)


class TestSumBound:
    def test_naive_saturates(self):
        for n, m in [(4, 1), (5, 2), (3, 3)]:
            lams = [1.0] * m + [0.25] * (n - m)
            rep = check_sum_bound(channel_strategy(lams), n, m)
            assert rep.total == pytest.approx(2 * m, abs=1e-9)
            assert rep.holds

    def test_fully_depolarizing(self):
        rep = check_sum_bound(channel_strategy([0.25] * 4), 4, 1)
        assert rep.total == pytest.approx(0.0, abs=1e-12)

    def test_teleportation_earac(self):
        q = run_ic2(PairedIC1(2), GameConfig(2, 1)).p_hat
        rep = check_sum_bound(channel_strategy([q, q]), 2, 1)
        assert rep.total == pytest.approx(2 * (2 - omega_entropy(q)), abs=1e-9)
        assert rep.holds

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            check_sum_bound(channel_strategy([0.5, 0.5]), 3, 1)

    def test_random_trials_clean(self):
        assert check_sum_bound_fuzz(FuzzConfig(200, seed=3)) == []

    def test_twirled_random_channels(self, rng):
        # per-qubit twirl parameters of random one-qubit messages obey the sum bound
        for _ in range(20):
            n = 3
            enc = random_channel(2**n, 2, rng)
            decs = [random_channel(2, 2, rng) for _ in range(n)]
            lams = [twirl(compose(compose(embed_into_register(n, k), enc), decs[k])) for k in range(n)]
            assert check_sum_bound(channel_strategy(lams), n, 1).holds


class TestAchievability:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_naive_state_equality(self, m):
        rho = naive_state(m)
        rep = check_achievability(rho)
        assert rep.equality
        np.testing.assert_allclose(rep.residuals, 0.0, atol=1e-9)
        assert delta_i(rho) == pytest.approx(2 * m, abs=1e-9)

    def test_random_pure_nonnegative(self, rng):
        residuals = []
        for _ in range(100):
            rep = check_achievability(random_pure_state((2, 2, 2), rng))
            assert min(rep.residuals) >= -1e-9
            residuals.append(max(rep.residuals))
        assert np.median(residuals) > 0.01

    def test_product_maximally_mixed_t(self, rng):
        rho = tensor(random_density((2, 2), rng), maximally_mixed((2,)))
        rep = check_achievability(rho)
        assert rep.mixedness == pytest.approx(0.0, abs=1e-12)
        assert rep.subadditivity == pytest.approx(0.0, abs=1e-10)
        assert rep.triangle > 0.1
        assert not rep.equality

    def test_needs_three_parts(self):
        with pytest.raises(ValueError):
            check_achievability(SINGLET)

    def test_fuzz_clean(self):
        assert check_achievability_fuzz(FuzzConfig(200, seed=4)) == []


class TestHarness:
    def test_suite_names(self):
        assert sorted(SUITES) == ["achievability", "classical", "qicchain", "sumbound"]

    def test_unknown_suite(self):
        with pytest.raises(KeyError):
            run_suite("nope", FuzzConfig(1))

    @pytest.mark.parametrize("suite", sorted(SUITES))
    def test_replay_bitwise(self, suite):
        cfg = FuzzConfig(20, seed=11)
        found = run_suite(suite, cfg, entropy=corrupted_entropy)
        assert found
        for v in found[:5]:
            checks = {label: (left, right) for label, left, right in replay(suite, cfg, v.trial, corrupted_entropy)}
            assert checks[v.label] == (v.left, v.right)
            assert v.fingerprint == (11, v.trial)

    def test_workers_match_serial(self):
        cfg = FuzzConfig(30, seed=5)
        assert run_suite("qicchain", cfg, corrupted_entropy) == run_suite("qicchain", cfg, corrupted_entropy, workers=4)

    def test_report_dict(self):
        v = run_suite("classical", FuzzConfig(3), corrupted_entropy)[0]
        d = v.to_dict()
        assert d["fingerprint"] == [0, v.trial] and d["suite"] == "classical"

    def test_default_entropy_is_von_neumann(self):
        assert corrupted_entropy(maximally_mixed((2,))) == -von_neumann_entropy(maximally_mixed((2,)))
