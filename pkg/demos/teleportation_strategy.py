"""Play the QIC game with the teleportation strategy, exactly and by sampling."""

from qicausality.bounds import solve_p_prime, teleport_p, version_convert
from qicausality.games import GameConfig, PairedIC1, run_qic_v1, run_qic_v2, teleportation_strategy

for n in (2, 3, 4):
    strategy = teleportation_strategy(PairedIC1(n))
    exact = run_qic_v1(strategy, GameConfig(n, 1)).p_hat
    mc = run_qic_v1(strategy, GameConfig(n, 1, trials=50_000, seed=n, mode="monte_carlo"))
    v2 = run_qic_v2(strategy, GameConfig(n, 1, version=2)).p_hat
    print(
        f"n={n}: exact {exact:.6f} (closed form {teleport_p(n):.6f}), "
        f"sampled {mc.p_hat:.4f} +/- {mc.std_err:.4f}, "
        f"version II {v2:.6f} vs {version_convert(exact):.6f}, bound {solve_p_prime(1, n):.6f}"
    )
