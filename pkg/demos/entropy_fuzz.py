"""Fuzz the entropic inequalities, then show that a broken entropy is caught."""

from qicausality.propcheck import FuzzConfig, corrupted_entropy, delta_i, naive_state, run_suite

cfg = FuzzConfig(trials=200, seed=0)
for suite in ("qicchain", "classical", "sumbound", "achievability"):
    print(f"{suite:>14}: {len(run_suite(suite, cfg))} violations")

bad = run_suite("qicchain", cfg, corrupted_entropy)
print(f"\nnegated entropy: {len(bad)} violations, first {bad[0].label!r} at trial {bad[0].trial}")

for m in (1, 2, 3):
    print(f"naive strategy with m={m}: delta I = {delta_i(naive_state(m)):.6f}")
