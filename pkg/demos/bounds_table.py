"""Print the m = 1 success probabilities next to the entropic bound.

The naive and teleportation strategies both stay under P', and the
nonlocal IC-2 bound Q' overtakes P' once n is large enough.
"""

from qicausality.bounds import bounds, max_root, pprime_vs_qprime_scan
from qicausality.entropy import LOG2_3

print(f"{'n':>5} {'P_naive':>10} {'P_tele':>10} {'P_prime':>10} {'Q_prime':>10}")
for n in (1, 2, 4, 9, 16, 50, 100, 1000):
    r = bounds(1, n)
    print(f"{n:>5} {r.p_naive:10.6f} {r.p_teleport:10.6f} {r.p_prime:10.6f} {r.q_prime:10.6f}")

print(f"\nP' where the target entropy equals log2(3): {max_root(LOG2_3):.6f}")
first = next(n for n, _, _, below in pprime_vs_qprime_scan(range(2, 1001)) if below)
print(f"first n with P'(1, n) < Q'(n): {first}")
