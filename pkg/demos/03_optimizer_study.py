#!/usr/bin/env python3
"""Study the greedy target-substitution optimizer.

Instead of idling when its scheduled receiver is busy, a broadcaster
sends to the first not-yet-served target that would otherwise waste the
step waiting.  Applied to the worst base order (ascending ids) the gain
is dramatic — and at system sizes one below a power of two it even beats
the wrap-around order's 2/3 efficiency for a while.  Applied to the
wrap-around order itself it is useless or harmful: there is almost
nothing left to reclaim.
"""

from fractions import Fraction

from gossipsim import SimConfig, measure, permutation_set
from gossipsim.metrics import identity_run_length, percent_str

OPT = SimConfig(optimizer=True)


def eps(stats):
    return Fraction(sum(stats.nu), (stats.n + 1) * stats.length)


print("Ascending-id order, optimizer on, n = 2^i - 1 (the sweet spots):")
print(f"{'i':>3} {'n':>5} {'lambda':>7} {'base lambda':>12} {'epsilon':>9}")
for i in range(1, 9):
    n = 2 ** i - 1
    stats = measure(n, permutation_set("identity", n), OPT)
    print(f"{i:>3} {n:>5} {stats.length:>7} {identity_run_length(n):>12} "
          f"{percent_str(eps(stats)):>8}%")
print()
print("Efficiency peaks decay toward 2/3 as i grows; between the peaks")
print("the optimized schedule is far less efficient:")
for n in (20, 50, 100, 200):
    stats = measure(n, permutation_set("identity", n), OPT)
    print(f"  n={n:<4} lambda={stats.length:<5} epsilon={percent_str(eps(stats))}%")
print()

print("Wrap-around order, optimizer on (nothing to gain):")
for n in (4, 9, 18):
    base = measure(n, permutation_set("pipelined", n))
    opt = measure(n, permutation_set("pipelined", n), OPT)
    print(f"  n={n:<3} base lambda={base.length:<3} epsilon={percent_str(eps(base))}%"
          f"  ->  optimized lambda={opt.length:<3} epsilon={percent_str(eps(opt))}%")
print()
print("At n=4 the optimizer reshuffles the run without changing its cost;")
print("at n=18 the local greed backfires and efficiency drops to 60%.")
