#!/usr/bin/env python3
"""Compare how the three permutation families scale with system size.

Sweeps each family, prints a compact table, and writes the full data as
CSV next to this script (feed it to any plotter).  The ascending-id
order costs O(n^2) steps with efficiency decaying to zero; random orders
are quadratic as well but strictly better on average; the wrap-around
order finishes in exactly 3n steps at a constant 2/3 efficiency.
"""

import statistics
from pathlib import Path

from gossipsim import sweep
from gossipsim.metrics import decimal_str

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

SIZES = (10, 20, 40, 80, 160)
SEEDS = list(range(1, 9))

identity = {r.n: r for r in sweep("identity", 1, 160)}
pipelined = {r.n: r for r in sweep("pipelined", 2, 160)}
random_rows = sweep("random", 1, 160, seeds=SEEDS)

print(f"{'n':>4} | {'identity':>16} | {'random (median)':>16} | {'pipelined':>12}")
print(f"{'':>4} | {'lambda  eps':>16} | {'lambda  eps':>16} | {'lambda eps':>12}")
print("-" * 62)
for n in SIZES:
    lam_rand = statistics.median(r.length for r in random_rows if r.n == n)
    eps_rand = statistics.median(r.epsilon for r in random_rows if r.n == n)
    i, p = identity[n], pipelined[n]
    print(f"{n:>4} | {i.length:>7} {decimal_str(i.epsilon, 3):>8} "
          f"| {lam_rand:>7.0f} {decimal_str(eps_rand, 3):>8} "
          f"| {p.length:>5} {decimal_str(p.epsilon, 3):>6}")

csv_path = OUT / "family_scaling.csv"
with csv_path.open("w") as fh:
    fh.write("strategy,n,seed,lambda,mu,epsilon\n")
    for r in list(identity.values()) + list(pipelined.values()) + random_rows:
        seed = "" if r.seed is None else r.seed
        fh.write(f"{r.strategy},{r.n},{seed},{r.length},"
                 f"{decimal_str(r.mu, 6)},{decimal_str(r.epsilon, 6)}\n")
print(f"\nfull sweep written to {csv_path}")
print("\nNote the pipelined column: lambda = 3n and epsilon = 0.667 at")
print("every size — scaling the system does not dilute its efficiency.")
