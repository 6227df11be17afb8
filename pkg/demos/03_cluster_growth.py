"""How the number of blocks grows with the sample size.

With discount d > 0 the expected number of blocks grows like n^d (a power
law); at d = 0 it grows like alpha * log n.  The experiment simulates the
block-count chain of the sequential sampler along a grid of sample sizes and
fits a log-log slope on the upper half of the grid.
"""

import math

from pitmanyor import PYParams, growth_experiment

grid = [100, 1_000, 10_000, 100_000]
trials = 200

for d in (0.5, 0.25):
    params = PYParams(alpha=1.0, d=d)
    records, exponent = growth_experiment(params, grid, trials, seed=7)
    print(f"alpha = 1, d = {d}:")
    for r in records:
        print(f"  n = {r.n:>6}: mean blocks = {r.mean_kn:8.2f}  (se {r.se:.2f})")
    print(f"  fitted log-log slope = {exponent:.3f}  (theory: {d})")
    print()

params = PYParams(alpha=1.0, d=0.0)
records, _ = growth_experiment(params, grid, trials, seed=8)
print("alpha = 1, d = 0 (logarithmic growth):")
for r in records:
    ratio = r.mean_kn / math.log(r.n)
    print(f"  n = {r.n:>6}: mean blocks = {r.mean_kn:8.2f}, mean/log(n) = {ratio:.3f}")
print("  the ratio settles near alpha = 1")
