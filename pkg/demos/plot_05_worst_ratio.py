"""
Looking for large ratios
========================

How far can TV(hom) exceed TV(vec)? A hill climber over Bernoulli
instances and an exhaustive grid give two views. Everything stays far
below the proven constant.
"""

import numpy as np

from tvhom import ProductInstance
from tvhom.harness import bernoulli_grid_oracle, homogenization_ratio, search_worst_ratio

rep = search_worst_ratio(seed=0, restarts=20, steps=100, family="bernoulli", n_max=8)
print("best ratio", rep.best_ratio, "after", rep.evaluations, "evaluations")
print(rep.witness.to_json())

grid = np.round(np.arange(0.05, 1.0, 0.05), 10)
ratio, (ps, qs) = bernoulli_grid_oracle(2, grid)
print("grid, n=2:", ratio, ps, qs)

# a small-signal family that comes close to 9/8: one coordinate moves off
# a near-deterministic letter, the other moves half as far off a fair coin
for t in (1e-2, 1e-3, 1e-5):
    tiny = 1e-12
    inst = ProductInstance([(t + tiny, 1 - t - tiny), (0.5 + t / 2, 0.5 - t / 2)],
                           [(tiny, 1 - tiny), (0.5, 0.5)])
    print(t, homogenization_ratio(inst))
