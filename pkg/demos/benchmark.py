"""Focused versus baseline sample counts over a handful of warped de Boor
seeds. The full benchmark is `salmine bench-pockets --seeds 100`.

    python3 demos/benchmark.py [n_seeds]
"""
import sys

import numpy as np

from salmine.deboor import PocketFunction
from salmine.kriging import OptimizerSettings
from salmine.pockets import MinerSettings, mine_pockets, mine_pockets_baseline

n_seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 5
rows = []
for seed in range(n_seeds):
    source = PocketFunction(2, seed, 0.2)
    settings = MinerSettings(optimizer=OptimizerSettings(seed=seed))
    f = mine_pockets(source, 30, settings=settings)
    b = mine_pockets_baseline(source, 30, settings=settings)
    rows.append((f.n_samples, b.n_samples))
    print(f"seed {seed}: focused {f.n_samples:>2} ({f.status}), "
          f"baseline {b.n_samples:>2} ({b.status})")

f, b = np.array(rows).T
print(f"median focused {np.median(f):.1f}, median baseline {np.median(b):.1f}, "
      f"focused <= baseline on {np.mean(f <= b):.0%} of seeds")
