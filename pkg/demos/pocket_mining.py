"""Mine the pockets of the 2-D de Boor function with ambiguity-driven
sampling, then with plain variance sampling, and compare sample counts.

    python3 demos/pocket_mining.py [seed]
"""
import sys

from salmine.deboor import PocketFunction, true_minima
from salmine.kriging import OptimizerSettings
from salmine.pockets import MinerSettings, compare_runs, mine_pockets, mine_pockets_baseline

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
source = PocketFunction(2, seed, 0.2)
settings = MinerSettings(optimizer=OptimizerSettings(seed=seed))

focused = mine_pockets(source, 30, settings=settings)
baseline = mine_pockets_baseline(source, 30, settings=settings)

print("oracle minima:", [m.round(2).tolist() for m in true_minima(source, 41)])
for run in (focused, baseline):
    print(f"{run.method:>9}: {run.status}, {run.n_samples} samples, "
          f"{len(run.rounds)} rounds")
    for p in run.found_pockets:
        print("           pocket at", p.round(2).tolist())

report = compare_runs(focused, baseline, settings)
print(f"savings over baseline: {report.savings:.0%}")
