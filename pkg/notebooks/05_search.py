# Searching over configurations lands on the cross-polytope.
import numpy as np

from crosscover import PotentialFunction, maximize_eta, maximize_polarization

for d in (2, 3, 4, 5):
    res = maximize_eta(d, restarts=8, rng_seed=0)
    print(d, res.objective, 1 / np.sqrt(d), res.distance_to_cross_polytope)

# %% the trace of the winning restart, annealing stages then the polish
res = maximize_eta(4, restarts=4, rng_seed=1)
for it, v in res.trace:
    print(it, v)
print(np.round(res.best.gram(), 12))

# %% the same for polarization (slower: every step re-minimizes the potential)
res = maximize_polarization(3, PotentialFunction.riesz(2), restarts=1, rng_seed=0)
print(res.objective, 4.5 - res.objective, res.distance_to_cross_polytope)
