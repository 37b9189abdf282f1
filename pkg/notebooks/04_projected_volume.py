# Spherical measure of simplicial cones, and simplices on the rim of a cap.
import math

import numpy as np

from crosscover.projection import (cap_monotonicity_check, maximize_cap_simplex,
                                   projected_volume_exact_d3, projected_volume_mc,
                                   regular_cap_simplex, sphere_area)

# %% orthant and a slanted cone, Monte Carlo against the exact d=3 area
for v in (np.eye(3), np.array([[1, 0, 0], [0, 1, 0], [1, 1, 1]]) / [[1], [1], [math.sqrt(3)]]):
    est = projected_volume_mc(v, 200_000, rng_seed=1)
    print(est.value, "+-", est.stderr, "exact", projected_volume_exact_d3(v))

# %% a cross-polytope facet cone covers 2^-d of the sphere
for d in (3, 4, 5, 6):
    est = projected_volume_mc(np.eye(d), 200_000, rng_seed=d)
    print(d, est.value, sphere_area(d) / 2 ** d, est.stderr)

# %% volume of the regular rim simplex as the cap shrinks
for a in (0.2, 0.4, 1 / math.sqrt(3), 0.8, 0.95):
    print(f"a={a:.3f}", projected_volume_exact_d3(regular_cap_simplex(3, a)))
print(cap_monotonicity_check(3, 0.5, 0.6), cap_monotonicity_check(4, 0.5, 0.6))

# %% the best rim simplex is the regular one
res = maximize_cap_simplex(3, 0.7, restarts=8, rng_seed=0)
print(res.volume.value, res.regularity_defect)
print(res.best.edge_lengths())
