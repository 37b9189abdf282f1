# Covering an antipodal configuration: eta, the mesh norm, and the 1/sqrt(d) ceiling.
import numpy as np

from crosscover import cross_polytope, eta_exact, eta_sampled, random_antipodal
from crosscover.covering import mesh_norm_sampled, rho_from_eta

# %% the cross-polytope: every facet is at distance 1/sqrt(d)
for d in range(2, 7):
    rep = eta_exact(cross_polytope(d))
    print(d, rep.eta, 1 / np.sqrt(d), rep.rho)

# %% a random configuration sits strictly below the ceiling
cfg = random_antipodal(4, 0)
ex = eta_exact(cfg)
print("exact   ", ex.eta, ex.witness)

# sampling alone (no facet information) lands on the same deepest hole
sa = eta_sampled(cfg, n_samples=100_000, inject=False)
print("sampled ", sa.eta, abs(sa.eta - ex.eta))

# %% distances instead of dot products: rho^2 = 2 - 2 eta
rho, x = mesh_norm_sampled(cfg, n_samples=50_000)
print("rho direct", rho, "from eta", rho_from_eta(ex.eta))

# %% how far below the ceiling do random configurations sit?
gaps = np.array([1 / np.sqrt(4) - eta_exact(random_antipodal(4, s)).eta
                 for s in range(500)])
print("gap quantiles", np.quantile(gaps, [0, 0.1, 0.5, 0.9]))
