# Polarization: the smallest value of the summed potential over the sphere.
import numpy as np

from crosscover import (PotentialFunction, builtin_potentials, cross_polytope,
                        cross_polytope_closed_form, hermite_even_quadratic,
                        perturbed_cross_polytope, polarization_value, random_antipodal)

g = PotentialFunction.riesz(2)
rep = polarization_value(cross_polytope(3), g)
print(rep.value, rep.minimizer, rep.method)     # 4.5 at a dual-cube vertex

# %% closed form vs descent, all built-in potentials
for d in (2, 3, 4, 5):
    row = []
    for g in builtin_potentials():
        v = polarization_value(cross_polytope(d), g).value
        row.append(v - cross_polytope_closed_form(d, g))
    print(d, np.array(row))

# %% even quadratic below h, touching at +-1/sqrt(d)
for g in builtin_potentials():
    hb = hermite_even_quadratic(g, 4)
    print(f"{str(g):10s} a={hb.a:.6f} b={hb.b:.6f} min(h-p)={hb.min_defect:.3e}")

# %% random and tilted configurations stay below the cross-polytope value
g = PotentialFunction.log()
top = cross_polytope_closed_form(4, g)
vals = [polarization_value(random_antipodal(4, s), g).value for s in range(50)]
print("random  ", top - max(vals))
for theta in (1e-1, 1e-2, 1e-3):
    print("tilt", theta, top - polarization_value(perturbed_cross_polytope(4, theta), g).value)
