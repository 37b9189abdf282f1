# The hull of {+-y_i}: one simplex facet per sign vector.
import numpy as np

from crosscover import AntipodalConfig, enumerate_facets, random_antipodal
from crosscover.hull import boundary_cover_counts

y = np.array([[1.0, 0.0, 0.0],
              [0.0, 1.0, 0.0],
              [0.0, 1.0, 1.0]])   # rows get normalized
cfg = AntipodalConfig(y)
h = enumerate_facets(cfg)
print(h.to_csv())

# %% the (+,+,+) facet: plane through e1, e2 and (e2+e3)/sqrt2
f = h.facet((1, 1, 1))
print(f.offset, 1 / np.sqrt(5 - 2 * np.sqrt(2)))
print(f.vertices(cfg) @ f.normal)     # all equal to the offset

# %% opposite sign vectors give the mirror facet
print(np.allclose(h.offsets, h.offsets[::-1]), np.allclose(h.normals, -h.normals[::-1]))

# %% random directions fall in exactly one facet cone
for d in (3, 5, 7):
    h = enumerate_facets(random_antipodal(d, 1))
    print(d, len(h), boundary_cover_counts(h, 20_000, 0))
