"""
Fixed points of exp(2 pi i k / z)
==================================

Grid-seeded Newton search near the essential singularity, where the fixed
points accumulate.  Every one of them is repelling.
"""

import numpy as np

from pullback import ExpPeriodic, ExpPreperiodic, find_fixed_points

g = ExpPeriodic(1)
print(g, "cusps:", {str(c): v.describe() for c, v in g.cusp_info.items()})

recs = find_fixed_points(g, radius=10)
for r in recs[:6]:
    print(f"{r.location:.10f}  |mult| = {abs(r.multiplier):9.4f}  {r.classification}"
          + ("  (cusp)" if r.cusp else ""))
print("...", len(recs), "fixed points with 1/10 <= |z| <= 10")

# the count roughly doubles with the radius
for radius in (10, 20, 40, 80):
    recs = find_fixed_points(g, radius=radius)
    mults = np.array([abs(r.multiplier) for r in recs])
    print(f"radius {radius:3d}: {len(recs):4d} points, smallest |multiplier| {mults.min():.4f}")

# the preperiodic family has none at the cusps
h = ExpPreperiodic(1)
print(h, "cusps:", {str(c): v.describe() for c, v in h.cusp_info.items()})
print("fixed points within radius 10:", len(find_fixed_points(h, radius=10)))
