# %% [markdown]
"""
# Admissible points

A point `w` is usable for reconstruction when some complex `lambda_O` keeps
`Re[lambda_O (z - w)^2]` below 1/2 on the outer disk and below -1/2 on the
closed jump disk. The margins `eps1 = 1/2 - A` and `eps2 = -1/2 - B` decide
whether the certificate is proper (`eps2 > eps1`).
"""

# %%
import numpy as np

from cgofaddeev.admissible import admissibility_map, eval_AB, find_admissible
from cgofaddeev.geometry import make_disk_geometry

geom = make_disk_geometry(n_radial=4, n_angular=16)

# %% [markdown]
"""
The worked geometry: unit disk, jump disk centred at -0.5 with radius 0.2,
and `w = 0.7`. At `lambda = -0.6` the suprema can be found by hand.
"""

# %%
A, B = eval_AB(0.7, -0.6, geom.boundary, geom.gamma)
print(f"A = {A:.4f}  B = {B:.4f}")
cert = find_admissible(0.7, geom)
print(cert)

# %% [markdown]
"""
Scanning a coarse grid shows where certificates exist. Points near the jump
disk or on its far side have none.
"""

# %%
xs = np.linspace(-0.9, 0.9, 7)
rows = admissibility_map(geom, xs, xs, n_angles=180)
grid = {(round(r[0], 2), round(r[1], 2)): ("P" if r[3] else "a") if r[2] else "." for r in rows}
for y in xs[::-1]:
    print(" ".join(grid[(round(x, 2), round(y, 2))] for x in xs))
