"""The map (gamma, b) -> (c0, c1): its image, injectivity and inverse."""
import numpy as np

from radial_dtn import GridSpec, boundary_curves, injectivity_check, invert, range_map
from radial_dtn.analysis import region_distance
from radial_dtn.dtn import spectrum_array

g = GridSpec(50)
pts = range_map(g)
xy = np.array([[p.c0, p.c1] for p in pts])
print(len(pts), "grid points; c0 in", xy[:, 0].min(), "..", xy[:, 0].max())

# the image sits between the b = 1 curve (low) and the gamma = 1 curve (up)
curves = boundary_curves(5)
print("lower curve (gamma, c0, c1):\n", curves["low"])
print("upper curve (b, c0, c1):\n", curves["up"])
print("worst distance outside the region:", region_distance(xy).max())

rep = injectivity_check(g)
print("collisions:", rep.collisions, "closest pair:", rep.closest_pair, f"sep {rep.min_separation:.2e}")

# invert a spectrum back to the potential
for gamma, b in [(0.7, 0.4), (0.05, 0.03)]:
    c0, c1 = spectrum_array(gamma, b, 1)
    p = invert(c0, c1)
    print(f"({gamma}, {b}) -> c = ({c0:.6e}, {c1:.12f}) -> {p}")
