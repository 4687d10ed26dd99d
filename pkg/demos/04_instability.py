"""Potentials that stay apart in sup norm while their DtN maps merge."""
import numpy as np

from radial_dtn import instability_sequence

rows = instability_sequence(b0=0.5, gamma=1.0, k_max=100)
print(" k    b_k       linf   dtn_dist")
for r in rows[::10]:
    print(f"{r['k']:3d}  {r['b_k']:.6f}  {r['linf_dist']:.1f}  {r['dtn_dist']:.4e}")
# the DtN distance falls linearly in b_k - b0
ratio = np.array([r["dtn_dist"] / (r["b_k"] - 0.5) for r in rows])
print("dtn_dist / (b_k - b0) in", ratio.min(), "..", ratio.max())

# against the zero potential the decay is quadratic in 1/k
null = instability_sequence(0.5, 1.0, 100, null_base=True)
c = np.array([r["dtn_dist"] * r["k"] ** 2 for r in null if r["k"] >= 20])
print(f"dtn_dist * k^2 = {c.mean():.4f} +- {c.std():.1e}")
