"""How stable is recovering (gamma, b) from the DtN map?

C2(q) is the worst ratio of potential distance to DtN distance over a grid.
It blows up as the support radius b shrinks.
"""
from radial_dtn import GridSpec, Potential, dtn_distance, stability_constant, stability_curves
from radial_dtn.analysis import fixed_radius_constant

g = GridSpec(100)  # b = i/100, gamma = j/100

# two nearby potentials with the same radius
p, q = Potential(0.5, 0.5), Potential(0.51, 0.5)
d = dtn_distance(p, q)
print(f"DtN distance {d.value:.3e} (sup at n={d.n_at_sup}, tail < {d.tail_bound:.1e})")
print(f"ratio {0.01 / d.value:.3f}, guaranteed at most {fixed_radius_constant(0.5):.2f}")

rep = stability_constant(p, g, fixed_b=0.5)
print(f"C2 at {p} with fixed-radius partners: {rep.constant:.4f}, worst partner {rep.argmax_partner}")
print("Lipschitz checks during the scan:", rep.bound_checks, "violations:", rep.bound_violations)

# min and max of C2 over the heights, per radius
print(" b     C2_min      C2_max")
for b, lo, hi in stability_curves(g, [0.1, 0.3, 0.5, 0.7, 0.9]):
    print(f"{b:.1f}  {lo:10.4f}  {hi:10.4f}")

# with the whole grid as partners the small-b potentials are far worse
for base in (Potential(1.0, 0.1), Potential(1.0, 0.9)):
    print(base, "full-grid C2 =", f"{stability_constant(base, g).constant:.4g}")
