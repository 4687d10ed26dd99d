"""DtN eigenvalues of a one-step potential, checked against the radial ODE."""
import numpy as np

from radial_dtn import Potential, spectrum
from radial_dtn.oracle import IntegratorConfig, convergence_study, solve_radial

p = Potential(gamma=1.0, b=0.5)  # q = 1 on |x| < 0.5, zero outside
s = spectrum(p, 8)
print("c_n for", p)
for n, c in enumerate(s.coefficients):
    # each c_n sits just below n; the deficit shrinks like b^(2n)
    print(f"  n={n}  c_n={c:+.15f}  n-c_n={n - c:.3e}")

# the zero potential gives c_n = n exactly
print("zero potential:", spectrum(Potential(0.0, 0.5), 5).coefficients)

# the oracle integrates r^2 a'' + r a' + (r^2 q - n^2) a = 0 with RK4
for n in (0, 1, 4):
    ode = solve_radial(p, n)
    print(f"n={n}: closed form {s[n]:+.15f}  oracle {ode:+.15f}  diff {abs(ode - s[n]):.1e}")

# halving the step should cut the error by about 16
for row in convergence_study(p, 1, [1000, 2000, 4000, 8000]):
    print(row)

# a coarse mesh still agrees to better than 1e-7
cfg = IntegratorConfig(step_count=2000)
diff = max(abs(solve_radial(Potential(g, b), 3, cfg) - spectrum(Potential(g, b), 3)[3])
           for g in np.linspace(0.1, 1, 4) for b in np.linspace(0.1, 0.9, 4))
print("coarse-mesh worst diff at n=3:", diff)
