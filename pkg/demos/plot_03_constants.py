"""
The explicit constant
=====================

C(eps) is the larger of two branches: one from linearizing around small
signal, one from the mass defect when the signal is large. The best eps
balances them.
"""

import numpy as np

from tvhom.constants import c_eps, delta_eps, linearization_branch, mass_branch, optimize_c0

rep = optimize_c0()
print(rep)

# the two branches cross at the optimum
e = rep.eps_star
print("linearization branch", linearization_branch(e))
print("mass branch         ", mass_branch(e))

# a coarse table; the linearization branch blows up once Delta nears 1
for eps in np.geomspace(1e-3, 0.5, 8):
    print(f"eps={eps:8.5f}  Delta={delta_eps(eps):.5f}  C={c_eps(eps):10.4f}")

# Delta is small like sqrt(eps / 3) near zero
print(delta_eps(1e-8), np.sqrt(1e-8 / 3))
