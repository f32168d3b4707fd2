"""
Reducing the third-order ODE to first order
===========================================

For potentials that depend on s = f + g only, K satisfies a third-order ODE.
Two integrating factors give two first integrals psi1 and psi2, and fixing
their values leaves a first-order equation.
"""

import math

import numpy as np

from ernstlab import FamilyParams, eval_x1_family
from ernstlab.jets import Jet2, Taylor3
from ernstlab.reduction import (
    AlphaAnsatz,
    JetPoint,
    determining_system_residuals,
    first_integral_identity_check,
    line_integral_first_integral,
    psi_values,
    reduced_ode_residual,
)

###############################################################################
# Along an exact solution the first integrals are constant.
A, B, g = 1.2, 0.8, 0.5
f = np.linspace(0.2, 1.8, 9)
K = eval_x1_family(FamilyParams(A, B), *Jet2.variables(f, g)).K
p = JetPoint(f, g, K.value, K.d_f, K.d_ff)
psi1, psi2 = psi_values(p)
print("psi1:", psi1.round(12), " expected", -A**2)
print("psi2:", psi2.round(12), " expected", -B**2)
print("first-order residual:", np.abs(reduced_ode_residual(p, -A**2, -B**2)).max())

###############################################################################
# Off the solution set, d(psi)/df still equals Lambda * (K''' - F).  Any smooth
# trajectory will do; here K = 2 + sin f.
f0 = 0.7
traj = Taylor3.from_derivatives(2 + math.sin(f0), math.cos(f0), -math.sin(f0), -math.cos(f0))
for tag in ("Lambda1", "Lambda2"):
    print(tag, first_integral_identity_check(traj, f0, 1.0, tag))

###############################################################################
# The integrating factors solve an overdetermined linear system.  A nearby
# guess does not.
print(determining_system_residuals(AlphaAnsatz.from_constants(0.5, -1.0), 1.0, 1.0, 2.0))
print(determining_system_residuals(AlphaAnsatz(((1, 3, -1),)), 1.0, 1.0, 2.0))

###############################################################################
# Finally psi is recovered by quadrature of a one-form built from F and Lambda.
q = JetPoint(1.0, 1.0, 1.0, 1.0, 1.0)
print("quadrature:", line_integral_first_integral(q, "Lambda1"), " closed form:", psi_values(q)[0])
