"""
Checking closed-form potentials against the Ernst equation
==========================================================

Every potential in ernstlab is evaluated on truncated Taylor jets, so the
second derivatives needed by the residual come for free and are exact up to
rounding.
"""

import numpy as np

from ernstlab import (
    EpdCombination,
    FamilyParams,
    PotentialSample,
    epd_residual,
    epd_to_ernst,
    ernst_residual,
    eval_x1_family,
    eval_x2_family,
)
from ernstlab.jets import Jet2

###############################################################################
# A grid in the (f, g) plane.  Both families below need f + g > 0; the second
# one also needs f and g positive separately.
axis = np.linspace(0.1, 2.0, 64)
F, G = np.meshgrid(axis, axis, indexing="ij")

for name, evaluate in [("x1", eval_x1_family), ("x2", eval_x2_family)]:
    sample = evaluate(FamilyParams(A=1.3, B=0.7, C=0.2), F, G)
    rk, rl = ernst_residual(sample, F, G)
    print(f"{name}: K in [{sample.K.value.min():.3f}, {sample.K.value.max():.3f}], "
          f"max residual {max(np.abs(rk).max(), np.abs(rl).max()):.2e}")

###############################################################################
# Something that is *not* a solution, for contrast: K = f, L = g.
rk, rl = ernst_residual(PotentialSample(*Jet2.variables(1.0, 1.0)), 1.0, 1.0)
print("K=f, L=g at (1, 1):", rk, rl)

###############################################################################
# Linear route.  Any solution F of the EPD equation gives a potential through
# Z = sech F + i tanh F.
combo = EpdCombination.of([(0.7, "log-sum"), (1.3, "arctan-ratio"), (0.5, "antisym")])
Fj = combo.evaluate(F, G)
print("EPD residual:", np.abs(epd_residual(Fj, F, G)).max())
rk, rl = ernst_residual(epd_to_ernst(Fj), F, G)
print("Ernst residual of the image:", max(np.abs(rk).max(), np.abs(rl).max()))
