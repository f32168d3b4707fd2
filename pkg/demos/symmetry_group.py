"""
Moving solutions around with the symmetry group
===============================================

Coordinate maps act on (f, g); the SL(2, R) part acts on Z = K + iL by
Moebius transformations.  Either way a solution stays a solution.
"""

import math

import numpy as np

from ernstlab import FamilyParams, ernst_residual, eval_x1_family
from ernstlab.transforms import (
    CoordinateAction,
    apply_moebius,
    coordinate_field,
    ehlers_from_real,
    moebius_from_params,
    target_field,
)

seed = lambda f, g: eval_x1_family(FamilyParams(1.0, 1.0), f, g)  # noqa: E731

axis = np.linspace(0.2, 1.8, 32)
F, G = np.meshgrid(axis, axis, indexing="ij")

# Dilate and translate the coordinates, then hit Z with a generic group element.
m = moebius_from_params(gamma=0.4, delta=-0.3, epsilon=0.25)
moved = target_field(coordinate_field(seed, CoordinateAction.from_params(0.2, 0.1)),
                     lambda Z: apply_moebius(m, Z))

rk, rl = ernst_residual(moved(F, G), F, G)
print("det =", m.det, " max residual after transforming:", max(np.abs(rk).max(), np.abs(rl).max()))

# Matrices compose like the maps they represent.
m2 = moebius_from_params(-0.1, 0.5, 0.0)
Z = 0.8 + 0.3j
print(apply_moebius(m2 @ m, Z), apply_moebius(m2, apply_moebius(m, Z)))

# One particular element turns a real potential into a complex one.
# With Zo = exp(F) the image is sech F + i tanh F.
Fv = math.log(2.0)
print(ehlers_from_real(2.0), 1 / math.cosh(Fv) + 1j * math.tanh(Fv))
print(apply_moebius(moebius_from_params(-0.5, -math.log(2), -1.0), 2.0))
