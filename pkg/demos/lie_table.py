"""
The symmetry algebra in exact arithmetic
========================================

The five generators have polynomial coefficients, so brackets can be computed
with rationals and compared for equality rather than closeness.
"""

from ernstlab.lie import BASIS, VectorField4, Poly4, decompose_in_basis, lie_bracket, render_table, structure_check
from ernstlab.errors import NotInSpanError

X1, X2, X3, X4, X5 = BASIS
print(X5)
print()
print(render_table())
print()

report = structure_check()
print("aff(1) + sl(2,R) splitting verified:", report.ok)

# h, e, f in the usual normalisation
h, e, f = -2 * X4, X3, -1 * X5
print("[h, e] == 2e:", lie_bracket(h, e) == 2 * e)

# A field outside the algebra is rejected with what could not be matched.
K, f_ = Poly4.var("K"), Poly4.var("f")
try:
    decompose_in_basis(X2 + VectorField4(eta_K=f_ * K))
except NotInSpanError as exc:
    print("not in span, leftover:", exc.residual)
