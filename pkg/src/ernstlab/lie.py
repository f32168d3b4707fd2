"""Exact Lie algebra of the point symmetries.

Vector fields on ``(f, g, K, L)`` with polynomial coefficients::

    X1 = d_f - d_g              X2 = f d_f + g d_g
    X3 = d_L                    X4 = K d_K + L d_L
    X5 = 2KL d_K + (L^2 - K^2) d_L

Brackets are computed in rational arithmetic, so the commutator table and the
``aff(1) + sl(2, R)`` decomposition are checked exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import NotInSpanError
from .polys import SparsePoly, as_fraction

__all__ = [
    "Poly4",
    "VectorField4",
    "BASIS",
    "NAMES",
    "poly_partial",
    "lie_bracket",
    "decompose_in_basis",
    "commutator_table",
    "structure_check",
    "format_combination",
    "render_table",
    "table_json",
]


class Poly4(SparsePoly):
    """Polynomial in ``f, g, K, L`` with rational coefficients."""

    variables = ("f", "g", "K", "L")
    allow_negative = False
    __slots__ = ()


VARS = Poly4.variables


def poly_partial(p: Poly4, var: str) -> Poly4:
    return p.partial(var)


@dataclass(frozen=True)
class VectorField4:
    """``xi_f d_f + xi_g d_g + eta_K d_K + eta_L d_L``."""

    xi_f: Poly4 = field(default_factory=Poly4)
    xi_g: Poly4 = field(default_factory=Poly4)
    eta_K: Poly4 = field(default_factory=Poly4)
    eta_L: Poly4 = field(default_factory=Poly4)

    @property
    def components(self):
        return (self.xi_f, self.xi_g, self.eta_K, self.eta_L)

    def apply(self, p: Poly4) -> Poly4:
        """The field acting as a derivation on ``p``."""
        out = Poly4()
        for comp, var in zip(self.components, VARS):
            if comp:
                out = out + comp * p.partial(var)
        return out

    def __add__(self, other):
        return VectorField4(*(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return VectorField4(*(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return VectorField4(*(-a for a in self.components))

    def __mul__(self, c):
        c = as_fraction(c)
        return VectorField4(*(a * c for a in self.components))

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.components)

    def __str__(self):
        parts = [f"({c}) d_{v}" for c, v in zip(self.components, VARS) if c]
        return " + ".join(parts) if parts else "0"


_one = Poly4.const(1)
X1 = VectorField4(xi_f=_one, xi_g=-_one)
X2 = VectorField4(xi_f=Poly4.var("f"), xi_g=Poly4.var("g"))
X3 = VectorField4(eta_L=_one)
X4 = VectorField4(eta_K=Poly4.var("K"), eta_L=Poly4.var("L"))
X5 = VectorField4(
    eta_K=2 * Poly4.var("K") * Poly4.var("L"),
    eta_L=Poly4.var("L") ** 2 - Poly4.var("K") ** 2,
)
BASIS = (X1, X2, X3, X4, X5)
NAMES = ("X1", "X2", "X3", "X4", "X5")


def lie_bracket(X: VectorField4, Y: VectorField4) -> VectorField4:
    """``[X, Y]^i = X(Y^i) - Y(X^i)``."""
    return VectorField4(*(X.apply(yi) - Y.apply(xi) for xi, yi in zip(X.components, Y.components)))


def _rows(V):
    """Coefficients of V keyed by (component index, monomial)."""
    return {(i, k): c for i, comp in enumerate(V.components) for k, c in comp.terms.items()}


def decompose_in_basis(V: VectorField4, basis=BASIS):
    """Exact coefficients ``c`` with ``V = sum c_i X_i``.

    Raises:
        NotInSpanError: with the unmatched remainder if V is not in the span.
    """
    cols = [_rows(X) for X in basis]
    target = _rows(V)
    keys = sorted(set(target).union(*cols))
    n = len(basis)
    # augmented matrix, one row per (component, monomial)
    M = [[col.get(k, Fraction(0)) for col in cols] + [target.get(k, Fraction(0))] for k in keys]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                fac = M[i][c]
                M[i] = [a - fac * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    coeffs = [Fraction(0)] * n
    for row, c in enumerate(pivots):
        coeffs[c] = M[row][n]
    recon = VectorField4()
    for c, X in zip(coeffs, basis):
        if c:
            recon = recon + c * X
    residual = V - recon
    if residual:
        raise NotInSpanError(residual)
    return tuple(coeffs)


def commutator_table(basis=BASIS):
    """``table[i][j]`` = coefficients of ``[X_{i+1}, X_{j+1}]`` in the basis."""
    return [[decompose_in_basis(lie_bracket(X, Y), basis) for Y in basis] for X in basis]


@dataclass
class StructureReport:
    aff1_bracket: bool
    aff1_closed: bool
    sl2_closed: bool
    cross_brackets_zero: bool
    sl2_standard_basis: bool
    antisymmetric: bool
    jacobi: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return all(
            (
                self.aff1_bracket,
                self.aff1_closed,
                self.sl2_closed,
                self.cross_brackets_zero,
                self.sl2_standard_basis,
                self.antisymmetric,
                self.jacobi,
            )
        )


def structure_check() -> StructureReport:
    """Verify the ``aff(1) + sl(2, R)`` splitting of the symmetry algebra."""
    table = commutator_table()
    zero = (Fraction(0),) * 5

    def supported(c, idx):
        return all(c[k] == 0 for k in range(5) if k not in idx)

    aff = (0, 1)
    sl2 = (2, 3, 4)
    aff1_bracket = table[0][1] == (1, 0, 0, 0, 0)
    aff1_closed = all(supported(table[i][j], aff) for i in aff for j in aff)
    sl2_closed = all(supported(table[i][j], sl2) for i in sl2 for j in sl2)
    cross = all(table[i][j] == zero and table[j][i] == zero for i in aff for j in sl2)

    h, e, f = -2 * X4, X3, -1 * X5
    std = (
        lie_bracket(h, e) == 2 * e,
        lie_bracket(h, f) == -2 * f,
        lie_bracket(e, f) == h,
    )
    antisym = all(lie_bracket(X, Y) + lie_bracket(Y, X) == VectorField4() for X in BASIS for Y in BASIS)
    jac = []
    for i, j, k in combinations(range(5), 3):
        A, B, C = BASIS[i], BASIS[j], BASIS[k]
        s = lie_bracket(lie_bracket(A, B), C) + lie_bracket(lie_bracket(B, C), A) + lie_bracket(lie_bracket(C, A), B)
        jac.append(((i + 1, j + 1, k + 1), not s))
    return StructureReport(
        aff1_bracket=aff1_bracket,
        aff1_closed=aff1_closed,
        sl2_closed=sl2_closed,
        cross_brackets_zero=cross,
        sl2_standard_basis=all(std),
        antisymmetric=antisym,
        jacobi=all(ok for _, ok in jac),
        details={"sl2_relations": std, "jacobi_triples": jac},
    )


def format_combination(coeffs, names=NAMES) -> str:
    """Human-readable combination, e.g. ``"2 X4"``, ``"-X1"``, ``"0"``."""
    parts = []
    for c, n in zip(coeffs, names):
        c = Fraction(c)
        if not c:
            continue
        mag = abs(c)
        body = n if mag == 1 else f"{mag} {n}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def render_table(table=None) -> str:
    table = commutator_table() if table is None else table
    cells = [["[.,.]", *NAMES]]
    for name, row in zip(NAMES, table):
        cells.append([name, *(format_combination(c) for c in row)])
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    lines = [" | ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def _json_rational(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def table_json(table=None) -> str:
    table = commutator_table() if table is None else table
    payload = {
        "basis": list(NAMES),
        "table": [[[_json_rational(c) for c in entry] for entry in row] for row in table],
        "rendered": [[format_combination(entry) for entry in row] for row in table],
    }
    return json.dumps(payload, indent=2)
