import json
from fractions import Fraction

import numpy as np
import pytest

from ernstlab.errors import NotInSpanError
from ernstlab.lie import (
    BASIS,
    Poly4,
    VectorField4,
    commutator_table,
    decompose_in_basis,
    format_combination,
    lie_bracket,
    poly_partial,
    render_table,
    structure_check,
    table_json,
)
from ernstlab.transforms import generator_coefficients

X1, X2, X3, X4, X5 = BASIS
f, g, K, L = (Poly4.var(v) for v in "fgKL")
ZERO = VectorField4()


def test_poly_partials():
    assert poly_partial(2 * K * L, "K") == 2 * L
    assert poly_partial(L**2 - K**2, "L") == 2 * L
    assert poly_partial(f * g, "f") == g
    assert poly_partial(f * g, "K") == Poly4()


def test_poly_invariants():
    assert not (K - K).terms
    with pytest.raises(ValueError):
        Poly4({(0, 0, -1, 0): 1})
    with pytest.raises(TypeError):
        Poly4.const(0.5)
    assert str(L**2 - K**2) in ("L^2 - K^2", "-K^2 + L^2")


def test_poly_evaluation_exact():
    p = Fraction(1, 3) * f * K**2 - g
    assert p(Fraction(3), 1, Fraction(1, 2), 7) == Fraction(1, 4) - 1


def test_bracket_examples():
    assert lie_bracket(X1, X2) == X1
    assert lie_bracket(X3, X5) == 2 * X4
    assert lie_bracket(X1, X4) == ZERO


def test_table_entries():
    t = commutator_table()
    assert t[3][4] == (0, 0, 0, 0, 1)
    assert t[4][2] == (0, 0, 0, -2, 0)
    for i in range(5):
        assert t[i][i] == (0,) * 5
        for j in range(5):
            assert t[i][j] == tuple(-c for c in t[j][i])


def test_table_nonzero_entries():
    expected = {
        (1, 2): "X1",
        (3, 4): "X3",
        (3, 5): "2 X4",
        (4, 5): "X5",
    }
    t = commutator_table()
    for i in range(5):
        for j in range(i + 1, 5):
            assert format_combination(t[i][j]) == expected.get((i + 1, j + 1), "0")


def test_decompose():
    assert decompose_in_basis(X1 + 3 * X4) == (1, 0, 0, 3, 0)
    assert decompose_in_basis(lie_bracket(X3, X5)) == (0, 0, 0, 2, 0)
    assert decompose_in_basis(Fraction(1, 2) * X5 - X2) == (0, -1, 0, 0, Fraction(1, 2))


def test_not_in_span():
    with pytest.raises(NotInSpanError) as exc:
        decompose_in_basis(VectorField4(eta_K=f * K))
    assert exc.value.residual.eta_K == f * K
    # partly matched fields report only the leftover
    with pytest.raises(NotInSpanError) as exc:
        decompose_in_basis(X3 + VectorField4(xi_g=K))
    assert exc.value.residual == VectorField4(xi_g=K)


def test_structure_report():
    rep = structure_check()
    assert rep.ok
    assert rep.details["sl2_relations"] == (True, True, True)
    assert len(rep.details["jacobi_triples"]) == 10


def test_sl2_basis_relations_explicit():
    h, e, fm = -2 * X4, X3, -1 * X5
    assert lie_bracket(h, e) == 2 * e
    assert lie_bracket(e, fm) == h
    assert lie_bracket(h, fm) == -2 * fm


def test_jacobi_on_random_combinations():
    rng = np.random.default_rng(0)
    for _ in range(10):
        A, B, C = (
            sum((Fraction(int(c)) * X for c, X in zip(rng.integers(-3, 4, 5), BASIS)), ZERO) for _ in range(3)
        )
        s = lie_bracket(lie_bracket(A, B), C) + lie_bracket(lie_bracket(B, C), A) + lie_bracket(lie_bracket(C, A), B)
        assert s == ZERO


@pytest.mark.parametrize("tag, X", [("X3", X3), ("X4", X4), ("X5", X5)])
def test_generators_agree_with_group_actions(tag, X):
    rng = np.random.default_rng(1)
    for k, l in rng.uniform(-2, 2, size=(20, 2)):
        eta = X.eta_K(0.0, 0.0, k, l) + 1j * X.eta_L(0.0, 0.0, k, l)
        assert eta == pytest.approx(generator_coefficients(tag, complex(k, l)), abs=1e-14)


def test_renderers():
    text = render_table()
    assert "2 X4" in text and "-2 X4" in text
    payload = json.loads(table_json())
    assert payload["basis"] == ["X1", "X2", "X3", "X4", "X5"]
    assert payload["table"][2][4] == [0, 0, 0, 2, 0]
    assert payload["rendered"][4][2] == "-2 X4"


def test_format_combination():
    assert format_combination((0, 0, 0, 0, 0)) == "0"
    assert format_combination((-1, 0, 0, 0, 0)) == "-X1"
    assert format_combination((1, 0, 0, Fraction(-1, 2), 0)) == "X1 - 1/2 X4"
