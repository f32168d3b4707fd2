import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ernstlab import jets
from ernstlab.errors import DomainError, PoleError
from ernstlab.jets import Jet2, Taylor3, fd_partials, jet2_apply, taylor3_apply

EPS = np.finfo(float).eps


def slots(x):
    return np.array(x.slots() if isinstance(x, Jet2) else x.coefficients(), dtype=complex)


# ---------------------------------------------------------------- examples


def test_ln_of_sum_hand_derivatives():
    f, g = Jet2.variables(1.0, 1.0)
    u = jet2_apply("ln", f + g)
    assert u.value == pytest.approx(math.log(2), abs=1e-15)
    assert u.d_f == pytest.approx(0.5)
    assert u.d_g == pytest.approx(0.5)
    assert u.d_fg == pytest.approx(-0.25)
    assert u.d_ff == pytest.approx(-0.25)
    assert u.d_gg == pytest.approx(-0.25)


def test_sech_of_constant_zero():
    u = jet2_apply("sech", Jet2.constant(0.0))
    np.testing.assert_array_equal(slots(u), [1, 0, 0, 0, 0, 0])


def test_exp_of_lifted_f_at_zero():
    u = jet2_apply("exp", Jet2.lift_f(0.0))
    assert (u.value, u.d_f, u.d_ff) == (1.0, 1.0, 1.0)
    assert u.d_g == 0 and u.d_fg == 0 and u.d_gg == 0


def test_lift_slots():
    f = Jet2.lift_f(3.0)
    g = Jet2.lift_g(5.0)
    np.testing.assert_array_equal(slots(f), [3, 1, 0, 0, 0, 0])
    np.testing.assert_array_equal(slots(g), [5, 0, 1, 0, 0, 0])


def test_taylor3_sine():
    np.testing.assert_allclose(slots(taylor3_apply("sin", Taylor3.variable(0.0))), [0, 1, 0, -1 / 6], atol=1e-16)


def test_taylor3_reciprocal_geometric_series():
    np.testing.assert_allclose(slots(taylor3_apply("reciprocal", Taylor3(1.0, 1.0, 0.0, 0.0))), [1, -1, 1, -1])


def test_taylor3_log():
    out = slots(taylor3_apply("ln", Taylor3(2.0, 1.0, 0.0, 0.0)))
    np.testing.assert_allclose(out, [math.log(2), 0.5, -1 / 8, 1 / 24], rtol=1e-15)


def test_fd_polynomial():
    est = fd_partials(lambda f, g: f * f, 2.0, 1.0, h=1e-4)
    assert abs(est.d_f - 4) <= 1e-6


def test_fd_log_mixed():
    est = fd_partials(lambda f, g: math.log(f + g), 1.0, 1.0, h=1e-4)
    assert abs(est.d_fg + 0.25) <= 1e-6


def test_fd_constant_exact_zero():
    est = fd_partials(lambda f, g: 7.0, 0.4, 0.9)
    assert est.value == 7.0
    assert all(s == 0 for s in est.slots()[1:])


def test_fd_richardson_is_more_accurate():
    field = lambda f, g: math.sin(f) * math.exp(g)
    plain = fd_partials(field, 0.7, 0.4, h=1e-2)
    rich = fd_partials(field, 0.7, 0.4, h=1e-2, richardson=True)
    exact_ff = -math.sin(0.7) * math.exp(0.4)
    assert abs(rich.d_ff - exact_ff) < abs(plain.d_ff - exact_ff) / 10


def test_fd_stencil_domain():
    with pytest.raises(DomainError):
        fd_partials(lambda f, g: math.log(f + g), 0.5, -0.5 + 1e-4, h=1e-4)
    with pytest.raises(DomainError):
        fd_partials(lambda f, g: 1.0, 1.0, 1.0, h=0.0)


# ---------------------------------------------------------------- domain errors


@pytest.mark.parametrize(
    "fn, value, exc",
    [
        ("ln", 0.0, DomainError),
        ("ln", -1.0, DomainError),
        ("sqrt", -2.0, DomainError),
        ("reciprocal", 0.0, PoleError),
        ("csc", 0.0, PoleError),
        ("cot", math.pi, PoleError),
        ("ln", -1.0 + 0j, DomainError),
    ],
)
def test_domain_errors_name_function_and_point(fn, value, exc):
    with pytest.raises(exc) as info:
        jet2_apply(fn, Jet2.lift_f(value))
    assert info.value.function == fn
    assert info.value.point == pytest.approx(value)


def test_power_noninteger_needs_positive_base():
    with pytest.raises(DomainError):
        jet2_apply("power", Jet2.lift_f(-1.0), p=0.5)
    # integer exponents are fine on negative bases
    out = jet2_apply("power", Jet2.lift_f(-2.0), p=3)
    assert (out.value, out.d_f, out.d_ff) == (-8.0, 12.0, -12.0)


def test_complex_principal_branch():
    out = jet2_apply("sqrt", Jet2.lift_f(-4.0 + 1e-300j))
    assert out.value == pytest.approx(2j)


def test_array_domain_error_reports_first_bad_entry():
    with pytest.raises(DomainError) as info:
        jets.log(Jet2.lift_f(np.array([1.0, 2.0, -3.0, -4.0])))
    assert info.value.point == -3.0


def test_unknown_function():
    with pytest.raises(ValueError):
        jet2_apply("gamma", Jet2.lift_f(1.0))


# ---------------------------------------------------------------- jet vs finite differences

# inner field keeps every function's argument in a safe band: u in [0.7, 1.9]
def _inner(f, g):
    return 0.5 + 0.3 * f + 0.2 * g + 0.1 * f * g


CASES = [
    ("exp", None),
    ("ln", None),
    ("sqrt", None),
    ("sin", None),
    ("cos", None),
    ("arctan", None),
    ("sech", None),
    ("tanh", None),
    ("csc", None),
    ("cot", None),
    ("reciprocal", None),
    ("power", 2.5),
    ("power", -3),
]


@pytest.mark.parametrize("fn, p", CASES)
def test_jet_matches_finite_differences(fn, p):
    rng = np.random.default_rng(7)
    scalar = {
        "exp": math.exp, "ln": math.log, "sqrt": math.sqrt, "sin": math.sin, "cos": math.cos,
        "arctan": math.atan, "sech": lambda x: 1 / math.cosh(x), "tanh": math.tanh,
        "csc": lambda x: 1 / math.sin(x), "cot": lambda x: 1 / math.tan(x),
        "reciprocal": lambda x: 1 / x, "power": lambda x: x**p,
    }[fn]
    for f0, g0 in rng.uniform(0.3, 1.7, size=(100, 2)):
        f, g = Jet2.variables(f0, g0)
        jet = jet2_apply(fn, _inner(f, g), p=p)
        fd = fd_partials(lambda a, b: scalar(_inner(a, b)), f0, g0, h=1e-4)
        a, b = slots(jet), slots(fd)
        assert np.all(np.abs(a - b) <= 1e-6 * np.maximum(1.0, np.abs(a))), (fn, f0, g0, a, b)


def test_vectorised_jet_equals_pointwise():
    fs = np.linspace(0.3, 1.7, 7)
    gs = np.linspace(0.4, 1.2, 7)
    F, G = Jet2.variables(fs, gs)
    batch = jets.tanh(jets.sqrt(F / G))
    for i in range(7):
        f, g = Jet2.variables(fs[i], gs[i])
        single = jets.tanh(jets.sqrt(f / g))
        np.testing.assert_allclose(slots(batch)[:, i], slots(single), rtol=1e-15)


# ---------------------------------------------------------------- algebra properties

small_int = st.integers(-9, 9).map(float)
jet_ints = st.builds(Jet2, small_int, small_int, small_int, small_int, small_int, small_int)
taylor_ints = st.builds(Taylor3, small_int, small_int, small_int, small_int)


def _equal(x, y):
    np.testing.assert_array_equal(slots(x), slots(y))


@given(jet_ints, jet_ints, jet_ints)
def test_jet2_ring_axioms_exact_on_integers(a, b, c):
    # small integers make every product and sum exact in binary floating point
    _equal(a + b, b + a)
    _equal(a * b, b * a)
    _equal((a + b) + c, a + (b + c))
    _equal((a * b) * c, a * (b * c))
    _equal(a * (b + c), a * b + a * c)


@given(taylor_ints, taylor_ints, taylor_ints)
def test_taylor3_ring_axioms_exact_on_integers(a, b, c):
    _equal(a * b, b * a)
    _equal((a * b) * c, a * (b * c))
    _equal(a * (b + c), a * b + a * c)
    _equal((a + b) + c, a + (b + c))


unit = st.floats(-2, 2, allow_nan=False, allow_subnormal=False)
jet_floats = st.builds(Jet2, unit, unit, unit, unit, unit, unit)


def _abs(x):
    return x._map(abs)


@settings(max_examples=300)
@given(jet_floats, jet_floats, jet_floats)
def test_jet2_ring_axioms_to_rounding(a, b, c):
    # |a|,|b|,|c| evaluated through the same expression bounds the size of
    # every term that enters a slot; differences stay within 4 ulp of that
    bound = slots(_abs(a) * _abs(b) * _abs(c)).real
    # absolute floor covers products that underflow into the subnormal range
    tol = 4 * EPS * bound + 1e-300
    assert np.all(np.abs(slots((a * b) * c) - slots(a * (b * c))) <= tol)
    bound2 = slots(_abs(a) * (_abs(b) + _abs(c))).real
    assert np.all(np.abs(slots(a * (b + c)) - slots(a * b + a * c)) <= 4 * EPS * bound2 + 1e-300)


def test_division_inverts_multiplication():
    f, g = Jet2.variables(0.8, 1.3)
    x = jets.exp(f) * g + f
    y = jets.sin(g) + 2.0
    np.testing.assert_allclose(slots((x * y) / y), slots(x), rtol=1e-14, atol=1e-14)


@pytest.mark.parametrize("fn", ["exp", "ln", "sin", "arctan", "sech", "tanh", "csc", "cot", "sqrt"])
def test_taylor3_restriction_matches_jet2(fn):
    # F(f, g0) expanded along f: c1 = F_f, 2 c2 = F_ff
    g0, f0 = 0.9, 0.6
    t = Taylor3.variable(f0)
    ser = taylor3_apply(fn, 0.5 + 0.3 * t + 0.2 * g0 + 0.1 * t * g0)
    f, g = Jet2.variables(f0, g0)
    jet = jet2_apply(fn, _inner(f, g))
    assert ser.c0 == pytest.approx(jet.value, rel=1e-15)
    assert ser.c1 == pytest.approx(jet.d_f, rel=1e-14)
    assert 2 * ser.c2 == pytest.approx(jet.d_ff, rel=1e-14)


def test_taylor3_third_order_against_known_series():
    # tan via sin/cos: t + t^3/3
    t = Taylor3.variable(0.0)
    ser = jets.sin(t) / jets.cos(t)
    np.testing.assert_allclose(slots(ser), [0, 1, 0, 1 / 3], atol=1e-16)
    # sech(t) = 1 - t^2/2 + ...; third coefficient 0; check at nonzero point against FD of sech'''
    x0 = 0.4
    ser = jets.sech(Taylor3.variable(x0))
    h = 1e-3
    s = lambda x: 1 / math.cosh(x)
    d3 = (s(x0 + 2 * h) - 2 * s(x0 + h) + 2 * s(x0 - h) - s(x0 - 2 * h)) / (2 * h**3)
    assert 6 * ser.c3 == pytest.approx(d3, rel=1e-5)


def test_taylor3_derivative_and_from_derivatives():
    ser = Taylor3.from_derivatives(1.0, 2.0, 6.0, 24.0)
    assert ser.coefficients() == (1.0, 2.0, 3.0, 4.0)
    assert ser.derivatives() == (1.0, 2.0, 6.0, 24.0)
    assert ser.derivative().coefficients() == (2.0, 6.0, 12.0, 0.0)


def test_mixed_scalar_arithmetic():
    f = Jet2.lift_f(2.0)
    assert (3 - f).value == 1.0 and (3 - f).d_f == -1.0
    assert (1 / f).d_f == pytest.approx(-0.25)
    assert (f**2).d_ff == 2.0
    z = f * 1j
    assert z.imag.d_f == 1.0 and z.real.d_f == 0.0
    arr = np.array([1.0, 2.0]) + f
    assert isinstance(arr, Jet2)
