"""Truncated Taylor arithmetic used to differentiate the closed-form potentials.

Two number types live here:

* :class:`Jet2` carries a bivariate value together with its first and second
  partial derivatives in the coordinates ``(f, g)``.
* :class:`Taylor3` carries a univariate Taylor expansion up to third order.

Both accept ``float``, ``complex`` or :class:`numpy.ndarray` slots, so a whole
grid can be differentiated in one pass.  Elementary functions (``exp``,
``log``, ``sqrt``, ``sin``, ``cos``, ``arctan``, ``sech``, ``tanh``, ``csc``,
``cot``, ``reciprocal``, ``power``) dispatch on the argument type and apply the
chain rule exactly.

:func:`fd_partials` is a finite-difference oracle kept separate from the jet
arithmetic; it is meant for tests only.

Example:
    >>> f, g = Jet2.variables(1.0, 1.0)
    >>> u = log(f + g)
    >>> round(float(u.d_fg), 12)
    -0.25
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "Jet2",
    "Taylor3",
    "ELEMENTARY",
    "jet2_apply",
    "taylor3_apply",
    "fd_partials",
    "exp",
    "log",
    "sqrt",
    "sin",
    "cos",
    "arctan",
    "sech",
    "tanh",
    "csc",
    "cot",
    "reciprocal",
    "power",
]

# |sin| below this counts as a pole of csc/cot
POLE_EPS = 1e-12


def _first(mask, value):
    """Return the first entry of ``value`` where ``mask`` holds."""
    mask = np.asarray(mask)
    if mask.ndim == 0:
        return value.item() if isinstance(value, np.generic) else value
    v = np.broadcast_to(np.asarray(value), mask.shape)
    return v[mask].flat[0].item()


def _check(name, mask, value, detail="", exc=DomainError):
    if np.any(mask):
        raise exc(name, _first(mask, value), detail)


def _is_complex(v):
    return np.iscomplexobj(v)


def _on_branch_cut(v):
    # principal branch of log/sqrt/complex powers: cut along (-inf, 0]
    v = np.asarray(v)
    return (v.imag == 0) & (v.real <= 0)


def _power_table(v, p):
    if float(p).is_integer():
        n = int(p)
        if n < 0:
            _check("power", np.asarray(v) == 0, v, f"pole for exponent {n}", PoleError)
        d0 = v**n if n >= 0 else 1.0 / v ** (-n)
        # falling factorial coefficients; v**(n-k) only where needed
        out = [d0]
        coef = 1
        for k in range(1, 4):
            coef *= n - k + 1
            if coef == 0:
                out.append(0.0 * d0)
            elif n - k >= 0:
                out.append(coef * v ** (n - k))
            else:
                out.append(coef / v ** (k - n))
        return tuple(out)
    if _is_complex(v):
        _check("power", _on_branch_cut(v), v, "principal branch")
    else:
        _check("power", np.asarray(v) <= 0, v, "non-integer power needs a positive base")
    d0 = v**p
    return (d0, p * d0 / v, p * (p - 1) * d0 / v**2, p * (p - 1) * (p - 2) * d0 / v**3)


def _table(name, v, p=None):
    """Value and first three derivatives of elementary function ``name`` at ``v``."""
    if name == "exp":
        e = np.exp(v)
        return e, e, e, e
    if name == "ln":
        if _is_complex(v):
            _check("ln", _on_branch_cut(v), v, "principal branch")
        else:
            _check("ln", np.asarray(v) <= 0, v, "needs a positive argument")
        r = 1.0 / v
        return np.log(v), r, -r * r, 2 * r**3
    if name == "sqrt":
        if _is_complex(v):
            _check("sqrt", _on_branch_cut(v), v, "principal branch")
        else:
            _check("sqrt", np.asarray(v) <= 0, v, "needs a positive argument")
        s = np.sqrt(v)
        return s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)
    if name == "sin":
        s, c = np.sin(v), np.cos(v)
        return s, c, -s, -c
    if name == "cos":
        s, c = np.sin(v), np.cos(v)
        return c, -s, -c, s
    if name == "arctan":
        if _is_complex(v):
            w = np.asarray(v)
            _check("arctan", (w.real == 0) & (np.abs(w.imag) >= 1), v, "principal branch")
        q = 1.0 / (1.0 + v * v)
        return np.arctan(v), q, -2 * v * q * q, (6 * v * v - 2) * q**3
    if name == "tanh":
        if _is_complex(v):
            _check("tanh", np.abs(np.cosh(v)) < POLE_EPS, v, "pole", PoleError)
        t = np.tanh(v)
        u = 1 - t * t
        return t, u, -2 * t * u, u * (6 * t * t - 2)
    if name == "sech":
        if _is_complex(v):
            _check("sech", np.abs(np.cosh(v)) < POLE_EPS, v, "pole", PoleError)
        s = 1.0 / np.cosh(v)
        t = np.tanh(v)
        return s, -s * t, s * (2 * t * t - 1), s * t * (5 - 6 * t * t)
    if name == "reciprocal":
        _check("reciprocal", np.asarray(v) == 0, v, "pole", PoleError)
        r = 1.0 / v
        return r, -r * r, 2 * r**3, -6 * r**4
    if name == "power":
        if p is None:
            raise TypeError("power needs an exponent")
        return _power_table(v, p)
    raise ValueError(f"unknown elementary function {name!r}")


_PRIMITIVE = ("exp", "ln", "sqrt", "sin", "cos", "arctan", "tanh", "sech", "reciprocal", "power")
ELEMENTARY = _PRIMITIVE + ("csc", "cot")


def _scalar(x):
    return isinstance(x, (int, float, complex, np.number, np.ndarray))


@dataclass(frozen=True, eq=False)
class Jet2:
    """Second-order bivariate jet in the coordinates ``(f, g)``.

    Slots hold the value and the partials ``F_f, F_g, F_fg, F_ff, F_gg``.
    """

    value: object
    d_f: object = 0.0
    d_g: object = 0.0
    d_fg: object = 0.0
    d_ff: object = 0.0
    d_gg: object = 0.0

    __array_ufunc__ = None  # make numpy defer to the reflected operators

    @classmethod
    def constant(cls, v):
        z = 0.0 * v
        return cls(v, z, z, z, z, z)

    @classmethod
    def lift_f(cls, f):
        z = 0.0 * f
        return cls(f, z + 1.0, z, z, z, z)

    @classmethod
    def lift_g(cls, g):
        z = 0.0 * g
        return cls(g, z, z + 1.0, z, z, z)

    @classmethod
    def variables(cls, f, g):
        """Lift both coordinates, broadcasting array inputs against each other."""
        f, g = np.broadcast_arrays(np.asarray(f, dtype=float), np.asarray(g, dtype=float))
        if f.ndim == 0:
            f, g = float(f), float(g)
        return cls.lift_f(f), cls.lift_g(g)

    def slots(self):
        return (self.value, self.d_f, self.d_g, self.d_fg, self.d_ff, self.d_gg)

    def _map(self, fn):
        return Jet2(*(fn(s) for s in self.slots()))

    @property
    def real(self):
        return self._map(np.real)

    @property
    def imag(self):
        return self._map(np.imag)

    def conj(self):
        return self._map(np.conj)

    def compose(self, d0, d1, d2):
        """Chain rule: jet of ``phi(self)`` given ``phi, phi', phi''`` at ``self.value``."""
        a = self
        return Jet2(
            d0,
            d1 * a.d_f,
            d1 * a.d_g,
            d2 * a.d_f * a.d_g + d1 * a.d_fg,
            d2 * a.d_f * a.d_f + d1 * a.d_ff,
            d2 * a.d_g * a.d_g + d1 * a.d_gg,
        )

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(*(x + y for x, y in zip(self.slots(), other.slots())))
        if _scalar(other):
            return Jet2(self.value + other, *self.slots()[1:])
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._map(lambda s: -s)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, Jet2) or _scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if _scalar(other):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet2):
            a, b = self, other
            return Jet2(
                a.value * b.value,
                a.value * b.d_f + a.d_f * b.value,
                a.value * b.d_g + a.d_g * b.value,
                a.value * b.d_fg + a.d_f * b.d_g + a.d_g * b.d_f + a.d_fg * b.value,
                a.value * b.d_ff + 2 * a.d_f * b.d_f + a.d_ff * b.value,
                a.value * b.d_gg + 2 * a.d_g * b.d_g + a.d_gg * b.value,
            )
        if _scalar(other):
            return self._map(lambda s: s * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * reciprocal(other)
        if _scalar(other):
            _check("reciprocal", np.asarray(other) == 0, other, "pole", PoleError)
            return self * (1.0 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _scalar(other):
            return reciprocal(self) * other
        return NotImplemented

    def __pow__(self, p):
        if isinstance(p, Jet2):
            return exp(p * log(self))
        return power(self, p)

    def __repr__(self):
        names = ("value", "d_f", "d_g", "d_fg", "d_ff", "d_gg")
        body = ", ".join(f"{n}={s!r}" for n, s in zip(names, self.slots()))
        return f"Jet2({body})"


@dataclass(frozen=True, eq=False)
class Taylor3:
    """Univariate truncated Taylor series ``c0 + c1 t + c2 t^2 + c3 t^3``."""

    c0: object
    c1: object = 0.0
    c2: object = 0.0
    c3: object = 0.0

    __array_ufunc__ = None

    @classmethod
    def variable(cls, t0):
        return cls(t0, 1.0, 0.0, 0.0)

    @classmethod
    def constant(cls, v):
        return cls(v, 0.0, 0.0, 0.0)

    @classmethod
    def from_derivatives(cls, y, y1, y2, y3):
        return cls(y, y1, y2 / 2.0, y3 / 6.0)

    def coefficients(self):
        return (self.c0, self.c1, self.c2, self.c3)

    def derivatives(self):
        """``(y, y', y'', y''')`` at the expansion point."""
        return (self.c0, self.c1, 2 * self.c2, 6 * self.c3)

    def derivative(self):
        """Term-by-term derivative; the top coefficient is lost and set to zero."""
        return Taylor3(self.c1, 2 * self.c2, 3 * self.c3, 0.0 * self.c3)

    def compose(self, d0, d1, d2, d3):
        """Series of ``phi(self)`` given ``phi`` and its first three derivatives."""
        _, a1, a2, a3 = self.coefficients()
        return Taylor3(
            d0,
            d1 * a1,
            d1 * a2 + 0.5 * d2 * a1 * a1,
            d1 * a3 + d2 * a1 * a2 + d3 * a1**3 / 6.0,
        )

    def __add__(self, other):
        if isinstance(other, Taylor3):
            return Taylor3(*(x + y for x, y in zip(self.coefficients(), other.coefficients())))
        if _scalar(other):
            return Taylor3(self.c0 + other, self.c1, self.c2, self.c3)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Taylor3(-self.c0, -self.c1, -self.c2, -self.c3)

    def __sub__(self, other):
        if isinstance(other, Taylor3) or _scalar(other):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if _scalar(other):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Taylor3):
            a, b = self.coefficients(), other.coefficients()
            return Taylor3(*(sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(4)))
        if _scalar(other):
            return Taylor3(*(c * other for c in self.coefficients()))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Taylor3):
            return self * reciprocal(other)
        if _scalar(other):
            _check("reciprocal", np.asarray(other) == 0, other, "pole", PoleError)
            return self * (1.0 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _scalar(other):
            return reciprocal(self) * other
        return NotImplemented

    def __pow__(self, p):
        return power(self, p)


def _apply(name, x, p=None):
    if name == "csc":
        s = _apply("sin", x)
        v = s.c0 if isinstance(s, Taylor3) else s.value if isinstance(s, Jet2) else s
        _check("csc", np.abs(v) < POLE_EPS, _value_of(x), "pole of csc", PoleError)
        return _apply("reciprocal", s)
    if name == "cot":
        s = _apply("sin", x)
        v = s.c0 if isinstance(s, Taylor3) else s.value if isinstance(s, Jet2) else s
        _check("cot", np.abs(v) < POLE_EPS, _value_of(x), "pole of cot", PoleError)
        return _apply("cos", x) * _apply("reciprocal", s)
    if isinstance(x, Jet2):
        d0, d1, d2, _ = _table(name, x.value, p)
        return x.compose(d0, d1, d2)
    if isinstance(x, Taylor3):
        return x.compose(*_table(name, x.c0, p))
    return _table(name, x, p)[0]


def _value_of(x):
    if isinstance(x, Jet2):
        return x.value
    if isinstance(x, Taylor3):
        return x.c0
    return x


def jet2_apply(fn: str, x: Jet2, p=None) -> Jet2:
    """Compose elementary function ``fn`` with a :class:`Jet2`.

    ``p`` is the exponent for ``fn="power"``.  Raises :class:`DomainError`
    (or its subclass :class:`PoleError`) naming the function and the point.
    """
    if fn not in ELEMENTARY:
        raise ValueError(f"unknown elementary function {fn!r}")
    if not isinstance(x, Jet2):
        x = Jet2.constant(x)
    return _apply(fn, x, p)


def taylor3_apply(fn: str, x: Taylor3, p=None) -> Taylor3:
    """Compose elementary function ``fn`` with a :class:`Taylor3` through third order."""
    if fn not in ELEMENTARY:
        raise ValueError(f"unknown elementary function {fn!r}")
    if not isinstance(x, Taylor3):
        x = Taylor3.constant(x)
    return _apply(fn, x, p)


def exp(x):
    return _apply("exp", x)


def log(x):
    """Natural logarithm, principal branch."""
    return _apply("ln", x)


def sqrt(x):
    return _apply("sqrt", x)


def sin(x):
    return _apply("sin", x)


def cos(x):
    return _apply("cos", x)


def arctan(x):
    return _apply("arctan", x)


def sech(x):
    return _apply("sech", x)


def tanh(x):
    return _apply("tanh", x)


def csc(x):
    return _apply("csc", x)


def cot(x):
    return _apply("cot", x)


def reciprocal(x):
    return _apply("reciprocal", x)


def power(x, p):
    return _apply("power", x, p)


def _central(F, h):
    """Second-order central differences from a 3x3 block ``F[i, j] = field(f+(i-1)h, g+(j-1)h)``."""
    d_f = (F[2, 1] - F[0, 1]) / (2 * h)
    d_g = (F[1, 2] - F[1, 0]) / (2 * h)
    d_ff = (F[2, 1] - 2 * F[1, 1] + F[0, 1]) / (h * h)
    d_gg = (F[1, 2] - 2 * F[1, 1] + F[1, 0]) / (h * h)
    d_fg = (F[2, 2] - F[2, 0] - F[0, 2] + F[0, 0]) / (4 * h * h)
    return np.array([d_f, d_g, d_fg, d_ff, d_gg])


def fd_partials(
    field: Callable[[float, float], float],
    f: float,
    g: float,
    h: float = 1e-4,
    richardson: bool = False,
) -> Jet2:
    """Finite-difference estimate of a scalar field's jet at ``(f, g)``.

    The field is sampled on the 5x5 stencil ``(f + i h, g + j h)``,
    ``i, j in -2..2``.  Plain estimates use the inner 3x3 block and have
    truncation error O(h^2); with ``richardson=True`` the step-``2h``
    estimates from the outer ring are combined to cancel the h^2 term.
    Rounding error of the second derivatives grows like eps/h^2.

    Oracle only: production residuals use jets.

    Raises:
        DomainError: if ``f + g <= 0`` at any stencil node, or ``h <= 0``.
    """
    if not h > 0:
        raise DomainError("fd_partials", h, "step must be positive")
    offs = np.arange(-2, 3) * h
    ff, gg = np.meshgrid(f + offs, g + offs, indexing="ij")
    bad = ff + gg <= 0
    if np.any(bad):
        raise DomainError("fd_partials", (float(ff[bad][0]), float(gg[bad][0])), "stencil leaves f+g>0")
    F = np.empty((5, 5), dtype=complex)
    for i in range(5):
        for j in range(5):
            F[i, j] = field(float(ff[i, j]), float(gg[i, j]))
    if not np.any(F.imag):
        F = F.real
    est = _central(F[1:4, 1:4], h)
    if richardson:
        coarse = _central(F[::2, ::2], 2 * h)
        est = (4 * est - coarse) / 3
    return Jet2(F[2, 2], *est)
