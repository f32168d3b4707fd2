"""Point-symmetry group actions on Ernst potentials.

Coordinate part (``X1``, ``X2``)::

    Z(f, g) -> Z(e^alpha f + beta, e^alpha g - beta)

Target part (``X3``, ``X4``, ``X5``), an ``SL(2, R)`` action on ``Z``::

    Z -> i (a Z + i b) / (c Z + i d),   ad - bc = 1

with ``a = e^{delta/2}``, ``b = gamma e^{-delta/2}``, ``c = -epsilon e^{delta/2}``,
``d = (1 - epsilon gamma) e^{-delta/2}`` for the composite
``exp(epsilon X5) exp(gamma X3) exp(delta X4)`` (scale first, then shift, then
``X5``).

All maps accept complex numbers, complex arrays, or complex
:class:`~ernstlab.jets.Jet2` values.  On jets the chain rule is applied
exactly, so a transformed :class:`~ernstlab.potentials.PotentialSample` can be
fed straight back into :func:`~ernstlab.potentials.ernst_residual`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, PoleError
from .jets import Jet2
from .potentials import PotentialSample, lift

__all__ = [
    "GroupParams",
    "CoordinateAction",
    "MoebiusMatrix",
    "apply_coordinate_action",
    "moebius_from_params",
    "apply_moebius",
    "compose_moebius",
    "apply_x5_action",
    "shift_scale",
    "ehlers_from_real",
    "generator_coefficients",
    "generator_derivative_check",
    "transform_sample",
    "coordinate_field",
    "target_field",
]

DET_TOL = 1e-12
GENERATOR_STEP = 1e-6

Field = Callable[..., PotentialSample]


@dataclass(frozen=True)
class GroupParams:
    """Parameters of the five one-parameter subgroups."""

    alpha: float = 0.0  # dilation, X2
    beta: float = 0.0  # null translation, X1
    gamma: float = 0.0  # L shift, X3
    delta: float = 0.0  # Z scale, X4
    epsilon: float = 0.0  # X5

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "epsilon"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def coordinate_action(self) -> "CoordinateAction":
        return CoordinateAction.from_params(self.alpha, self.beta)

    def moebius(self) -> "MoebiusMatrix":
        return moebius_from_params(self.gamma, self.delta, self.epsilon)


@dataclass(frozen=True)
class CoordinateAction:
    """``(f, g) -> (scale f + shift, scale g - shift)``; dilation then translation."""

    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @classmethod
    def from_params(cls, alpha, beta):
        return cls(math.exp(alpha), beta)


def apply_coordinate_action(act: CoordinateAction, f, g):
    """New coordinates; note ``f' + g' = scale (f + g)``."""
    return act.scale * f + act.shift, act.scale * g - act.shift


@dataclass(frozen=True)
class MoebiusMatrix:
    """Real unit-determinant matrix ``[[a, b], [c, d]]``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not abs(det - 1.0) <= DET_TOL:
            raise ValueError(f"determinant {det!r} is not 1")

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def normalized(cls, a, b, c, d):
        """Scale an invertible matrix of positive determinant to det 1 with a >= 0."""
        det = a * d - b * c
        if not det > 0:
            raise ValueError("matrix must have positive determinant to represent SL(2,R)")
        k = 1.0 / math.sqrt(det)
        return cls(a * k, b * k, c * k, d * k).canonical()

    def canonical(self):
        """Representative with ``a > 0`` (or ``a == 0, b > 0``); same Moebius map."""
        if self.a < 0 or (self.a == 0 and self.b < 0):
            return MoebiusMatrix(-self.a, -self.b, -self.c, -self.d)
        return self

    def inverse(self):
        return MoebiusMatrix(self.d, -self.b, -self.c, self.a)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    def as_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other):
        if not isinstance(other, MoebiusMatrix):
            return NotImplemented
        return compose_moebius(self, other)


def moebius_from_params(gamma: float, delta: float, epsilon: float) -> MoebiusMatrix:
    """Matrix of ``exp(epsilon X5) exp(gamma X3) exp(delta X4)``."""
    up = math.exp(delta / 2)
    down = math.exp(-delta / 2)
    return MoebiusMatrix(up, gamma * down, -epsilon * up, (1 - epsilon * gamma) * down)


def compose_moebius(m2: MoebiusMatrix, m1: MoebiusMatrix) -> MoebiusMatrix:
    """``m2 . m1``: apply ``m1`` first.

    The product is re-validated, so determinant drift beyond 1e-12 raises.
    """
    return MoebiusMatrix(
        m2.a * m1.a + m2.b * m1.c,
        m2.a * m1.b + m2.b * m1.d,
        m2.c * m1.a + m2.d * m1.c,
        m2.c * m1.b + m2.d * m1.d,
    )


def _value(z):
    return z.value if isinstance(z, Jet2) else z


def _check_pole(name, den, scale, arg):
    den = np.asarray(_value(den))
    bad = np.abs(den) <= 1e-14 * np.asarray(scale)
    if np.any(bad):
        raise PoleError(name, np.broadcast_to(np.asarray(_value(arg)), bad.shape)[bad].flat[0].item(), "pole")


def apply_moebius(m: MoebiusMatrix, Z):
    """``i (a Z + i b) / (c Z + i d)``."""
    den = m.c * Z + 1j * m.d
    _check_pole("apply_moebius", den, np.abs(m.c * _value(Z)) + abs(m.d), Z)
    return 1j * (m.a * Z + 1j * m.b) / den


def apply_x5_action(epsilon: float, Z):
    """``Z / (1 + i epsilon Z)``, the flow of ``X5``."""
    den = 1.0 + 1j * epsilon * Z
    _check_pole("apply_x5_action", den, 1.0 + np.abs(epsilon * _value(Z)), Z)
    return Z / den


def shift_scale(gamma: float, delta: float, Z):
    """``e^delta Z + i gamma``: ``X4`` with parameter delta followed by ``X3`` with gamma."""
    return math.exp(delta) * Z + 1j * gamma


def ehlers_from_real(Zo):
    """``(1 + i Zo)/(i + Zo)`` for a positive real potential ``Zo``.

    This is the Moebius map with ``(gamma, delta, epsilon) = (-1/2, -ln 2, -1)``.
    For ``Zo = exp(F)`` the result is ``sech F + i tanh F``; writing the real
    potential as ``Zo = exp(2F)`` instead yields the EPD image of ``2F``.
    """
    v = np.asarray(_value(Zo))
    bad = np.ones(v.shape, bool) if np.iscomplexobj(v) else v <= 0
    if np.any(bad):
        raise DomainError("ehlers_from_real", v[bad].flat[0].item(), "needs a positive real potential")
    return (1.0 + 1j * Zo) / (1j + Zo)


def generator_coefficients(tag: str, Z):
    """``eta_K + i eta_L`` of generator ``tag`` at ``Z = K + iL``."""
    if tag == "X3":
        return 1j + 0 * Z
    if tag == "X4":
        return Z
    if tag == "X5":
        K, L = Z.real, Z.imag
        return 2 * K * L + 1j * (L * L - K * K)
    raise ValueError("tag must be X3, X4 or X5")


_ACTIONS = {
    "X3": lambda p, Z: shift_scale(p, 0.0, Z),
    "X4": lambda p, Z: shift_scale(0.0, p, Z),
    "X5": apply_x5_action,
}


def generator_derivative_check(tag: str, Z, step: float = GENERATOR_STEP):
    """Central difference of the group action at parameter 0 minus the generator.

    Should be O(step^2) for a consistent action/generator pair.
    """
    if tag not in _ACTIONS:
        raise ValueError("tag must be X3, X4 or X5")
    act = _ACTIONS[tag]
    deriv = (act(step, Z) - act(-step, Z)) / (2 * step)
    return deriv - generator_coefficients(tag, Z)


def transform_sample(s: PotentialSample, zmap: Callable) -> PotentialSample:
    """Apply a target-space map to a real potential, carrying jets by the chain rule."""
    return PotentialSample.from_complex(zmap(s.Z))


def coordinate_field(field: Field, act: CoordinateAction) -> Field:
    """``(f, g) -> field(act(f, g))``."""

    def moved(f, g):
        fj, gj = lift(f, g)
        return field(*apply_coordinate_action(act, fj, gj))

    return moved


def target_field(field: Field, zmap: Callable) -> Field:
    """``(f, g) -> zmap(field(f, g))`` pointwise in Z."""

    def mapped(f, g):
        return transform_sample(field(f, g), zmap)

    return mapped
