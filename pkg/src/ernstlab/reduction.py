"""Order reduction of the third-order ODE satisfied by X1-invariant potentials.

With ``s = f + g`` at fixed ``g``, ``K`` obeys ``K''' = F(s, K, K', K'')`` where::

    F = -4 K1^3/K^2 - 3 K2/s - K1/s^2 + 5 K1 K2/K + 5 K1^2/(K s)

The two integrating factors ``Lambda1 = s^2/K`` and ``Lambda2 = s^2/K^3`` give
first integrals ``psi1`` and ``psi2``; fixing ``psi1 = c1``, ``psi2 = c2`` yields
the first-order equation ``(c1 K^2 + s^2 K1^2)/K^4 = c2``.

Closed-form quantities are evaluated directly.  The line-integral route builds
the one-form exactly from ``F`` and ``Lambda`` and integrates it numerically,
giving an independent reconstruction of ``psi``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .jets import Taylor3
from .polys import SparsePoly
from .quadrature import adaptive_simpson

__all__ = [
    "JetPoly",
    "JetPoint",
    "IntegratingFactor",
    "AlphaAnsatz",
    "rhs_F",
    "psi_values",
    "reduced_ode_residual",
    "psi_algebraic_identity",
    "first_integral_identity_check",
    "determining_system",
    "determining_system_residuals",
    "one_form",
    "psi_poly",
    "line_integral_first_integral",
]


class JetPoly(SparsePoly):
    """Laurent polynomial in ``s, K, K1, K2``; ``d/dx`` is ``d/ds``."""

    variables = ("s", "K", "K1", "K2")
    allow_negative = True
    __slots__ = ()


class IntegratingFactor(str, enum.Enum):
    LAMBDA1 = "Lambda1"
    LAMBDA2 = "Lambda2"


def _tag(tag) -> IntegratingFactor:
    try:
        return IntegratingFactor(tag)
    except ValueError:
        raise ValueError(f"unknown integrating factor {tag!r}; use Lambda1 or Lambda2") from None


@dataclass(frozen=True)
class JetPoint:
    """Point ``(f, K, K1, K2[, K3])`` of jet space, with the parameter ``g``.

    Fields may be floats or broadcastable arrays.
    """

    f: object
    g: object
    K: object
    K1: object
    K2: object
    K3: object = None

    def __post_init__(self):
        K = np.asarray(self.K)
        if np.any(K == 0):
            raise DomainError("JetPoint", _first(K, K == 0), "K must be nonzero")
        s = np.asarray(self.f + self.g)
        if np.any(~(s > 0)):
            raise DomainError("JetPoint", _first(s, ~(s > 0)), "f + g must be positive")

    @property
    def s(self):
        return self.f + self.g


def _first(arr, mask):
    return np.broadcast_to(arr, mask.shape)[mask].flat[0].item()


# -------------------------------------------------------------- closed forms
# plain arithmetic so that floats, arrays and Taylor3 series all work


def _F(s, K, K1, K2):
    return -4 * K1 * K1 * K1 / (K * K) - 3 * K2 / s - K1 / (s * s) + 5 * K1 * K2 / K + 5 * K1 * K1 / (K * s)


def _psi1(s, K, K1, K2):
    return s / (K * K) * (K1 * (K - 2 * s * K1) + s * K * K2)


def _psi2(s, K, K1, K2):
    K2sq = K * K
    return s / (K2sq * K2sq) * (K1 * (K - s * K1) + s * K * K2)


def _lambda(tag, s, K):
    return s * s / K if tag is IntegratingFactor.LAMBDA1 else s * s / (K * K * K)


_PSI = {IntegratingFactor.LAMBDA1: _psi1, IntegratingFactor.LAMBDA2: _psi2}


def rhs_F(p: JetPoint):
    """``K''' `` as forced by the ODE at the jet point."""
    return _F(p.s, p.K, p.K1, p.K2)


def psi_values(p: JetPoint):
    """``(psi1, psi2)``; both vanish when ``K1 = K2 = 0``."""
    args = (p.s, p.K, p.K1, p.K2)
    return _psi1(*args), _psi2(*args)


def reduced_ode_residual(p: JetPoint, c1, c2):
    K2 = p.K * p.K
    return (c1 * K2 + p.s**2 * p.K1**2) / (K2 * K2) - c2


def psi_algebraic_identity(p: JetPoint):
    """``psi2 K^4 - psi1 K^2 - s^2 K1^2``, zero up to rounding."""
    psi1, psi2 = psi_values(p)
    K2 = p.K * p.K
    return psi2 * K2 * K2 - psi1 * K2 - p.s**2 * p.K1**2


def first_integral_identity_check(trajectory: Taylor3, f, g, tag):
    """``dpsi/df - Lambda (K3 - F)`` along an arbitrary trajectory.

    ``trajectory`` is the order-3 Taylor expansion of ``K`` about ``f``.  The
    total derivative is taken by series arithmetic, so the check holds whether
    or not the trajectory solves the ODE.
    """
    tag = _tag(tag)
    K0, Kp, Kpp, Kppp = trajectory.derivatives()
    JetPoint(f, g, K0, Kp, Kpp, Kppp)
    K1 = trajectory.derivative()
    K2 = K1.derivative()
    s = Taylor3.variable(f) + g
    dpsi = _PSI[tag](s, trajectory, K1, K2).c1
    s0 = f + g
    return dpsi - _lambda(tag, s0, K0) * (Kppp - _F(s0, K0, Kp, Kpp))


# -------------------------------------------------------------- exact symbolic layer

_s, _K, _K1, _K2 = (JetPoly.var(v) for v in JetPoly.variables)


def _inv(name, n=1):
    return JetPoly.monomial(1, **{name: -n})


@lru_cache(maxsize=None)
def _F_poly():
    return (
        -4 * _K1**3 * _inv("K", 2)
        - 3 * _K2 * _inv("s")
        - _K1 * _inv("s", 2)
        + 5 * _K1 * _K2 * _inv("K")
        + 5 * _K1**2 * _inv("K") * _inv("s")
    )


@lru_cache(maxsize=None)
def _lambda_poly(tag):
    return _s**2 * _inv("K", 1 if tag is IntegratingFactor.LAMBDA1 else 3)


@lru_cache(maxsize=None)
def psi_poly(tag) -> JetPoly:
    tag = _tag(tag)
    if tag is IntegratingFactor.LAMBDA1:
        return _s * _inv("K", 2) * (_K1 * (_K - 2 * _s * _K1) + _s * _K * _K2)
    return _s * _inv("K", 4) * (_K1 * (_K - _s * _K1) + _s * _K * _K2)


@lru_cache(maxsize=None)
def one_form(tag):
    """Exact coefficients ``(w_x, w_K, w_K1, w_K2)`` of the reconstruction one-form.

    The form is ``P (dK - K1 dx) + Q (dK1 - K2 dx) + Lam (dK2 - F dx)`` with
    ``P`` and ``Q`` assembled from derivatives of ``F Lam`` and ``Lam``.
    """
    tag = _tag(tag)
    F, Lam = _F_poly(), _lambda_poly(tag)
    FL = F * Lam

    def d(p, *names):
        for n in names:
            p = p.partial(n)
        return p

    P = (
        -d(FL, "K1")
        + d(FL, "s", "K2")
        + _K1 * d(FL, "K", "K2")
        + _K2 * d(FL, "K1", "K2")
        + _K2 * d(Lam, "K")
        + d(Lam, "s", "s")
        + _K1**2 * d(Lam, "K", "K")
        + _K2**2 * d(Lam, "K1", "K1")
        + 2 * _K1 * d(Lam, "s", "K")
        + 2 * _K2 * d(Lam, "s", "K1")
        + 2 * _K1 * _K2 * d(Lam, "K", "K1")
    )
    Q = -(d(FL, "K2") + d(Lam, "s") + _K1 * d(Lam, "K") + _K2 * d(Lam, "K1"))
    R = Lam
    return (-(P * _K1 + Q * _K2 + R * F), P, Q, R)


def line_integral_first_integral(endpoint: JetPoint, tag, Ktilde=None, tol: float = 1e-8):
    """Integrate the one-form from ``(0, Ktilde, 0, 0)`` to ``endpoint``.

    The path runs parallel to the axes in the order ``f``, ``K``, ``K1``,
    ``K2``.  ``Ktilde`` defaults to ``sign(K)``.  The result differs from
    ``psi`` at the endpoint by an endpoint-independent constant.

    Raises:
        DomainError: if the path would cross ``K = 0`` or leave ``f + g > 0``.
        QuadratureError: if a leg does not converge.
    """
    tag = _tag(tag)
    f, g, K, K1, K2 = (float(v) for v in (endpoint.f, endpoint.g, endpoint.K, endpoint.K1, endpoint.K2))
    if Ktilde is None:
        Ktilde = math.copysign(1.0, K)
    if Ktilde == 0 or (Ktilde > 0) != (K > 0):
        raise DomainError("line_integral_first_integral", Ktilde, "path from Ktilde would cross K = 0")
    if not g > 0:
        raise DomainError("line_integral_first_integral", g, "f-leg starts at f = 0 and needs g > 0")
    wx, wK, wK1, wK2 = one_form(tag)

    # each leg varies one coordinate; the others sit at their current values
    legs = (
        (lambda t: wx(t + g, Ktilde, 0.0, 0.0), 0.0, f),
        (lambda t: wK(f + g, t, 0.0, 0.0), Ktilde, K),
        (lambda t: wK1(f + g, K, t, 0.0), 0.0, K1),
        (lambda t: wK2(f + g, K, K1, t), 0.0, K2),
    )
    return math.fsum(adaptive_simpson(_vectorised(fn), a, b, tol / 4) for fn, a, b in legs)


def _vectorised(fn):
    # polynomial evaluation returns a scalar when the leg integrand is constant
    def wrapped(t):
        return np.broadcast_to(np.asarray(fn(t), dtype=float), np.shape(t)).copy()

    return wrapped


# -------------------------------------------------------------- determining system


@dataclass(frozen=True)
class AlphaAnsatz:
    """``alpha(f, K) = sum coef * s^m * K^n`` over ``terms = ((coef, m, n), ...)``.

    Coefficients are converted to exact rationals (floats exactly).
    """

    terms: tuple

    def __post_init__(self):
        if not any(Fraction(c) for c, _, _ in self.terms):
            raise ValueError("ansatz must have a nonzero coefficient")

    @classmethod
    def from_constants(cls, c1, c2):
        """``c1 s^2/K + c2 s^2/K^3``, the general solution of the system."""
        return cls(((c1, 2, -1), (c2, 2, -3)))

    def poly(self) -> JetPoly:
        return JetPoly({(m, n, 0, 0): Fraction(c) for c, m, n in self.terms})


def determining_system(alpha: JetPoly):
    """The six linear PDEs for ``alpha(f, K)`` as exact Laurent polynomials."""
    a = alpha
    aK, af = a.partial("K"), a.partial("s")
    aKK, afK, aff = aK.partial("K"), af.partial("K"), af.partial("s")
    aKKK, afKK, affK, afff = aKK.partial("K"), afK.partial("K"), afK.partial("s"), aff.partial("s")
    iK, iS = _inv("K"), _inv("s")
    return (
        9 * iK**2 * a + 15 * iK * aK + 3 * aKK,
        -6 * iK**3 * a - 2 * iK**2 * aK + 5 * iK * aKK + aKKK,
        -10 * iS * iK * a - 6 * iS * aK + 5 * iK * af + 3 * afK,
        -8 * iS**3 * a + 7 * iS**2 * af - 3 * iS * aff + afff,
        5 * iS * iK**2 * a - 5 * iS * iK * aK - 3 * iS * aKK + 2 * iK**2 * af + 10 * iK * afK + 3 * afKK,
        10 * iS**2 * iK * a + 6 * iS**2 * aK - 10 * iS * iK * af - 6 * iS * afK + 5 * iK * aff + 3 * affK,
    )


def determining_system_residuals(a: AlphaAnsatz, f, g, K):
    """The six residuals at ``(f, K)``, using exact partials of ``alpha``."""
    JetPoint(f, g, K, 0.0, 0.0)
    s = f + g
    return np.array([float(eq(s, K, 0.0, 0.0)) for eq in determining_system(a.poly())])
