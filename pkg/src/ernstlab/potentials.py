"""Closed-form Ernst potentials and residuals of the governing PDEs.

The hyperbolic Ernst equation for ``Z = K + iL`` in null coordinates
``(f, g)`` splits into the real pair

    K [2 K_fg + (K_f + K_g)/(f+g)] = 2 (K_f K_g - L_f L_g)
    K [2 L_fg + (L_f + L_g)/(f+g)] = 2 (K_f L_g + K_g L_f)

:func:`ernst_residual` returns ``LHS - RHS`` of both equations.  Potentials
are returned as :class:`PotentialSample` objects whose ``K`` and ``L`` are
:class:`~ernstlab.jets.Jet2` values, so all derivatives are exact.

Every evaluator accepts either plain coordinates (floats or arrays, lifted
internally) or ``Jet2`` coordinates.  Passing jets composes the potential
with a coordinate map, which is how the symmetry transforms move fields
around without re-sampling.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import jets
from .errors import DomainError
from .jets import Jet2

__all__ = [
    "FamilyParams",
    "TrigFamilyParams",
    "EpdCombination",
    "PotentialSample",
    "EPD_BASIS",
    "eval_x1_family",
    "eval_x2_family",
    "eval_trig_family",
    "ernst_residual",
    "invariant_surface_residual",
    "epd_basis_eval",
    "epd_residual",
    "epd_to_ernst",
    "family_as_epd",
    "lift",
]

EPD_BASIS = ("const", "log-sum", "arctan-ratio", "antisym")


@dataclass(frozen=True)
class FamilyParams:
    """Constants ``A, B, C`` of the two real group-invariant families."""

    A: float
    B: float
    C: float = 0.0

    def __post_init__(self):
        for name in ("A", "B", "C"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.A == 0:
            raise ValueError("A must be nonzero (A=0 gives K=0)")
        if self.B == 0:
            raise ValueError("B must be nonzero")

    @property
    def amplitude(self):
        """``A/B``, the radius of the circle traced by ``(K, L - C)``."""
        return self.A / self.B


@dataclass(frozen=True)
class TrigFamilyParams:
    """Complex constants of the csc/cot family before it is made real.

    ``k_sign`` and ``l_sign`` select the two independent ``±`` branches in
    front of the square roots.  Square roots are principal.
    """

    c1: complex
    c2: complex
    c3: complex
    c4: complex = 0.0
    k_sign: int = 1
    l_sign: int = 1

    def __post_init__(self):
        if self.c1 == 0 or self.c2 == 0:
            raise ValueError("c1 and c2 must be nonzero")
        if self.k_sign not in (1, -1) or self.l_sign not in (1, -1):
            raise ValueError("branch signs must be +1 or -1")

    @classmethod
    def from_real(cls, A, B, C=0.0):
        """Constants that turn variant I into the real ``x1`` family (A, B > 0).

        Uses ``sqrt(c1) = iA``, ``sqrt(c2) = iB``, ``c3 = (pi/2)/sqrt(c1)``,
        ``c4 = C``.
        """
        s1 = 1j * A
        return cls(c1=s1 * s1, c2=(1j * B) ** 2, c3=(math.pi / 2) / s1, c4=C)


@dataclass(frozen=True)
class PotentialSample:
    """An Ernst potential ``Z = K + iL`` with second-order jets."""

    K: Jet2
    L: Jet2

    @classmethod
    def from_complex(cls, Z: Jet2) -> "PotentialSample":
        return cls(Z.real, Z.imag)

    @property
    def Z(self) -> Jet2:
        return self.K + self.L * 1j

    @property
    def k_positive(self) -> bool:
        """Validation flag: ``K`` real and strictly positive everywhere."""
        k = np.asarray(self.K.value)
        if np.iscomplexobj(k):
            if np.any(k.imag != 0):
                return False
            k = k.real
        return bool(np.all(k > 0))


@dataclass(frozen=True)
class EpdCombination:
    """A weighted sum of EPD basis solutions; an empty sum is ``F = 0``."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple((float(w), str(tag)) for w, tag in self.terms)
        for w, tag in terms:
            if tag not in EPD_BASIS:
                raise ValueError(f"unknown EPD basis member {tag!r}; expected one of {EPD_BASIS}")
            if not math.isfinite(w):
                raise ValueError("EPD weights must be finite")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, pairs: Iterable):
        return cls(tuple(pairs))

    def evaluate(self, f, g) -> Jet2:
        f, g = lift(f, g)
        out = Jet2.constant(0.0 * f.value)
        for w, tag in self.terms:
            out = out + w * epd_basis_eval(tag, f, g)
        return out


def lift(f, g):
    """Coordinates as jets; plain numbers or arrays are lifted, jets pass through."""
    if isinstance(f, Jet2) and isinstance(g, Jet2):
        return f, g
    if isinstance(f, Jet2) or isinstance(g, Jet2):
        raise TypeError("pass both coordinates as Jet2 or neither")
    return Jet2.variables(f, g)


def _require_sum_positive(name, f, g):
    s = np.asarray(f.value + g.value)
    bad = s <= 0
    if np.any(bad):
        fv = np.broadcast_to(np.asarray(f.value), s.shape)[bad].flat[0]
        gv = np.broadcast_to(np.asarray(g.value), s.shape)[bad].flat[0]
        raise DomainError(name, (float(fv), float(gv)), "needs f+g > 0")


def _require_quadrant(name, f, g):
    fv, gv = np.broadcast_arrays(np.asarray(f.value), np.asarray(g.value))
    bad = (fv <= 0) | (gv <= 0)
    if np.any(bad):
        raise DomainError(name, (float(fv[bad].flat[0]), float(gv[bad].flat[0])), "needs f > 0 and g > 0")


def eval_x1_family(p: FamilyParams, f, g) -> PotentialSample:
    """Potential invariant under ``X1``; depends on ``f+g`` only.

    ``K = (2A/B) x^A / (1 + x^{2A})``, ``L = (A/B)(1 - x^{2A})/(1 + x^{2A}) + C``
    with ``x = f + g``.
    """
    f, g = lift(f, g)
    _require_sum_positive("eval_x1_family", f, g)
    x = f + g
    xa = jets.power(x, p.A)
    x2a = xa * xa
    den = 1.0 + x2a
    K = (2 * p.A / p.B) * xa / den
    L = p.amplitude * (1.0 - x2a) / den + p.C
    return PotentialSample(K, L)


def eval_x2_family(p: FamilyParams, f, g) -> PotentialSample:
    """Potential invariant under ``X2``; depends on ``f/g`` only.

    ``K = (A/B) sech(2A arctan sqrt(f/g))``, ``L = (A/B) tanh(...) + C``.
    """
    f, g = lift(f, g)
    _require_quadrant("eval_x2_family", f, g)
    u = 2 * p.A * jets.arctan(jets.sqrt(f / g))
    return PotentialSample(p.amplitude * jets.sech(u), p.amplitude * jets.tanh(u) + p.C)


def _principal_sqrt(z):
    # a -0.0 imaginary part would put z on the lower lip of the cut
    z = complex(z)
    return cmath.sqrt(complex(z.real, z.imag + 0.0))


def eval_trig_family(p: TrigFamilyParams, variant: str, f, g) -> PotentialSample:
    """General csc/cot solution of the ``X1``-reduced equations; complex in general.

    Variant ``"I"`` uses ``c3 - ln(f+g)``, variant ``"II"`` uses ``c3 + ln(f+g)``.
    The returned sample carries complex jets; ``k_positive`` is ``False``
    unless the constants happen to make ``K`` real and positive.
    """
    if variant not in ("I", "II"):
        raise ValueError("variant must be 'I' or 'II'")
    f, g = lift(f, g)
    _require_sum_positive("eval_trig_family", f, g)
    lnx = jets.log(f + g)
    arg = (-lnx if variant == "I" else lnx) + complex(p.c3)
    theta = _principal_sqrt(p.c1) * arg
    kk = p.k_sign * _principal_sqrt(p.c1 / p.c2)
    ll = p.l_sign * _principal_sqrt(-p.c1 / p.c2)
    return PotentialSample(kk * jets.csc(theta), ll * jets.cot(theta) + complex(p.c4))


def ernst_residual(s: PotentialSample, f, g):
    """``(resK, resL)``: left minus right side of both real Ernst equations."""
    fv = f.value if isinstance(f, Jet2) else f
    gv = g.value if isinstance(g, Jet2) else g
    x = np.asarray(fv + gv)
    if np.any(x <= 0):
        raise DomainError("ernst_residual", (fv, gv), "needs f+g > 0")
    x = x if x.ndim else x.item()
    K, L = s.K, s.L
    res_k = K.value * (2 * K.d_fg + (K.d_f + K.d_g) / x) - 2 * (K.d_f * K.d_g - L.d_f * L.d_g)
    res_l = K.value * (2 * L.d_fg + (L.d_f + L.d_g) / x) - 2 * (K.d_f * L.d_g + K.d_g * L.d_f)
    return res_k, res_l


def invariant_surface_residual(field: Callable, generator: str, f, g):
    """Invariant-surface conditions of ``field`` for ``X1`` or ``X2``.

    ``X1``: ``(K_g - K_f, L_g - L_f)``; ``X2``: ``(g K_g + f K_f, g L_g + f L_f)``.
    ``field`` maps coordinates ``(f, g)`` to a :class:`PotentialSample`.
    """
    s = field(f, g)
    K, L = s.K, s.L
    if generator == "X1":
        return K.d_g - K.d_f, L.d_g - L.d_f
    if generator == "X2":
        return g * K.d_g + f * K.d_f, g * L.d_g + f * L.d_f
    raise ValueError("generator must be 'X1' or 'X2'")


def epd_basis_eval(tag: str, f, g) -> Jet2:
    """One of the basis solutions of the EPD equation, with exact jets.

    ``const`` -> 1, ``log-sum`` -> ln(f+g), ``arctan-ratio`` -> arctan sqrt(f/g),
    ``antisym`` -> f - g.
    """
    f, g = lift(f, g)
    if tag == "const":
        return Jet2.constant(1.0 + 0.0 * f.value)
    if tag == "log-sum":
        _require_sum_positive("epd_basis_eval[log-sum]", f, g)
        return jets.log(f + g)
    if tag == "arctan-ratio":
        _require_quadrant("epd_basis_eval[arctan-ratio]", f, g)
        return jets.arctan(jets.sqrt(f / g))
    if tag == "antisym":
        return f - g
    raise ValueError(f"unknown EPD basis member {tag!r}")


def epd_residual(F: Jet2, f, g):
    """``2(f+g) F_fg + F_f + F_g``."""
    fv = f.value if isinstance(f, Jet2) else f
    gv = g.value if isinstance(g, Jet2) else g
    if np.any(np.asarray(fv + gv) <= 0):
        raise DomainError("epd_residual", (fv, gv), "needs f+g > 0")
    return 2 * (fv + gv) * F.d_fg + F.d_f + F.d_g


def epd_to_ernst(F: Jet2) -> PotentialSample:
    """``Z = sech F + i tanh F``; solves the Ernst equation whenever F solves EPD."""
    if np.iscomplexobj(F.value):
        raise ValueError("epd_to_ernst needs a real-valued F")
    return PotentialSample(jets.sech(F), jets.tanh(F))


def family_as_epd(kind: str, p: FamilyParams):
    """Express a real family as a scaled, shifted EPD image.

    Returns ``(F, scale)`` with ``K = scale * sech F`` and
    ``L = scale * tanh F + C``.  The ``x1`` family has ``1 - x^{2A}`` in the
    numerator of L, so its EPD potential is ``F = -A ln(f+g)``, not
    ``+A ln(f+g)``.  The ``x2`` family uses ``F = 2A arctan sqrt(f/g)``.
    """
    if kind == "x1":
        return EpdCombination.of([(-p.A, "log-sum")]), p.amplitude
    if kind == "x2":
        return EpdCombination.of([(2 * p.A, "arctan-ratio")]), p.amplitude
    raise ValueError("kind must be 'x1' or 'x2'")
