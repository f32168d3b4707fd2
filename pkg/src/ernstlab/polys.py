"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial is a mapping from exponent tuples to :class:`fractions.Fraction`
coefficients; zero coefficients are never stored.  Subclasses fix the
variable names, and may allow negative exponents (Laurent polynomials).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = ["SparsePoly", "as_fraction"]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact coefficient required, got {type(x).__name__}")


class SparsePoly:
    variables: tuple = ()
    allow_negative = False

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        n = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent tuple {exps} does not match variables {self.variables}")
            if not self.allow_negative and any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    # ------------------------------------------------------------ construction

    @classmethod
    def const(cls, c):
        return cls({(0,) * len(cls.variables): c})

    @classmethod
    def var(cls, name):
        return cls.monomial(1, **{name: 1})

    @classmethod
    def monomial(cls, coef, **exps):
        unknown = set(exps) - set(cls.variables)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)}")
        return cls({tuple(exps.get(v, 0) for v in cls.variables): coef})

    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, (int, Rational)):
            return type(self).const(other)
        return None

    # ------------------------------------------------------------ arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return type(self)(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + c1 * c2
        return type(self)(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if len(self.terms) == 1:
            (k, c), = self.terms.items()
            if n < 0 and (not self.allow_negative or c == 0):
                raise ValueError("negative powers need a Laurent monomial")
            return type(self)({tuple(n * e for e in k): c**n})
        if n < 0:
            raise ValueError("negative powers need a Laurent monomial")
        out = type(self).const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash((type(self), frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # ------------------------------------------------------------ calculus

    def partial(self, name):
        i = self.variables.index(name)
        out = {}
        for k, c in self.terms.items():
            if k[i]:
                kk = list(k)
                kk[i] -= 1
                out[tuple(kk)] = c * k[i]
        return type(self)(out)

    def __call__(self, *values):
        """Evaluate; exact when the values are ``Fraction``/``int``, float otherwise."""
        if len(values) != len(self.variables):
            raise TypeError(f"expected {len(self.variables)} values")
        exact = all(isinstance(v, (int, Fraction)) for v in values)
        total = Fraction(0) if exact else 0.0
        for k, c in self.terms.items():
            term = c if exact else float(c)
            for v, e in zip(values, k):
                if e:
                    term = term * (v**e if e > 0 else (Fraction(1) / v ** (-e) if exact else 1.0 / np.power(v, -e)))
            total = total + term
        return total

    # ------------------------------------------------------------ display

    def _sort_key(self, k):
        return (-sum(k), tuple(-e for e in k))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=self._sort_key):
            c = self.terms[k]
            factors = []
            for v, e in zip(self.variables, k):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}")
            mono = "*".join(factors)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        return f"{type(self).__name__}({self})"
