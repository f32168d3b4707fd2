"""Vectorised adaptive Simpson quadrature.

All intervals that still need refinement are processed together, one
bisection level at a time, so the integrand is called on whole numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import QuadratureError

MAX_INTERVALS = 2**20
MAX_LEVELS = 60


def adaptive_simpson(fn, a: float, b: float, tol: float = 1e-8, *, initial: int = 8, max_intervals: int = MAX_INTERVALS):
    """Integrate a vectorised ``fn`` over ``[a, b]`` to absolute tolerance ``tol``.

    The tolerance is split between subintervals in proportion to their length.
    Accepted panels get the usual Richardson correction ``(S2 - S1)/15``.

    Raises:
        QuadratureError: if more than ``max_intervals`` panels would be needed.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(fn, b, a, tol, initial=initial, max_intervals=max_intervals)

    edges = np.linspace(a, b, initial + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    flo, fmid, fhi = fn(lo), fn(mid), fn(hi)
    whole = (hi - lo) / 6.0 * (flo + 4 * fmid + fhi)
    local_tol = np.full(lo.shape, tol / initial)

    accepted = []
    for _ in range(MAX_LEVELS):
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = fn(lm), fn(rm)
        left = (mid - lo) / 6.0 * (flo + 4 * flm + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4 * frm + fhi)
        both = left + right
        err = both - whole
        done = np.abs(err) <= 15.0 * local_tol
        if not np.all(np.isfinite(both)):
            raise QuadratureError("non-finite integrand value")
        accepted.append(both[done] + err[done] / 15.0)
        keep = ~done
        if not keep.any():
            return math.fsum(np.concatenate(accepted))
        if 2 * int(keep.sum()) > max_intervals:
            raise QuadratureError(f"more than {max_intervals} subintervals needed on [{a}, {b}]")
        # children: [lo, mid] and [mid, hi] of every rejected panel
        lo, mid, hi = (
            np.concatenate([lo[keep], mid[keep]]),
            np.concatenate([lm[keep], rm[keep]]),
            np.concatenate([mid[keep], hi[keep]]),
        )
        flo, fmid, fhi = (
            np.concatenate([flo[keep], fmid[keep]]),
            np.concatenate([flm[keep], frm[keep]]),
            np.concatenate([fmid[keep], fhi[keep]]),
        )
        whole = np.concatenate([left[keep], right[keep]])
        local_tol = np.concatenate([local_tol[keep], local_tol[keep]]) / 2.0
    raise QuadratureError(f"no convergence after {MAX_LEVELS} bisection levels on [{a}, {b}]")
