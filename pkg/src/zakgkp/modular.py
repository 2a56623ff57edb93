"""Centered modular arithmetic and canonicalization of Zak points.

A real number splits against a period ``T`` and a centering ``mu`` as

    x = frac + whole,   frac in [-mu, T - mu),   whole = n * T,  n integer.

The half-open window is enforced by floor arithmetic alone; there is no
epsilon snapping, so values one ulp below a boundary stay below it.  The
default centerings used throughout the package are ``a/4`` for the first
Zak variable and ``pi/a`` for the second, which places the fundamental
patch at ``[-a/4, 3a/4) x [-pi/a, pi/a)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "CenteredDecomposition",
    "CanonicalZakPoint",
    "split",
    "frac_part",
    "closest_int_multiple",
    "decompose",
    "canonicalize_zak_point",
]


def split(x: float, period: float, centering: float) -> tuple[float, int]:
    """Return ``(frac, n)`` with ``frac = x - n*period`` in ``[-centering, period-centering)``.

    Raises ValueError for non-positive periods.  For ``|x|`` much larger
    than the period the fractional part carries the usual floating-point
    cancellation error.  The left-closed bound is authoritative: when the
    centering is so small relative to the period that the two boundaries
    are not float-distinguishable, the value stays on the in-range side of
    the lower bound.
    """
    if period <= 0:
        raise ValueError(f"period must be positive, got {period!r}")
    n = math.floor((x + centering) / period)
    frac = x - n * period
    # The rounded quotient can land one cell off when x sits within an ulp
    # of a boundary; repair deterministically instead of tolerating it.
    if frac < -centering:
        n -= 1
        frac = x - n * period
    elif frac >= period - centering:
        candidate = x - (n + 1) * period
        if candidate >= -centering:
            n += 1
            frac = candidate
    return frac, n


def frac_part(x: float, period: float, centering: float) -> float:
    """Centered fractional part of ``x``, in ``[-centering, period - centering)``."""
    return split(x, period, centering)[0]


def closest_int_multiple(x: float, period: float, centering: float) -> float:
    """Centered closest integer multiple of ``period``, i.e. ``x - frac_part(x)``."""
    frac, n = split(x, period, centering)
    return n * period


@dataclass(frozen=True)
class CenteredDecomposition:
    """Exact split ``x = frac + whole`` with ``whole`` an integer multiple of ``period``."""

    frac: float
    whole: float
    period: float
    centering: float

    @property
    def x(self) -> float:
        return self.frac + self.whole

    @property
    def index(self) -> int:
        """The integer ``whole / period``."""
        return round(self.whole / self.period)


def decompose(x: float, period: float, centering: float) -> CenteredDecomposition:
    frac, n = split(x, period, centering)
    return CenteredDecomposition(frac=frac, whole=n * period, period=period, centering=centering)


@dataclass(frozen=True)
class CanonicalZakPoint:
    """A point reduced to the fundamental patch together with its reduction phase.

    ``u`` lies in ``[-a/4, 3a/4)``, ``v`` in ``[-pi/a, pi/a)`` and ``phase``
    is the unit-modulus factor such that the ket at the raw coordinates
    equals ``phase`` times the ket at ``(u, v)``.
    """

    u: float
    v: float
    phase: complex


def canonicalize_zak_point(x: float, y: float, a: float) -> CanonicalZakPoint:
    """Reduce an unrestricted Zak point into the fundamental patch of period ``a``.

    Wrapping in the first variable by ``n`` periods costs the phase
    ``exp(-i * n*a * v)``; wrapping in the second variable is free.
    """
    if a <= 0:
        raise ValueError(f"period a must be positive, got {a!r}")
    u, n = split(x, a, a / 4)
    v, _ = split(y, 2 * math.pi / a, math.pi / a)
    phase = cmath.exp(-1j * (n * a) * v)
    return CanonicalZakPoint(u=u, v=v, phase=phase)
