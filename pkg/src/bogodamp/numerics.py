"""Shared 1d numerics: adaptive quadrature, tail maps, bracketed roots.

The quadrature backend is adaptive Gauss-Kronrod with interior nodes only,
so integrands with removable endpoint behaviour are never evaluated exactly
at an endpoint.  Semi-infinite integrals are folded onto (0, 1) by an
explicit change of variables before the adaptive pass.  Two maps are
offered: the rational map t = a + c*s/(1-s), which handles power law and
exponential tails alike once c roughly matches the decay scale, and the
exponential map t = a - c*log(1-s) for integrands that die like exp(-t/c).
Error estimates come straight from the Kronrod pair and are conservative
in the usual sense: trustworthy as an upper bound most of the time, and
never off by much more than an order of magnitude on sane integrands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate, optimize

from .errors import BracketError, IntegrandError, ParameterError

__all__ = [
    "QuadratureSpec",
    "QuadResult",
    "RootBracket",
    "integrate_adaptive",
    "find_root_bracketed",
    "scan_sign_changes",
]

_TAIL_MAPS = ("none", "rational", "exponential")


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budget for one adaptive integration.

    abs_tol = 0 with rel_tol > 0 asks for pure relative control.  The
    tail_map is only consulted when the upper limit is infinite and
    tail_scale sets the decay scale `c` of that map.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 2000
    tail_map: str = "rational"
    tail_scale: float = 1.0

    def __post_init__(self):
        if not (self.rel_tol >= 0 and self.abs_tol >= 0):
            raise ParameterError("tolerances must be >= 0")
        if self.rel_tol == 0 and self.abs_tol == 0:
            raise ParameterError("need rel_tol > 0 or abs_tol > 0")
        if self.max_subdivisions < 10:
            raise ParameterError(
                f"max_subdivisions must be >= 10, got {self.max_subdivisions}")
        if self.tail_map not in _TAIL_MAPS:
            raise ParameterError(
                f"tail_map must be one of {_TAIL_MAPS}, got {self.tail_map!r}")
        if not (math.isfinite(self.tail_scale) and self.tail_scale > 0):
            raise ParameterError("tail_scale must be positive and finite")


class QuadResult(NamedTuple):
    value: float
    error: float
    ok: bool


def integrate_adaptive(f: Callable[[float], float], a: float, b: float,
                       spec: QuadratureSpec | None = None) -> QuadResult:
    """Integrate f from a to b, b = inf allowed.

    Returns (value, error, ok).  ok is False when the subdivision budget
    ran out or roundoff blocked the requested tolerance; the value and the
    error estimate are still the best available, never silently wrong.
    Non-finite integrand values raise IntegrandError with the location.
    """
    if spec is None:
        spec = QuadratureSpec()
    a = float(a)
    b = float(b)
    if not math.isfinite(a):
        raise ParameterError(f"lower limit must be finite, got {a}")
    if math.isnan(b):
        raise ParameterError("upper limit is nan")

    def checked(x):
        y = f(x)
        if not math.isfinite(y):
            raise IntegrandError(f"integrand returned {y!r} at x = {x!r}")
        return y

    if math.isinf(b):
        if spec.tail_map == "none":
            raise ParameterError("infinite upper limit needs a tail_map")
        c = spec.tail_scale
        if spec.tail_map == "rational":
            def folded(s):
                onems = 1.0 - s
                return checked(a + c * s / onems) * c / (onems * onems)
        else:
            def folded(s):
                onems = 1.0 - s
                return checked(a - c * math.log(onems)) * c / onems
        target, lo, hi = folded, 0.0, 1.0
    else:
        target, lo, hi = checked, a, b

    if lo == hi:
        return QuadResult(0.0, 0.0, True)

    out = integrate.quad(target, lo, hi, epsabs=spec.abs_tol,
                         epsrel=spec.rel_tol, limit=spec.max_subdivisions,
                         full_output=1)
    # a 4th element is the warning message quadpack attaches on trouble
    return QuadResult(float(out[0]), float(out[1]), len(out) < 4)


@dataclass(frozen=True)
class RootBracket:
    """Interval [lo, hi] with recorded endpoint values enclosing a root.

    Degenerate brackets (lo == hi, both values 0) mark a grid point that
    landed exactly on a zero.
    """

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise BracketError(f"bracket endpoints must be finite: {self.lo}, {self.hi}")
        if self.lo > self.hi:
            raise BracketError(f"bracket is reversed: [{self.lo}, {self.hi}]")
        if self.f_lo > 0 and self.f_hi > 0 or self.f_lo < 0 and self.f_hi < 0:
            raise BracketError(
                f"no sign change: f({self.lo}) = {self.f_lo}, f({self.hi}) = {self.f_hi}")


def find_root_bracketed(f: Callable[[float], float], bracket: RootBracket,
                        tol: float = 1e-12) -> float:
    """Root of f inside a validated bracket, to relative accuracy tol."""
    if not (tol > 0):
        raise ParameterError(f"tol must be > 0, got {tol}")
    if bracket.lo == bracket.hi:
        return bracket.lo
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    scale = max(abs(bracket.lo), abs(bracket.hi), 1.0)
    return float(optimize.brentq(f, bracket.lo, bracket.hi,
                                 xtol=0.125 * tol * scale,
                                 rtol=max(9.0e-16, tol), maxiter=200))


def _collect_brackets(xs, fs):
    out = []
    for i in range(len(xs) - 1):
        flo, fhi = fs[i], fs[i + 1]
        if flo == 0.0:
            if i > 0:
                out.append(RootBracket(float(xs[i]), float(xs[i]), 0.0, 0.0))
            continue
        if fhi == 0.0:
            continue
        if (flo > 0) != (fhi > 0):
            out.append(RootBracket(float(xs[i]), float(xs[i + 1]),
                                   float(flo), float(fhi)))
    return out


def scan_sign_changes(f: Callable[[float], float], a: float, b: float,
                      n: int = 64, max_doublings: int = 12) -> list[RootBracket]:
    """Bracket every sign change of f on [a, b].

    Samples a uniform grid of n+1 points and doubles the resolution until
    the bracket count is unchanged across two further refinements.  Exact
    zeros at interior grid nodes come back as degenerate brackets; zeros
    at a or b themselves are not reported.  Brackets are ascending.
    """
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise ParameterError(f"bad scan interval [{a}, {b}]")
    counts = []
    m = n
    brackets = []
    for _ in range(max_doublings):
        xs = np.linspace(a, b, m + 1)
        fs = [f(float(x)) for x in xs]
        for x, y in zip(xs, fs):
            if not math.isfinite(y):
                raise IntegrandError(f"scan function returned {y!r} at x = {x!r}")
        brackets = _collect_brackets(xs, fs)
        counts.append(len(brackets))
        if len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            break
        m *= 2
    return brackets
