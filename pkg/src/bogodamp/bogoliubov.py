"""Quasiparticle dispersion, its branches, and the quadratic coefficients.

The dispersion is omega(k) = sqrt(k^4/4 + nu_k k^2) with the momentum
dependent interaction energy nu_k = nu vhat(k)/vhat(0).  Only the shape of
the potential enters here; the amplitude vhat0 carried by GasParameters
multiplies rates, not energies.

For potentials whose profile dips (maxon and roton style tables) the
dispersion is no longer monotone, so inversion from energy to momentum has
to be organised by branch.  detect_branches splits [0, p_max] at the
stationary points of omega and each DispersionBranch carries a sampled
inverse used to bracket a final polish by Brent's method.
"""
from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import replace

import numpy as np
from scipy import optimize

from .errors import (AssumptionError, DivergenceError, DomainError,
                     ExtrapolationError, ParameterError, RangeError,
                     SingularityError, SingularMeasureError)
from .numerics import QuadratureSpec, QuadResult, integrate_adaptive
from .params import GasParameters
from .potential import PotentialModel

__all__ = [
    "omega_bg",
    "omega_bg_prime",
    "bogo_coeffs",
    "occupation_rho",
    "DispersionBranch",
    "detect_branches",
    "invert_dispersion",
    "branch_table",
    "first_branch",
    "measure_factor_f",
    "ground_state_energy_density",
]


def _nu_of(params, model, k):
    return params.nu * model.vhat(k) / model.vhat0


def _omega_scalar(params, model, k):
    """Dispersion at one momentum, no input validation (hot path)."""
    nk = params.nu * model.vhat(k) / model.vhat0
    rad = k * k * (0.25 * k * k + nk)
    if rad < 0:
        raise AssumptionError(
            f"dispersion radicand negative at k = {k}: nu_k = {nk}")
    return math.sqrt(rad)


def omega_bg(params: GasParameters, model: PotentialModel, k):
    """Quasiparticle energy omega(k), scalar or array, k >= 0."""
    arr = np.asarray(k, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("k must be finite and >= 0")
    if arr.ndim == 0:
        return _omega_scalar(params, model, float(arr))
    nk = _nu_of(params, model, arr)
    rad = arr * arr * (0.25 * arr * arr + nk)
    if np.any(rad < 0):
        i = int(np.argmax(rad < 0))
        raise AssumptionError(
            f"dispersion radicand negative at k = {arr.flat[i]}")
    return np.sqrt(rad)


def omega_bg_prime(params: GasParameters, model: PotentialModel, k):
    """Group velocity d omega / dk.

    Equal to (nu k / omega) * NP(k) with the slope function
    NP(k) = k^2/(2 nu) + vhat(k)/vhat0 + k vhat'(k)/(2 vhat0); the k -> 0
    limit sqrt(nu) is taken explicitly.
    """
    scalar = np.ndim(k) == 0
    arr = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("k must be finite and >= 0")
    nu, v0 = params.nu, model.vhat0
    vh = np.atleast_1d(np.asarray(model.vhat(arr), dtype=float))
    dvh = np.atleast_1d(np.asarray(model.dvhat(arr), dtype=float))
    npk = arr * arr / (2.0 * nu) + vh / v0 + arr * dvh / (2.0 * v0)
    rad = arr * arr * (0.25 * arr * arr + nu * vh / v0)
    if np.any(rad < 0):
        raise AssumptionError("dispersion radicand negative inside slope evaluation")
    w = np.sqrt(rad)
    pos = arr > 0
    if np.any(pos & (w == 0.0)):
        raise AssumptionError("dispersion vanishes at k > 0, slope undefined")
    out = np.full(arr.shape, math.sqrt(nu))
    out[pos] = nu * arr[pos] / w[pos] * npk[pos]
    return float(out[0]) if scalar else out


def bogo_coeffs(params: GasParameters, model: PotentialModel, k: float):
    """Coefficients (s_k, c_k) of the quadratic diagonalisation at momentum k.

    Both diverge like 1/sqrt(k) as k -> 0; evaluation at k = 0 raises and
    points at the regularized energy space form, which absorbs that factor.
    The stable evaluation uses c = sqrt((E + omega)/(2 omega)) and
    s = |nu_k| / sqrt(2 omega (E + omega)) with E = k^2/2 + nu_k, which
    equals sqrt(omega^2 + nu_k^2) identically.
    """
    k = float(k)
    if not math.isfinite(k) or k < 0:
        raise DomainError(f"k must be finite and >= 0, got {k}")
    if k == 0:
        raise SingularityError(
            "bogo_coeffs is singular at k = 0; use regularized_F for the "
            "energy space combination")
    nk = params.nu * model.vhat(k) / model.vhat0
    w = _omega_scalar(params, model, k)
    if w == 0.0:
        raise AssumptionError(f"dispersion vanishes at k = {k}")
    E = 0.5 * k * k + nk
    c = math.sqrt((E + w) / (2.0 * w))
    s = abs(nk) / math.sqrt(2.0 * w * (E + w))
    return s, c


def _sk_quartic(params, model, k):
    """s_k via the quartic root expression, for cross checks only."""
    nk = params.nu * model.vhat(k) / model.vhat0
    E = 0.5 * k * k + nk
    ratio = nk / E
    return math.sqrt(0.5 * (1.0 / math.sqrt(1.0 - ratio * ratio) - 1.0))


def occupation_rho(params: GasParameters, omega: float) -> float:
    """Thermal occupation 1/(exp(beta omega) - 1) of a mode at energy omega."""
    omega = float(omega)
    if not math.isfinite(omega) or omega <= 0:
        raise DomainError(f"omega must be finite and > 0, got {omega}")
    x = params.beta * omega
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


class DispersionBranch:
    """One monotone piece of the dispersion with a cached inverse.

    Attributes p_lo, p_hi bound the momentum interval, omega_lo and
    omega_hi are the energies at those endpoints in momentum order, and
    increasing records the direction.  The cached samples bracket Brent
    polishing in invert_dispersion.
    """

    __slots__ = ("params", "model", "index", "p_lo", "p_hi", "omega_lo",
                 "omega_hi", "increasing", "_asc_w", "_asc_p")

    def __init__(self, params, model, index, p_nodes, w_nodes, increasing):
        self.params = params
        self.model = model
        self.index = index
        self.p_lo = float(p_nodes[0])
        self.p_hi = float(p_nodes[-1])
        self.omega_lo = float(w_nodes[0])
        self.omega_hi = float(w_nodes[-1])
        self.increasing = bool(increasing)
        if increasing:
            self._asc_p, self._asc_w = p_nodes, w_nodes
        else:
            self._asc_p, self._asc_w = p_nodes[::-1], w_nodes[::-1]

    @property
    def omega_min(self):
        return float(self._asc_w[0])

    @property
    def omega_max(self):
        return float(self._asc_w[-1])

    def __repr__(self):
        arrow = "up" if self.increasing else "down"
        return (f"DispersionBranch({self.index}, p in [{self.p_lo:g}, "
                f"{self.p_hi:g}], omega in [{self.omega_min:g}, "
                f"{self.omega_max:g}], {arrow})")


def detect_branches(params: GasParameters, model: PotentialModel,
                    p_max: float, n_scan: int = 4096) -> list[DispersionBranch]:
    """Split [0, p_max] into monotone branches of the dispersion.

    Scans the group velocity on a geometric grid, refines each sign change
    by bisection to width 1e-8 sqrt(nu), and samples each monotone piece
    for later inversion.  A flat stretch of the dispersion (three or more
    consecutive scan points with essentially zero slope) is not invertible
    and raises AssumptionError.
    """
    if not (math.isfinite(p_max) and p_max > 0):
        raise ParameterError(f"p_max must be positive and finite, got {p_max}")
    rt = math.sqrt(params.nu)
    grid = np.geomspace(p_max * 1e-7, p_max, n_scan)
    der = omega_bg_prime(params, model, grid)

    run = 0
    for i, d in enumerate(np.abs(der) < 1e-11 * rt):
        run = run + 1 if d else 0
        if run >= 3:
            raise AssumptionError(
                f"dispersion slope vanishes on a stretch near k = {grid[i]:g}; "
                "no-plateau condition violated")

    if der[0] <= 0:
        raise AssumptionError(
            "dispersion is not increasing at small momentum; curvature "
            "condition at the origin violated")

    def dw(p):
        return float(omega_bg_prime(params, model, p))

    stationary = []
    flips = np.nonzero(np.sign(der[:-1]) * np.sign(der[1:]) < 0)[0]
    for i in flips:
        lo, hi = float(grid[i]), float(grid[i + 1])
        flo = float(der[i])
        while hi - lo > 1e-8 * rt:
            mid = 0.5 * (lo + hi)
            fm = dw(mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        p_star = 0.5 * (lo + hi)
        if not stationary or p_star - stationary[-1] > 2e-8 * rt:
            stationary.append(p_star)

    bounds = [0.0] + stationary + [p_max]
    branches = []
    for j in range(len(bounds) - 1):
        nodes = np.linspace(bounds[j], bounds[j + 1], 1025)
        w = omega_bg(params, model, nodes)
        increasing = j % 2 == 0
        d = np.diff(w)
        tol = 1e-12 * max(float(np.max(w)), rt)
        if increasing and np.any(d < -tol) or not increasing and np.any(d > tol):
            raise AssumptionError(
                f"branch {j} of the dispersion is not monotone; stationary "
                "point detection failed for this model")
        branches.append(DispersionBranch(params, model, j, nodes, w, increasing))
    return branches


def invert_dispersion(branch: DispersionBranch, omega: float) -> float:
    """Momentum on the branch with quasiparticle energy omega."""
    omega = float(omega)
    if not math.isfinite(omega):
        raise DomainError(f"omega must be finite, got {omega}")
    wlo, whi = branch.omega_min, branch.omega_max
    slack = 1e-12 * max(whi, 1.0)
    if omega < wlo - slack or omega > whi + slack:
        raise RangeError(
            f"energy {omega} outside branch range [{wlo}, {whi}]")
    omega = min(max(omega, wlo), whi)
    wv, pv = branch._asc_w, branch._asc_p
    i = int(np.searchsorted(wv, omega))
    i = min(max(i, 1), len(wv) - 1)
    pa, pb = float(pv[i - 1]), float(pv[i])
    lo, hi = (pa, pb) if pa <= pb else (pb, pa)
    if lo == hi:
        return lo
    params, model = branch.params, branch.model

    def f(p):
        return _omega_scalar(params, model, p) - omega

    xtol = 1e-13 * max(branch.p_hi, 1.0)
    return float(optimize.brentq(f, lo, hi, xtol=xtol, rtol=1e-13, maxiter=200))


# ---------------------------------------------------------------------------
# branch cache keyed by the identity of (params, model); both are immutable,
# and holding strong references keeps the ids valid while cached.  The lock
# serialises lookup and growth: a grown table re-samples its node grid, so
# concurrent growth would hand two callers differently bracketed inverses.

_CACHE: OrderedDict = OrderedDict()
_CACHE_MAX = 8
_CACHE_LOCK = threading.Lock()


def branch_table(params: GasParameters, model: PotentialModel,
                 energy: float) -> list[DispersionBranch]:
    """Branches of the dispersion covering energies up to at least `energy`."""
    if not (math.isfinite(energy) and energy >= 0):
        raise ParameterError(f"energy must be finite and >= 0, got {energy}")
    key = (id(params), id(model))
    with _CACHE_LOCK:
        ent = _CACHE.get(key)
        if ent is not None and ent[2] >= energy:
            _CACHE.move_to_end(key)
            return ent[4]

        p_cap = getattr(model, "k_max", math.inf)
        p_max = ent[3] if ent is not None else 4.0 * math.sqrt(params.nu)
        p_max = min(p_max, p_cap)
        while _omega_scalar(params, model, p_max) <= 1.05 * energy:
            if p_max >= p_cap:
                raise ExtrapolationError(
                    f"tabulated potential covers energies up to "
                    f"{_omega_scalar(params, model, p_cap):g}, need {energy:g}")
            p_max = min(2.0 * p_max, p_cap)

        branches = detect_branches(params, model, p_max)
        cover = _omega_scalar(params, model, p_max)
        _CACHE[key] = (params, model, cover, p_max, branches)
        _CACHE.move_to_end(key)
        while len(_CACHE) > _CACHE_MAX:
            _CACHE.popitem(last=False)
        return branches


def first_branch(params: GasParameters, model: PotentialModel,
                 energy: float) -> DispersionBranch:
    """The branch rising from zero momentum, grown to cover `energy` if it can."""
    return branch_table(params, model, energy)[0]


def measure_factor_f(params: GasParameters, model: PotentialModel,
                     branch: DispersionBranch, u: float) -> float:
    """Jacobian f(u) = d(p^2)/d(u^2) on a branch, with f(0) = 1/nu.

    Equal to 1/(nu NP(p(u))).  Positive on increasing branches, negative
    on decreasing ones; at a stationary endpoint the measure is singular
    and the evaluation raises.
    """
    p = invert_dispersion(branch, u)
    nu, v0 = params.nu, model.vhat0
    denom = (0.5 * p * p + nu * model.vhat(p) / v0
             + 0.5 * nu * p * model.dvhat(p) / v0)
    # branch boundaries are located to about 1e-8 sqrt(nu) in momentum, so
    # a query at a stationary endpoint sees a slope of that size, not zero
    if abs(denom) < 1e-7 * nu:
        raise SingularMeasureError(
            f"measure factor singular at u = {u} (p = {p}): dispersion "
            "slope vanishes")
    return 1.0 / denom


def ground_state_energy_density(params: GasParameters, model: PotentialModel,
                                quad: QuadratureSpec | None = None) -> QuadResult:
    """Condensate energy shift density, always <= 0.

    Integrates k^2 (k^2/2 + nu_k - omega(k)) over all momenta with the
    stable rewriting (k^2/2 + nu_k - omega) = nu_k^2/(k^2/2 + nu_k + omega),
    exact because omega^2 = (k^2/2 + nu_k)^2 - nu_k^2.  A potential whose
    profile does not decay makes this integral diverge; that is detected by
    probing the integrand at three doubling momenta before integrating.
    """
    if quad is None:
        quad = QuadratureSpec()
    nu, v0 = params.nu, model.vhat0

    def g0(k):
        nk = nu * model.vhat(k) / v0
        D = 0.5 * k * k + nk
        w = _omega_scalar(params, model, k)
        return k * k * nk * nk / (D + w)

    hint = model.support_hint()
    K = max(8.0 * math.sqrt(nu), hint if math.isfinite(hint) else 0.0)
    K = min(K, getattr(model, "k_max", math.inf) / 4.0)
    probe = [g0(K), g0(2.0 * K), g0(4.0 * K)]
    if probe[2] > 0.25 * probe[0] and probe[2] > 1e-12 * nu * nu:
        raise DivergenceError(
            f"energy integrand does not decay: values {probe} at momenta "
            f"{K:g}, {2*K:g}, {4*K:g}")

    scale = max(math.sqrt(2.0 * nu), (hint / 4.0) if math.isfinite(hint) else 0.0)
    tm = quad.tail_map if quad.tail_map != "none" else "rational"
    spec_used = replace(quad, tail_map=tm, tail_scale=scale)
    upper = getattr(model, "k_max", math.inf)
    res = integrate_adaptive(g0, 0.0, upper, spec_used)
    c = 1.0 / (4.0 * math.pi ** 2)
    return QuadResult(-c * res.value, c * res.error, res.ok)
