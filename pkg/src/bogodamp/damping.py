"""Beliaev and Landau damping rates of quasiparticle excitations.

Three independent evaluation routes are implemented and cross validated:

  * energy path quadrature: the azimuthal angle and the conservation delta
    are removed analytically, leaving a single integral over an energy
    split variable with the regularized vertex F and the measure factor
    f(u) = d(p^2)/d(u^2).  This is the production route on the first
    (convex) dispersion branch.
  * generic scan: an outer integral over the partner momentum p with the
    conservation roots in q resolved branch by branch at each node.
    Slower, but valid for non monotone dispersions (maxon and roton
    style models) and used to validate the energy path.
  * closed form asymptotics for the limiting regimes, and a Monte Carlo
    estimate of the raw three dimensional integral with a mollified
    delta, both anchoring the quadrature routes from opposite sides.

Overall constants trace back to the golden rule rates
gamma_B = (1/(16 pi^2)) int d3p j(k;p,q)^2 delta(...) T_B and
gamma_L = (1/(8 pi^2)) int d3p j(q;k,p)^2 delta(...) T_L with q the third
leg momentum; the angular reduction d3p = (2 pi p q / k) dp dq turns them
into the (1/(8 pi k)) and (1/(4 pi k)) double integrals the scan uses,
and the change of variables to energies gives the energy path constants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bogoliubov import (DispersionBranch, branch_table, first_branch,
                         invert_dispersion, omega_bg, omega_bg_prime,
                         _omega_scalar)
from .errors import (DomainError, NearSingularRootError, ParameterError,
                     SingularMeasureError)
from .numerics import QuadratureSpec, integrate_adaptive
from .params import GasParameters, RegimeDiagnostics, diagnostics
from .potential import PotentialModel
from .specfun import beliaev_I, landau_Gk, zeta
from .vertices import _cs_arrays, _j_arrays, vertex_j

__all__ = [
    "DeltaSupport",
    "DampingResult",
    "detect_support",
    "gamma_beliaev_quadrature",
    "gamma_landau_quadrature",
    "reduce_delta_generic",
    "gamma_beliaev_asymptotic",
    "gamma_landau_asymptotic",
    "select_regime",
    "flat_highT_kernel",
    "flat_highT_kernel_integral",
    "gamma_landau_flat_highT",
    "mc_oracle",
    "total_damping",
]

# thermal integrals are cut where the occupation weight has decayed to
# exp(-T_CUT) below its scale; theta shifts the cut for the Landau weight
T_CUT = 50.0


def _validate_k(k):
    k = float(k)
    if not math.isfinite(k) or k <= 0:
        raise DomainError(f"k must be finite and > 0, got {k}")
    return k


def _w_beliaev(beta, u, w):
    """On shell decay weight 1 + rho(u) + rho(w), overflow free."""
    du = -math.expm1(-beta * u)
    dw = -math.expm1(-beta * w)
    return -math.expm1(-beta * (u + w)) / (du * dw)


def _w_landau(beta, u, w):
    """On shell absorption weight rho(u) - rho(w) for w > u, overflow free."""
    du = -math.expm1(-beta * u)
    dw = -math.expm1(-beta * w)
    return math.exp(-beta * u) * (-math.expm1(-beta * (w - u))) / (du * dw)


@dataclass(frozen=True)
class DeltaSupport:
    """Resolved support of the conservation delta in the partner momentum.

    segments are (p_lo, p_hi, roots) stretches with at least one
    conservation root, ascending.  convex_fastpath_ok means the support
    is the full expected interval with exactly one root throughout, on a
    single branch dispersion; first_branch_ok means a single branch
    suffices at all (else only the generic scan applies).  truncated
    marks the thermal cutoff of the Landau support.
    """

    process: str
    k: float
    segments: tuple
    convex_fastpath_ok: bool
    first_branch_ok: bool
    truncated: bool = False
    note: str = ""


@dataclass(frozen=True)
class DampingResult:
    value: float
    abs_error: float
    method: str
    diagnostics: RegimeDiagnostics
    support: DeltaSupport | None
    converged: bool = True


def _resolve_roots(branches, target, q_lo, q_hi):
    """All momenta q in [q_lo, q_hi] with omega(q) = target, one per branch."""
    out = []
    slack = 1e-9 * (1.0 + q_hi)
    for b in branches:
        wlo, whi = b.omega_min, b.omega_max
        if target < wlo - 1e-12 * (1.0 + whi) or target > whi + 1e-12 * (1.0 + whi):
            continue
        q = invert_dispersion(b, min(max(target, wlo), whi))
        if q_lo - slack <= q <= q_hi + slack:
            if not any(abs(q - r) <= 1e-9 * (1.0 + q) for r in out):
                out.append(q)
    return sorted(out)


def detect_support(params: GasParameters, model: PotentialModel, k: float,
                   process: str) -> DeltaSupport:
    """Locate the stretches of partner momentum carrying conservation roots.

    For the decay process the partner runs over [0, k]; for absorption it
    runs to the thermal cutoff momentum.  Root counts are sampled on an
    interior grid and count transitions are refined by bisection, so
    narrow support slivers below the grid resolution would be missed;
    for convex dispersions the count is constant and the support is the
    full interval.
    """
    k = _validate_k(k)
    if process not in ("beliaev", "landau"):
        raise ParameterError(f"process must be beliaev or landau, got {process!r}")
    w_k = _omega_scalar(params, model, k)
    beta = params.beta
    if process == "beliaev":
        energy_need = w_k
        p_lo, p_hi = 0.0, k
        truncated = False
    else:
        t_max = max(T_CUT, beta * w_k + 40.0)
        u_cut = t_max / beta
        energy_need = u_cut + w_k
        p_lo = 0.0
        truncated = True
    branches = branch_table(params, model, energy_need)
    single = len(branches) == 1
    if process == "landau":
        last = branches[-1]
        if last.increasing and last.omega_min <= u_cut <= last.omega_max:
            p_hi = invert_dispersion(last, u_cut)
        else:
            p_hi = last.p_hi

    def count(p):
        wp = _omega_scalar(params, model, p)
        tgt = w_k - wp if process == "beliaev" else w_k + wp
        if tgt <= 0.0:
            return 0
        return len(_resolve_roots(branches, tgt, abs(p - k), p + k))

    n = 255
    ps = np.linspace(p_lo, p_hi, n + 2)[1:-1]
    cs = [count(float(p)) for p in ps]

    if all(c == cs[0] for c in cs):
        if cs[0] == 0:
            segments = ()
        else:
            segments = ((p_lo, p_hi, cs[0]),)
    else:
        edges = [p_lo]
        for i in range(len(ps) - 1):
            if cs[i] != cs[i + 1]:
                lo, hi = float(ps[i]), float(ps[i + 1])
                clo = cs[i]
                for _ in range(48):
                    mid = 0.5 * (lo + hi)
                    if count(mid) == clo:
                        lo = mid
                    else:
                        hi = mid
                edges.append(0.5 * (lo + hi))
        edges.append(p_hi)
        segments = []
        for a, b in zip(edges[:-1], edges[1:]):
            cmid = count(0.5 * (a + b))
            if cmid > 0:
                segments.append((a, b, cmid))
        segments = tuple(segments)

    fast = (single and len(segments) == 1
            and segments[0][0] == p_lo and segments[0][1] == p_hi
            and segments[0][2] == 1)
    return DeltaSupport(process, k, segments,
                        convex_fastpath_ok=fast,
                        first_branch_ok=single,
                        truncated=truncated and bool(segments),
                        note="" if segments else "no conservation roots")


class _EnergyPoints:
    """Regularized coefficients and measure factor at energies on a branch."""

    __slots__ = ("params", "model", "branch", "nu", "v0")

    def __init__(self, params, model, branch):
        self.params = params
        self.model = model
        self.branch = branch
        self.nu = params.nu
        self.v0 = model.vhat0

    def __call__(self, x):
        p = invert_dispersion(self.branch, x)
        sh = self.model.vhat(p) / self.v0
        nu_e = self.nu * sh
        E = 0.5 * p * p + nu_e
        c = math.sqrt(E + x)
        s = abs(nu_e) / c
        d = 2.0 * x / (c + s)
        denom = E + 0.5 * self.nu * p * self.model.dvhat(p) / self.v0
        if abs(denom) < 1e-12 * self.nu:
            raise SingularMeasureError(
                f"measure factor singular at energy {x} (p = {p})")
        return c, s, d, nu_e, 1.0 / denom


def _empty_result(process, diag, support):
    return DampingResult(0.0, 0.0, "energy_quadrature", diag, support, True)


def gamma_beliaev_quadrature(params: GasParameters, model: PotentialModel,
                             k: float,
                             quad: QuadratureSpec | None = None) -> DampingResult:
    """Decay rate by the reduced energy split quadrature.

    gamma_B = vhat0/(128 pi nu k omega) * integral over y in [-omega, omega]
    of f(u) f(w) F(omega; u, w)^2 (1 + rho(u) + rho(w)) with u, w the
    energy split (omega +- y)/2.  Falls back to the generic scan when the
    support leaves the first branch.
    """
    k = _validate_k(k)
    if quad is None:
        quad = QuadratureSpec()
    w_k = _omega_scalar(params, model, k)
    diag = diagnostics(params, k, w_k)
    support = detect_support(params, model, k, "beliaev")
    if not support.segments:
        return _empty_result("beliaev", diag, support)
    if not support.first_branch_ok:
        return reduce_delta_generic(params, model, k, "beliaev", quad)

    branch = first_branch(params, model, w_k)
    ep = _EnergyPoints(params, model, branch)
    cO, sO, dO, nO, _ = ep(w_k)
    beta = params.beta

    def gy(y):
        u = 0.5 * (w_k + y)
        w = 0.5 * (w_k - y)
        if u <= 0.0 or w <= 0.0:
            return 0.0
        cu, su, du, nu_u, fu = ep(u)
        cw, sw, dw, nu_w, fw = ep(w)
        F = (-nO * dO * (cu * sw + cw * su)
             + nu_u * du * (cO * cw + sO * sw)
             + nu_w * dw * (cO * cu + sO * su))
        return fu * fw * F * F * _w_beliaev(beta, u, w)

    if support.convex_fastpath_ok:
        pieces = [(-w_k, w_k)]
    else:
        pieces = []
        for (pa, pb, _m) in support.segments:
            ua = _omega_scalar(params, model, pa)
            ub = _omega_scalar(params, model, pb)
            pieces.append((2.0 * ua - w_k, 2.0 * ub - w_k))

    val = err = 0.0
    ok = True
    for (ya, yb) in pieces:
        res = integrate_adaptive(gy, ya, yb, quad)
        val += res.value
        err += res.error
        ok = ok and res.ok
    C = params.vhat0 / (128.0 * math.pi * params.nu * k * w_k)
    return DampingResult(C * val, C * err, "energy_quadrature", diag, support, ok)


def gamma_landau_quadrature(params: GasParameters, model: PotentialModel,
                            k: float,
                            quad: QuadratureSpec | None = None) -> DampingResult:
    """Absorption rate by the reduced thermal quadrature.

    gamma_L = vhat0/(32 pi nu k omega beta) * integral over t in (0, t_max)
    of G(t/beta, omega) f(u) f(u + omega) W(t) with u = t/beta and the
    overflow free weight W(t) = e^-t (1 - e^-theta) /
    ((1 - e^-t)(1 - e^-t-theta)).  The integrand vanishes linearly at
    t = 0 and the truncated exponential tail is added to the error bound.
    """
    k = _validate_k(k)
    if quad is None:
        quad = QuadratureSpec()
    w_k = _omega_scalar(params, model, k)
    diag = diagnostics(params, k, w_k)
    support = detect_support(params, model, k, "landau")
    if not support.segments:
        return _empty_result("landau", diag, support)
    if not support.first_branch_ok:
        return reduce_delta_generic(params, model, k, "landau", quad)

    beta = params.beta
    theta = beta * w_k
    top_u = _omega_scalar(params, model, support.segments[-1][1])
    branch = first_branch(params, model, top_u + w_k)
    ep = _EnergyPoints(params, model, branch)
    ck, sk, dk, nk, _ = ep(w_k)
    pref_w = -math.expm1(-theta)

    def gt(t):
        if t <= 0.0:
            return 0.0
        u = t / beta
        w = u + w_k
        cu, su, du, nu_u, fu = ep(u)
        cw, sw, dw, nu_w, fw = ep(w)
        F = (-nu_w * dw * (cu * sk + ck * su)
             + nu_u * du * (cw * ck + sw * sk)
             + nk * dk * (cw * cu + sw * su))
        W = math.exp(-t) * pref_w / ((-math.expm1(-t)) * (-math.expm1(-t - theta)))
        return F * F * fu * fw * W

    val = err = 0.0
    ok = True
    for (pa, pb, _m) in support.segments:
        ta = beta * _omega_scalar(params, model, pa)
        tb = beta * _omega_scalar(params, model, pb)
        res = integrate_adaptive(gt, ta, tb, quad)
        val += res.value
        err += res.error
        ok = ok and res.ok
    C = params.vhat0 / (32.0 * math.pi * params.nu * k * w_k * beta)
    if support.truncated:
        t_end = beta * top_u
        err += 2.0 * abs(gt(t_end))
    return DampingResult(C * val, C * err, "energy_quadrature", diag, support, ok)


def reduce_delta_generic(params: GasParameters, model: PotentialModel,
                         k: float, process: str,
                         quad: QuadratureSpec | None = None) -> DampingResult:
    """Rate by the generic partner momentum scan, valid on any branch layout.

    The conservation delta is resolved at every outer node by inverting
    the dispersion branch by branch; each root q contributes
    q j^2 W / |omega'(q)|.  A root landing where the dispersion slope
    vanishes makes the reduction singular and raises
    NearSingularRootError rather than returning a polluted number.
    """
    k = _validate_k(k)
    if process not in ("beliaev", "landau"):
        raise ParameterError(f"process must be beliaev or landau, got {process!r}")
    if quad is None:
        quad = QuadratureSpec()
    w_k = _omega_scalar(params, model, k)
    diag = diagnostics(params, k, w_k)
    support = detect_support(params, model, k, process)
    if not support.segments:
        return DampingResult(0.0, 0.0, "generic_scan", diag, support, True)
    energy_need = w_k if process == "beliaev" else (
        _omega_scalar(params, model, support.segments[-1][1]) + w_k)
    branches = branch_table(params, model, energy_need)
    beta = params.beta
    rt = math.sqrt(params.nu)
    beliaev = process == "beliaev"

    def inner(p):
        if p <= 0.0:
            return 0.0
        wp = _omega_scalar(params, model, p)
        tgt = w_k - wp if beliaev else w_k + wp
        if tgt <= 0.0:
            return 0.0
        tot = 0.0
        for q in _resolve_roots(branches, tgt, abs(p - k), p + k):
            if q <= 0.0:
                continue
            slope = abs(float(omega_bg_prime(params, model, q)))
            if slope < 1e-8 * rt:
                raise NearSingularRootError(
                    f"conservation root at q = {q} sits on a stationary "
                    f"point of the dispersion (p = {p}, k = {k})")
            if beliaev:
                jv = vertex_j(params, model, k, p, q)
                wgt = _w_beliaev(beta, wp, tgt)
            else:
                jv = vertex_j(params, model, q, p, k)
                wgt = _w_landau(beta, wp, tgt)
            tot += q * jv * jv * wgt / slope
        return p * tot

    val = err = 0.0
    ok = True
    for (pa, pb, _m) in support.segments:
        res = integrate_adaptive(inner, pa, pb, quad)
        val += res.value
        err += res.error
        ok = ok and res.ok
    C = 1.0 / ((8.0 if beliaev else 4.0) * math.pi * k)
    if process == "landau" and support.truncated:
        pb = support.segments[-1][1]
        slope_b = abs(float(omega_bg_prime(params, model, pb)))
        if slope_b > 0:
            err += 2.0 * abs(inner(pb)) / (beta * slope_b)
    return DampingResult(C * val, C * err, "generic_scan", diag, support, ok)


# ---------------------------------------------------------------------------
# closed form asymptotics


def gamma_beliaev_asymptotic(params: GasParameters, model: PotentialModel,
                             k: float, regime: str = "full") -> float:
    """Closed form decay rate laws for the phonon part of the spectrum.

    full:   (9 vhat0 nu^{3/2} / 2048 pi) (k/sqrt nu)^4 I(theta) / (beta nu)
    low_T:  (3 vhat0 nu^{3/2} / 640 pi) (k/sqrt nu)^5
    high_T: (3 vhat0 nu^{3/2} / 128 pi) (k/sqrt nu)^4 / (beta nu)
    with theta = beta omega(k).  k = 0 gives 0 in every regime.
    """
    k = float(k)
    if not math.isfinite(k) or k < 0:
        raise DomainError(f"k must be finite and >= 0, got {k}")
    nu, beta, v0 = params.nu, params.beta, params.vhat0
    base = v0 * nu * math.sqrt(nu)
    x = k / math.sqrt(nu)
    bn = beta * nu
    if regime == "low_T":
        return 3.0 / (640.0 * math.pi) * base * x ** 5
    if regime == "high_T":
        return 3.0 / (128.0 * math.pi) * base * x ** 4 / bn
    if regime == "full":
        if k == 0.0:
            return 0.0
        theta = beta * _omega_scalar(params, model, k)
        return 9.0 / (2048.0 * math.pi) * base * x ** 4 * beliaev_I(theta) / bn
    raise ParameterError(f"unknown regime {regime!r}")


def gamma_landau_asymptotic(params: GasParameters, model: PotentialModel,
                            k: float, regime: str = "full") -> float:
    """Closed form absorption rate laws for the phonon part of the spectrum.

    full: (9 vhat0 nu^{3/2} / 64 pi) (beta nu)^-5 [ G4(theta)
            + 2 (beta sqrt(nu) k) G3(theta) + (beta sqrt(nu) k)^2 G2(theta) ]
    high_T_ratio: (3 pi^3 vhat0 nu^{3/2} / 40) (k/sqrt nu) (beta nu)^-4
    low_T_ratio:  (9 zeta(3) vhat0 nu^{3/2} / 16 pi) (k^2/nu) (beta nu)^-3
    with theta = beta omega(k) evaluated on the model dispersion.
    """
    k = float(k)
    if not math.isfinite(k) or k < 0:
        raise DomainError(f"k must be finite and >= 0, got {k}")
    nu, beta, v0 = params.nu, params.beta, params.vhat0
    base = v0 * nu * math.sqrt(nu)
    x = k / math.sqrt(nu)
    bn = beta * nu
    if regime == "high_T_ratio":
        return 3.0 * math.pi ** 3 / 40.0 * base * x / bn ** 4
    if regime == "low_T_ratio":
        return 9.0 * zeta(3) / (16.0 * math.pi) * base * x * x / bn ** 3
    if regime == "full":
        if k == 0.0:
            return 0.0
        theta = beta * _omega_scalar(params, model, k)
        bk = beta * math.sqrt(nu) * k
        bracket = (landau_Gk(4, theta) + 2.0 * bk * landau_Gk(3, theta)
                   + bk * bk * landau_Gk(2, theta))
        return 9.0 / (64.0 * math.pi) * base * bracket / bn ** 5
    raise ParameterError(f"unknown regime {regime!r}")


def select_regime(params: GasParameters, model: PotentialModel, k: float,
                  process: str) -> str:
    """Pick the closed form regime from beta sqrt(nu) k."""
    g = params.beta * math.sqrt(params.nu) * float(k)
    if process == "beliaev":
        return "low_T" if g >= 3.0 else "high_T"
    if process == "landau":
        if g <= 0.3:
            return "high_T_ratio"
        if g >= 3.0:
            return "low_T_ratio"
        return "full"
    raise ParameterError(f"process must be beliaev or landau, got {process!r}")


# ---------------------------------------------------------------------------
# flat profile, high temperature


def flat_highT_kernel(z: float) -> float:
    """Dimensionless absorption kernel of the flat profile at high T.

    kernel(z) = [2 - 2/e - 3/(2 e^2) + 1/e^3 + 1/(2 e^4)]/z^2 with
    e = sqrt(1 + z^2); behaves like (9/8) z^2 at small z and 2/z^2 at
    large z, and integrates to 3 pi / 8 over (0, inf).  Below z = 0.05
    the bracket is evaluated by its series (9/8) z^4 - (33/16) z^6
    + (373/128) z^8 to sidestep cancellation.
    """
    z = float(z)
    if not math.isfinite(z) or z < 0:
        raise DomainError(f"z must be finite and >= 0, got {z}")
    if z == 0.0:
        return 0.0
    w = z * z
    if z < 0.05:
        return w * (9.0 / 8.0 + w * (-33.0 / 16.0 + w * 373.0 / 128.0))
    inv = 1.0 / math.sqrt(1.0 + w)
    bracket = 2.0 + inv * (-2.0 + inv * (-1.5 + inv * (1.0 + inv * 0.5)))
    return bracket / w


def flat_highT_kernel_integral(spec: QuadratureSpec | None = None) -> float:
    """Quadrature value of the kernel integral, analytically 3 pi / 8."""
    if spec is None:
        spec = QuadratureSpec(rel_tol=1e-10, tail_map="rational", tail_scale=2.0)
    res = integrate_adaptive(flat_highT_kernel, 0.0, math.inf, spec)
    return res.value


def gamma_landau_flat_highT(params: GasParameters, k: float) -> float:
    """High temperature absorption law for the exactly flat profile.

    (3 vhat0 nu^{3/2} / 32) (1/(beta nu)) (k/sqrt nu): the kernel
    integral 3 pi / 8 with all constants collected.
    """
    k = float(k)
    if not math.isfinite(k) or k < 0:
        raise DomainError(f"k must be finite and >= 0, got {k}")
    nu, beta, v0 = params.nu, params.beta, params.vhat0
    return (3.0 / 32.0) * v0 * nu * math.sqrt(nu) * (k / math.sqrt(nu)) / (beta * nu)


# ---------------------------------------------------------------------------
# Monte Carlo oracle


def _mc_thermal_beliaev(beta, wk, wp, wq):
    """Off shell decay weight (1 - e^{-beta S/2})^2 / prod(1 - e^{-beta w}),
    S the energy sum; equals the on shell weight when S = 2 wk."""
    s = wk + wp + wq
    num = -np.expm1(-0.5 * beta * s)
    den = (-np.expm1(-beta * wk)) * (-np.expm1(-beta * wp)) * (-np.expm1(-beta * wq))
    return num * num / den


def _mc_thermal_landau(beta, wk, wp, wq):
    """Off shell absorption weight, exponent shifted so nothing overflows."""
    x = 0.5 * beta * (wk + wq)
    y = 0.5 * beta * wp
    m = np.maximum(x, y)
    num = -np.expm1(-np.abs(x - y))
    den = (-np.expm1(-beta * wk)) * (-np.expm1(-beta * wp)) * (-np.expm1(-beta * wq))
    return np.exp(2.0 * m - beta * (wk + wp + wq)) * num * num / den


def mc_oracle(params: GasParameters, model: PotentialModel, k: float,
              process: str, epsilon: float | None = None,
              n_samples: int = 1_000_000, seed: int = 1234):
    """Monte Carlo estimate of a rate from the raw momentum integral.

    The conservation delta is mollified by a Gaussian of width epsilon
    (default 1e-3 omega(k)), the partner momentum is sampled uniformly in
    a ball for decay and with a radial thermal importance density for
    absorption, and the stream is counter based: fixed chunks of 1e6
    samples keyed by (seed, chunk), so results are bit reproducible for a
    given (seed, n_samples) regardless of scheduling.

    Returns (estimate, stderr).
    """
    k = _validate_k(k)
    if process not in ("beliaev", "landau"):
        raise ParameterError(f"process must be beliaev or landau, got {process!r}")
    n_samples = int(n_samples)
    if n_samples < 10_000:
        raise ParameterError(f"n_samples must be >= 10000, got {n_samples}")
    w_k = _omega_scalar(params, model, k)
    eps = float(epsilon) if epsilon is not None else 1e-3 * w_k
    if not (math.isfinite(eps) and eps > 0):
        raise ParameterError(f"epsilon must be positive, got {eps}")
    beta = params.beta
    chunk = 1_000_000

    if process == "beliaev":
        b = first_branch(params, model, w_k + 5.0 * eps)
        R = invert_dispersion(b, w_k + 5.0 * eps)
        vol = 4.0 * math.pi / 3.0 * R ** 3
        pref = 1.0 / (16.0 * math.pi ** 2)

        def values(rng, m):
            u = rng.random((2, m))
            r = R * np.cbrt(u[0])
            cth = 2.0 * u[1] - 1.0
            q = np.sqrt(np.maximum(r * r + k * k - 2.0 * r * k * cth, 0.0))
            wr = omega_bg(params, model, r)
            wq = omega_bg(params, model, q)
            z = (w_k - wr - wq) / eps
            g = np.zeros(m)
            sel = (np.abs(z) < 39.0) & (q > 0) & (r > 0)
            if np.any(sel):
                jv = _j_arrays(params, model, k, r[sel], q[sel])
                delta = np.exp(-0.5 * z[sel] ** 2) / (eps * math.sqrt(2.0 * math.pi))
                T = _mc_thermal_beliaev(beta, w_k, wr[sel], wq[sel])
                g[sel] = vol * jv * jv * delta * T
            return g
    else:
        t_cap = max(T_CUT, beta * w_k + 40.0) + 10.0
        u_cap = t_cap / beta
        b = first_branch(params, model, u_cap + w_k)
        R = invert_dispersion(b, min(u_cap, b.omega_max))
        pref = 1.0 / (8.0 * math.pi ** 2)
        nodes = np.linspace(0.0, R, 4097)
        dx = nodes[1] - nodes[0]
        wts = nodes ** 2 * np.exp(-0.5 * beta
                                  * np.minimum(omega_bg(params, model, nodes), 1400.0 / beta))
        cum = np.concatenate(([0.0], np.cumsum(0.5 * (wts[1:] + wts[:-1]) * dx)))
        cum /= cum[-1]

        def values(rng, m):
            u = rng.random((2, m))
            idx = np.searchsorted(cum, u[0], side="right") - 1
            idx = np.clip(idx, 0, len(nodes) - 2)
            span = cum[idx + 1] - cum[idx]
            r = nodes[idx] + (u[0] - cum[idx]) / span * dx
            pdf = span / dx
            cth = 2.0 * u[1] - 1.0
            q = np.sqrt(np.maximum(r * r + k * k + 2.0 * r * k * cth, 0.0))
            wr = omega_bg(params, model, r)
            wq = omega_bg(params, model, q)
            z = (wq - wr - w_k) / eps
            g = np.zeros(m)
            sel = (np.abs(z) < 39.0) & (q > 0) & (r > 0)
            if np.any(sel):
                jv = _j_arrays(params, model, q[sel], r[sel], k)
                delta = np.exp(-0.5 * z[sel] ** 2) / (eps * math.sqrt(2.0 * math.pi))
                T = _mc_thermal_landau(beta, w_k, wr[sel], wq[sel])
                g[sel] = (4.0 * math.pi * r[sel] ** 2 / pdf[sel]
                          * jv * jv * delta * T)
            return g

    total = 0.0
    total_sq = 0.0
    done = 0
    idx = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        rng = np.random.Generator(np.random.Philox(
            key=np.array([seed & 0xFFFFFFFFFFFFFFFF, idx], dtype=np.uint64)))
        g = values(rng, m)
        total += float(np.sum(g))
        total_sq += float(np.sum(g * g))
        done += m
        idx += 1
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    est = pref * mean
    stderr = pref * math.sqrt(var / n_samples)
    return est, stderr


def total_damping(params: GasParameters, model: PotentialModel, k: float,
                  quad: QuadratureSpec | None = None):
    """Both quadrature rates and their sum: (beliaev, landau, total).

    The imaginary part of the dispersion is minus the total; conventions
    that track the decay of the squared mode amplitude quote twice these
    numbers.
    """
    rb = gamma_beliaev_quadrature(params, model, k, quad)
    rl = gamma_landau_quadrature(params, model, k, quad)
    return rb, rl, rb.value + rl.value
