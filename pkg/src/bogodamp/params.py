"""Gas parameters and dimensionless regime diagnostics.

Natural units throughout: hbar = m = k_B = 1, kinetic energy k^2/2.
Temperature enters only through the inverse temperature beta.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ParameterError

__all__ = ["GasParameters", "RegimeDiagnostics", "make_params", "diagnostics"]


@dataclass(frozen=True)
class GasParameters:
    """Bundle of the three positive numbers every rate depends on.

    nu is the interaction energy scale that sets the sound speed sqrt(nu),
    beta the inverse temperature, and vhat0 the zero momentum interaction
    strength that multiplies every damping rate linearly.
    """

    nu: float
    beta: float
    vhat0: float

    def __post_init__(self):
        for name in ("nu", "beta", "vhat0"):
            val = getattr(self, name)
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise ParameterError(f"{name} must be a real number, got {val!r}")
            if not math.isfinite(val) or val <= 0:
                raise ParameterError(f"{name} must be > 0 and finite, got {val}")
            object.__setattr__(self, name, float(val))


@dataclass(frozen=True)
class RegimeDiagnostics:
    """Dimensionless groups that decide which asymptotic regime applies.

    k_over_sqrt_nu compares the momentum to the inverse healing length,
    inv_beta_nu is the temperature in units of nu, beta_sqrtnu_k is the
    phonon energy over temperature in the linear part of the spectrum,
    theta is the exact quasiparticle energy over temperature, and delta
    is that energy in units of nu.
    """

    k_over_sqrt_nu: float
    inv_beta_nu: float
    beta_sqrtnu_k: float
    theta: float
    delta: float


def make_params(nu: float, beta: float, vhat0: float) -> GasParameters:
    """Validate and build a GasParameters instance."""
    return GasParameters(nu, beta, vhat0)


def diagnostics(params: GasParameters, k: float, omega_k: float) -> RegimeDiagnostics:
    """Regime diagnostics for momentum k with quasiparticle energy omega_k.

    Parameters
    ----------
    params : GasParameters
    k : float
        Momentum magnitude, >= 0.
    omega_k : float
        Quasiparticle energy at k, >= 0.  Passed in rather than recomputed
        so the caller controls which dispersion produced it.
    """
    if not (isinstance(k, (int, float)) and math.isfinite(k)) or k < 0:
        raise DomainError(f"k must be finite and >= 0, got {k!r}")
    if not (isinstance(omega_k, (int, float)) and math.isfinite(omega_k)) or omega_k < 0:
        raise DomainError(f"omega_k must be finite and >= 0, got {omega_k!r}")
    rt = math.sqrt(params.nu)
    return RegimeDiagnostics(
        k_over_sqrt_nu=k / rt,
        inv_beta_nu=1.0 / (params.beta * params.nu),
        beta_sqrtnu_k=params.beta * rt * k,
        theta=params.beta * omega_k,
        delta=omega_k / params.nu,
    )
