"""Interaction amplitudes on the Fock zone and the resulting level shift.

The amplitude is the Stieltjes integral

    sigma = int_0^inf E_k d(exp(-i c E_k)),

where E_k is a decreasing density (the Coulomb eigenvalue curve) and c
depends on the energy in play.  Two densities are supported:

* ``stirling``: E_k = S_k = (4k + 1/pi)^{1/2} / (2k + 1/pi), with
  c = sqrt(pi) eps / 2 (so c = sqrt(pi)(2l+1) for eps_p = 4l + 2);
* ``exact_gamma``: E_k = sqrt(pi) G_k, G_k = Gamma(k+1/2)/(sqrt(pi) k!), with
  the same c.

Both start at E_0 = sqrt(pi), which makes exp(-i c E_0) = +-1 and gives the
closed forms below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .constants import PhysicalConstants, default_constants
from .quadrature import integrate_adaptive
from .special import StirlingVariant, gamma_ratio_G, stirling_S

__all__ = [
    "AmplitudeResult",
    "dimensionless_energies",
    "density",
    "phase_constant",
    "sigma_integral",
    "sigma_closed_form",
    "sigma_B_closed_form",
    "sigma_total_closed_form",
    "sigma_by_substitution",
    "scalar_density_sigma",
    "scalar_density_closed_form",
    "lamb_shift",
    "discrete_vs_integral",
    "integration_by_parts_check",
    "partial_fraction_terms",
    "amplitude_table",
]

SQRT_PI = math.sqrt(math.pi)
DensityKind = Literal["stirling", "exact_gamma"]
EpsilonSpec = Union[int, Literal["B"]]


@dataclass(frozen=True)
class AmplitudeResult:
    sigma: complex
    abs_err: float
    epsilon_kind: str  # "epsilon_p(l)" or "epsilon_B"
    density_kind: str
    zone: int = 0

    def __post_init__(self):
        if not self.abs_err >= 0:
            raise ValueError("abs_err must be non-negative")
        if not cmath.isfinite(self.sigma):
            raise ValueError("sigma must be finite")


def dimensionless_energies(l: int) -> tuple[int, int]:
    """(eps_p, eps_B) = (4l + 2, 4) on the Fock zone with lambda = 1."""
    if l < 0:
        raise ValueError("l must be non-negative")
    return 4 * l + 2, 4


def density(kind: DensityKind):
    """Callable k -> (E_k, dE_k/dk)."""
    if kind == "stirling":
        return lambda k: stirling_S(k, StirlingVariant.INV_PI)
    if kind == "exact_gamma":
        def f(k):
            g, dg = gamma_ratio_G(k)
            return SQRT_PI * g, SQRT_PI * dg
        return f
    raise ValueError(f"unknown density {kind!r}")


def _epsilon(which: EpsilonSpec) -> tuple[float, str]:
    if which == "B":
        return 4.0, "epsilon_B"
    l = int(which)
    if l < 0:
        raise ValueError("l must be non-negative")
    return float(4 * l + 2), f"epsilon_p({l})"


def phase_constant(which: EpsilonSpec) -> float:
    """c in exp(-i c E_k): sqrt(pi) eps / 2."""
    eps, _ = _epsilon(which)
    return 0.5 * SQRT_PI * eps


def sigma_integral(which: EpsilonSpec, density_kind: DensityKind = "stirling", zone: int = 0,
                   tol: float = 1e-8, cutoff_scale: float = 1.0) -> AmplitudeResult:
    """sigma = int_0^inf E_k (-i c E'_k) exp(-i c E_k) dk by adaptive quadrature.

    ``which`` is l (for eps_p) or "B".  The tail beyond K is bounded by
    c E_K^2 / 2 (the integrand's modulus integrates exactly), which the
    quadrature uses to pick its cutoff; ``cutoff_scale`` multiplies the tail
    bound's argument to move that cutoff (stability checks).
    """
    if zone != 0:
        raise ValueError("amplitudes are implemented for the Fock zone (a = 0)")
    if not tol > 0:
        raise ValueError("tol must be positive")
    c = phase_constant(which)
    _, kind = _epsilon(which)
    dens = density(density_kind)

    def f(k):
        e, de = dens(k)
        return e * (-1j * c * de) * cmath.exp(-1j * c * e)

    def tail(K):
        e, _ = dens(K / cutoff_scale)
        return 0.5 * c * e * e

    res = integrate_adaptive(f, 0.0, math.inf, tol, tail_bound=tail, max_panels=20000)
    return AmplitudeResult(complex(res.value), res.abs_error_estimate, kind, density_kind, zone)


def sigma_by_substitution(which: EpsilonSpec, e0: float = SQRT_PI) -> complex:
    """Closed form after u = E_k: -E_0 e^{-i c E_0} + (1 - e^{-i c E_0}) / (i c).

    Valid for any density decreasing from E_0 to 0.
    """
    c = phase_constant(which)
    ph = cmath.exp(-1j * c * e0)
    return -e0 * ph + (1 - ph) / (1j * c)


def sigma_closed_form(l: int) -> complex:
    """sqrt(pi) - i / (sqrt(pi) (l + 1/2))."""
    if l < 0:
        raise ValueError("l must be non-negative")
    return complex(SQRT_PI, -1.0 / (SQRT_PI * (l + 0.5)))


def sigma_B_closed_form() -> complex:
    return complex(-SQRT_PI, 0.0)


def sigma_total_closed_form(l: int) -> complex:
    return sigma_closed_form(l) + sigma_B_closed_form()


def scalar_density_closed_form(which: EpsilonSpec, e0: float = SQRT_PI) -> float:
    """(1 - e^{-c E_0}(1 + c E_0)) / c, the real-exponential amplitude."""
    c = phase_constant(which)
    return (1.0 - math.exp(-c * e0) * (1.0 + c * e0)) / c


def scalar_density_sigma(which: EpsilonSpec, density_kind: DensityKind = "stirling",
                         tol: float = 1e-8) -> AmplitudeResult:
    """Amplitude with the real density exp(-c E_k) in place of the phase."""
    c = phase_constant(which)
    _, kind = _epsilon(which)
    dens = density(density_kind)

    def f(k):
        e, de = dens(k)
        return e * (-c * de) * math.exp(-c * e)

    def tail(K):
        e, _ = dens(K)
        return 0.5 * c * e * e

    res = integrate_adaptive(f, 0.0, math.inf, tol, tail_bound=tail, max_panels=20000)
    return AmplitudeResult(complex(res.value), res.abs_error_estimate, kind, density_kind, 0)


def lamb_shift(l: int, mode: Literal["epsilon_p", "total"] = "total",
               constants: PhysicalConstants | None = None) -> tuple[float, float, float]:
    """(dimensionless |sigma|^2 / 4, energy in eV, frequency in MHz).

    The energy is the dimensionless factor times alpha^5 m_e c^2; the
    frequency is energy / h.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    k = constants or default_constants()
    if mode == "epsilon_p":
        sig = sigma_closed_form(l)
    elif mode == "total":
        sig = sigma_total_closed_form(l)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    dimless = 0.25 * abs(sig) ** 2
    energy_J = dimless * k.alpha**5 * k.me_c2_J
    energy_eV = dimless * k.alpha**5 * k.me_c2_eV
    return dimless, energy_eV, energy_J / k.h / 1e6


def discrete_vs_integral(l: int, K: int, density_kind: DensityKind = "stirling",
                         tol: float = 1e-10) -> tuple[complex, complex, float]:
    """Riemann-Stieltjes sum over k = 0..K against the integral over [0, K+1]."""
    if K < 10:
        raise ValueError("K must be >= 10")
    c = phase_constant(l)
    dens = density(density_kind)
    ks = np.arange(K + 2, dtype=float)
    e = np.array([dens(k)[0] for k in ks])
    ph = np.exp(-1j * c * e)
    discrete = complex(np.sum(e[:-1] * np.diff(ph)))

    def f(k):
        ek, dek = dens(k)
        return ek * (-1j * c * dek) * cmath.exp(-1j * c * ek)

    res = integrate_adaptive(lambda s: f(math.expm1(s)) * math.exp(s), 0.0, math.log(K + 2.0), tol,
                             max_panels=20000)
    integral = complex(res.value)
    return discrete, integral, abs(discrete - integral)


def integration_by_parts_check(l: int, density_kind: DensityKind = "stirling",
                               tol: float = 1e-10) -> tuple[complex, complex]:
    """sigma computed directly and as  -E_0 phase(0) - int phase(k) E'_k dk.

    The second integral's tail beyond K is bounded by E_K.
    """
    direct = sigma_integral(l, density_kind, tol=tol).sigma
    c = phase_constant(l)
    dens = density(density_kind)
    e0, _ = dens(0.0)

    def g(k):
        ek, dek = dens(k)
        return cmath.exp(-1j * c * ek) * dek

    res = integrate_adaptive(g, 0.0, math.inf, tol, tail_bound=lambda K: dens(K)[0],
                             max_panels=20000)
    by_parts = -e0 * cmath.exp(-1j * c * e0) - complex(res.value)
    return direct, by_parts


def partial_fraction_terms(l: int) -> tuple[float, float, float]:
    """1/(pi (l+1/2)^2) and its split 1/(2 pi (l+1)(l+1/2)^2) + 1/(pi (l+1)(l+1/2))."""
    if l < 0:
        raise ValueError("l must be non-negative")
    h = l + 0.5
    whole = 1.0 / (math.pi * h * h)
    first = 1.0 / (2.0 * math.pi * (l + 1) * h * h)
    second = 1.0 / (math.pi * (l + 1) * h)
    return whole, first, second


def amplitude_table(ls, mode: Literal["epsilon_p", "total"] = "total",
                    density_kind: DensityKind = "stirling", tol: float = 1e-8,
                    constants: PhysicalConstants | None = None) -> list[tuple]:
    """Rows (l, mode, density, re sigma, im sigma, Delta_eV, Delta_MHz, abs_err)."""
    rows = []
    for l in ls:
        res = sigma_integral(l, density_kind, tol=tol)
        sig, err = res.sigma, res.abs_err
        if mode == "total":
            b = sigma_integral("B", density_kind, tol=tol)
            sig, err = sig + b.sigma, err + b.abs_err
        _, ev, mhz = lamb_shift(l, mode, constants)
        rows.append((l, mode, density_kind, sig.real, sig.imag, ev, mhz, err))
    return rows
