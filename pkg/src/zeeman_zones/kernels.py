"""Zonal point-spreads, Wiener/Schroedinger kernels and partition functions.

Conventions: complex coordinates z, w (one per particle, kappa of them);
the Fock-zone phase is exp(lam z.conj(w)) for orientation +1.  Orientation
-1 is obtained by conjugating the arguments.  The flow Hamiltonian is
H = -Box/2 without the constant field term, with levels (2p + kappa) lam.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import comb
from typing import Literal

import numpy as np

from .exactalg import ModelParams
from .quadrature import QuadratureResult, integrate_adaptive
from .special import laguerre_array
from .zones import eigenfunction_values

__all__ = [
    "KernelValue",
    "SingularTimeError",
    "TruncationError",
    "point_spread",
    "spectral_kernel_oracle",
    "zonal_spectral_sum",
    "wiener_global",
    "schrodinger_global",
    "wiener_zonal",
    "schrodinger_zonal",
    "partition_zonal",
    "partition_closed_form",
    "partition_spectral",
    "zonal_trace_numeric",
    "global_trace_ball",
]

KernelKind = Literal["projection", "wiener_global", "wiener_zonal",
                     "schrodinger_global", "schrodinger_zonal"]

CAUSTIC_TOL = 1e-12


class SingularTimeError(ValueError):
    """Schroedinger kernel or partition function requested at a caustic."""


class TruncationError(RuntimeError):
    """Certified spectral truncation did not reach tolerance."""


@dataclass(frozen=True)
class KernelValue:
    value: complex
    kind: KernelKind
    abs_err: float = 0.0

    def __complex__(self):
        return complex(self.value)


def _components(z, w, params: ModelParams):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if params.orientation < 0:
        z, w = np.conj(z), np.conj(w)
    if params.kappa == 1:
        return z[..., None], w[..., None]
    if z.shape[-1:] != (params.kappa,) or w.shape[-1:] != (params.kappa,):
        raise ValueError(f"points need a trailing axis of length kappa={params.kappa}")
    return z, w


def _scalar(x):
    x = np.asarray(x)
    return complex(x) if x.ndim == 0 else x


def _fock_exponent(z, w, lam):
    # lam (z.conj(w) - (|z|^2 + |w|^2)/2), summed over particles
    return lam * np.sum(z * np.conj(w) - 0.5 * (np.abs(z) ** 2 + np.abs(w) ** 2), axis=-1)


def point_spread(a: int, params: ModelParams, z, w) -> KernelValue:
    """Reproducing kernel of zone a:

        (lam/pi)^kappa L_a^(kappa-1)(lam |z-w|^2) exp(lam(z.conj(w) - (|z|^2+|w|^2)/2)).

    Normalised as the sum of phi(z) conj(phi(w)) over an orthonormal zone
    basis (idempotent, no extra factor 2).
    """
    if a < 0:
        raise ValueError("zone index must be non-negative")
    lam = params.lam_float
    zz, ww = _components(z, w, params)
    dist2 = np.sum(np.abs(zz - ww) ** 2, axis=-1)
    val = (lam / math.pi) ** params.kappa * laguerre_array(a, params.kappa - 1, lam * dist2) \
        * np.exp(_fock_exponent(zz, ww, lam))
    return KernelValue(_scalar(val), "projection")


def _compositions(a: int, parts: int):
    if parts == 1:
        yield (a,)
        return
    for first in range(a + 1):
        for rest in _compositions(a - first, parts - 1):
            yield (first,) + rest


def spectral_kernel_oracle(a: int, params: ModelParams, z, w, N: int) -> complex:
    """Truncated sum  sum_{p<N} phi_{p,a}(z) conj(phi_{p,a}(w))  (per particle,
    summed over the subzones of the gross zone)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    lam = params.lam_float
    zz, ww = _components(z, w, params)
    total = 0j
    for parts in _compositions(a, params.kappa):
        prod = 1 + 0j
        for i, ai in enumerate(parts):
            s = 0j
            for p in range(N):
                s += complex(eigenfunction_values(p, ai, zz[..., i], lam)
                             * np.conj(eigenfunction_values(p, ai, ww[..., i], lam)))
            prod *= s
        total += prod
    return total


def _magnitude_bound(a: int, p: int, x: float, lam: float) -> float:
    # |phi_{p,a}|^2 <= (lam/pi) C(p, a) x^{p-a} / (p-a)!  for p >= a, from
    # |L_n^(l)(x)| <= C(n+l, n) e^{x/2}.
    l = p - a
    if x == 0.0:
        return lam / math.pi if l == 0 else 0.0
    return math.exp(math.log(lam / math.pi) + math.log(comb(p, a)) + l * math.log(x) - math.lgamma(l + 1))


def zonal_spectral_sum(a: int, z: complex, w: complex, lam: float, weight, tol: float = 1e-15,
                       max_terms: int = 20000):
    """sum_p weight(p) phi_{p,a}(z) conj(phi_{p,a}(w)) for one particle.

    ``weight(p)`` must satisfy |weight(p)| <= |weight(p')| for p >= p'.
    Returns (value, certified bound on the dropped tail).
    """
    z = complex(z)
    w = complex(w)
    xz, xw = lam * abs(z) ** 2, lam * abs(w) ** 2
    total = 0j
    p = 0
    while True:
        total += weight(p) * complex(eigenfunction_values(p, a, z, lam)
                                     * np.conj(eigenfunction_values(p, a, w, lam)))
        p += 1
        if p > a + 1:
            # geometric tail: the bound's term ratio decreases in p
            ratio = math.sqrt(((p + 1) / (p + 1 - a)) ** 2 * xz * xw) / (p + 1 - a)
            if ratio < 1.0:
                head = abs(weight(p)) * math.sqrt(_magnitude_bound(a, p, xz, lam)
                                                  * _magnitude_bound(a, p, xw, lam))
                bound = head / (1.0 - ratio)
                if bound <= tol:
                    return total, bound
        if p >= max_terms:
            raise TruncationError(f"spectral sum for zone {a} did not converge in {max_terms} terms")


def _log_sinh(x: float) -> float:
    return x + math.log1p(-math.exp(-2.0 * x)) - math.log(2.0)


def wiener_global(t: float, X, Y, params: ModelParams) -> KernelValue:
    """(lam/(2 pi sinh(lam t)))^kappa exp(-lam coth(lam t)|X-Y|^2/2 + i lam Im(conj(X) Y))."""
    if not t > 0:
        raise ValueError("t must be positive")
    lam = params.lam_float
    zz, ww = _components(X, Y, params)
    x = lam * t
    dist2 = np.sum(np.abs(zz - ww) ** 2, axis=-1)
    phase = np.sum(np.imag(np.conj(zz) * ww), axis=-1)
    log_pref = params.kappa * (math.log(lam) - math.log(2.0 * math.pi) - _log_sinh(x))
    coth = 1.0 / math.tanh(x)
    val = np.exp(log_pref - 0.5 * lam * coth * dist2 + 1j * lam * phase)
    return KernelValue(_scalar(val), "wiener_global")


def _check_caustic(lam: float, t: float):
    if abs(math.sin(lam * t)) < CAUSTIC_TOL:
        raise SingularTimeError(f"lambda*t = {lam * t!r} is a caustic (sin(lambda t) = 0)")


def schrodinger_global(t: float, X, Y, params: ModelParams) -> KernelValue:
    """(lam/(2 pi i sin(lam t)))^kappa exp(i lam (cot(lam t)|X-Y|^2/2 + Im(conj(X) Y)))."""
    lam = params.lam_float
    _check_caustic(lam, t)
    zz, ww = _components(X, Y, params)
    s = math.sin(lam * t)
    dist2 = np.sum(np.abs(zz - ww) ** 2, axis=-1)
    phase = np.sum(np.imag(np.conj(zz) * ww), axis=-1)
    pref = (lam / (2j * math.pi * s)) ** params.kappa
    val = pref * np.exp(1j * lam * (0.5 * math.cos(lam * t) / s * dist2 + phase))
    return KernelValue(_scalar(val), "schrodinger_global")


def _zonal(a: int, tau: complex, z, w, params: ModelParams, kind, method: str, tol: float):
    lam = params.lam_float
    zz, ww = _components(z, w, params)
    if method == "auto":
        method = "closed" if a == 0 else "spectral"
    if method == "closed":
        if a != 0:
            raise ValueError("closed form is available for the Fock zone (a = 0) only")
        q = cmath.exp(-2.0 * lam * tau)
        expo = lam * np.sum(-0.5 * (np.abs(zz) ** 2 + np.abs(ww) ** 2) + q * zz * np.conj(ww), axis=-1)
        val = (lam * cmath.exp(-lam * tau) / math.pi) ** params.kappa * np.exp(expo)
        return KernelValue(_scalar(val), kind)
    if zz.ndim > 1:
        raise ValueError("spectral evaluation takes a single point pair")

    def weight(p):
        return cmath.exp(-tau * (2 * p + 1) * lam)

    total = 0j
    err = 0.0
    for parts in _compositions(a, params.kappa):
        prod = 1 + 0j
        prod_err = 0.0
        for i, ai in enumerate(parts):
            v, e = zonal_spectral_sum(ai, zz[i], ww[i], lam, weight, tol=tol)
            # |(v + d) * P| bound: propagate first-order plus cross term
            prod_err = abs(prod) * e + prod_err * (abs(v) + e)
            prod *= v
        total += prod
        err += prod_err
    return KernelValue(total, kind, err)


def wiener_zonal(a: int, t: float, z, w, params: ModelParams, method: str = "auto",
                 tol: float = 1e-15) -> KernelValue:
    """Heat kernel of zone a.  a = 0 uses the closed form

        (lam e^{-lam t}/pi)^kappa exp(lam(-(|z|^2+|w|^2)/2 + e^{-2 lam t} z.conj(w)));

    a > 0 uses the certified spectral sum over zone eigenfunctions.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    return _zonal(a, complex(t), z, w, params, "wiener_zonal", method, tol)


def schrodinger_zonal(a: int, t: float, z, w, params: ModelParams, method: str = "auto",
                      tol: float = 1e-15) -> KernelValue:
    """Zonal Schroedinger kernel: the Wiener kernel at imaginary time i t."""
    return _zonal(a, 1j * t, z, w, params, "schrodinger_zonal", method, tol)


def partition_zonal(a: int, t: float, params: ModelParams,
                    variant: Literal["wiener", "schrodinger"] = "wiener") -> complex:
    """C(a+kappa-1, a) e^{-kappa lam tau} / (1 - e^{-2 lam tau})^kappa with tau = t or i t."""
    if a < 0:
        raise ValueError("zone index must be non-negative")
    lam = params.lam_float
    kappa = params.kappa
    if variant == "wiener":
        if not t > 0:
            raise ValueError("t must be positive")
        tau = complex(t)
    elif variant == "schrodinger":
        _check_caustic(lam, t)
        tau = 1j * t
    else:
        raise ValueError(f"unknown variant {variant!r}")
    val = comb(a + kappa - 1, a) * cmath.exp(-kappa * lam * tau) / (1 - cmath.exp(-2 * lam * tau)) ** kappa
    return val.real if variant == "wiener" else val


def partition_closed_form(a: int, tau: complex, params: ModelParams) -> complex:
    """C(a+kappa-1, a) e^{-kappa lam tau} / (1 - e^{-2 lam tau})^kappa at complex time tau."""
    if a < 0:
        raise ValueError("zone index must be non-negative")
    lam = params.lam_float
    kappa = params.kappa
    tau = complex(tau)
    return comb(a + kappa - 1, a) * cmath.exp(-kappa * lam * tau) / (1 - cmath.exp(-2 * lam * tau)) ** kappa


def partition_spectral(a: int, tau: complex, params: ModelParams, rel_tol: float = 1e-15,
                       max_terms: int = 10_000_000) -> tuple[complex, float]:
    """sum_p mult(a, p) exp(-tau (2p + kappa) lam) for Re(tau) > 0.

    Returns (value, certified bound on the dropped tail).  Real Schroedinger
    time is reached as the Abel limit Re(tau) -> 0+.
    """
    tau = complex(tau)
    if not tau.real > 0:
        raise ValueError("the spectral sum needs Re(tau) > 0")
    lam = params.lam_float
    kappa = params.kappa
    zone_mult = comb(a + kappa - 1, a)
    decay = math.exp(-2.0 * lam * tau.real)
    step = cmath.exp(-2.0 * lam * tau)
    term = cmath.exp(-kappa * lam * tau)
    total = 0j
    comp = 0j
    p = 0
    mult = 1  # C(p + kappa - 1, p)
    while True:
        # Kahan-compensated accumulation
        y = zone_mult * mult * term - comp
        s = total + y
        comp = (s - total) - y
        total = s
        term *= step
        mult = mult * (p + kappa) // (p + 1)
        p += 1
        ratio = (p + kappa) / (p + 1) * decay
        if ratio < 1.0:
            bound = zone_mult * mult * abs(term) / (1.0 - ratio)
            if bound <= rel_tol * abs(total):
                return total, bound
        if p >= max_terms:
            raise TruncationError("partition spectral sum did not converge")


def zonal_trace_numeric(t: float, params: ModelParams, tol: float = 1e-13) -> QuadratureResult:
    """Trace of the Fock-zone heat kernel by radial quadrature of K(t, z, z).

    The kernel factorises over particles, so the kappa-particle trace is the
    one-particle trace to the power kappa.
    """
    lam = params.lam_float
    single = ModelParams(lam=params.lam, kappa=1, orientation=params.orientation)

    def f(r):
        return 2.0 * math.pi * r * wiener_zonal(0, t, r, r, single).value.real

    res = integrate_adaptive(f, 0.0, math.inf, tol)
    val = res.value ** params.kappa
    err = params.kappa * abs(res.value) ** (params.kappa - 1) * res.abs_error_estimate
    return QuadratureResult(val, err, res.panels_used)


def global_trace_ball(t: float, R: float, params: ModelParams, tol: float = 1e-12) -> QuadratureResult:
    """int_{|X| < R} K(t, X, X) dX for the global heat kernel (kappa = 1)."""
    if params.kappa != 1:
        raise ValueError("global trace diagnostic is implemented for kappa = 1")

    def f(r):
        return 2.0 * math.pi * r * wiener_global(t, r, r, params).value.real

    return integrate_adaptive(f, 0.0, R, tol, rel_tol=1e-13)
