"""The eleven acceptance checks, shared by the test-suite and ``report-all``.

Each ``criterion_N`` returns a :class:`CriterionResult` made of labelled
sub-checks with the measured quantity and the threshold it was held to.
Nothing here is relaxed to make a check pass: a failing sub-check marks
its criterion as failed.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .coulomb import (
    coulomb_diag_fock,
    coulomb_matrix_element,
    fock_energy_gap_identity,
    log_potential_diag,
    trace_divergence_report,
    transmission_matrix,
)
from .constants import default_constants
from .exactalg import ModelParams, apply_box_conjugated, apply_box_oracle, gram_schmidt_zone
from .kernels import (
    partition_closed_form,
    partition_spectral,
    partition_zonal,
    point_spread,
    spectral_kernel_oracle,
    wiener_zonal,
    zonal_trace_numeric,
)
from .lamb import (
    lamb_shift,
    partial_fraction_terms,
    sigma_B_closed_form,
    sigma_closed_form,
    sigma_integral,
)
from .quadrature import plane_trapezoid
from .zones import (
    eigenfunction_values,
    eigenvalue,
    enumerate_zone_spectrum,
    ito_poly,
    laguerre_eigenfunction,
    laguerre_operator,
    radial_eigen_solve,
    radial_ode_apply,
)

__all__ = ["SubCheck", "CriterionResult", "CRITERIA", "run_criterion", "run_all"]

LAMBDAS = (Fraction(1), Fraction(1, 2), Fraction(3))


@dataclass(frozen=True)
class SubCheck:
    label: str
    passed: bool
    measured: str
    threshold: str


@dataclass
class CriterionResult:
    number: int
    title: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, label, passed, measured, threshold):
        self.checks.append(SubCheck(label, bool(passed), str(measured), str(threshold)))

    def summary_line(self, timing: bool = True) -> str:
        status = "PASS" if self.passed else "FAIL"
        failed = [c.label for c in self.checks if not c.passed]
        tail = f" (failed: {'; '.join(failed)})" if failed else ""
        clock = f" [{self.seconds:.2f}s]" if timing else ""
        return f"[{status}] criterion {self.number:2d}: {self.title}{clock}{tail}"


def _fmt(x) -> str:
    return f"{x:.3e}"


def criterion_1() -> CriterionResult:
    res = CriterionResult(1, "exact eigen-relations for p+q <= 12, three lambdas")
    failures, agree_fail, count = 0, 0, 0
    for lam in LAMBDAS:
        params = ModelParams(lam=lam)
        for p in range(13):
            for q in range(13 - p):
                poly = ito_poly(p, q, lam)
                conj_path = apply_box_conjugated(poly, params)
                oracle_path = apply_box_oracle(poly, params)
                count += 1
                failures += conj_path != poly.scale(eigenvalue(p, params))
                agree_fail += conj_path != oracle_path
    res.add("eigenvalue -((4p+2)lam + 4lam^2) exact", failures == 0, f"{failures}/{count} failures", "0")
    res.add("conjugated vs raw operator agree exactly", agree_fail == 0, f"{agree_fail}/{count} mismatches", "0")
    return res


def criterion_2() -> CriterionResult:
    res = CriterionResult(2, "Gram-Schmidt reproduces Ito polynomials, zones a <= 4")
    bad, count = 0, 0
    for lam in LAMBDAS:
        for a in range(5):
            for p, poly in enumerate(gram_schmidt_zone(a, a + 8, lam)):
                ratio = poly.ratio_to(ito_poly(p, a, lam))
                count += 1
                if ratio is None or ratio.im != 0 or ratio.re <= 0:
                    bad += 1
    res.add("positive rational multiple of H_pq", bad == 0, f"{bad}/{count} mismatches", "0")
    return res


def criterion_3() -> CriterionResult:
    res = CriterionResult(3, "Laguerre-form eigenfunctions equal Ito polynomials")
    bad, count = 0, 0
    for lam in LAMBDAS:
        for n in range(9):
            for l in range(9 - n):
                for sign in (1, -1):
                    p, q = (n + l, n) if sign > 0 else (n, n + l)
                    count += 1
                    bad += laguerre_eigenfunction(n, l, sign, lam) != ito_poly(p, q, lam)
    res.add("exact equality for n+l <= 8, both signs of m", bad == 0, f"{bad}/{count} mismatches", "0")
    return res


def _laguerre_coeffs(n: int, alpha: int):
    return tuple(Fraction(comb(n + alpha, n - i) * (-1) ** i, factorial(i)) for i in range(n + 1))


def criterion_4(seed: int = 20240611) -> CriterionResult:
    res = CriterionResult(4, "radial ODE: exact eigenpolynomials and operator identity")
    bad_eig, bad_prop, count = 0, 0, 0
    for k in (2, 4, 6):
        for l_t in range(4):
            alpha = k // 2 + l_t - 1
            for n in range(7):
                for p_t in range(3):
                    u, ev = radial_eigen_solve(n, l_t, k, p_t)
                    count += 1
                    lhs = radial_ode_apply(u, l_t, p_t, k)
                    rhs = tuple(ev * c for c in u)
                    bad_eig += lhs != rhs or ev != -(4 * n + 4 * p_t + 3 * k)
                    lag = _laguerre_coeffs(n, alpha)
                    ratio = u[n] / lag[n]
                    bad_prop += any(u[i] != ratio * lag[i] for i in range(n + 1))
    res.add("P u = -(4n+4p~+3k) u exactly", bad_eig == 0, f"{bad_eig}/{count} failures", "0")
    res.add("u proportional to L_n^(k/2+l~-1)", bad_prop == 0, f"{bad_prop}/{count} failures", "0")
    rng = random.Random(seed)
    bad_op = 0
    for _ in range(20):
        deg = rng.randint(0, 8)
        u = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(deg + 1))
        k = rng.choice((2, 4, 6, 8))
        l_t = rng.randint(0, 4)
        p_t = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        alpha = Fraction(k, 2) + l_t - 1
        lhs = radial_ode_apply(u, l_t, p_t, k)
        lam_u = laguerre_operator(u, alpha)
        n = max(len(lhs), len(lam_u), len(u))
        pad = lambda v: tuple(v) + (Fraction(0),) * (n - len(v))
        expect = tuple(4 * a - (4 * p_t + 3 * k) * b for a, b in zip(pad(lam_u), pad(u)))
        bad_op += pad(lhs) != expect
    res.add("P = 4 Lambda_alpha - (4p~+3k) on 20 random polynomials", bad_op == 0, f"{bad_op}/20 failures", "0")
    return res


LAMBDA_T_GRID = (0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0)
ABEL_ETAS = (0.5, 0.1, 0.01)


def criterion_5() -> CriterionResult:
    res = CriterionResult(5, "partition functions: spectral sums vs closed forms")
    worst_w, worst_s = 0.0, 0.0
    approach_ok = True
    for kappa in (1, 2, 3):
        for lam in (1.0, 2.0):
            params = ModelParams(lam=lam, kappa=kappa)
            for a in range(4):
                for lt in LAMBDA_T_GRID:
                    t = lt / lam
                    closed = partition_zonal(a, t, params)
                    spectral, _ = partition_spectral(a, t, params)
                    worst_w = max(worst_w, abs(spectral - closed) / abs(closed))
                    target = partition_zonal(a, t, params, "schrodinger")
                    dists = []
                    for eta in ABEL_ETAS:
                        tau = t * complex(eta, 1.0)
                        s_val, _ = partition_spectral(a, tau, params)
                        c_val = partition_closed_form(a, tau, params)
                        worst_s = max(worst_s, abs(s_val - c_val) / abs(c_val))
                        dists.append(abs(s_val - target))
                    approach_ok &= dists[-1] < dists[0]
    res.add("Wiener: spectral sum vs Z_1 closed form", worst_w <= 1e-10, _fmt(worst_w), "rel <= 1e-10")
    res.add("Schroedinger: Abel-regularised sums vs closed form at tau = t(eta + i)",
            worst_s <= 1e-10, _fmt(worst_s), "rel <= 1e-10")
    res.add("Abel sums move toward Z_i(t) as eta -> 0", approach_ok, str(approach_ok),
            "closer at eta=0.01 than at eta=0.5")
    params = ModelParams()
    z0 = enumerate_zone_spectrum(0, params, 50)
    z2 = enumerate_zone_spectrum(2, params, 50)
    iso = [(s.energy, s.multiplicity) for s in z0] == [(s.energy, s.multiplicity) for s in z2]
    res.add("zones a=0 and a=2 isospectral (kappa=1)", iso, str(iso), "exact")
    return res


SAMPLE_SEED = 7


def _sample_pairs(n=10, seed=SAMPLE_SEED):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.5, 1.5, size=(n, 4))
    return [(complex(x, y), complex(u, v)) for x, y, u, v in pts]


def criterion_6() -> CriterionResult:
    res = CriterionResult(6, "zonal kernels: spectral, reproducing, semigroup, trace, t -> 0")
    params = ModelParams()
    lam = params.lam_float
    worst = 0.0
    for a in range(3):
        for z, w in _sample_pairs():
            closed = point_spread(a, params, z, w).value
            worst = max(worst, abs(closed - spectral_kernel_oracle(a, params, z, w, 80)))
    res.add("point_spread vs truncated spectral sum", worst <= 1e-10, _fmt(worst), "<= 1e-10")

    hw, n = 9.0, 181
    idem, repro = 0.0, 0.0
    for a in range(3):
        for z, w in _sample_pairs(3, seed=11):
            lhs = plane_trapezoid(lambda u: point_spread(a, params, z, u).value
                                  * point_spread(a, params, u, w).value, hw, n)
            idem = max(idem, abs(lhs - point_spread(a, params, z, w).value))
            for b in range(3):
                for p in (0, 2):
                    val = plane_trapezoid(lambda u: point_spread(a, params, z, u).value
                                          * eigenfunction_values(p, b, u, lam), hw, n)
                    target = complex(eigenfunction_values(p, b, z, lam)) if a == b else 0.0
                    repro = max(repro, abs(val - target))
    res.add("idempotency by 2D quadrature", idem <= 1e-8, _fmt(idem), "<= 1e-8")
    res.add("reproducing property (and annihilation of other zones)", repro <= 1e-8, _fmt(repro), "<= 1e-8")

    ck = 0.0
    for t1, t2 in ((0.3, 0.5), (1.0, 0.2)):
        for z, w in _sample_pairs(3, seed=13):
            lhs = plane_trapezoid(lambda u: wiener_zonal(0, t1, z, u, params).value
                                  * wiener_zonal(0, t2, u, w, params).value, hw, n)
            ck = max(ck, abs(lhs - wiener_zonal(0, t1 + t2, z, w, params).value))
    res.add("Chapman-Kolmogorov for the Fock-zone heat kernel", ck <= 1e-8, _fmt(ck), "<= 1e-8")

    tr = 0.0
    for t in (0.3, 1.0, 2.5):
        num = zonal_trace_numeric(t, params).value
        tr = max(tr, abs(num - partition_zonal(0, t, params)))
    res.add("numeric trace vs Z_1^(0)", tr <= 1e-8, _fmt(tr), "<= 1e-8")

    lim = 0.0
    for z, w in _sample_pairs():
        ps = point_spread(0, params, z, w).value
        lim = max(lim, abs(wiener_zonal(0, 1e-6, z, w, params).value - ps) / abs(ps))
    res.add("t = 1e-6 heat kernel vs point_spread", lim <= 1e-4, _fmt(lim), "rel <= 1e-4")
    return res


def criterion_7() -> CriterionResult:
    res = CriterionResult(7, "Coulomb spectra on the zones")
    params = ModelParams()
    worst = 0.0
    for m in range(31):
        val, _ = coulomb_matrix_element((m, 0), (m, 0), params)
        worst = max(worst, abs(val - coulomb_diag_fock(m)))
    res.add("radial quadrature vs Gamma closed form, m <= 30", worst <= 1e-8, _fmt(worst), "<= 1e-8")
    sel = 0.0
    for a in range(3):
        for m1, m2 in ((0, 1), (1, 3), (-1, 2), (2, 0)):
            s1, s2 = (a + m1, a), (a + m2, a)
            if min(s1[0], s2[0]) < 0:
                continue
            val, _ = coulomb_matrix_element(s1, s2, params, method="polar")
            sel = max(sel, abs(val))
    res.add("selection rule m1 != m2 by 2D quadrature", sel <= 1e-10, _fmt(sel), "<= 1e-10")
    conj = 0.0
    for a, b in ((0, 1), (0, 2), (1, 2)):
        vab = transmission_matrix(a, b, range(-3, 6), params)
        vba = transmission_matrix(b, a, range(-3, 6), params, method="polar")
        for m, v in vab.entries.items():
            conj = max(conj, abs(v - np.conj(vba.entries[m])))
    res.add("V^(a,b) = conj V^(b,a)", conj <= 1e-10, _fmt(conj), "<= 1e-10")
    gaps = all(fock_energy_gap_identity(m) for m in range(1, 21))
    res.add("E_{m-1} - E_m = E_m/(2m-1) exactly, m <= 20", gaps, str(gaps), "exact")
    return res


def criterion_8() -> CriterionResult:
    res = CriterionResult(8, "trace divergence diagnostics")
    small = trace_divergence_report(0, 10_000, 0.1)
    r = small["stirling_ratio"]
    res.add("E_m sqrt(pi m)/(Q sqrt(pi lam)) at m = 5000", 0.99 <= r <= 1.01, f"{r:.6f}", "[0.99, 1.01]")
    s = small["sum_ratio_model"]
    res.add("sum_{m<=1e4} E_m / (2 Q sqrt(lam) sqrt(M/pi))", abs(s - 1.0) <= 0.02, f"{s:.6f}", "1 +- 0.02")
    big = trace_divergence_report(0, 1_000_000, 0.1)
    inc = big["last_increment"]
    res.add("E_M^{2.1} increment at M = 1e6", inc < 1e-6, _fmt(inc), "< 1e-6")
    return res


def criterion_9() -> CriterionResult:
    res = CriterionResult(9, "2D log potential: <ln r>_m = psi(m+1)/2, increasing")
    rows = log_potential_diag(50)
    worst = max(abs(q - c) for _, q, c in rows)
    res.add("quadrature vs psi(m+1)/2, m <= 50", worst <= 1e-8, _fmt(worst), "<= 1e-8")
    vals = [q for _, q, _ in rows]
    mono = all(b > a for a, b in zip(vals, vals[1:]))
    res.add("strictly increasing (no decay to 0)", mono, str(mono), "monotone")
    return res


def criterion_10() -> CriterionResult:
    res = CriterionResult(10, "amplitude chain and level shift")
    worst, worst_tot, worst_re = 0.0, 0.0, 0.0
    sig_b = sigma_integral("B").sigma
    worst_b = abs(sig_b - sigma_B_closed_form())
    for l in range(6):
        sig = sigma_integral(l).sigma
        worst = max(worst, abs(sig - sigma_closed_form(l)))
        total = sig + sig_b
        worst_tot = max(worst_tot, abs(total - complex(0, -1 / (math.sqrt(math.pi) * (l + 0.5)))))
        worst_re = max(worst_re, abs(total.real))
    res.add("quadrature sigma_l vs sqrt(pi) - i/(sqrt(pi)(l+1/2)), l <= 5", worst <= 1e-6, _fmt(worst), "<= 1e-6")
    res.add("sigma_B = -sqrt(pi)", worst_b <= 1e-6, _fmt(worst_b), "<= 1e-6")
    res.add("sigma_total = -i/(sqrt(pi)(l+1/2))", worst_tot <= 1e-6, _fmt(worst_tot), "<= 1e-6")
    res.add("real parts cancel", worst_re <= 1e-8, _fmt(worst_re), "<= 1e-8")
    k = default_constants()
    _, ev, mhz = lamb_shift(0, "total", k)
    exact_ev = k.me_c2_eV * k.alpha**5 / math.pi
    res.add("Delta_total(l=0) = m c^2 alpha^5 / pi", math.isclose(ev, exact_ev, rel_tol=1e-12),
            f"{ev:.6e} eV", f"{exact_ev:.6e} eV")
    res.add("Delta_total(l=0) ~ 3.37e-6 eV", round(ev, 8) == 3.37e-6, f"{ev:.4e} eV", "3.37e-6 eV")
    res.add("frequency ~ 8.1e8 Hz (observed value quoted as ~1000 MHz)",
            abs(mhz * 1e6 - 8.1e8) / 8.1e8 < 0.01, f"{mhz:.2f} MHz", "8.1e8 Hz +- 1%")
    ident = max(abs(w - (f + s)) for w, f, s in (partial_fraction_terms(l) for l in range(21)))
    res.add("partial-fraction identity, l <= 20", ident <= 1e-14, _fmt(ident), "<= 1e-14")
    first = max(partial_fraction_terms(l)[1] for l in range(1, 101))
    res.add("first partial-fraction term < 0.03536 for l >= 1", first < 0.03536, f"{first:.6f}", "< 0.03536")
    return res


def criterion_11() -> CriterionResult:
    res = CriterionResult(11, "exact-Gamma amplitude is finite and cutoff-stable")
    base = sigma_integral(0, "exact_gamma")
    doubled = sigma_integral(0, "exact_gamma", cutoff_scale=2.0)
    res.add("reported abs_err", base.abs_err <= 1e-6, _fmt(base.abs_err), "<= 1e-6")
    d = abs(base.sigma - doubled.sigma)
    res.add("stable under doubling the cutoff", d <= 1e-6, _fmt(d), "<= 1e-6")
    res.add("value", math.isfinite(abs(base.sigma)) and abs(base.sigma) < 10,
            f"{base.sigma.real:.9f}{base.sigma.imag:+.9f}i", "finite, |sigma| < 10")
    return res


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11,
}


def run_criterion(n: int) -> CriterionResult:
    start = time.perf_counter()
    res = CRITERIA[n]()
    res.seconds = time.perf_counter() - start
    return res


def run_all() -> list[CriterionResult]:
    return [run_criterion(n) for n in sorted(CRITERIA)]
