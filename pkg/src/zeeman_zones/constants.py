"""Physical constants (CODATA 2018) plus an older set of reference values,
kept apart so the two can be compared."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

__all__ = ["CODATA_2018", "LEGACY_VALUES", "PhysicalConstants", "default_constants"]

CODATA_2018 = {
    "alpha": 7.2973525693e-3,
    "m_e": 9.1093837015e-31,  # kg
    "hbar": 1.054571817e-34,  # J s
    "h": 6.62607015e-34,  # J s
    "e": 1.602176634e-19,  # C
    "mu_B": 9.2740100783e-24,  # J/T
    "c": 299792458.0,  # m/s
    "me_c2_J": 8.1871057769e-14,
    "me_c2_eV": 510998.95,
}

# Older reference values with fewer digits.
LEGACY_VALUES = {
    "alpha": 7.297352568e-3,
    "two_lambda_phys": 1.492298399e15,
    "hbar2_over_2me": 6.1042635e-39,
    "W_extra": 1.408970181e-8,
    "e": 1.60217653e-19,
}


@dataclass(frozen=True)
class PhysicalConstants:
    alpha: float
    me_c2_J: float
    me_c2_eV: float
    hbar: float
    h: float
    c: float
    e: float
    m_e: float
    mu_B: float
    two_lambda_phys: float  # 2 m_e mu_B / hbar^2 = e/hbar, m^-2 T^-1
    hbar2_over_2me: float  # J m^2
    W_extra: float  # (2 m_e / hbar^2) mu_B^2, J m^-2 T^-2
    aleph: float  # (alpha^5 / 4)^(1/6)

    def __post_init__(self):
        for name, val in asdict(self).items():
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be finite and positive")
        if not math.isclose(self.aleph, (0.25 * self.alpha**5) ** (1 / 6), rel_tol=1e-12):
            raise ValueError("aleph must equal (alpha^5/4)^(1/6)")

    def to_json(self) -> dict:
        return asdict(self)


def default_constants() -> PhysicalConstants:
    k = CODATA_2018
    alpha = k["alpha"]
    return PhysicalConstants(
        alpha=alpha,
        me_c2_J=k["me_c2_J"],
        me_c2_eV=k["me_c2_eV"],
        hbar=k["hbar"],
        h=k["h"],
        c=k["c"],
        e=k["e"],
        m_e=k["m_e"],
        mu_B=k["mu_B"],
        two_lambda_phys=2.0 * k["m_e"] * k["mu_B"] / k["hbar"] ** 2,
        hbar2_over_2me=k["hbar"] ** 2 / (2.0 * k["m_e"]),
        W_extra=2.0 * k["m_e"] * k["mu_B"] ** 2 / k["hbar"] ** 2,
        aleph=(0.25 * alpha**5) ** (1 / 6),
    )
