"""Exact expressions for Werner and isotropic states measured in Fourier-conjugate bases.

Logs are base 2. Every x log y term goes through ``xlogy`` so that the
0 log 0 limits at the ends of the lambda range come out exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

FAMILIES = ("werner", "isotropic")
_LN2 = np.log(2.0)


def _xlog2y(x, y) -> float:
    return float(xlogy(x, y) / _LN2)


@dataclass(frozen=True)
class FamilyPoint:
    """A member of the Werner (lam = antisymmetric weight) or isotropic (lam = fidelity) family."""

    family: str
    d: int
    lam: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.d!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lam must lie in [0, 1], got {self.lam!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "lam", float(self.lam))

    @classmethod
    def werner(cls, d: int, lam: float) -> "FamilyPoint":
        return cls("werner", d, lam)

    @classmethod
    def isotropic(cls, d: int, lam: float) -> "FamilyPoint":
        return cls("isotropic", d, lam)


def _require(pt: FamilyPoint, family: str) -> tuple[int, float]:
    if pt.family != family:
        raise ValueError(f"expected a {family} point, got {pt.family}")
    return pt.d, pt.lam


def conjugate_incompatibility_term(d: int) -> float:
    """-2 log2 c for Fourier-conjugate bases."""
    return float(np.log2(d))


def marginal_entropy(pt: FamilyPoint) -> float:
    """Both families have maximally mixed marginals."""
    return float(np.log2(pt.d))


def joint_entropy(pt: FamilyPoint) -> float:
    """S(rho_AB) from the two-level spectrum of each family."""
    d, lam = pt.d, pt.lam
    if pt.family == "werner":
        # weight lam spread over d(d-1)/2 antisymmetric states, the rest over d(d+1)/2
        return -_xlog2y(lam, 2 * lam / (d * (d - 1))) - _xlog2y(1 - lam, 2 * (1 - lam) / (d * (d + 1)))
    return -_xlog2y(lam, lam) - _xlog2y(1 - lam, (1 - lam) / (d * d - 1))


def conditional_entropy(pt: FamilyPoint) -> float:
    """S(A|B) = S(AB) - S(B)."""
    return joint_entropy(pt) - marginal_entropy(pt)


def werner_uncertainty_sum(pt: FamilyPoint) -> float:
    d, lam = _require(pt, "werner")
    return (-_xlog2y(4 * (1 - lam) / (d + 1), 2 * (1 - lam) / (d + 1))
            - _xlog2y(2 * (d - 1 + 2 * lam) / (d + 1), (d - 1 + 2 * lam) / (d * d - 1)))


def werner_classical_correlation(pt: FamilyPoint) -> float:
    d, lam = _require(pt, "werner")
    return (float(np.log2(2 * d / (d + 1)))
            + _xlog2y(2 * (1 - lam) / (d + 1), 1 - lam)
            + _xlog2y((d - 1 + 2 * lam) / (d + 1), (d - 1 + 2 * lam) / (2 * (d - 1))))


def werner_berta_bound(pt: FamilyPoint) -> float:
    d, lam = _require(pt, "werner")
    return -_xlog2y(lam, 2 * lam / (d * (d - 1))) - _xlog2y(1 - lam, 2 * (1 - lam) / (d * (d + 1)))


def isotropic_uncertainty_sum(pt: FamilyPoint) -> float:
    d, lam = _require(pt, "isotropic")
    return (-_xlog2y(2 * (d * lam + 1) / (d + 1), (d * lam + 1) / (d + 1))
            - _xlog2y(2 * d * (1 - lam) / (d + 1), d * (1 - lam) / (d * d - 1)))


def isotropic_classical_correlation(pt: FamilyPoint) -> float:
    d, lam = _require(pt, "isotropic")
    return (2 * float(np.log2(d))
            + _xlog2y(d * (1 - lam) / (d + 1), (1 - lam) / (d * d - 1))
            + _xlog2y((d * lam + 1) / (d + 1), (d * lam + 1) / (d * (d + 1))))


def isotropic_berta_bound(pt: FamilyPoint) -> float:
    d, lam = _require(pt, "isotropic")
    return -_xlog2y(lam, lam) - _xlog2y(1 - lam, (1 - lam) / (d * d - 1))


def _new_bound(pt: FamilyPoint, berta: float, j: float) -> float:
    # berta + max{0, D - J}; with D - J = S(A) + S(B) - S(AB) - 2J the second
    # branch collapses to -2 log c + S(A) - 2J
    alt = conjugate_incompatibility_term(pt.d) + marginal_entropy(pt) - 2 * j
    return max(berta, alt)


def werner_new_bound(pt: FamilyPoint) -> float:
    _require(pt, "werner")
    return _new_bound(pt, werner_berta_bound(pt), werner_classical_correlation(pt))


def isotropic_new_bound(pt: FamilyPoint) -> float:
    _require(pt, "isotropic")
    return _new_bound(pt, isotropic_berta_bound(pt), isotropic_classical_correlation(pt))


def uncertainty_sum(pt: FamilyPoint) -> float:
    return werner_uncertainty_sum(pt) if pt.family == "werner" else isotropic_uncertainty_sum(pt)


def classical_correlation(pt: FamilyPoint) -> float:
    return werner_classical_correlation(pt) if pt.family == "werner" else isotropic_classical_correlation(pt)


def berta_bound(pt: FamilyPoint) -> float:
    return werner_berta_bound(pt) if pt.family == "werner" else isotropic_berta_bound(pt)


def new_bound(pt: FamilyPoint) -> float:
    return werner_new_bound(pt) if pt.family == "werner" else isotropic_new_bound(pt)
