"""Closed-form constants, exponents and thresholds of the CKN and WLH
inequalities.

Conventions: ``a_c = (d - 2)/2`` and ``Lambda(a) = (a - a_c)^2``. Every
threshold is reported both as a Lambda value and as the corresponding weight
exponent ``a = a_c - sqrt(Lambda)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .numerics import gamma_fn, log_gamma

INF = math.inf


@dataclass(frozen=True)
class Exponents:
    vartheta: float
    a_c: float
    two_star: float


def critical_a(d: int) -> float:
    return (d - 2) / 2.0


def lambda_of(a: float, d: int) -> float:
    """Lambda(a) = (a - a_c)^2."""
    return (a - critical_a(d)) ** 2


def a_of_lambda(Lambda: float, d: int) -> float:
    """Inverse of :func:`lambda_of` on the branch a < a_c."""
    if Lambda < 0:
        raise DomainError(f"Lambda must be >= 0, got {Lambda}")
    return critical_a(d) - math.sqrt(Lambda)


def two_star(d: int) -> float:
    return 2.0 * d / (d - 2) if d >= 3 else INF


def vartheta(p: float, d: int) -> float:
    return d * (p - 2.0) / (2.0 * p)


def exponents(d: int, p: float) -> Exponents:
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    return Exponents(vartheta(p, d), critical_a(d), two_star(d))


def p_of(a: float, b: float, d: int) -> float:
    """p(a, b) = 2d / (d - 2 + 2(b - a))."""
    denom = d - 2 + 2.0 * (b - a)
    if denom <= 0:
        raise DomainError(f"d - 2 + 2(b - a) must be positive, got {denom}")
    return 2.0 * d / denom


def sphere_measure(d: int) -> float:
    """Surface measure of the unit sphere S^(d-1) in R^d."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / gamma_fn(d / 2.0)


def sobolev_constant(d: int) -> float:
    """Sharp constant S_d in ||u||_{2*}^2 <= S_d ||grad u||_2^2 (Aubin-Talenti)."""
    if d < 3:
        raise DomainError(f"Sobolev constant needs d >= 3, got {d}")
    return (gamma_fn(d) / gamma_fn(d / 2.0)) ** (2.0 / d) / (math.pi * d * (d - 2))


# ---------------------------------------------------------------------------
# admissibility


def check_ckn(d: int, p: float, theta: float) -> None:
    """Raise DomainError unless (d, p, theta) is admissible for (CKN)."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if not 2.0 < p < two_star(d):
        raise DomainError(f"p must lie in (2, 2*) = (2, {two_star(d)}), got {p}")
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    if d >= 2 and theta < vartheta(p, d) - 1e-15:
        raise DomainError(f"theta must be >= vartheta(p, d) = {vartheta(p, d)}, got {theta}")
    if d == 1 and theta <= 0.5:
        raise DomainError("d = 1 requires theta > 1/2")


def check_wlh(d: int, gamma: float) -> None:
    """Raise DomainError unless (d, gamma) is admissible for (WLH)."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    if gamma < d / 4.0:
        raise DomainError(f"gamma must be >= d/4 = {d / 4}, got {gamma}")
    if d == 2 and gamma <= 0.5:
        raise DomainError("d = 2 requires gamma > 1/2")


def _check_a(a: float, d: int) -> float:
    if a >= critical_a(d):
        raise DomainError(f"a must be < a_c = {critical_a(d)}, got {a}")
    return lambda_of(a, d)


# ---------------------------------------------------------------------------
# radial optimal constants


def _log_gamma_ratio(m: float) -> float:
    """log[Gamma(m + 1/2) / (sqrt(pi) Gamma(m))]."""
    if m < 40:
        return math.log(gamma_fn(m + 0.5) / (math.sqrt(math.pi) * gamma_fn(m)))
    return log_gamma(m + 0.5) - log_gamma(m) - 0.5 * math.log(math.pi)


def ckn_star_lambda(d: int, p: float, theta: float, Lambda: float) -> float:
    """Radial CKN constant expressed through Lambda > 0 instead of a."""
    if Lambda <= 0:
        raise DomainError(f"Lambda must be positive, got {Lambda}")
    q = 2.0 + (2.0 * theta - 1.0) * p
    if q <= 0:
        raise DomainError(f"2 + (2 theta - 1) p must be positive, got {q}")
    m = 2.0 / (p - 2.0)
    log_c = (
        -(p - 2.0) / p * math.log(sphere_measure(d))
        + (p - 2.0) / (2.0 * p) * math.log(Lambda * (p - 2.0) ** 2 / q)
        + theta * math.log(q / (2.0 * p * theta * Lambda))
        + (6.0 - p) / (2.0 * p) * math.log(4.0 / (p + 2.0))
        + (p - 2.0) / p * _log_gamma_ratio(m)
    )
    return math.exp(log_c)


def ckn_star(d: int, p: float, theta: float, a: float) -> float:
    """Optimal (CKN) constant among radial functions, C*_CKN(theta, p, a)."""
    check_ckn(d, p, theta)
    if theta == 0:
        raise DomainError("theta must be positive")
    return ckn_star_lambda(d, p, theta, _check_a(a, d))


def ckn_star_limit(d: int) -> float:
    """lim_{p -> 2+} C*_CKN(vartheta, p, a_c - 1)^(1/vartheta)."""
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    return (
        (d - 1) ** ((d - 1) / d)
        * gamma_fn(d / 2.0) ** (2.0 / d)
        / (d * (2.0 * math.e) ** (1.0 / d) * math.pi ** ((d + 1) / d))
    )


def wlh_star_lambda(d: int, gamma: float, Lambda: float) -> float:
    if gamma < 0.25:
        raise DomainError(f"gamma must be >= 1/4, got {gamma}")
    g = gamma_fn(d / 2.0)
    if gamma == 0.25:
        return g**2 / (2.0 * math.pi ** (d + 1) * math.e)
    if Lambda <= 0:
        raise DomainError(f"Lambda must be positive, got {Lambda}")
    k = 4.0 * gamma - 1.0
    return (
        g ** (1.0 / (2.0 * gamma))
        / (4.0 * gamma * (2.0 * math.pi ** (d + 1) * math.e) ** (1.0 / (4.0 * gamma)))
        * (k / Lambda) ** (k / (4.0 * gamma))
    )


def wlh_star(d: int, gamma: float, a: float) -> float:
    """Optimal (WLH) constant among radial functions, C*_WLH(gamma, a)."""
    if gamma < 0.25:
        raise DomainError(f"gamma must be >= 1/4, got {gamma}")
    check_wlh(d, gamma)
    return wlh_star_lambda(d, gamma, _check_a(a, d))


def c_ls(d: int) -> float:
    """Optimal constant of the logarithmic Sobolev inequality, 2/(pi d e)."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    return 2.0 / (math.pi * d * math.e)


# ---------------------------------------------------------------------------
# thresholds


@dataclass
class ThresholdRecord:
    """Thresholds in (Lambda, a) form; fields not requested are None."""

    a_bar: float | None = None
    a_tilde: float | None = None
    lambda_sb: float | None = None
    a_sb: float | None = None
    lambda_0: float | None = None
    a_0: float | None = None
    lambda_1: float | None = None
    a_1: float | None = None
    lambda_1_branch: int | None = None
    lambda_ss_wlh: float | None = None
    a_ss_wlh: float | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def a_bar(d: int, p: float, theta: float) -> float:
    """Linear-instability threshold for (CKN): symmetry breaking below it."""
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    if p <= 2:
        raise DomainError(f"needs p > 2, got {p}")
    x = 2.0 * p * theta / (p - 2.0) - 1.0
    if x < 0:
        raise DomainError(f"2 p theta/(p - 2) must be >= 1, got {x + 1}")
    return critical_a(d) - 2.0 * math.sqrt(d - 1) / (p + 2.0) * math.sqrt(x)


def a_tilde(d: int, gamma: float) -> float:
    if gamma < 0.25:
        raise DomainError(f"gamma must be >= 1/4, got {gamma}")
    return critical_a(d) - 0.5 * math.sqrt((d - 1) * (4.0 * gamma - 1.0))


def lambda_sb(d: int, gamma: float) -> float:
    if gamma <= 0.25:
        raise DomainError(f"Lambda_SB needs gamma > 1/4, got {gamma}")
    k = 4.0 * gamma - 1.0
    return (
        k / 8.0
        * math.e
        * (math.pi ** (k - d) / 16.0) ** (1.0 / k)
        * (d / gamma) ** (4.0 * gamma / k)
        * gamma_fn(d / 2.0) ** (2.0 / k)
    )


def lambda_ss_wlh(d: int) -> float:
    """Lambda**_WLH = (d - 1) e [Gamma(d/2)^2 / (2^(d+1) pi)]^(1/(d-1))."""
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    return (d - 1) * math.e * (gamma_fn(d / 2.0) ** 2 / (2.0 ** (d + 1) * math.pi)) ** (1.0 / (d - 1))


def symmetry_breaking_thresholds(d: int, p: float | None = None, theta: float | None = None,
                                 gamma: float | None = None) -> ThresholdRecord:
    """a_bar(theta, p), a_tilde(gamma), Lambda_SB(gamma) and a_SB.

    Quantities whose inputs are missing are left as None.
    """
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    rec = ThresholdRecord()
    if p is not None and theta is not None:
        rec.a_bar = a_bar(d, p, theta)
    if gamma is not None:
        rec.a_tilde = a_tilde(d, gamma)
        if gamma > 0.25:
            rec.lambda_sb = lambda_sb(d, gamma)
            rec.a_sb = a_of_lambda(rec.lambda_sb, d)
    return rec


def lambda_1_branches(d: int, p: float) -> tuple[float, float]:
    """The two candidates in the min defining Lambda_1 (critical theta)."""
    th = vartheta(p, d)
    k = ckn_star(d, p, th, critical_a(d) - 1.0) ** (1.0 / th)
    s = sobolev_constant(d)
    return (k / s) ** (d / (d - 1.0)), (critical_a(d) ** 2 * s / k) ** d


def lambda_0(d: int, p: float) -> float:
    """Lambda_0 from Lambda^((d-1)/d) = vartheta C*^(1/vartheta) / S_d."""
    th = vartheta(p, d)
    k = ckn_star(d, p, th, critical_a(d) - 1.0) ** (1.0 / th)
    return (th * k / sobolev_constant(d)) ** (d / (d - 1.0))


def existence_thresholds(d: int, p: float) -> ThresholdRecord:
    """Lambda_0, Lambda_1 and Lambda**_WLH in the critical case theta = vartheta(p, d)."""
    if d < 3:
        raise DomainError(f"existence thresholds need d >= 3, got {d}")
    check_ckn(d, p, vartheta(p, d))
    first, second = lambda_1_branches(d, p)
    l1 = min(first, second)
    l0 = lambda_0(d, p)
    lss = lambda_ss_wlh(d)
    return ThresholdRecord(
        lambda_0=l0,
        a_0=a_of_lambda(l0, d),
        lambda_1=l1,
        a_1=a_of_lambda(l1, d),
        lambda_1_branch=0 if first <= second else 1,
        lambda_ss_wlh=lss,
        a_ss_wlh=a_of_lambda(lss, d),
    )


def lambda_1_limit_branches(d: int) -> tuple[float, float]:
    """Closed-form candidates for lim_{p -> 2+} Lambda_1(p)."""
    if d < 3:
        raise DomainError(f"needs d >= 3, got {d}")
    r = gamma_fn(d / 2.0) / gamma_fn((d - 1) / 2.0)
    first = 0.25 * ((2.0 / math.e) * (d - 2) ** d * (d - 1) ** (d - 3) * r**2) ** (1.0 / (d - 1))
    second = math.e / 8.0 * (d - 2) ** d / (d - 1) ** (d - 3) / r**2
    return first, second


def lambda_1_limit(d: int) -> float:
    return min(lambda_1_limit_branches(d))


def schwarz_h_log_derivative(A: float, B: float, theta: float, a: float, d: int) -> float:
    """h'(B)/h(B) for h(B) = (A - lam B)^theta B^(1 - theta), lam = a (2 a_c - a).

    Negative exactly when A/B < lam/(1 - theta).
    """
    if d < 3:
        raise DomainError(f"needs d >= 3, got {d}")
    if B <= 0:
        raise DomainError(f"B must be positive, got {B}")
    lam = a * (2.0 * critical_a(d) - a)
    if A - lam * B <= 0:
        raise DomainError(f"A - lambda B must be positive, got {A - lam * B}")
    return (1.0 - theta) / B - lam * theta / (A - lam * B)
