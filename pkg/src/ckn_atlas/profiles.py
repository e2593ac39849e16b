"""Radial extremal profiles on the cylinder R x S^(d-1) and the functionals
evaluated on them.

A function of the axis variable ``s`` alone stands for a radial function in
the original variables. Every norm below is a cylinder norm, so integrals of
s-only functions carry the factor |S^(d-1)|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import constants
from .errors import DomainError, PreconditionError
from .numerics import cosh_power_half_width, gaussian_half_width, integrate_half_line, integrate_line

QUAD_TOL = 1e-13
# truncation level for the decay rules of the analytic profiles
_TRUNC_TOL = 1e-16


def _log_cosh(x: float) -> float:
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)


@dataclass(frozen=True)
class RadialProfile:
    """An s-only function f(s) with its derivatives and decay data.

    ``log_evaluator`` (when present) returns log f(s) without underflow and is
    used for entropy integrals. ``half_width`` and ``center`` fix the
    truncated integration window.
    """

    kind: str
    evaluator: Callable[[float], float]
    derivative: Callable[[float], float]
    half_width: float
    center: float = 0.0
    lam: float = math.nan
    m: float = math.nan
    sigma: float = math.nan
    amplitude: float = 1.0
    second_derivative: Callable[[float], float] | None = None
    log_evaluator: Callable[[float], float] | None = None
    decay_envelope: Callable[[float], float] | None = None

    def __call__(self, s: float) -> float:
        return self.evaluator(s)

    def shifted(self, s0: float) -> "RadialProfile":
        """The profile s -> f(s + s0)."""
        f, df = self.evaluator, self.derivative
        ddf, lf, env = self.second_derivative, self.log_evaluator, self.decay_envelope
        return replace(
            self,
            evaluator=lambda s: f(s + s0),
            derivative=lambda s: df(s + s0),
            second_derivative=None if ddf is None else (lambda s: ddf(s + s0)),
            log_evaluator=None if lf is None else (lambda s: lf(s + s0)),
            decay_envelope=None if env is None else (lambda s: env(s + s0)),
            center=self.center - s0,
        )

    def scaled(self, c: float) -> "RadialProfile":
        """The profile c * f."""
        if c <= 0:
            raise DomainError("scale factor must be positive")
        f, df = self.evaluator, self.derivative
        ddf, lf, env = self.second_derivative, self.log_evaluator, self.decay_envelope
        logc = math.log(c)
        return replace(
            self,
            evaluator=lambda s: c * f(s),
            derivative=lambda s: c * df(s),
            second_derivative=None if ddf is None else (lambda s: c * ddf(s)),
            log_evaluator=None if lf is None else (lambda s: logc + lf(s)),
            decay_envelope=None if env is None else (lambda s: c * env(s)),
            amplitude=c * self.amplitude,
        )

    def dilated(self, sigma: float) -> "RadialProfile":
        """The profile s -> f(sigma s)."""
        if sigma <= 0:
            raise DomainError("dilation factor must be positive")
        f, df = self.evaluator, self.derivative
        ddf, lf, env = self.second_derivative, self.log_evaluator, self.decay_envelope
        return replace(
            self,
            kind="custom" if self.kind != "zero" else "zero",
            evaluator=lambda s: f(sigma * s),
            derivative=lambda s: sigma * df(sigma * s),
            second_derivative=None if ddf is None else (lambda s: sigma**2 * ddf(sigma * s)),
            log_evaluator=None if lf is None else (lambda s: lf(sigma * s)),
            decay_envelope=None if env is None else (lambda s: env(sigma * s)),
            half_width=self.half_width / sigma,
            center=self.center / sigma,
        )

    def log_value(self, s: float) -> float:
        if self.log_evaluator is not None:
            return self.log_evaluator(s)
        return math.log(max(abs(self.evaluator(s)), 1e-300))

    def integrate(self, g: Callable[[float], float], tol: float = QUAD_TOL) -> float:
        return integrate_line(g, tol=tol, half_width=self.half_width, center=self.center)


def custom_profile(f, df, half_width: float, center: float = 0.0, ddf=None) -> RadialProfile:
    return RadialProfile("custom", f, df, half_width, center=center, second_derivative=ddf)


def zero_profile(half_width: float = 1.0) -> RadialProfile:
    return RadialProfile("zero", lambda s: 0.0, lambda s: 0.0, half_width, second_derivative=lambda s: 0.0)


def ckn_decay_rate(p: float, theta: float, Lambda: float) -> float:
    """lambda = (p - 2)/2 sqrt(Lambda (p + 2) / (2 + (2 theta - 1) p))."""
    q = 2.0 + (2.0 * theta - 1.0) * p
    if q <= 0:
        raise DomainError(f"2 + (2 theta - 1) p must be positive, got {q}")
    return 0.5 * (p - 2.0) * math.sqrt(Lambda * (p + 2.0) / q)


def cosh_power_profile(lam: float, m: float, p: float) -> RadialProfile:
    """f(s) = cosh(lam s)^(-m) with its analytic derivatives."""

    def log_f(s):
        return -m * _log_cosh(lam * s)

    def f(s):
        return math.exp(log_f(s))

    def df(s):
        return -m * lam * math.tanh(lam * s) * f(s)

    def ddf(s):
        sech2 = 1.0 / math.cosh(lam * s) ** 2 if abs(lam * s) < 350 else 0.0
        return m * lam**2 * f(s) * (m - (m + 1.0) * sech2)

    def envelope(s):
        return 2.0**m * math.exp(-m * lam * abs(s))

    return RadialProfile(
        "cosh_power", f, df,
        half_width=cosh_power_half_width(p, lam, _TRUNC_TOL),
        lam=lam, m=m, second_derivative=ddf, log_evaluator=log_f, decay_envelope=envelope,
    )


def ckn_profile(d: int, p: float, theta: float, Lambda: float) -> RadialProfile:
    """Radial (CKN) extremal w(s) = cosh(lambda s)^(-2/(p-2))."""
    if Lambda <= 0:
        raise DomainError(f"Lambda must be positive, got {Lambda}")
    constants.check_ckn(d, p, theta)
    if d == 1 and theta <= constants.vartheta(p, 1):
        raise DomainError("d = 1 needs theta > vartheta(p, 1)")
    return cosh_power_profile(ckn_decay_rate(p, theta, Lambda), 2.0 / (p - 2.0), p)


def wlh_profile(d: int, gamma: float, Lambda: float) -> RadialProfile:
    """Radial (WLH) extremal: a Gaussian in s with unit cylinder L^2 norm."""
    if gamma <= 0.25:
        raise DomainError(f"gamma must be > 1/4, got {gamma}")
    if Lambda <= 0:
        raise DomainError(f"Lambda must be positive, got {Lambda}")
    # w = A exp(-s^2 / (2 sigma^2)), i.e. exp(-Lambda s^2 / (4 gamma - 1))
    sigma = math.sqrt((4.0 * gamma - 1.0) / (2.0 * Lambda))
    mass = constants.sphere_measure(d) * math.sqrt(math.pi) * sigma
    amp = 1.0 / math.sqrt(mass)
    log_amp = math.log(amp)

    def log_f(s):
        return log_amp - s * s / (2.0 * sigma**2)

    def f(s):
        return math.exp(log_f(s))

    def df(s):
        return -s / sigma**2 * f(s)

    def ddf(s):
        return (s * s / sigma**4 - 1.0 / sigma**2) * f(s)

    return RadialProfile(
        "gaussian_s", f, df,
        half_width=gaussian_half_width(math.sqrt(2.0) * sigma, _TRUNC_TOL),
        sigma=sigma, amplitude=amp, second_derivative=ddf, log_evaluator=log_f,
        decay_envelope=lambda s: amp * math.exp(-s * s / (2.0 * sigma**2)),
    )


@dataclass(frozen=True)
class CylinderFunctionValue:
    norm_p: float | None
    norm_2: float
    grad_norm_2: float
    entropy: float | None
    quotient: float


def _entropy(profile: RadialProfile, sphere: float) -> float:
    def g(s):
        v = profile(s)
        if v == 0.0:
            return 0.0
        return 2.0 * v * v * profile.log_value(s)

    return sphere * profile.integrate(g)


def ckn_quotient(profile: RadialProfile, d: int, p: float, theta: float, Lambda: float) -> CylinderFunctionValue:
    """Cylinder norms of an s-only profile and the (CKN) quotient

        ||v||_p^2 / [(||grad v||^2 + Lambda ||v||^2)^theta ||v||^(2(1-theta))].
    """
    sphere = constants.sphere_measure(d)
    lp = sphere * profile.integrate(lambda s: abs(profile(s)) ** p)
    l2 = sphere * profile.integrate(lambda s: profile(s) ** 2)
    grad = sphere * profile.integrate(lambda s: profile.derivative(s) ** 2)
    norm_p = lp ** (1.0 / p)
    q = norm_p**2 / ((grad + Lambda * l2) ** theta * l2 ** (1.0 - theta))
    return CylinderFunctionValue(norm_p, math.sqrt(l2), math.sqrt(grad), None, q)


def wlh_value(profile: RadialProfile, d: int, gamma: float, Lambda: float) -> CylinderFunctionValue:
    """F_gamma[w] = (||grad w||^2 + Lambda) exp(-(1/(2 gamma)) int w^2 log w^2).

    ``quotient`` holds F_gamma; the profile must have unit cylinder L^2 norm.
    """
    sphere = constants.sphere_measure(d)
    l2 = sphere * profile.integrate(lambda s: profile(s) ** 2)
    if abs(l2 - 1.0) > 1e-10:
        raise PreconditionError(f"profile must have unit L^2 norm, got ||w||^2 = {l2!r}")
    grad = sphere * profile.integrate(lambda s: profile.derivative(s) ** 2)
    ent = _entropy(profile, sphere)
    value = (grad + Lambda) * math.exp(-ent / (2.0 * gamma))
    return CylinderFunctionValue(None, math.sqrt(l2), math.sqrt(grad), ent, value)


# ---------------------------------------------------------------------------
# log-Sobolev inequality on R^d


@dataclass(frozen=True)
class RadialFunction:
    """A radial function r -> u(r) on R^d with derivative du/dr."""

    u: Callable[[float], float]
    du: Callable[[float], float]
    upper: float | None = None
    log_u: Callable[[float], float] | None = None


def gaussian_radial(d: int, sigma: float = 1.0) -> RadialFunction:
    """L^2-normalized (2 pi sigma^2)^(-d/4) exp(-r^2/(4 sigma^2)); sigma = 1 is the LSI extremal."""
    log_amp = -d / 4.0 * math.log(2.0 * math.pi * sigma**2)

    def log_u(r):
        return log_amp - r * r / (4.0 * sigma**2)

    return RadialFunction(
        u=lambda r: math.exp(log_u(r)),
        du=lambda r: -r / (2.0 * sigma**2) * math.exp(log_u(r)),
        upper=gaussian_half_width(2.0 * sigma, _TRUNC_TOL),
        log_u=log_u,
    )


def radial_integral(g: Callable[[float], float], d: int, upper: float | None = None, tol: float = QUAD_TOL) -> float:
    """int_{R^d} g(|x|) dx for radial g."""
    sphere = constants.sphere_measure(d)
    return sphere * integrate_half_line(lambda r: r ** (d - 1) * g(r), tol=tol, upper=upper)


def log_sobolev_deficit(fn: RadialFunction, d: int) -> float:
    """(d/2) log(C_LS ||grad u||^2) - int u^2 log u^2 for ||u||_2 = 1."""
    mass = radial_integral(lambda r: fn.u(r) ** 2, d, fn.upper)
    if abs(mass - 1.0) > 1e-10:
        raise PreconditionError(f"u must have unit L^2 norm, got ||u||^2 = {mass!r}")
    grad = radial_integral(lambda r: fn.du(r) ** 2, d, fn.upper)

    def ent(r):
        v = fn.u(r)
        if v == 0.0:
            return 0.0
        lv = fn.log_u(r) if fn.log_u is not None else math.log(max(abs(v), 1e-300))
        return 2.0 * v * v * lv

    entropy = radial_integral(ent, d, fn.upper)
    return 0.5 * d * math.log(constants.c_ls(d) * grad) - entropy


# ---------------------------------------------------------------------------
# scaling-sign probe on R x S^1


def _circle_quotient(f: RadialProfile, g: RadialProfile, p: float, theta: float, Lambda: float,
                     half_width: float, center: float, n_angle: int) -> float:
    phi = 2.0 * math.pi * np.arange(n_angle) / n_angle
    cos_phi = np.cos(phi)
    w = 2.0 * math.pi / n_angle

    def lp_density(s):
        return w * float(np.sum(np.abs(f(s) + g(s) * cos_phi) ** p))

    def quad(h):
        return integrate_line(h, tol=QUAD_TOL, half_width=half_width, center=center)

    lp = quad(lp_density)
    l2 = 2.0 * math.pi * quad(lambda s: f(s) ** 2) + math.pi * quad(lambda s: g(s) ** 2)
    ds = 2.0 * math.pi * quad(lambda s: f.derivative(s) ** 2) + math.pi * quad(lambda s: g.derivative(s) ** 2)
    # |d/dphi (g cos phi)|^2 integrates to pi g^2
    dphi = math.pi * quad(lambda s: g(s) ** 2)
    energy = (ds + dphi + Lambda * l2) ** theta * l2 ** (1.0 - theta)
    return lp ** (2.0 / p) / energy


def scaling_sign_probe(f: RadialProfile, g: RadialProfile, sigma: float, p: float, theta: float,
                       Lambda: float, d: int = 2, n_angle: int = 128) -> float:
    """Scaling test for v(s, phi) = f(s) + g(s) cos(phi) on R x S^1.

    With Q the (CKN) quotient on the cylinder and v_sigma(s, .) = v(sigma s, .),
    returns Q_{sigma^2 Lambda}[v_sigma]^(1/theta)
    - sigma^(-(2 theta - 1 + 2/p)/theta) Q_Lambda[v]^(1/theta), which vanishes
    for s-only v and has the sign of sigma - 1 otherwise.
    """
    if d != 2:
        raise DomainError("the scaling probe is implemented on R x S^1 only (d = 2)")
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    hw = max(f.half_width, g.half_width if g.kind != "zero" else 0.0)
    base = _circle_quotient(f, g, p, theta, Lambda, hw, f.center, n_angle)
    fs, gs = f.dilated(sigma), g.dilated(sigma)
    scaled = _circle_quotient(fs, gs, p, theta, sigma**2 * Lambda, hw / sigma, f.center / sigma, n_angle)
    expo = (2.0 * theta - 1.0 + 2.0 / p) / theta
    return scaled ** (1.0 / theta) - sigma ** (-expo) * base ** (1.0 / theta)


# ---------------------------------------------------------------------------


def elementary_inequality_gap(x: float, y: float, eta: float, which: str = "product") -> float:
    """Gap in the two elementary inequalities used for concentration-compactness.

    product: (1+x)^eta (1+y)^(1-eta) - 1 - x^eta y^(1-eta)
    young:   eta x^(1/eta) + (1-eta) y^(1/(1-eta)) - x y
    """
    if not (x > 0 and y > 0):
        raise DomainError("x and y must be positive")
    if not 0.0 < eta < 1.0:
        raise DomainError("eta must lie in (0, 1)")
    if which == "product":
        return (1.0 + x) ** eta * (1.0 + y) ** (1.0 - eta) - 1.0 - x**eta * y ** (1.0 - eta)
    if which == "young":
        try:
            return eta * x ** (1.0 / eta) + (1.0 - eta) * y ** (1.0 / (1.0 - eta)) - x * y
        except OverflowError:
            # a power term beyond double range dominates x y
            return math.inf
    raise ValueError(f"unknown inequality {which!r}")
