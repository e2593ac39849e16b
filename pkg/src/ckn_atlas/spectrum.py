"""Linear stability of the s-symmetric (CKN) extremal at theta = 1.

The extremal solves -w'' + Lambda w = c w^(p-1) with c = m(m+1) lam^2,
m = 2/(p-2), lam = (p-2) sqrt(Lambda)/2. Decomposing a perturbation in
spherical harmonics of degree k gives, mode by mode, the operator

    -d^2/ds^2 + Lambda + mu_k - (p - 1) c w(s)^(p-2),   mu_k = k (k + d - 2).

The k = 1 mode is the first one orthogonal to the radial constraints; its
lowest eigenvalue vanishes at Lambda = 4 (d - 1)/((p + 2)(p - 2)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import constants
from .errors import ConvergenceError, DomainError
from .numerics import (
    Bracket,
    GridOperator,
    cosh_power_half_width,
    find_root,
    lowest_eigenvalue,
    richardson_eigenvalues,
)
from .profiles import ckn_profile

DEFAULT_N = 8000
# truncation level for the eigenproblem window (eigenfunctions decay like
# sqrt of the potential well, so the cosh-power rule is applied at 1e-12)
_WINDOW_TOL = 1e-12


@dataclass(frozen=True)
class ModeOperatorSpec:
    d: int
    p: float
    Lambda: float
    k: int
    mu_k: float
    c: float
    lam: float
    half_width: float

    def potential(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        # w^(p-2) = sech^2(lam s)
        sech2 = 1.0 / np.cosh(np.clip(self.lam * s, -350.0, 350.0)) ** 2
        return self.Lambda + self.mu_k - (self.p - 1.0) * self.c * sech2

    def grid(self, n: int = DEFAULT_N) -> GridOperator:
        return GridOperator.from_potential(self.potential, self.half_width, n)


def mode_operator(d: int, p: float, Lambda: float, k: int) -> ModeOperatorSpec:
    """Operator of the k-th spherical-harmonic sector around the theta = 1 extremal."""
    if k < 0:
        raise DomainError(f"mode index must be >= 0, got {k}")
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    prof = ckn_profile(d, p, 1.0, Lambda)
    m, lam = prof.m, prof.lam
    half_width = cosh_power_half_width(p, lam, _WINDOW_TOL)
    return ModeOperatorSpec(d, p, Lambda, k, float(k * (k + d - 2)), m * (m + 1.0) * lam**2, lam, half_width)


@dataclass(frozen=True)
class ModeEigenvalues:
    values: np.ndarray
    error: np.ndarray

    @property
    def lowest(self) -> float:
        return float(self.values[0])


def mode_eigenvalues(spec: ModeOperatorSpec, count: int = 1, n: int = DEFAULT_N) -> ModeEigenvalues:
    """Lowest eigenvalues of a mode operator after one Richardson step (N, 2N)."""
    values, err = richardson_eigenvalues(spec.potential, spec.half_width, n, count)
    return ModeEigenvalues(values, err)


def lowest_mode_eigenvalue(spec: ModeOperatorSpec, n: int = DEFAULT_N) -> float:
    return mode_eigenvalues(spec, 1, n).lowest


def raw_mode_eigenvalues(spec: ModeOperatorSpec, count: int = 1, n: int = DEFAULT_N) -> np.ndarray:
    """Eigenvalues of the N-point grid operator, without extrapolation."""
    return lowest_eigenvalue(spec.grid(n), count)


def closed_form_threshold(d: int, p: float) -> float:
    """Lambda(a_bar(1, p)) = 4 (d - 1)/((p + 2)(p - 2))."""
    return 4.0 * (d - 1) / ((p + 2.0) * (p - 2.0))


def stability_threshold(d: int, p: float, k: int = 1, n: int = DEFAULT_N, scan_points: int = 10) -> float:
    """Lambda at which the lowest eigenvalue of mode k crosses zero."""
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    constants.check_ckn(d, p, 1.0)
    ref = closed_form_threshold(d, p)

    def f(Lam):
        return lowest_mode_eigenvalue(mode_operator(d, p, Lam, k), n)

    grid = np.geomspace(0.01 * ref, 100.0 * ref, scan_points)
    vals = [f(x) for x in grid]
    if any(b >= a for a, b in zip(vals, vals[1:])):
        raise ConvergenceError(f"lowest mode-{k} eigenvalue is not decreasing in Lambda on the scan")
    for lo, hi, vlo, vhi in zip(grid, grid[1:], vals, vals[1:]):
        if vlo > 0 >= vhi:
            return find_root(f, Bracket(float(lo), float(hi)), tol=1e-10 * ref)
    raise ConvergenceError(f"no sign change of the mode-{k} eigenvalue on [0.01, 100] x {ref:.6g}")
