"""Numerical kernels: gamma function, quadrature, root finding, ODE
integration and the tridiagonal eigenvalue solver.

The heavy lifting of quadrature, root bracketing and time stepping is done by
scipy; this module fixes the calling conventions (truncation rules, error
classes, event handling) that the rest of the package relies on.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, linalg, optimize

from .errors import BracketError, ConvergenceError, DomainError, PreconditionError, StiffnessError

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_series(x: float) -> float:
    # x is the shifted argument (z - 1), z >= 1
    acc = _LANCZOS_COEF[0]
    for k, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + k)
    return acc


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments.

    Relative error below 3e-14 on (0, 50] and below 3e-13 up to the overflow
    point x ~ 171.6 (rounding in the large power grows like x eps); use
    :func:`log_gamma` beyond.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    if x < 1.0:
        # Gamma(x) = Gamma(x + 1) / x keeps the series argument >= 1
        return gamma_fn(x + 1.0) / x
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    # t^(z+1/2) e^(-t) split in halves so the intermediate power stays finite
    half = t ** (0.5 * (z + 0.5)) * math.exp(-0.5 * t)
    return math.sqrt(2.0 * math.pi) * half * half * _lanczos_series(z)


def log_gamma(x: float) -> float:
    """Natural logarithm of gamma_fn(x) for x > 0, without overflow."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    if x < 1.0:
        return log_gamma(x + 1.0) - math.log(x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(_lanczos_series(z))


# ---------------------------------------------------------------------------
# quadrature


def cosh_power_half_width(p: float, lam: float, tol: float) -> float:
    """Truncation half-width for integrands dominated by cosh(lam s)^(-4/(p-2))."""
    return (p - 2.0) / (4.0 * lam) * math.log(1.0 / tol) + 10.0


def gaussian_half_width(sigma: float, tol: float) -> float:
    """Truncation half-width for integrands dominated by exp(-s^2 / sigma^2)."""
    return math.sqrt(math.log(1.0 / tol)) * sigma + 10.0


def _quad(f, lo, hi, tol, limit):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info = integrate.quad(f, lo, hi, epsabs=tol, epsrel=tol, limit=limit, full_output=1)[:3]
    return value, err


def integrate_line(
    f: Callable[[float], float],
    tol: float = 1e-12,
    half_width: float | None = None,
    center: float = 0.0,
    pieces: int = 8,
    limit: int = 200,
) -> float:
    """Integrate ``f`` over the real line.

    With ``half_width`` given, the domain is truncated to
    ``[center - half_width, center + half_width]`` and split into ``pieces``
    panels integrated adaptively; otherwise scipy's infinite-range transform
    is used. Raises ConvergenceError when the error estimate exceeds
    ``max(tol, tol * |I|)`` by more than a factor 10.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    if half_width is None:
        value, err = _quad(f, -np.inf, np.inf, tol, limit)
    else:
        edges = np.linspace(center - half_width, center + half_width, pieces + 1)
        value = 0.0
        err = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            v, e = _quad(f, lo, hi, tol / pieces, limit)
            value += v
            err += e
    if not math.isfinite(value) or err > 10.0 * max(tol, tol * abs(value)):
        raise ConvergenceError(
            f"quadrature error estimate {err:.3g} exceeds tolerance {tol:.3g}", best_estimate=value
        )
    return value


def integrate_half_line(
    f: Callable[[float], float],
    tol: float = 1e-12,
    upper: float | None = None,
    pieces: int = 8,
    limit: int = 200,
) -> float:
    """Integrate ``f`` over ``[0, upper]`` (``[0, inf)`` when upper is None)."""
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    if upper is None:
        value, err = _quad(f, 0.0, np.inf, tol, limit)
    else:
        edges = np.linspace(0.0, upper, pieces + 1)
        value = 0.0
        err = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            v, e = _quad(f, lo, hi, tol / pieces, limit)
            value += v
            err += e
    if not math.isfinite(value) or err > 10.0 * max(tol, tol * abs(value)):
        raise ConvergenceError(
            f"quadrature error estimate {err:.3g} exceeds tolerance {tol:.3g}", best_estimate=value
        )
    return value


# ---------------------------------------------------------------------------
# roots


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise PreconditionError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")


def find_root(f: Callable[[float], float], bracket: Bracket, tol: float = 1e-12) -> float:
    """Root of ``f`` inside ``bracket`` by Brent's method."""
    flo, fhi = f(bracket.lo), f(bracket.hi)
    if flo == 0.0:
        return bracket.lo
    if fhi == 0.0:
        return bracket.hi
    if flo * fhi > 0:
        raise BracketError(f"no sign change on [{bracket.lo}, {bracket.hi}]: f = {flo:.3g}, {fhi:.3g}")
    return optimize.brentq(f, bracket.lo, bracket.hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)


# ---------------------------------------------------------------------------
# initial value problems


@dataclass
class Trajectory:
    """Output of :func:`integrate_ivp`.

    ``event`` names the terminal event that stopped the integration, or is
    None when the end of ``s_range`` was reached.
    """

    t: np.ndarray
    y: np.ndarray
    event: str | None
    sol: Callable[[float], np.ndarray] | None = field(default=None, repr=False)

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    @property
    def y_end(self) -> np.ndarray:
        return self.y[:, -1]


def sign_change_event(component: int, direction: float = 0.0, name: str | None = None):
    """Terminal event on a sign change of ``y[component]``."""

    def event(t, y):
        return y[component]

    event.terminal = True
    event.direction = direction
    event.__name__ = name or f"sign_change_{component}"
    return event


def blow_up_event(bound: float, components: Sequence[int] = (0,), name: str = "blow_up"):
    """Terminal event when the max-norm of the selected components reaches ``bound``."""
    idx = list(components)

    def event(t, y):
        return bound - np.max(np.abs(y[idx]))

    event.terminal = True
    event.direction = -1.0
    event.__name__ = name
    return event


def integrate_ivp(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0: Sequence[float],
    s_range: tuple[float, float],
    tol: float = 1e-10,
    events: Sequence[Callable] = (),
    atol: float | None = None,
    dense: bool = False,
    max_step: float = np.inf,
) -> Trajectory:
    """Adaptive explicit Runge-Kutta (DOP853) integration with terminal events.

    Raises StiffnessError (carrying the partial trajectory) when the solver
    reports step-size failure.
    """
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    res = integrate.solve_ivp(
        rhs,
        s_range,
        np.asarray(y0, dtype=float),
        method="DOP853",
        rtol=tol,
        atol=tol * 1e-2 if atol is None else atol,
        events=list(events) or None,
        dense_output=dense,
        max_step=max_step,
    )
    if res.status == -1:
        partial = Trajectory(res.t, res.y, None, res.sol)
        raise StiffnessError(f"integration failed at t={res.t[-1]:.6g}: {res.message}", best_estimate=partial)
    event = None
    if res.status == 1:
        for ev, times in zip(events, res.t_events):
            if len(times):
                event = ev.__name__
                break
    return Trajectory(res.t, res.y, event, res.sol)


def step_until(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0: Sequence[float],
    s_range: tuple[float, float],
    stop: Callable[[float, np.ndarray], bool],
    tol: float = 1e-10,
    atol: float | None = None,
) -> tuple[float, np.ndarray, bool]:
    """Step DOP853 until ``stop(t, y)`` is true after an accepted step.

    Returns ``(t, y, stopped)``; ``stopped`` is False when the end of
    ``s_range`` was reached first.
    """
    solver = integrate.DOP853(rhs, s_range[0], np.asarray(y0, dtype=float), s_range[1],
                              rtol=tol, atol=tol * 1e-2 if atol is None else atol)
    while solver.status == "running":
        msg = solver.step()
        if solver.status == "failed":
            raise StiffnessError(f"integration failed at t={solver.t:.6g}: {msg}",
                                 best_estimate=(solver.t, solver.y))
        if stop(solver.t, solver.y):
            return solver.t, solver.y, True
    return solver.t, solver.y, False


# ---------------------------------------------------------------------------
# eigenvalues


@dataclass(frozen=True)
class GridOperator:
    """Finite-difference discretization of -d^2/ds^2 + V(s) on [-L, L].

    Nodes are ``s_i = -L + i h``, ``h = 2L/(N-1)``, with homogeneous
    Dirichlet data imposed just outside the grid.
    """

    half_width: float
    n: int
    diagonal: np.ndarray
    off_diagonal: float

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    @classmethod
    def from_potential(cls, potential: Callable[[np.ndarray], np.ndarray], half_width: float, n: int) -> "GridOperator":
        if half_width <= 0:
            raise PreconditionError("half_width must be positive")
        if n < 3:
            raise PreconditionError("need at least 3 grid points")
        s = np.linspace(-half_width, half_width, n)
        h = 2.0 * half_width / (n - 1)
        diag = np.asarray(potential(s), dtype=float) + 2.0 / h**2
        return cls(half_width, n, diag, -1.0 / h**2)

    def shifted(self, c: float) -> "GridOperator":
        return GridOperator(self.half_width, self.n, self.diagonal + c, self.off_diagonal)

    def apply(self, u: np.ndarray) -> np.ndarray:
        out = self.diagonal * u
        out[1:] += self.off_diagonal * u[:-1]
        out[:-1] += self.off_diagonal * u[1:]
        return out


def lowest_eigenvalue(op: GridOperator, count: int = 1) -> np.ndarray:
    """The ``count`` smallest eigenvalues of ``op``, ascending.

    Uses LAPACK's Sturm-sequence bisection (``stebz``). The discretization
    error of each eigenvalue is O(h^2); see :func:`richardson_eigenvalues`.
    """
    if count < 1:
        raise PreconditionError("count must be >= 1")
    count = min(count, op.n)
    off = np.full(op.n - 1, op.off_diagonal)
    return linalg.eigh_tridiagonal(
        op.diagonal, off, eigvals_only=True, select="i", select_range=(0, count - 1), lapack_driver="stebz"
    )


def richardson_eigenvalues(
    potential: Callable[[np.ndarray], np.ndarray], half_width: float, n: int, count: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """One Richardson step on grids with N and 2N points.

    Returns ``(values, error)`` where ``error`` is |extrapolated - fine|, a
    practical bound for the h^2 discretization error of the fine grid.
    """
    coarse = lowest_eigenvalue(GridOperator.from_potential(potential, half_width, n), count)
    fine = lowest_eigenvalue(GridOperator.from_potential(potential, half_width, 2 * n - 1), count)
    # h halves exactly when N -> 2N - 1
    extrap = (4.0 * fine - coarse) / 3.0
    return extrap, np.abs(extrap - fine)
