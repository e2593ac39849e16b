"""Gagliardo-Nirenberg ground states by shooting.

The radial Euler-Lagrange equation

    u'' + (d - 1)/r u' + a u^(p-1) - b u = 0,   u(0) = alpha, u'(0) = 0

is integrated together with the three running integrals
||grad u||^2, ||u||_2^2 and ||u||_p^p (sphere factor included), and alpha
is bisected between undershoot (u' turns positive with u > 0) and overshoot
(u crosses zero).

Norm identities used as residual checks (Nehari and Pohozaev combined):

    ||grad u||^2 = a vartheta ||u||_p^p,   b ||u||^2 = a (1 - vartheta) ||u||_p^p.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import constants
from .errors import ConvergenceError, DomainError
from .numerics import blow_up_event, integrate_ivp, sign_change_event, step_until

LOG_PI = math.log(math.pi)
R0 = 1e-4
NOISE_WIDTH = 1e-9
# bracket width below which k-section rounds switch to the fine tolerance
COARSE_WIDTH = 1e-5


class Outcome(str, enum.Enum):
    GROUND_STATE = "ground_state"
    CROSSED_ZERO = "crossed_zero"
    UNDERSHOOT = "undershoot"
    BLEW_UP = "blew_up"


@dataclass(frozen=True)
class ShootingConfig:
    d: int
    p: float
    coef_a: float = 1.0
    coef_b: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        if not 2.0 < self.p < constants.two_star(self.d):
            raise DomainError(f"p must lie in (2, 2*), got {self.p}")
        if self.coef_a <= 0 or self.coef_b <= 0:
            raise DomainError(f"coefficients must be positive, got a={self.coef_a}, b={self.coef_b}")
        if self.alpha <= 0:
            raise DomainError(f"shooting height must be positive, got {self.alpha}")


@dataclass
class ShootingSolution:
    config: ShootingConfig
    classification: Outcome
    r: np.ndarray
    u: np.ndarray
    norm_2_sq: float
    norm_p_p: float
    grad_norm_sq: float
    r_end: float
    residuals: dict = field(default_factory=dict)

    @property
    def alpha(self) -> float:
        return self.config.alpha

    def profile(self, r):
        """Linear interpolation of the sampled profile (zero beyond r_end)."""
        return np.interp(r, self.r, self.u, right=0.0)


def near_two_normalization(d: int, p: float) -> tuple[float, float]:
    """a = 2/(p-2), b = 2/(p-2) - (d/2)(2 + log pi); b > 0 only near p = 2."""
    a = 2.0 / (p - 2.0)
    return a, a - 0.5 * d * (2.0 + LOG_PI)


def near_two_normalization_admissible(d: int, p: float) -> bool:
    return p < 2.0 + 4.0 / (d * (2.0 + LOG_PI))


def _rhs(d, p, a, b, sphere):
    def rhs(r, y):
        u, du = y[0], y[1]
        up = abs(u) ** (p - 2.0) * u
        w = sphere * r ** (d - 1)
        return [du, -(d - 1) / r * du - a * up + b * u, w * du * du, w * u * u, w * abs(u) * abs(up)]

    return rhs


def shoot(config: ShootingConfig, tol: float = 1e-12, r_max: float | None = None,
          dense: bool = False) -> ShootingSolution:
    """Integrate from r = 0 and classify the trajectory.

    The regular singular point is crossed with the series
    u = alpha + (b alpha - a alpha^(p-1)) r^2 / (2d) on [0, 1e-4].
    """
    d, p, a, b, alpha = config.d, config.p, config.coef_a, config.coef_b, config.alpha
    sphere = constants.sphere_measure(d)
    c = b * alpha - a * alpha ** (p - 1.0)
    r0 = R0 / math.sqrt(max(a * alpha ** (p - 2.0), b, 1.0))
    vol = sphere * r0**d / d
    y0 = [
        alpha + c * r0**2 / (2 * d),
        c * r0 / d,
        sphere * (c / d) ** 2 * r0 ** (d + 2) / (d + 2),
        alpha**2 * vol,
        alpha**p * vol,
    ]
    if c >= 0:
        # at or below the constant solution (b/a)^(1/(p-2)): u never decreases
        return ShootingSolution(config, Outcome.UNDERSHOOT, np.array([0.0]), np.array([alpha]),
                                math.inf, math.inf, 0.0, 0.0)
    if r_max is None:
        r_max = _default_r_max(d, p, b)
    events = [
        sign_change_event(0, direction=-1.0, name=Outcome.CROSSED_ZERO.value),
        sign_change_event(1, direction=1.0, name=Outcome.UNDERSHOOT.value),
        blow_up_event(1e3 * alpha, (0,), name=Outcome.BLEW_UP.value),
    ]
    traj = integrate_ivp(_rhs(d, p, a, b, sphere), y0, (r0, r_max), tol=tol, atol=1e-300,
                         events=events, dense=dense)
    outcome = Outcome(traj.event) if traj.event else Outcome.GROUND_STATE
    y = traj.y_end
    r = np.concatenate([[0.0], traj.t])
    u = np.concatenate([[alpha], traj.y[0]])
    return ShootingSolution(config, outcome, r, u, float(y[3]), float(y[4]), float(y[2]), traj.t_end)


def _overshoots(sol: ShootingSolution) -> bool:
    return sol.classification in (Outcome.CROSSED_ZERO, Outcome.BLEW_UP)


def _default_r_max(d, p, b):
    return 60.0 / math.sqrt(b) + 40.0 * math.sqrt(d / ((p - 2.0) * b)) + 50.0


def classify_heights(d: int, p: float, coef_a: float, coef_b: float, alphas, tol: float = 1e-12) -> np.ndarray:
    """Overshoot flags for many shooting heights, integrated as one stacked system.

    Trajectories leave the system as soon as they are classified (u < 0:
    overshoot, u' > 0: undershoot). Unresolved trajectories at r_max count
    as undershoots.
    """
    a, b = coef_a, coef_b
    alphas = np.asarray(alphas, dtype=float)
    flags = np.zeros(len(alphas), dtype=bool)
    c = b * alphas - a * alphas ** (p - 1.0)
    active = np.flatnonzero(c < 0)
    if not len(active):
        return flags
    r0 = R0 / math.sqrt(max(a * float(alphas[active].max()) ** (p - 2.0), b, 1.0))
    y = np.concatenate([alphas[active] + c[active] * r0**2 / (2 * d), c[active] * r0 / d])
    r, r_max = r0, _default_r_max(d, p, b)

    while len(active):
        n = len(active)

        def rhs(t, z, n=n):
            u, du = z[:n], z[n:]
            return np.concatenate([du, -(d - 1) / t * du - a * np.abs(u) ** (p - 2.0) * u + b * u])

        def stop(t, z, n=n):
            return bool(np.any(z[:n] < 0) or np.any(z[n:] > 0))

        r, y, stopped = step_until(rhs, y, (r, r_max), stop, tol=tol, atol=1e-300)
        if not stopped:
            break
        u, du = y[:n], y[n:]
        over = u < 0
        done = over | (du > 0)
        flags[active[over]] = True
        keep = ~done
        active = active[keep]
        y = np.concatenate([u[keep], du[keep]])
    return flags


def _single_transition(flags) -> int:
    """Index of the first overshoot; raises unless flags are F..F T..T."""
    flags = list(map(bool, flags))
    transitions = sum(1 for x, y in zip(flags, flags[1:]) if x != y)
    if transitions != 1 or flags[0] or not flags[-1]:
        raise ConvergenceError(f"shooting classification is not a single transition: {flags}")
    return flags.index(True)


def scan_dichotomy(d: int, p: float, coef_a: float, coef_b: float, points: int = 20,
                   lo: float = 1e-6, hi: float = 1e6, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Classify a log-spaced scan of shooting heights (True = overshoot)."""
    alphas = np.geomspace(lo, hi, points)
    return alphas, classify_heights(d, p, coef_a, coef_b, alphas, tol=tol)


def ground_state(d: int, p: float, coef_a: float = 1.0, coef_b: float = 1.0, tol: float = 1e-12,
                 rel_width: float = 1e-13, sections: int = 16,
                 coarse_tol: float = 1e-9) -> ShootingSolution:
    """The positive decaying radial solution, by k-section on u(0).

    A 20-point log scan over [1e-6, 1e6] must show a single
    undershoot/overshoot transition; the bracket around it is then refined
    with ``sections`` heights per round until its relative width is below
    ``rel_width``.
    """
    ShootingConfig(d, p, coef_a, coef_b)
    alphas, flags = scan_dichotomy(d, p, coef_a, coef_b)
    k = _single_transition(flags)
    lo, hi = float(alphas[k - 1]), float(alphas[k])
    for _ in range(60):
        if hi - lo <= rel_width * lo:
            break
        if hi / lo > 4.0:
            grid = np.geomspace(lo, hi, sections + 2)
        else:
            grid = np.linspace(lo, hi, sections + 2)
        grid[0], grid[-1] = lo, hi
        inner = grid[1:-1]
        round_tol = max(tol, coarse_tol) if hi - lo > COARSE_WIDTH * lo else tol
        inner_flags = classify_heights(d, p, coef_a, coef_b, inner, tol=round_tol)
        try:
            j = _single_transition([False, *inner_flags, True])
        except ConvergenceError:
            if hi - lo <= NOISE_WIDTH * lo:
                # integration noise floor: the bracket is already as sharp as it gets
                break
            raise
        lo, hi = float(grid[j - 1]), float(grid[j])
    else:
        raise ConvergenceError("k-section did not converge", best_estimate=lo)
    # the stacked and single integrations may disagree within ~1e-13 of the
    # transition; step down until the event-driven shot undershoots too
    for back in (0.0, 1e-13, 1e-12, 1e-11, 1e-10, 1e-9):
        final = shoot(ShootingConfig(d, p, coef_a, coef_b, lo * (1.0 - back)), tol=tol)
        if final.classification == Outcome.UNDERSHOOT:
            break
    else:
        raise ConvergenceError("bracket endpoint is not an undershoot", best_estimate=lo)
    th = constants.vartheta(p, d)
    final.classification = Outcome.GROUND_STATE
    final.residuals = {
        "R1": (final.grad_norm_sq - coef_a * th * final.norm_p_p) / final.grad_norm_sq,
        "R2": (coef_b * final.norm_2_sq - coef_a * (1.0 - th) * final.norm_p_p) / (coef_b * final.norm_2_sq),
        "alpha_bracket": (lo, hi),
        "u_end": float(final.u[-1]),
    }
    return final


def gn_quotient(sol: ShootingSolution) -> float:
    """||u||_p^2 / (||grad u||^(2 vartheta) ||u||_2^(2(1 - vartheta)))."""
    th = constants.vartheta(sol.config.p, sol.config.d)
    return sol.norm_p_p ** (2.0 / sol.config.p) / (sol.grad_norm_sq**th * sol.norm_2_sq ** (1.0 - th))


def g_factor(d: int, p: float) -> float:
    """g(p) with C_GN(p) = g(p) ||u_p||_p^(2-p) in the near-two normalization."""
    th = constants.vartheta(p, d)
    inner = p * (4.0 - d * (p - 2.0) * (2.0 + LOG_PI)) / (2.0 * p - d * (p - 2.0))
    return 0.5 * (2.0 * p / d) ** th * inner ** (1.0 - th)


@dataclass
class GNResult:
    d: int
    p: float
    cgn: float
    q: float
    residuals: dict
    cross_check: float | None = None
    cross_check_rel: float | None = None


def cgn_details(d: int, p: float, tol: float = 1e-12, coef_a: float = 1.0, coef_b: float = 1.0,
                cross_check: bool = True) -> GNResult:
    """C_GN(p) with residuals, Q(p) and the g(p) cross-check when admissible."""
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    sol = ground_state(d, p, coef_a, coef_b, tol=tol)
    value = gn_quotient(sol)
    res = GNResult(d, p, value, gaussian_q(d, p), {k: sol.residuals[k] for k in ("R1", "R2")})
    if cross_check and near_two_normalization_admissible(d, p):
        a, b = near_two_normalization(d, p)
        up = ground_state(d, p, a, b, tol=tol)
        other = g_factor(d, p) * up.norm_p_p ** ((2.0 - p) / p)
        res.cross_check = other
        res.cross_check_rel = abs(other - value) / value
    return res


def cgn(d: int, p: float, tol: float = 1e-12) -> float:
    """Optimal Gagliardo-Nirenberg constant C_GN(p) from the a = b = 1 ground state."""
    if d < 2:
        raise DomainError(f"needs d >= 2, got {d}")
    return gn_quotient(ground_state(d, p, tol=tol))


def gaussian_q(d: int, p: float) -> float:
    """GN quotient of u_2 = pi^(-d/4) exp(-|x|^2/2), a lower bound for C_GN(p)."""
    if p < 2:
        raise DomainError(f"needs p >= 2, got {p}")
    th = constants.vartheta(p, d)
    return math.pi ** (-d / 2.0) * (2.0 * math.pi / p) ** (d / p) * (d / 2.0) ** (-th)
