import math

import numpy as np
import pytest
from scipy import integrate

from ckn_atlas import constants as C
from ckn_atlas import gn
from ckn_atlas.errors import ConvergenceError, DomainError


@pytest.fixture(scope="module")
def gs_3_25():
    return gn.ground_state(3, 2.5)


# shooting --------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(DomainError):
        gn.ShootingConfig(3, 2.5, coef_a=-1.0)
    with pytest.raises(DomainError):
        gn.ShootingConfig(3, 2.5, coef_b=0.0)
    with pytest.raises(DomainError):
        gn.ShootingConfig(3, 6.5)


def test_large_height_overshoots():
    sol = gn.shoot(gn.ShootingConfig(3, 2.5, alpha=1e3))
    assert sol.classification in (gn.Outcome.CROSSED_ZERO, gn.Outcome.BLEW_UP)


def test_small_height_undershoots():
    sol = gn.shoot(gn.ShootingConfig(3, 2.5, alpha=1e-3))
    assert sol.classification == gn.Outcome.UNDERSHOOT
    assert np.all(sol.u > 0)


def test_scan_has_single_transition():
    alphas, flags = gn.scan_dichotomy(3, 2.5, 1.0, 1.0)
    assert len(alphas) == 20
    k = gn._single_transition(flags)
    assert not flags[:k].any() and flags[k:].all()


def test_single_transition_rejects_noise():
    with pytest.raises(ConvergenceError):
        gn._single_transition([False, True, False, True])


def test_ground_state_d3_p21():
    sol = gn.ground_state(3, 2.1)
    assert sol.classification == gn.Outcome.GROUND_STATE
    assert np.all(sol.u > 0)
    tail = sol.u[sol.r > 0.5 * sol.r_end]
    assert np.all(np.diff(tail) < 0)


def test_ground_state_residuals(gs_3_25):
    assert abs(gs_3_25.residuals["R1"]) <= 1e-6
    assert abs(gs_3_25.residuals["R2"]) <= 1e-6


def test_tail_decay_rate(gs_3_25):
    # u ~ r^(-(d-1)/2) exp(-sqrt(b) r)
    r, u = gs_3_25.r, gs_3_25.u
    m = (r > 10) & (r < 15)
    slope = np.gradient(np.log(u), r)[m] + (3 - 1) / (2 * r[m])
    assert np.all(np.abs(slope + 1.0) < 0.03)


def test_amplitude_scaling_covariance(gs_3_25):
    c = 2.0
    sol = gn.ground_state(3, 2.5, coef_a=c)
    assert sol.alpha / gs_3_25.alpha == pytest.approx(c ** (-1 / (2.5 - 2)), rel=1e-9)


def test_residuals_shrink_with_tolerance():
    res = []
    for tol in (1e-8, 1e-9, 1e-10):
        sol = gn.ground_state(3, 2.5, tol=tol, coarse_tol=max(tol, 1e-9))
        res.append(max(abs(sol.residuals["R1"]), abs(sol.residuals["R2"])))
    assert res[1] * 5 <= res[0] and res[2] * 5 <= res[1]


@pytest.mark.parametrize("d", [2, 3])
def test_near_two_limit_is_unit_gaussian(d):
    r = np.array([0.0, 0.5, 1.0, 2.0, 3.0])
    errs = []
    for p in (2.01, 2.002):
        a, b = gn.near_two_normalization(d, p)
        sol = gn.ground_state(d, p, a, b)
        errs.append(np.max(np.abs(sol.profile(r) - math.pi ** (-d / 4) * np.exp(-r * r / 2))))
    assert errs[1] < errs[0] / 3
    assert errs[1] < 5e-3


def test_near_two_normalization_window():
    d = 3
    edge = 2 + 4 / (d * (2 + math.log(math.pi)))
    assert gn.near_two_normalization_admissible(d, edge - 1e-6)
    assert not gn.near_two_normalization_admissible(d, edge + 1e-6)
    assert gn.near_two_normalization(d, edge)[1] == pytest.approx(0.0, abs=1e-9)


# C_GN ------------------------------------------------------------------------

def test_cgn_close_to_one_near_two():
    assert abs(gn.cgn(2, 2.01) - 1) <= 0.02


@pytest.mark.parametrize("d", [2, 3, 5])
@pytest.mark.parametrize("p", [2.05, 2.2, 2.5])
def test_cgn_above_gaussian_quotient(d, p):
    assert gn.cgn(d, p) >= gn.gaussian_q(d, p)


def test_cgn_normalization_invariant():
    base = gn.cgn_details(3, 2.5).cgn
    other = gn.cgn_details(3, 2.5, coef_a=2.3, coef_b=0.7).cgn
    assert other == pytest.approx(base, rel=1e-8)


@pytest.mark.parametrize("d,p", [(2, 2.05), (3, 2.05), (5, 2.02)])
def test_cgn_cross_check(d, p):
    res = gn.cgn_details(d, p)
    assert res.cross_check is not None
    assert res.cross_check_rel <= 1e-5


def test_cross_check_skipped_outside_window():
    assert gn.cgn_details(5, 3.0).cross_check is None


@pytest.mark.parametrize("d", [3, 5])
def test_cgn_slope_at_two(d):
    s = {p: (gn.cgn(d, p) - 1) / (p - 2) for p in (2.02, 2.01)}
    slope = 2 * s[2.01] - s[2.02]
    target = d / 4 * math.log(2 / (math.pi * d * math.e))
    assert abs(slope - target) <= 0.05 * abs(target)


def test_cgn_domain():
    with pytest.raises(DomainError):
        gn.cgn(1, 3.0)


# Gaussian quotient and g(p) ---------------------------------------------------

def test_q_at_two():
    for d in (1, 2, 5):
        assert gn.gaussian_q(d, 2.0) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("d,p", [(2, 2.5), (3, 3.0), (5, 2.2)])
def test_q_against_quadrature(d, p):
    S = C.sphere_measure(d)
    u = lambda r: math.pi ** (-d / 4) * math.exp(-r * r / 2)
    rad = lambda f: S * integrate.quad(lambda r: f(r) * r ** (d - 1), 0, 40, epsabs=0, epsrel=1e-13, limit=200)[0]
    lp = rad(lambda r: u(r) ** p)
    l2 = rad(lambda r: u(r) ** 2)
    grad = rad(lambda r: (r * u(r)) ** 2)
    assert l2 == pytest.approx(1.0, rel=1e-12)
    assert grad == pytest.approx(d / 2, rel=1e-12)
    th = C.vartheta(p, d)
    q = lp ** (2 / p) / (grad**th * l2 ** (1 - th))
    assert gn.gaussian_q(d, p) == pytest.approx(q, rel=1e-10)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_q_slope_at_two(d):
    target = d / 4 * math.log(C.c_ls(d))
    slopes = [(gn.gaussian_q(d, p) - 1) / (p - 2) for p in (2.01, 2.001)]
    assert abs(slopes[1] - target) < abs(slopes[0] - target)
    assert slopes[1] == pytest.approx(target, rel=1e-2)


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_g_factor_at_two(d):
    assert gn.g_factor(d, 2.0) == pytest.approx(1.0, abs=1e-15)
    h = 1e-5
    slope = (gn.g_factor(d, 2 + h) - gn.g_factor(d, 2 - h)) / (2 * h)
    assert slope == pytest.approx(d / 4 * math.log(C.c_ls(d)), abs=1e-6)
