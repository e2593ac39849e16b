import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import integrate

from ckn_atlas import constants as C
from ckn_atlas.errors import DomainError

dims = st.integers(min_value=2, max_value=10)


def admissible_p(d, u):
    """Map u in (0, 1) to p in (2, min(2*, 8))."""
    return 2.0 + u * (min(C.two_star(d), 8.0) - 2.0)


# exponents -----------------------------------------------------------------

def test_exponents_d5_p3():
    ex = C.exponents(5, 3.0)
    assert ex.vartheta == pytest.approx(5 / 6)
    assert ex.a_c == pytest.approx(1.5)
    assert ex.two_star == pytest.approx(10 / 3)


def test_vartheta_endpoints():
    assert C.vartheta(2.0, 7) == 0.0
    assert C.vartheta(6.0, 3) == pytest.approx(1.0)


def test_two_star_low_dimensions():
    assert math.isinf(C.two_star(1)) and math.isinf(C.two_star(2))


def test_exponents_reject_small_p():
    with pytest.raises(DomainError):
        C.exponents(3, 1.5)


def test_p_of():
    assert C.p_of(0.3, 0.3, 5) == pytest.approx(C.two_star(5))
    assert C.p_of(0.3, 1.3, 5) == pytest.approx(2.0)
    assert C.p_of(0.0, 0.5, 4) == pytest.approx(8 / 3)


@pytest.mark.parametrize("d,value", [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi), (5, 8 / 3 * math.pi**2)])
def test_sphere_measure(d, value):
    assert C.sphere_measure(d) == pytest.approx(value, rel=1e-14)


def test_lambda_a_roundtrip():
    for d in (2, 3, 5):
        for a in (-3.0, -0.5, 0.0, C.critical_a(d) - 1e-3):
            assert C.a_of_lambda(C.lambda_of(a, d), d) == pytest.approx(a, abs=1e-14)


# Sobolev -------------------------------------------------------------------

def sobolev_quotient(d):
    # independent oracle: ||u||_{2*}^2 / ||grad u||^2 on u = (1 + r^2)^(-(d-2)/2)
    q = 2 * d / (d - 2)
    u = lambda r: (1 + r * r) ** (-(d - 2) / 2)
    du = lambda r: -(d - 2) * r * (1 + r * r) ** (-d / 2)
    meas = C.sphere_measure(d)
    lp = integrate.quad(lambda r: u(r) ** q * r ** (d - 1), 0, math.inf, epsabs=0, epsrel=1e-13)[0] * meas
    grad = integrate.quad(lambda r: du(r) ** 2 * r ** (d - 1), 0, math.inf, epsabs=0, epsrel=1e-13)[0] * meas
    return lp ** (2 / q) / grad


def test_sobolev_closed_forms():
    assert C.sobolev_constant(3) == pytest.approx((4 / math.sqrt(math.pi)) ** (2 / 3) / (3 * math.pi), rel=1e-14)
    assert C.sobolev_constant(4) == pytest.approx(math.sqrt(6) / (8 * math.pi), rel=1e-14)


@pytest.mark.parametrize("d", [3, 4, 5, 7, 10])
def test_sobolev_against_extremal_quadrature(d):
    assert C.sobolev_constant(d) == pytest.approx(sobolev_quotient(d), rel=1e-10)


def test_sobolev_decreases_to_zero():
    vals = [C.sobolev_constant(d) for d in range(3, 31)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.01


def test_sobolev_needs_d3():
    with pytest.raises(DomainError):
        C.sobolev_constant(2)


# radial constants ------------------------------------------------------------

def test_ckn_star_value():
    assert C.ckn_star(3, 4.0, 1.0, C.critical_a(3) - 1) == pytest.approx(math.sqrt(3) / (8 * math.sqrt(math.pi)), rel=1e-14)


@given(dims, st.floats(0.02, 0.98), st.floats(0.0, 1.0), st.floats(0.01, 6.0))
def test_ckn_scaling_law(d, u, t, depth):
    p = admissible_p(d, u)
    theta = C.vartheta(p, d) + t * (1 - C.vartheta(p, d))
    assume(theta > 0.0)
    a = C.critical_a(d) - depth
    lam = C.lambda_of(a, d)
    ref = C.ckn_star(d, p, theta, C.critical_a(d) - 1) * lam ** ((p - 2) / (2 * p) - theta)
    assert C.ckn_star(d, p, theta, a) == pytest.approx(ref, rel=1e-12)


@given(st.integers(1, 10), st.floats(0.0, 5.0), st.floats(0.01, 6.0))
def test_wlh_scaling_law(d, extra, depth):
    gamma = max(d / 4, 0.25) + extra + (1e-3 if d == 2 else 0.0)
    a = C.critical_a(d) - depth
    lam = C.lambda_of(a, d)
    ref = C.wlh_star(d, gamma, C.critical_a(d) - 1) * lam ** (-1 + 1 / (4 * gamma))
    assert C.wlh_star(d, gamma, a) == pytest.approx(ref, rel=1e-12)


def test_ckn_star_blows_up_at_a_c():
    d, p, theta = 5, 3.0, 0.9
    vals = [C.ckn_star(d, p, theta, C.critical_a(d) - eps) for eps in (1e-1, 1e-3, 1e-6)]
    assert vals[0] < vals[1] < vals[2]
    assert vals[2] > 10 * vals[0]


def test_wlh_star_blows_up_at_a_c():
    vals = [C.wlh_star(3, 1.0, C.critical_a(3) - eps) for eps in (1e-1, 1e-3, 1e-6)]
    assert vals[0] < vals[1] < vals[2]


@given(dims, st.floats(0.02, 0.98), st.floats(0.05, 5.0), st.floats(0.01, 2.0))
def test_ckn_star_increasing_in_a(d, u, depth, step):
    p = admissible_p(d, u)
    theta = 1.0
    a_c = C.critical_a(d)
    assert C.ckn_star(d, p, theta, a_c - depth - step) < C.ckn_star(d, p, theta, a_c - depth)


@given(st.integers(3, 10), st.floats(0.01, 4.0), st.floats(0.05, 5.0), st.floats(0.01, 2.0))
def test_wlh_star_increasing_in_a(d, extra, depth, step):
    gamma = d / 4 + extra
    a_c = C.critical_a(d)
    assert C.wlh_star(d, gamma, a_c - depth - step) < C.wlh_star(d, gamma, a_c - depth)


def test_ckn_star_limit_d5():
    ref = 4 ** 0.8 * math.gamma(2.5) ** 0.4 / (5 * (2 * math.e) ** 0.2 * math.pi**1.2)
    assert C.ckn_star_limit(5) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_ckn_star_limit_is_p_to_2_limit(d):
    lim = C.ckn_star_limit(d)
    gaps = []
    for k in range(2, 6):
        p = 2 + 10.0**-k
        th = C.vartheta(p, d)
        gaps.append(abs(C.ckn_star(d, p, th, C.critical_a(d) - 1) ** (1 / th) - lim) / lim)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3


def test_wlh_star_quarter_branch():
    assert C.wlh_star(1, 0.25, -2.0) == pytest.approx(1 / (2 * math.pi * math.e), rel=1e-14)


def test_c_ls():
    assert C.c_ls(1) == pytest.approx(2 / (math.pi * math.e), rel=1e-15)
    assert C.c_ls(1) == pytest.approx(0.23420, abs=1e-5)
    assert C.c_ls(2) == pytest.approx(1 / (math.pi * math.e), rel=1e-15)


def test_domain_guards():
    with pytest.raises(DomainError):
        C.check_ckn(5, 3.5, 1.0)
    with pytest.raises(DomainError):
        C.check_ckn(5, 3.0, 0.5)
    with pytest.raises(DomainError):
        C.check_ckn(1, 3.0, 0.5)
    with pytest.raises(DomainError):
        C.check_wlh(2, 0.5)
    with pytest.raises(DomainError):
        C.check_wlh(5, 1.0)
    with pytest.raises(DomainError):
        C.ckn_star(3, 3.0, 1.0, C.critical_a(3))


# thresholds ----------------------------------------------------------------

def test_a_bar_value():
    assert C.a_bar(5, 3.0, 1.0) == pytest.approx(1.5 - 0.8 * math.sqrt(5), rel=1e-14)


def test_a_tilde_value():
    assert C.a_tilde(5, 5 / 4) == pytest.approx(-0.5, abs=1e-15)


@given(dims, st.floats(0.01, 0.99))
def test_a_bar_at_theta_one(d, u):
    p = 2.0 + u * 6.0
    lam = C.lambda_of(C.a_bar(d, p, 1.0), d)
    assert lam == pytest.approx(4 * (d - 1) / ((p + 2) * (p - 2)), rel=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5, 10])
def test_a_bar_critical_limit(d):
    p = 2 + 1e-7
    assert C.a_bar(d, p, C.vartheta(p, d)) == pytest.approx(-0.5, abs=1e-5)


def test_lambda_ss_wlh_d5():
    assert C.lambda_ss_wlh(5) == pytest.approx(4 * math.e * (9 / 1024) ** 0.25, rel=1e-14)
    assert C.lambda_ss_wlh(5) == pytest.approx(3.329, abs=1e-3)


@pytest.mark.parametrize("d", range(3, 11))
def test_sb_threshold_identity(d):
    lss = C.lambda_ss_wlh(d)
    assert C.lambda_sb(d, d / 4) == pytest.approx(lss, rel=1e-12)
    assert lss < C.lambda_of(C.a_tilde(d, d / 4), d)


@pytest.mark.parametrize("d", range(3, 11))
def test_lambda_1_limit(d):
    g = math.gamma(d / 2) / math.gamma((d - 1) / 2)
    first = 0.25 * ((2 / math.e) * (d - 2) ** d * (d - 1) ** (d - 3) * g**2) ** (1 / (d - 1))
    second = (math.e / 8) * (d - 2) ** d * (d - 1) ** (3 - d) / g**2
    b1, b2 = C.lambda_1_limit_branches(d)
    assert b1 == pytest.approx(first, rel=1e-13)
    assert b2 == pytest.approx(second, rel=1e-13)
    assert b1 <= b2
    assert C.lambda_1_limit(d) == pytest.approx(first, rel=1e-13)
    near = min(C.lambda_1_branches(d, 2.001))
    assert abs(near - first) / first <= 1e-2
    assert C.lambda_1_limit(d) <= C.lambda_ss_wlh(d)


@pytest.mark.parametrize("d", [3, 5, 8])
def test_a_0_tends_to_a_c(d):
    gaps = [C.critical_a(d) - C.existence_thresholds(d, 2 + 10.0**-k).a_0 for k in (1, 2, 3, 4)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert all(g > 0 for g in gaps)
    assert gaps[-1] < 0.05


@given(st.integers(3, 10), st.floats(0.02, 0.98))
def test_existence_thresholds_ordered(d, u):
    p = 2 + u * (C.two_star(d) - 2)
    rec = C.existence_thresholds(d, p)
    assert rec.a_1 <= rec.a_0 < C.critical_a(d)
    assert rec.lambda_1 == pytest.approx(min(C.lambda_1_branches(d, p)))
    assert rec.lambda_1_branch in (0, 1)


def test_existence_thresholds_need_d3():
    with pytest.raises(DomainError):
        C.existence_thresholds(2, 3.0)


def test_symmetry_breaking_record():
    rec = C.symmetry_breaking_thresholds(5, 3.0, 1.0, 2.0)
    assert rec.a_bar == pytest.approx(C.a_bar(5, 3.0, 1.0))
    assert rec.a_sb == pytest.approx(C.a_of_lambda(rec.lambda_sb, 5))
    assert set(C.symmetry_breaking_thresholds(5).as_dict()) == set()


def test_schwarz_h_log_derivative():
    # lam = a (2 a_c - a) = 2 at a = 1, d = 5
    assert C.schwarz_h_log_derivative(10.0, 1.0, 0.5, 1.0, 5) == pytest.approx(3 / 8, rel=1e-14)
    assert C.schwarz_h_log_derivative(10.0, 1.0, 1.0, 1.0, 5) == pytest.approx(-2 / 8, rel=1e-14)
    # cancellation at A/B = lam/(1 - theta)
    assert C.schwarz_h_log_derivative(4.0, 1.0, 0.5, 1.0, 5) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(DomainError):
        C.schwarz_h_log_derivative(1.0, 1.0, 0.5, 1.0, 5)
    with pytest.raises(DomainError):
        C.schwarz_h_log_derivative(10.0, 1.0, 0.5, 1.0, 2)


@given(st.floats(0.1, 50.0), st.floats(0.1, 5.0), st.floats(0.01, 0.99))
def test_schwarz_sign_rule(A, B, theta):
    lam = 2.0
    assume(A - lam * B > 1e-6 and abs(A / B - lam / (1 - theta)) > 1e-6)
    negative = C.schwarz_h_log_derivative(A, B, theta, 1.0, 5) < 0
    assert negative == (A / B < lam / (1 - theta))
