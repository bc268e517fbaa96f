import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from loguncert.constants import (ConstantValue, beckner_bound, derivative_coefficients,
                                 hausdorff_young_constant, hls_constant,
                                 interpolated_constant_bound, log_hls_constant,
                                 log_hls_constant_fd, log_hls_constant_value, log_sobolev_rhs,
                                 optimal_log_sobolev_scale, rubin_beta, theta_exponents)
from loguncert.errors import InconsistentParameters, OutOfRange
from loguncert.functionals import InequalityParams, lp_norm_spectral, riesz_constant, weighted_lp_norm
from loguncert.radial import make_grid, sample

mp.mp.dps = 30


def mp_extremizer_ratio(d, lam):
    """Energy / ||h||_p^2 of h = (1 + r^2)^{-a}, a = (2d - lam)/2, in mpmath.

    Uses the unitary transform of (1 + |x|^2)^{-a},
    2^{1-a} / Gamma(a) |xi|^{a - d/2} K_{a - d/2}(|xi|), and the transform of
    |x|^{-lam}, 2^{d/2 - lam} Gamma((d - lam)/2) / Gamma(lam/2) |xi|^{lam - d}.
    """
    d, lam = mp.mpf(d), mp.mpf(lam)
    a = (2 * d - lam) / 2
    nu = a - d / 2
    area = 2 * mp.pi ** (d / 2) / mp.gamma(d / 2)

    def hat(x):
        return mp.mpf(2) ** (1 - a) / mp.gamma(a) * x ** nu * mp.besselk(nu, x)

    kernel = (2 * mp.pi) ** (d / 2) * mp.mpf(2) ** (d / 2 - lam) * mp.gamma((d - lam) / 2) / mp.gamma(lam / 2)
    energy = kernel * area * mp.quad(lambda x: hat(x) ** 2 * x ** (lam - 1), [0, 1, 10, 60])
    p = 2 * d / (2 * d - lam)
    norm_p = (area * mp.quad(lambda r: r ** (d - 1) * (1 + r * r) ** (-a * p), [0, 1, mp.inf])) ** (1 / p)
    return energy / norm_p ** 2


@pytest.mark.parametrize("d, lam", [(1, 0.3), (1, 0.7), (2, 0.5), (2, 1.5), (3, 1.0), (3, 2.2),
                                    (4, 2.0), (5, 1.0)])
def test_hls_constant_vs_extremizer(d, lam):
    assert hls_constant(d, lam) == pytest.approx(float(mp_extremizer_ratio(d, lam)), rel=1e-10)


@pytest.mark.parametrize("d", range(1, 9))
def test_hls_constant_at_zero(d):
    assert abs(hls_constant(d, 0.0) - 1.0) <= 1e-12


@pytest.mark.parametrize("d", range(1, 9))
def test_log_hls_closed_form_vs_fd(d):
    closed = log_hls_constant_value(d)
    fd = log_hls_constant_fd(d)
    assert closed.provenance == "closed-form" and fd.provenance == "finite-difference"
    assert abs(closed.value - fd.value) <= 1e-8
    assert closed.agrees(fd, tol=1e-8)


@pytest.mark.parametrize("d", range(1, 9))
def test_log_hls_vs_mpmath_derivative(d):
    # oracle: mpmath differentiates the Gamma-function expression of k_lam
    def k(lam):
        return (mp.pi ** (lam / 2) * mp.gamma((d - lam) / 2) / mp.gamma(d - lam / 2)
                * (mp.gamma(mp.mpf(d) / 2) / mp.gamma(d)) ** (-1 + lam / d))
    assert log_hls_constant(d) == pytest.approx(float(mp.diff(k, 0)), rel=1e-13, abs=1e-14)


@pytest.mark.parametrize("lam", [-0.1, 3.0, 3.5])
def test_hls_constant_range(lam):
    with pytest.raises(OutOfRange):
        hls_constant(3, lam)


@pytest.mark.parametrize("d", [0, -1, 2.5])
def test_dimension_checked(d):
    with pytest.raises(OutOfRange):
        hls_constant(d, 0.1)
    with pytest.raises(OutOfRange):
        beckner_bound(d)


@pytest.mark.parametrize("d, lam", [(1, 0.4), (2, 1.0), (3, 1.0), (3, 2.5), (6, 1.0)])
def test_riesz_constant_vs_transform(d, lam):
    want = ((2 * math.pi) ** (d / 2) * 2 ** (d / 2 - lam)
            * math.gamma((d - lam) / 2) / math.gamma(lam / 2))
    assert riesz_constant(d, lam) == pytest.approx(want, rel=1e-13)


def test_constant_value_validation():
    with pytest.raises(ValueError):
        ConstantValue(1.0, "guessed", InequalityParams(d=1))


# ---------------------------------------------------------------------------
# weighted-inequality exponents


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("s1", [0.1, 0.2, 0.3])
def test_derivative_coefficients_rubin_endpoint(d, s1):
    p1 = 2 / (1 - 2 * s1)
    dp, db = derivative_coefficients(d, s1, p1)
    assert 0.5 * dp == pytest.approx(2.0, abs=1e-12)
    assert -db == pytest.approx(d - 1.0, abs=1e-12)
    assert rubin_beta(d, p1, s1) == pytest.approx(s1 * (1 - d), abs=1e-14)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("s1", [0.1, 0.25, 0.4])
def test_derivative_coefficients_sobolev_endpoint(d, s1):
    if s1 >= d / 2:
        pytest.skip("outside the range")
    dp, db = derivative_coefficients(d, s1, 2 * d / (d - 2 * s1))
    assert 0.5 * dp == pytest.approx(2.0 / d, abs=1e-12)
    assert db == pytest.approx(0.0, abs=1e-12)


def test_derivative_coefficients_errors():
    with pytest.raises(InconsistentParameters):
        derivative_coefficients(3, 0.0, 2.0)
    with pytest.raises(InconsistentParameters):
        derivative_coefficients(3, 0.2, 1.5)
    with pytest.raises(InconsistentParameters):
        derivative_coefficients(3, 0.2, 2 / (1 - 0.4) + 1.0)


def test_rubin_beta_ranges():
    assert rubin_beta(3, 2.0, 0.0) == 0.0
    assert rubin_beta(3, math.inf, 0.75) == pytest.approx(0.75 - 1.5)
    with pytest.raises(OutOfRange):
        rubin_beta(3, math.inf, 0.25)
    with pytest.raises(OutOfRange):
        rubin_beta(3, 2.0, 1.5)
    with pytest.raises(OutOfRange):
        rubin_beta(3, 1.0, 0.1)


@given(p1=st.floats(2.0, 50.0), theta=st.floats(0.0, 1.0))
def test_theta_exponents_linear_in_reciprocal(p1, theta):
    p, factor = theta_exponents(p1, theta)
    assert 1 / p == pytest.approx((1 - theta) / 2 + theta / p1, rel=1e-14, abs=1e-15)
    assert factor == theta
    assert 2.0 <= p * (1 + 1e-14) and p <= p1 * (1 + 1e-14)


def test_theta_exponents_errors():
    with pytest.raises(OutOfRange):
        theta_exponents(4.0, 1.5)
    with pytest.raises(OutOfRange):
        theta_exponents(1.5, 0.5)
    assert theta_exponents(math.inf, 1.0)[0] == math.inf


@given(c=st.floats(0.05, 20.0), s=st.floats(0.0, 0.5), u=st.floats(0.0, 0.5))
def test_interpolated_bound_is_multiplicative(c, s, u):
    s1 = 1.0
    got = interpolated_constant_bound(c, s, s1) * interpolated_constant_bound(c, u, s1)
    assert got == pytest.approx(interpolated_constant_bound(c, s + u, s1), rel=1e-12)
    assert interpolated_constant_bound(c, 0.0, s1) == 1.0
    assert interpolated_constant_bound(c, s1, s1) == pytest.approx(c, rel=1e-14)


def test_interpolated_bound_errors():
    with pytest.raises(OutOfRange):
        interpolated_constant_bound(0.0, 0.1, 0.2)
    with pytest.raises(OutOfRange):
        interpolated_constant_bound(2.0, 0.3, 0.2)


# ---------------------------------------------------------------------------
# entropic bounds


@pytest.mark.parametrize("d", range(1, 9))
def test_beckner_bound(d):
    assert beckner_bound(d) == (d / 2) * (math.log(2) - 1)


@given(d=st.integers(1, 8), g=st.floats(0.01, 100.0), a=st.floats(0.01, 10.0))
def test_log_sobolev_scale_is_minimizer(d, g, a):
    a_star = optimal_log_sobolev_scale(d, g)
    assert log_sobolev_rhs(d, a_star, g) <= log_sobolev_rhs(d, a, g) + 1e-12 * (1 + abs(log_sobolev_rhs(d, a, g)))
    # closed-form minimum (d/2) log(2 g / (pi d)) - d/2
    assert log_sobolev_rhs(d, a_star, g) == pytest.approx(
        0.5 * d * math.log(2 * g / (math.pi * d)) - 0.5 * d, rel=1e-12, abs=1e-12)


def test_log_sobolev_errors():
    with pytest.raises(OutOfRange):
        log_sobolev_rhs(2, 0.0, 1.0)
    with pytest.raises(OutOfRange):
        log_sobolev_rhs(2, 1.0, -1.0)
    with pytest.raises(OutOfRange):
        optimal_log_sobolev_scale(2, 0.0)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("p", [1.0, 1.2, 1.5, 1.8, 2.0])
def test_hausdorff_young_gaussian_equality(d, p):
    # Gaussians are extremal, so ||f^||_{p'} / ||f||_p equals the constant
    g = make_grid(d, 12.0, 2048)
    f = sample(g, lambda r: np.exp(-0.5 * r * r))
    q = math.inf if p == 1.0 else p / (p - 1)
    ratio = lp_norm_spectral(f, q) / weighted_lp_norm(f, p, 0.0)
    assert ratio == pytest.approx(hausdorff_young_constant(d, p), rel=1e-10)


def test_hausdorff_young_range():
    assert hausdorff_young_constant(3, 2.0) == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(OutOfRange):
        hausdorff_young_constant(3, 2.5)


def test_log_hls_fd_consistency_at_h_1e4():
    assert abs(log_hls_constant(3) - log_hls_constant_fd(3, 1e-4).value) <= 1e-8
