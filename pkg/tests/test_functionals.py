import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import digamma, gamma, gammaln

from loguncert.errors import (InconsistentParameters, NonIntegrableWeight, OutOfRange,
                              SingularExponent, UnsupportedExponent)
from loguncert.functionals import (InequalityParams, entropy, gradient_sq, hls_energy,
                                   hls_energy_fourier, log_hls_energy, log_moment_fourier,
                                   log_moment_physical, lp_norm_spectral, mass, mass_entropy,
                                   riesz_constant, sobolev_norm, weighted_lp_norm)
from loguncert.radial import RadialProfile, make_grid, normalize_l2, sample, sphere_area

from conftest import gaussian


def unit_gaussian(grid, a):
    """``(2a/pi)^{d/4} exp(-a r^2)``, unit in L^2."""
    return RadialProfile(grid, (2 * a / math.pi) ** (grid.dimension / 4)
                         * np.exp(-a * grid.nodes ** 2))


# ---------------------------------------------------------------------------
# norms


@pytest.mark.parametrize("p, beta", [(2.0, 0.0), (3.0, 0.2), (4.0, -0.5), (1.5, 0.3),
                                     (6.0, 0.1), (2.0, -1.0), (2.0, 0.49), (2.0, 1.47)])
def test_weighted_norm_gaussian(grid, p, beta):
    # oracle: int |x|^{-beta p} e^{-p r^2} dx = |S| Gamma((d - beta p)/2) / (2 p^{(d - beta p)/2})
    d = grid.dimension
    e = d - beta * p
    if e <= 0:
        pytest.skip("not integrable")
    want = (sphere_area(d) * gamma(0.5 * e) / (2 * p ** (0.5 * e))) ** (1 / p)
    # includes r^{d-1-beta p} singular at the origin, up to beta p close to d
    rel = 1e-12
    assert weighted_lp_norm(gaussian(grid, 1.0), p, beta) == pytest.approx(want, rel=rel)


def test_weighted_norm_sup(grid):
    f = gaussian(grid, 1.0)
    assert weighted_lp_norm(f, math.inf, 0.0) == pytest.approx(1.0, abs=1e-12)
    # |x| e^{-r^2} peaks at r = 1/sqrt(2); the sup is taken over the nodes,
    # so it agrees with the node maximum exactly and the true peak to O(h^2)
    r = grid.nodes
    assert weighted_lp_norm(f, math.inf, -1.0) == np.max(r * np.exp(-r * r))
    assert weighted_lp_norm(f, math.inf, -1.0) == pytest.approx(
        math.exp(-0.5) / math.sqrt(2), rel=1e-4)
    with pytest.raises(NonIntegrableWeight):
        weighted_lp_norm(f, math.inf, 0.1)


def test_weighted_norm_errors(grid):
    f = gaussian(grid)
    d = grid.dimension
    with pytest.raises(NonIntegrableWeight):
        weighted_lp_norm(f, 2.0, 0.5 * d)
    with pytest.raises(UnsupportedExponent):
        weighted_lp_norm(f, 0.5, 0.0)


def test_weighted_norm_large_p_does_not_overflow(grid):
    f = RadialProfile(grid, 1e3 * np.exp(-grid.nodes ** 2))
    got = weighted_lp_norm(f, 400.0, 0.0)
    assert math.isfinite(got) and got == pytest.approx(1e3, rel=0.05)


@given(c=st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3), p=st.floats(1.0, 8.0),
       beta=st.floats(-1.0, 0.3), d=st.sampled_from([1, 2, 3]))
def test_weighted_norm_homogeneous(c, p, beta, d):
    g = make_grid(d, 12.0, 1024)
    f = gaussian(g, 0.8)
    if beta * p >= d:
        return
    assert weighted_lp_norm(f.scaled(c), p, beta) == pytest.approx(
        abs(c) * weighted_lp_norm(f, p, beta), rel=1e-12)


@given(t=st.floats(0.6, 1.6), p=st.floats(1.5, 6.0), beta=st.floats(-0.5, 0.3),
       d=st.sampled_from([1, 2, 3]))
def test_weighted_norm_dilation(t, p, beta, d):
    # || |x|^{-beta} f(./t) ||_p = t^{d/p - beta} || |x|^{-beta} f ||_p
    g = make_grid(d, 12.0, 2048)
    if d - beta * p < 1:
        return
    f = gaussian(g, 1.0)
    ft = gaussian(g, 1.0 / t ** 2)
    assert weighted_lp_norm(ft, p, beta) == pytest.approx(
        t ** (d / p - beta) * weighted_lp_norm(f, p, beta), rel=1e-9)


@pytest.mark.parametrize("a", [0.3, 0.5, 1.0])
@pytest.mark.parametrize("s", [0.0, 0.25, 0.5, 1.0, 1.7])
def test_sobolev_norm_gaussian(grid, a, s):
    # oracle: |f^|^2 is a Gaussian of variance a per coordinate:
    # E|xi|^{2s} = (2a)^s Gamma(d/2 + s) / Gamma(d/2)
    d = grid.dimension
    want = math.sqrt((2 * a) ** s * gamma(0.5 * d + s) / gamma(0.5 * d))
    assert sobolev_norm(unit_gaussian(grid, a), s) == pytest.approx(want, rel=1e-10)


def test_sobolev_norm_singular(grid):
    with pytest.raises(SingularExponent):
        sobolev_norm(gaussian(grid), -0.5 * grid.dimension)


@pytest.mark.parametrize("a", [0.3, 1.0])
def test_gradient_sq(grid, a):
    # int |grad f|^2 = a d for the unit Gaussian
    assert gradient_sq(unit_gaussian(grid, a)) == pytest.approx(a * grid.dimension, rel=1e-10)


def test_spectral_lp_norm(grid):
    # f^ of the unit Gaussian with a = 1/2 is itself
    f = unit_gaussian(grid, 0.5)
    for q in (2.0, 4.0):
        assert lp_norm_spectral(f, q) == pytest.approx(weighted_lp_norm(f, q, 0.0), rel=1e-10)
    assert lp_norm_spectral(f, math.inf) == pytest.approx(np.max(f.values), rel=1e-10)
    with pytest.raises(UnsupportedExponent):
        lp_norm_spectral(f, 0.9)


# ---------------------------------------------------------------------------
# entropies and log-moments


@pytest.mark.parametrize("a", [0.2, 0.5, 1.0, 1.2])
def test_gaussian_entropy_and_moments(grid, a):
    d = grid.dimension
    f = unit_gaussian(grid, a)
    # int f^2 log f = (d/4)(log(2a/pi) - 1)
    assert entropy(f) == pytest.approx(0.25 * d * (math.log(2 * a / math.pi) - 1), abs=1e-10)
    # E log|X| for X ~ N(0, I/(4a)): (psi(d/2) - log(2a)) / 2
    assert log_moment_physical(f) == pytest.approx(0.5 * (digamma(0.5 * d) - math.log(2 * a)),
                                                   abs=1e-10)
    assert log_moment_fourier(f) == pytest.approx(0.5 * (digamma(0.5 * d) + math.log(2 * a)),
                                                  abs=1e-10)


def test_entropy_ignores_zeros(grid):
    f = RadialProfile(grid, np.where(grid.nodes < 1, 1.0, 0.0))
    assert entropy(f) == 0.0


def test_mass_and_mass_entropy(grid):
    d = grid.dimension
    f = gaussian(grid, 1.0)
    assert mass(f) == pytest.approx(math.pi ** (0.5 * d), rel=1e-12)
    # int e^{-r^2} log e^{-r^2} = -int r^2 e^{-r^2} = -(d/2) pi^{d/2}
    assert mass_entropy(f) == pytest.approx(-0.5 * d * math.pi ** (0.5 * d), rel=1e-12)
    with pytest.raises(ValueError):
        mass_entropy(f.scaled(-1.0))


@given(t=st.floats(0.6, 1.6), d=st.sampled_from([1, 2, 3]))
def test_log_moment_dilation(t, d):
    # f_t = t^{-d/2} f(x/t): physical log-moment shifts by +log t, Fourier by -log t
    g = make_grid(d, 12.0, 2048)
    f = unit_gaussian(g, 0.5)
    ft = unit_gaussian(g, 0.5 / t ** 2)
    assert log_moment_physical(ft) == pytest.approx(log_moment_physical(f) + math.log(t), abs=1e-10)
    assert log_moment_fourier(ft) == pytest.approx(log_moment_fourier(f) - math.log(t), abs=1e-10)


# ---------------------------------------------------------------------------
# double integrals


@pytest.mark.parametrize("frac", [0.25, 0.5, 0.75, 0.95])
def test_hls_energy_gaussian(grid, frac):
    # oracle: with f = e^{-r^2}, X - Y ~ N(0, I) under f(x) f(y) / pi^d, so
    # the energy is pi^d 2^{-lam/2} Gamma((d - lam)/2) / Gamma(d/2)
    d = grid.dimension
    lam = frac * d
    want = math.pi ** d * 2 ** (-0.5 * lam) * math.exp(gammaln(0.5 * (d - lam)) - gammaln(0.5 * d))
    assert hls_energy(gaussian(grid, 1.0), lam) == pytest.approx(want, rel=1e-9)


def test_log_hls_energy_gaussian(grid):
    # E[-log|Z|] for Z ~ N(0, I) is -(psi(d/2) + log 2) / 2
    d = grid.dimension
    want = -0.5 * (digamma(0.5 * d) + math.log(2)) * math.pi ** d
    assert log_hls_energy(gaussian(grid, 1.0)) == pytest.approx(want, rel=1e-9)


@pytest.mark.parametrize("d, lam", [(1, 0.3), (2, 0.8), (3, 1.0)])
def test_hls_energy_monte_carlo_bump(d, lam):
    # oracle: seeded Monte Carlo over pairs of points in the unit ball for the
    # compactly supported bump (1 - r^2)_+^2; lam < d/2 keeps the variance finite
    g = make_grid(d, 2.0, 2048)
    f = sample(g, lambda r: np.clip(1 - r * r, 0, None) ** 2)
    rng = np.random.default_rng(12345)
    n = 400_000
    pts = []
    for _ in range(2):
        x = rng.standard_normal((n, d))
        x *= (rng.uniform(size=n) ** (1 / d) / np.linalg.norm(x, axis=1))[:, None]
        pts.append(x)
    fx = np.clip(1 - np.sum(pts[0] ** 2, 1), 0, None) ** 2
    fy = np.clip(1 - np.sum(pts[1] ** 2, 1), 0, None) ** 2
    vol = math.pi ** (d / 2) / gamma(d / 2 + 1)
    mc = vol ** 2 * np.mean(fx * fy * np.linalg.norm(pts[0] - pts[1], axis=1) ** (-lam))
    assert hls_energy(f, lam) == pytest.approx(mc, rel=1e-2)


@pytest.mark.parametrize("frac", [0.1, 0.5, 0.9])
def test_hls_energy_physical_vs_fourier(grid, frac):
    lam = frac * grid.dimension
    # profiles negligible at r_max on both sides: the Fourier route sees f^
    # truncated at the self-dual cutoff, so e.g. (1 + r^2)^{-10} would not do
    profiles = (gaussian(grid, 0.7), sample(grid, lambda r: (1 + r * r) * np.exp(-0.6 * r * r)),
                sample(grid, lambda r: 1 / np.cosh(2 * r)))
    for f in profiles:
        assert hls_energy_fourier(f, lam) == pytest.approx(hls_energy(f, lam), rel=1e-7)


def test_riesz_constant_d3():
    # in d = 3, lam = 1: |x|^{-1} has transform sqrt(2/pi) |xi|^{-2}; the energy
    # identity carries (2 pi)^{3/2} sqrt(2/pi) = 4 pi
    assert riesz_constant(3, 1.0) == pytest.approx(4 * math.pi, rel=1e-14)


@pytest.mark.parametrize("lam", [0.0, -0.5, 3.0, 4.0])
def test_hls_lambda_range(lam):
    g = make_grid(3, 12.0, 256)
    with pytest.raises(OutOfRange):
        hls_energy(gaussian(g), lam)
    with pytest.raises(OutOfRange):
        riesz_constant(3, lam)


# ---------------------------------------------------------------------------
# parameter bundle


def test_params_rubin_consistent():
    d, s, p = 3, 0.25, 4.0
    InequalityParams(d=d, s=s, p=p, beta=s + d / p - d / 2).check("rubin-consistent")
    with pytest.raises(InconsistentParameters):
        InequalityParams(d=d, s=s, p=p, beta=0.0).check("rubin-consistent")
    with pytest.raises(InconsistentParameters):
        InequalityParams(d=d, s=s, p=5.0, beta=s + d / 5 - d / 2).check("rubin-consistent")
    with pytest.raises(InconsistentParameters):
        InequalityParams(d=d, s=s).check("rubin-consistent")


def test_params_theta_consistent():
    p1, beta1, theta = 4.0, -0.5, 0.5
    p = 1 / ((1 - theta) / 2 + theta / p1)
    InequalityParams(d=3, theta=theta, p=p, beta=theta * beta1, p1=p1,
                     beta1=beta1).check("theta-consistent")
    with pytest.raises(InconsistentParameters):
        InequalityParams(d=3, theta=theta, p=2.0, beta=theta * beta1, p1=p1,
                         beta1=beta1).check("theta-consistent")
    with pytest.raises(ValueError):
        InequalityParams(d=3).check("nonsense")


@pytest.mark.parametrize("field, value", [("t", 1.5), ("theta", -0.1), ("a", 0.0)])
def test_params_ranges(field, value):
    with pytest.raises(OutOfRange):
        InequalityParams(d=2, **{field: value})


def test_params_frozen_and_dict():
    p = InequalityParams(d=2, s=0.1)
    with pytest.raises(Exception):
        p.s = 0.2
    assert p.as_dict() == {"d": 2, "s": 0.1}
    assert p.replace(s=0.3).s == 0.3


@pytest.mark.parametrize("d", [1, 2, 3])
def test_negative_order_sobolev_near_singular(d):
    # int |xi|^{2s} e^{-rho^2} dxi = pi^{d/2} Gamma(s + d/2) / Gamma(d/2), up to s -> -d/2
    g = make_grid(d, 12.0, 2048)
    f = gaussian(g, 0.5)
    for s in (-0.3 * d, -0.45 * d, -0.49 * d):
        want = math.sqrt(math.pi ** (d / 2) * gamma(s + d / 2) / gamma(d / 2))
        assert sobolev_norm(f, s) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_grid_refinement_invariance(d):
    # results must not depend on where the smallest node sits: resolution
    # and cutoff changes leave every functional unchanged to quadrature error
    from loguncert.lab import trial
    values = []
    for n, r_max in ((1024, 12.0), (2048, 12.0), (3072, 12.0), (2048, 14.0)):
        g = make_grid(d, r_max, n)
        f = trial("gaussian-mixture", g, seed=3, m=4)
        values.append([log_moment_fourier(f), log_moment_physical(f), entropy(f),
                       sobolev_norm(f, -0.2 * d), sobolev_norm(f, -0.45 * d), sobolev_norm(f, 0.7)])
    values = np.array(values)
    assert np.max(np.abs(values - values[1])) <= 1e-7
