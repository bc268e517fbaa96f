import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad
from scipy.special import gamma

from loguncert.errors import DimensionMismatch, InvalidDimension, InvalidResolution, ZeroFunction
from loguncert.radial import (RadialProfile, l2_norm, make_grid, normalize_l2, sample,
                              sphere_area, volume_integral)

from conftest import gaussian


@pytest.mark.parametrize("d, area", [(1, 2.0), (2, 2 * math.pi), (3, 4 * math.pi),
                                     (4, 2 * math.pi ** 2)])
def test_sphere_area_closed_forms(d, area):
    assert sphere_area(d) == pytest.approx(area, rel=1e-14)


def test_grid_layout(grid):
    r, w = grid.nodes, grid.weights
    assert grid.n == 2048 and r.size == w.size == 2048
    assert np.all(r > 0) and np.all(np.diff(r) > 0) and r[-1] < grid.r_max
    assert np.all(w > 0)
    assert grid.panel_starts[-1] == grid.n
    with pytest.raises(ValueError):
        r[0] = 1.0  # read-only


@pytest.mark.parametrize("a", [0.25, 0.5, 1.0, 4.0, 20.0])
def test_gaussian_volume(grid, a):
    # oracle: int_{R^d} exp(-a|x|^2) dx = (pi/a)^{d/2}
    got = volume_integral(gaussian(grid, a))
    assert got == pytest.approx((math.pi / a) ** (0.5 * grid.dimension), rel=1e-12)


@pytest.mark.parametrize("k", [-0.5, 0.0, 1.0, 2.5])
def test_power_times_exponential(grid, k):
    # oracle: int r^k e^{-4r} dx = |S^{d-1}| Gamma(d + k) / 4^{d+k}; the r^k
    # singularity at the origin is absorbed by the graded first panel
    d = grid.dimension
    f = sample(grid, lambda r: r ** k * np.exp(-4.0 * r))
    want = sphere_area(d) * gamma(d + k) / 4.0 ** (d + k)
    # a net power r^{d-1+k} with d + k < 1 is singular at the origin; the
    # innermost Gauss panel then limits the accuracy to ~1e-7
    rel = 1e-9 if d + k >= 1 else 1e-6
    assert volume_integral(f) == pytest.approx(want, rel=rel)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_log_uniform_grid(d):
    g = make_grid(d, 1e4, 2048, "log-uniform")
    assert g.log_mapped and g.nodes[0] < 1e-7
    f = sample(g, lambda r: (1 + r * r) ** (-(d + 1.0)))
    # oracle: scipy quad of the same radial integrand over [r_min, r_max]
    lo, hi = 1e-12 * g.r_max, g.r_max
    want = sphere_area(d) * sum(
        quad(lambda r: r ** (d - 1) * (1 + r * r) ** (-(d + 1.0)), a, b, epsabs=0, epsrel=1e-13)[0]
        for a, b in [(lo, 1e-6), (1e-6, 1.0), (1.0, 100.0), (100.0, hi)])
    assert volume_integral(f) == pytest.approx(want, rel=1e-10)


@pytest.mark.parametrize("bad", [0, -1, 2.5])
def test_invalid_dimension(bad):
    with pytest.raises(InvalidDimension):
        make_grid(bad, 12.0, 256)
    with pytest.raises(InvalidDimension):
        sphere_area(bad)


@pytest.mark.parametrize("n, r_max", [(8, 12.0), (0, 12.0), (256, 0.0), (256, math.inf)])
def test_invalid_resolution(n, r_max):
    with pytest.raises(InvalidResolution):
        make_grid(2, r_max, n)


def test_unknown_scheme():
    with pytest.raises(ValueError):
        make_grid(2, 12.0, 256, "chebyshev")


def test_grid_is_cached():
    assert make_grid(2, 12.0, 512) is make_grid(2, 12.0, 512)


def test_profile_validation():
    g = make_grid(2, 12.0, 256)
    with pytest.raises(DimensionMismatch):
        RadialProfile(g, np.ones(10))
    with pytest.raises(ValueError):
        RadialProfile(g, np.full(256, np.nan))
    f = RadialProfile(g, np.ones(256))
    with pytest.raises(ValueError):
        f.values[0] = 2.0


def test_normalize_zero():
    g = make_grid(1, 12.0, 256)
    with pytest.raises(ZeroFunction):
        normalize_l2(RadialProfile(g, np.zeros(256)))


@given(a=st.floats(0.05, 10.0), amp=st.floats(1e-3, 1e3), d=st.sampled_from([1, 2, 3]))
def test_normalize_is_unit(a, amp, d):
    g = make_grid(d, 12.0, 1024)
    f = normalize_l2(RadialProfile(g, amp * np.exp(-a * g.nodes ** 2)))
    assert abs(l2_norm(f) - 1.0) <= 1e-14


def test_scaled_carries_known_spectrum():
    g = make_grid(2, 12.0, 512)
    f = gaussian(g)
    spec = f.spectrum
    h = f.scaled(3.0)
    assert "spectrum" in h.__dict__
    np.testing.assert_allclose(h.spectrum.values, 3.0 * spec.values, rtol=0, atol=0)
