import numpy as np
import pytest
from scipy.integrate import quad

from nwidth.piecewise import PiecewisePoly, periodic_reduce


def _quad(f, lo, hi, pts=()):
    return quad(f, lo, hi, points=[p for p in pts if lo < p < hi] or None, limit=400, epsabs=1e-13, epsrel=1e-13)[0]


@pytest.fixture
def hat():
    # continuous piecewise-linear bump plus a jump at 0.5
    return PiecewisePoly.from_global([-1, -0.3, 0.2, 0.5, 1], [[0.0], [0.3, 1.0], [0.7, -1.0], [2.0, 0.0, -1.0]])


def test_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        PiecewisePoly([-1, 0.5], [[1.0]])
    with pytest.raises(ValueError):
        PiecewisePoly([-1, 0.2, 0.1, 1], [[1.0], [1.0], [1.0]])
    with pytest.raises(ValueError):
        PiecewisePoly([-1, 1], [[]])


def test_periodic_reduce():
    x = np.array([-3.0, -1.0, 0.5, 1.0, 2.7])
    np.testing.assert_allclose(periodic_reduce(x), [-1.0, -1.0, 0.5, -1.0, 0.7], atol=1e-15)


def test_eval_sides(hat):
    assert hat(np.array([0.5]))[0] == pytest.approx(2.0 - 0.25)
    assert hat(np.array([0.5]), side="left")[0] == pytest.approx(0.2)
    assert hat(np.array([0.5]), side="mid")[0] == pytest.approx(0.5 * (1.75 + 0.2))
    x = np.linspace(-5, 5, 101)
    np.testing.assert_array_equal(hat(x), hat(x + 2.0))


def test_integral_and_norm(hat):
    f = lambda t: hat(np.array([t]))[0]
    pts = hat.breakpoints
    assert hat.integral() == pytest.approx(_quad(f, -1, 1, pts), abs=1e-13)
    assert hat.integral(-0.7, 2.4) == pytest.approx(_quad(f, -0.7, 2.4, list(pts) + list(pts + 2)), abs=1e-12)
    assert hat.norm_sq() == pytest.approx(_quad(lambda t: f(t) ** 2, -1, 1, pts), abs=1e-13)


def test_derivative_matches_finite_difference(hat):
    x = np.array([-0.1, 0.0, 0.35, 0.8])
    h = 1e-6
    fd = (hat(x + h) - hat(x - h)) / (2 * h)
    np.testing.assert_allclose(hat.derivative()(x), fd, atol=1e-7)


def test_fourier_integrals_against_quadrature(hat):
    f = lambda t: hat(np.array([t]))[0]
    for w in (0.0, 0.3, np.pi, 17 * np.pi, 40.0):
        I = hat.fourier_integrals([w])[0]
        re = _quad(lambda t: f(t) * np.cos(w * t), -1, 1, hat.breakpoints)
        im = -_quad(lambda t: f(t) * np.sin(w * t), -1, 1, hat.breakpoints)
        assert I == pytest.approx(complex(re, im), abs=1e-12)


def test_window_fourier_integrals(hat):
    f = lambda t: hat(np.array([t]))[0]
    w = 3 * np.pi
    lo, hi = -0.45, 0.55
    I = hat.fourier_integrals([w], lo, hi)[0]
    pts = list(hat.breakpoints) + list(hat.breakpoints - 2)
    re = _quad(lambda t: f(t) * np.cos(w * t), lo, hi, pts)
    im = -_quad(lambda t: f(t) * np.sin(w * t), lo, hi, pts)
    assert I == pytest.approx(complex(re, im), abs=1e-12)


def test_periodic_fourier_integrals_agree_with_moments(hat):
    k = np.arange(1, 400)
    np.testing.assert_allclose(hat.periodic_fourier_integrals(k), hat.fourier_integrals(np.pi * k), atol=1e-13)


def test_algebra_and_shift(hat):
    x = np.linspace(-0.99, 0.99, 57)
    np.testing.assert_allclose((hat + hat * 2.0)(x), 3 * hat(x), atol=1e-14)
    np.testing.assert_allclose((hat - 1.5)(x), hat(x) - 1.5, atol=1e-14)
    np.testing.assert_allclose(hat.shifted(0.37)(x), hat(x - 0.37), atol=1e-14)


def test_box_convolve_against_quadrature(hat):
    w = 0.3
    c = hat.box_convolve(w)
    f = lambda t: hat(np.array([t]))[0]
    pts = list(hat.breakpoints) + list(hat.breakpoints - 2) + list(hat.breakpoints + 2)
    for x in (-0.95, -0.2, 0.4, 0.9):
        ref = _quad(f, x - w / 2, x + w / 2, pts) / w
        assert c(np.array([x]))[0] == pytest.approx(ref, abs=1e-12)
    assert c.integral() == pytest.approx(hat.integral(), abs=1e-13)
    assert c.degree == hat.degree + 1


def test_jump_table_of_continuous_kink():
    # |x|-like kink: continuous, derivative jumps by +2 at 0 and -2 at -1
    p = PiecewisePoly.from_global([-1, 0, 1], [[0.1, -1.0], [0.1, 1.0]])
    J = p.jump_table()
    assert J[0, 1] == 0.0
    np.testing.assert_allclose(J[1], [-2.0, 2.0])
